"""Counter-based random source keyed by (seed, pixel, time step, draw counter).

Every draw is a pure function of its key, so per-pixel sharing can be
vectorised or parallelised without changing the output. The mixing function
is the SplitMix64 finaliser: the key prefix (seed, t, counter) is folded into
a 64-bit stream constant, and pixel ``p`` of that stream is
``mix(constant + (p + 1) * GOLDEN)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

DEFAULT_SEED = 42


def mix64(z):
    """SplitMix64 finaliser on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


@dataclass(frozen=True)
class RandomSource:
    """Deterministic draws addressed by ``(t, counter, pixel)``.

    ``t`` is the time step (share index) a draw belongs to and ``counter``
    distinguishes several draws for the same pixel at the same step. The
    array methods take a vector of pixel linear indices; ``None`` means
    ``arange(size)``.
    """

    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))

    def _stream_constant(self, t, counter):
        if t < 0 or counter < 0:
            raise ParameterError("time step and draw counter must be non-negative")
        h = mix64(self.seed ^ 0x5851F42D4C957F2D)
        h = mix64(h ^ (int(t) * GOLDEN))
        return mix64(h ^ ((int(counter) + 1) * _M2))

    def raw(self, t, counter, pixels):
        """Uniform 64-bit words for each pixel index."""
        pixels = np.asarray(pixels, dtype=np.uint64)
        c = np.uint64(self._stream_constant(t, counter))
        with np.errstate(over="ignore"):
            return _mix64_array(c + (pixels + np.uint64(1)) * np.uint64(GOLDEN))

    def uniform(self, t, counter, pixels):
        """Doubles in [0, 1) built from the top 53 bits of each word."""
        return (self.raw(t, counter, pixels) >> np.uint64(11)).astype(np.float64) * (2.0**-53)

    def coins(self, t, counter, pixels):
        """Fair bits (0/1 as uint8)."""
        return (self.raw(t, counter, pixels) >> np.uint64(63)).astype(np.uint8)

    def below(self, t, counter, pixels, bound):
        """Integers uniform on ``[0, bound)``; ``bound`` may be an array."""
        u = self.uniform(t, counter, pixels)
        return np.minimum((u * bound).astype(np.int64), np.asarray(bound, dtype=np.int64) - 1)

    def stream(self, pixel=0, t=0):
        """Scalar stream for one (pixel, t) key with an auto-incrementing counter."""
        return PixelStream(self, int(pixel), int(t))


@dataclass
class PixelStream:
    """Sequential scalar draws for a single pixel at a single time step."""

    source: RandomSource
    pixel: int
    t: int
    counter: int = field(default=0)

    def next_word(self):
        c = self.source._stream_constant(self.t, self.counter)
        self.counter += 1
        return mix64(c + (self.pixel + 1) * GOLDEN)

    def uniform(self):
        return (self.next_word() >> 11) * (2.0**-53)

    def coin(self):
        return self.next_word() >> 63

    def below(self, bound):
        return min(int(self.uniform() * bound), bound - 1)


def as_source(rng):
    """Accept a ``RandomSource``, an integer seed or ``None`` (default seed)."""
    if isinstance(rng, RandomSource):
        return rng
    if rng is None:
        return RandomSource(DEFAULT_SEED)
    return RandomSource(int(rng))
