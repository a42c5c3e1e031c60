"""Single-pixel sharing primitives.

The (s, k, k) kernel draws k-1 fair coins and appends their parity with the
secret bit, so the k output bits always XOR to ``s``. ``random_bit`` is the
biased generator behind generalized random grids.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

from .exceptions import ParameterError
from .rng import PixelStream, RandomSource

__all__ = [
    "share_pixel_kk",
    "share_kk",
    "random_bit",
    "random_grid",
    "stack_transmission_kk",
    "kernel_outcomes",
    "zero_count_law",
]

KERNEL_STEP = 0


def _check_k(k):
    if int(k) != k or k < 2:
        raise ParameterError(f"threshold k must be an integer >= 2, got {k}")
    return int(k)


def share_pixel_kk(s, k, rng):
    """Share one secret bit into ``k`` bits whose XOR is ``s``.

    Consumes exactly ``k - 1`` draws from ``rng`` (a ``PixelStream``).
    """
    k = _check_k(k)
    if s not in (0, 1):
        raise ParameterError(f"secret bit must be 0 or 1, got {s!r}")
    bits = [rng.coin() for _ in range(k - 1)]
    last = s
    for b in bits:
        last ^= b
    return tuple(bits) + (last,)


def share_kk(secret_bits, k, source, pixels=None, t=KERNEL_STEP):
    """Vectorised kernel: returns a ``(k, N)`` uint8 array for N secret bits.

    Row ``i`` is bit ``b_{i+1}``; draw ``i`` of each pixel uses counter ``i``
    at time step ``t``, matching ``share_pixel_kk`` on the same key.
    """
    k = _check_k(k)
    secret_bits = np.asarray(secret_bits, dtype=np.uint8).reshape(-1)
    if pixels is None:
        pixels = np.arange(secret_bits.size, dtype=np.uint64)
    out = np.empty((k, secret_bits.size), dtype=np.uint8)
    parity = secret_bits.copy()
    for i in range(k - 1):
        out[i] = source.coins(t, i, pixels)
        parity ^= out[i]
    out[k - 1] = parity
    return out


def _check_lambda(lam):
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"light transmission must lie in (0, 1), got {lam}")


def random_bit(lam, rng):
    """Return 0 with probability ``lam`` and 1 otherwise."""
    _check_lambda(lam)
    return 0 if rng.uniform() < lam else 1


def random_grid(lam, source, t, counter, pixels):
    """Vectorised ``random_bit`` over an array of pixel indices."""
    _check_lambda(lam)
    return (source.uniform(t, counter, pixels) >= lam).astype(np.uint8)


def stack_transmission_kk(k, t):
    """Light transmission of OR-stacking ``t`` of the ``k`` kernel bits.

    Returns ``(white, black)`` as exact fractions.
    """
    k = _check_k(k)
    if int(t) != t or not 1 <= t <= k:
        raise ParameterError(f"number of stacked bits must be in [1, {k}], got {t}")
    if t < k:
        return Fraction(1, 2**t), Fraction(1, 2**t)
    return Fraction(1, 2 ** (k - 1)), Fraction(0)


def kernel_outcomes(s, k):
    """All ``2**(k-1)`` equiprobable kernel outputs for secret bit ``s``."""
    k = _check_k(k)
    for coins in itertools.product((0, 1), repeat=k - 1):
        last = s
        for b in coins:
            last ^= b
        yield coins + (last,)


def zero_count_law(s, k):
    """Closed-form count of kernel outputs holding exactly ``i`` zeros.

    Maps ``i -> C(k, i)`` when ``i`` has the parity of ``k + s``; other
    counts are zero.
    """
    k = _check_k(k)
    return {i: (comb(k, i) if (i - k - s) % 2 == 0 else 0) for i in range(k + 1)}


def coin_stream(seed, pixel=0, t=KERNEL_STEP):
    return PixelStream(RandomSource(seed), pixel, t)
