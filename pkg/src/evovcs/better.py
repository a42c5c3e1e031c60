"""Contrast-enhanced evolving schemes for thresholds 2 and 3.

better (2, inf): generalized random grids with transmission sqrt(2) - 1.
Shares pair up; at black secret pixels the two shares of a pair are never
both transparent, at white pixels every share repeats share 1.

better (3, inf): the first four shares come from a random row of a 6 x 4
basis matrix; later shares are issued in groups of four, each a per-pixel
permutation of the first group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .evolving import SELECT_COUNTER, _copy_step, expected_popcount, popcount
from .exceptions import StateError
from .image import BinaryImage
from .kernels import random_grid
from .rng import as_source

__all__ = [
    "LAMBDA",
    "LAMBDA_RATIO",
    "B0",
    "B1",
    "Better2State",
    "Better3State",
    "better2_init",
    "better2_extend",
    "better3_init",
    "better3_extend",
]

LAMBDA = math.sqrt(2.0) - 1.0
# lambda / (1 - lambda) simplifies to 1/sqrt(2)
LAMBDA_RATIO = 1.0 / math.sqrt(2.0)

B0 = np.array(
    [
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [0, 1, 1, 1],
        [1, 0, 1, 1],
        [1, 1, 0, 1],
        [1, 1, 1, 0],
    ],
    dtype=np.uint8,
)
B1 = np.array(
    [
        [1, 1, 1, 1],
        [1, 1, 1, 1],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [1, 0, 0, 0],
    ],
    dtype=np.uint8,
)
for _m in (B0, B1):
    _m.setflags(write=False)

BETTER3_GROUP = 4


def _as_image(secret):
    return secret if isinstance(secret, BinaryImage) else BinaryImage(secret)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Better2State:
    """Dealer state for better (2, inf).

    The secret stays inside the state because every extension branches on
    it. Persisting this state therefore persists the secret in the clear.
    """

    secret: BinaryImage
    p_table: np.ndarray
    next_t: int
    seed: int

    def validate(self):
        if self.next_t < 2:
            raise StateError(f"next_t must be >= 2, got {self.next_t}")
        if self.p_table.shape != self.secret.shape:
            raise StateError("table P does not match the secret dimensions")
        if not np.isin(self.p_table, (0, 1)).all():
            raise StateError("table P must hold bits")
        return self

    @property
    def shape(self):
        return self.secret.shape


def better2_init(secret, seed=None):
    """Issue share 1 (a generalized random grid); returns ``(share, state)``."""
    secret = _as_image(secret)
    source = as_source(seed)
    pixels = np.arange(secret.size, dtype=np.uint64)
    first = random_grid(LAMBDA, source, 1, 0, pixels).reshape(secret.shape)
    share = BinaryImage(first)
    return share, Better2State(secret=secret, p_table=_frozen(first), next_t=2, seed=source.seed)


def better2_extend(state):
    """Issue share ``state.next_t``; returns ``(share, new_state)``."""
    state.validate()
    t = state.next_t
    source = as_source(state.seed)
    s = state.secret.bits.astype(bool)
    p = state.p_table.reshape(-1)
    pixels = np.arange(p.size, dtype=np.uint64)
    out = p.copy()
    if t % 2 == 1:
        fresh = random_grid(LAMBDA, source, t, 0, pixels)
        out[s] = fresh[s]
        new_p = out
    else:
        fresh = random_grid(LAMBDA_RATIO, source, t, 0, pixels)
        black_after_clear = s & (p == 0)
        black_after_dark = s & (p == 1)
        out[black_after_clear] = 1
        out[black_after_dark] = fresh[black_after_dark]
        new_p = p
    h, w = state.shape
    return (
        BinaryImage(out.reshape(h, w)),
        replace(state, next_t=t + 1, p_table=_frozen(new_p.reshape(h, w))),
    )


@dataclass(frozen=True, eq=False)
class Better3State:
    """Dealer state for better (3, inf): first group plus the used-index table."""

    base: tuple
    p_table: np.ndarray
    next_t: int
    seed: int

    def validate(self):
        if len(self.base) != BETTER3_GROUP:
            raise StateError(f"expected {BETTER3_GROUP} base shadows, found {len(self.base)}")
        if self.next_t < BETTER3_GROUP + 1:
            raise StateError(f"next_t must be >= 5, got {self.next_t}")
        shape = self.base[0].shape
        if any(img.shape != shape for img in self.base) or self.p_table.shape != shape:
            raise StateError("base shadows and table P disagree on dimensions")
        if self.p_table.dtype != np.uint64 or (self.p_table >> np.uint64(BETTER3_GROUP)).any():
            raise StateError("table P may only use bits 1..4")
        expected = expected_popcount(self.next_t, BETTER3_GROUP)
        if (popcount(self.p_table) != expected).any():
            raise StateError(f"table P popcount must be {expected} for next_t={self.next_t}")
        return self

    @property
    def shape(self):
        return self.base[0].shape


def better3_init(secret, seed=None):
    """Issue shares 1..4 from random basis-matrix rows; returns ``(shares, state)``."""
    secret = _as_image(secret)
    source = as_source(seed)
    pixels = np.arange(secret.size, dtype=np.uint64)
    rows = source.below(0, SELECT_COUNTER, pixels, 6)
    s = secret.bits.astype(bool)
    patterns = np.where(s[:, None], B1[rows], B0[rows])
    shares = tuple(BinaryImage(patterns[:, i].reshape(secret.shape)) for i in range(4))
    p = np.zeros(secret.shape, dtype=np.uint64)
    p.setflags(write=False)
    return list(shares), Better3State(base=shares, p_table=p, next_t=5, seed=source.seed)


def better3_extend(state):
    """Issue share ``state.next_t``; returns ``(share, new_state)``."""
    state.validate()
    source = as_source(state.seed)
    h, w = state.shape
    pixels = np.arange(h * w, dtype=np.uint64)
    base = np.stack([img.bits for img in state.base])
    share, masks = _copy_step(
        base, state.p_table.reshape(-1), state.next_t, BETTER3_GROUP, source, pixels
    )
    return (
        BinaryImage(share.reshape(h, w)),
        replace(state, next_t=state.next_t + 1, p_table=_frozen(masks.reshape(h, w))),
    )
