"""k-grouped (k, n) random-grid sharing and the evolving (k, inf) dealer.

Shares come in groups of k. The first group is the kernel output itself;
every later share copies, pixel by pixel, one of the first k shares chosen
uniformly among the indices its group has not used yet. Each complete
group is therefore a per-pixel permutation of the kernel bits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ParameterError, StateError
from .image import BinaryImage
from .kernels import share_kk
from .rng import as_source

__all__ = [
    "ShareGroupLayout",
    "EvolvingDealerState",
    "share_kgrouped",
    "dealer_init",
    "dealer_extend",
    "pick_unused",
]

MAX_K = 64
SELECT_COUNTER = 0


@dataclass(frozen=True)
class ShareGroupLayout:
    """Partition of share indices 1..total into consecutive groups."""

    group_size: int
    total: int

    def __post_init__(self):
        if self.group_size < 1 or self.total < 0:
            raise ParameterError("group size must be >= 1 and total >= 0")

    @property
    def n_groups(self):
        return -(-self.total // self.group_size)

    @property
    def last_size(self):
        """Size of the final group, ``u`` (0 when no shares exist)."""
        if self.total == 0:
            return 0
        return (self.total - 1) % self.group_size + 1

    def group(self, i):
        """1-based share indices of group ``i`` (1-based)."""
        if not 1 <= i <= self.n_groups:
            raise ParameterError(f"group {i} does not exist (have {self.n_groups})")
        lo = (i - 1) * self.group_size + 1
        return list(range(lo, min(i * self.group_size, self.total) + 1))

    def groups(self):
        return [self.group(i) for i in range(1, self.n_groups + 1)]

    def group_of(self, share):
        return (share - 1) // self.group_size + 1

    def capacities(self):
        return [len(g) for g in self.groups()]


def popcount(masks):
    return np.bitwise_count(masks).astype(np.int64)


def expected_popcount(next_t, group_size):
    """Bits set in every used-index mask once shares ``1..next_t-1`` exist.

    A finished later group leaves its mask full until the next share resets
    it; the first group never touches the table.
    """
    issued = next_t - 1
    within = issued % group_size
    if within or issued == group_size:
        return within
    return group_size


def pick_unused(masks, group_size, u):
    """Choose uniformly among the bit positions not set in ``masks``.

    ``u`` holds one uniform [0, 1) draw per pixel. Returns 0-based positions.
    """
    free_total = group_size - popcount(masks)
    if (free_total <= 0).any():
        raise StateError("selection requested from an exhausted index pool")
    target = np.minimum((u * free_total).astype(np.int64), free_total - 1)
    chosen = np.full(masks.shape, -1, dtype=np.int64)
    seen = np.zeros(masks.shape, dtype=np.int64)
    for b in range(group_size):
        free = ((masks >> np.uint64(b)) & np.uint64(1)) == 0
        hit = free & (seen == target) & (chosen < 0)
        chosen[hit] = b
        seen += free
    return chosen


def _copy_step(base, masks, t, group_size, source, pixels):
    """One share of the copy phase: returns (flat share bits, new masks)."""
    if (t - 1) % group_size == 0:
        masks = np.zeros_like(masks)
    q = pick_unused(masks, group_size, source.uniform(t, SELECT_COUNTER, pixels))
    share = base[q, np.arange(q.size)]
    masks = masks | (np.uint64(1) << q.astype(np.uint64))
    return share, masks


def _check_kn(k, n):
    if int(k) != k or k < 2:
        raise ParameterError(f"k must be an integer >= 2, got {k}")
    if k > MAX_K:
        raise ParameterError(f"k > {MAX_K} is not supported (index table is a 64-bit mask)")
    if int(n) != n or n < k:
        raise ParameterError(f"n must be an integer >= k, got n={n}, k={k}")
    return int(k), int(n)


def _as_image(secret):
    return secret if isinstance(secret, BinaryImage) else BinaryImage(secret)


def share_kgrouped(secret, k, n, seed=None):
    """Share ``secret`` into ``n`` shadows of the k-grouped (k, n) scheme.

    Returns ``(shadows, q_table)`` where ``q_table`` holds, per pixel, the
    bitmask (bit ``i`` for index ``i + 1``) of indices consumed by the
    in-progress group.
    """
    k, n = _check_kn(k, n)
    secret = _as_image(secret)
    source = as_source(seed)
    pixels = np.arange(secret.size, dtype=np.uint64)
    base = share_kk(secret.bits, k, source, pixels)
    shares = [base[i] for i in range(k)]
    masks = np.zeros(secret.size, dtype=np.uint64)
    for t in range(k + 1, n + 1):
        share, masks = _copy_step(base, masks, t, k, source, pixels)
        shares.append(share)
    h, w = secret.shape
    return [BinaryImage(s.reshape(h, w)) for s in shares], masks.reshape(h, w)


@dataclass(frozen=True, eq=False)
class EvolvingDealerState:
    """Everything needed to issue the next share of a (k, inf) dealer.

    Only the first k shadows are kept: later shares copy from them alone.
    """

    k: int
    n: int
    next_t: int
    base: tuple
    q_table: np.ndarray
    seed: int
    shape: tuple

    def validate(self):
        k = self.k
        if k < 2 or k > MAX_K:
            raise StateError(f"invalid threshold k={k}")
        if self.n < k:
            raise StateError(f"first-phase size n={self.n} below k={k}")
        if self.next_t < self.n + 1:
            raise StateError(f"next_t={self.next_t} must exceed n={self.n}")
        if len(self.base) != k:
            raise StateError(f"expected {k} base shadows, found {len(self.base)}")
        for img in self.base:
            if img.shape != tuple(self.shape):
                raise StateError("base shadow dimensions disagree with the secret")
        q = self.q_table
        if q.shape != tuple(self.shape) or q.dtype != np.uint64:
            raise StateError("index table has the wrong shape or dtype")
        if k < 64 and (q >> np.uint64(k)).any():
            raise StateError("index table sets bits beyond position k")
        expected = expected_popcount(self.next_t, k)
        if (popcount(q) != expected).any():
            raise StateError(
                f"index table popcount must be {expected} everywhere for next_t={self.next_t}"
            )
        return self

    @property
    def layout(self):
        return ShareGroupLayout(self.k, self.next_t - 1)

    def base_stack(self):
        return np.stack([img.bits for img in self.base])


def dealer_init(secret, k, n=None, seed=None):
    """Run the first phase; returns ``(state, shadows 1..n)``."""
    n = k if n is None else n
    source = as_source(seed)
    shadows, q = share_kgrouped(secret, k, n, source)
    q = q.copy()
    q.setflags(write=False)
    state = EvolvingDealerState(
        k=int(k),
        n=int(n),
        next_t=int(n) + 1,
        base=tuple(shadows[:k]),
        q_table=q,
        seed=source.seed,
        shape=shadows[0].shape,
    )
    return state, shadows


def dealer_extend(state):
    """Issue share ``state.next_t``; returns ``(shadow, new_state)``."""
    state.validate()
    source = as_source(state.seed)
    h, w = state.shape
    pixels = np.arange(h * w, dtype=np.uint64)
    share, masks = _copy_step(
        state.base_stack(), state.q_table.reshape(-1), state.next_t, state.k, source, pixels
    )
    masks = masks.reshape(h, w)
    masks.setflags(write=False)
    return BinaryImage(share.reshape(h, w)), replace(state, next_t=state.next_t + 1, q_table=masks)
