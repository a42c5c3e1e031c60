"""Partition calculus for grouped share selections.

A selection of ``t`` shares from ``n`` shares laid out in groups of ``k`` is
described by how many shares it takes from each group. Only the multiset of
those counts matters for contrast, so equivalence classes are keyed by the
non-zero counts sorted in descending order, e.g. ``(2, 1, 1)``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from ..exceptions import ParameterError

__all__ = [
    "canonical",
    "group_shape",
    "raw_valid_partitions",
    "valid_partitions",
    "count_matrices",
    "pr_distinct",
    "weight_partition",
]


def canonical(parts):
    """Equivalence-class key: non-zero parts sorted descending."""
    return tuple(sorted((int(p) for p in parts if p), reverse=True))


def group_shape(k, n):
    """``(m, u)``: number of groups and size of the last group for n shares."""
    if k < 1 or n < 1:
        raise ParameterError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    m = -(-n // k)
    return m, n - (m - 1) * k


def raw_valid_partitions(t, k, m, u):
    """Every occupancy vector of length ``m`` summing to ``t``.

    Full groups hold at most ``k`` and the last group at most ``u``.
    """
    caps = [k] * (m - 1) + [u]
    out = []

    def rec(i, remaining, acc):
        if i == m:
            if remaining == 0:
                out.append(tuple(acc))
            return
        room = sum(caps[i + 1 :])
        for v in range(min(caps[i], remaining), -1, -1):
            if remaining - v <= room:
                rec(i + 1, remaining - v, acc + [v])

    rec(0, t, [])
    return out


def valid_partitions(t, k, m, u):
    """Equivalence classes of valid partitions of ``t``, largest first.

    A class is feasible when every part fits a full group and, if all ``m``
    groups are occupied, some part fits the last group.
    """
    if t < 1 or k < 2 or m < 1 or not 1 <= u <= k:
        raise ParameterError(f"invalid arguments t={t}, k={k}, m={m}, u={u}")
    if t > k * (m - 1) + u:
        return []
    classes = []

    def rec(remaining, max_part, acc):
        if remaining == 0:
            if len(acc) < m or acc[-1] <= u:
                classes.append(tuple(acc))
            return
        if len(acc) == m:
            return
        for v in range(min(max_part, remaining), 0, -1):
            rec(remaining - v, v, acc + [v])

    rec(t, k, [])
    return classes


def count_matrices(parts, d, k=None):
    """Number of 0/1 matrices with row sums ``parts`` covering all ``d`` columns.

    The last row is fixed to a vector F holding ``parts[-1]`` ones; the
    count does not depend on where F puts them. Rows are filled one at a
    time, memoised on (row, number of still-uncovered columns).
    """
    parts = tuple(int(p) for p in parts)
    if not parts:
        raise ParameterError("partition must have at least one row")
    if d < 1 or (k is not None and d > k):
        raise ParameterError(f"column count d={d} out of range")
    fixed, rows = parts[-1], parts[:-1]
    if fixed > d or any(r > d for r in rows):
        return 0
    return _fill(rows, d, d - fixed)


@lru_cache(maxsize=None)
def _fill(rows, d, uncovered):
    if not rows:
        return 1 if uncovered == 0 else 0
    r, rest = rows[0], rows[1:]
    # columns still uncovered after this row must be coverable by the rest
    capacity_after = sum(rest)
    total = 0
    for new in range(min(r, uncovered), -1, -1):
        left = uncovered - new
        if left > capacity_after:
            break
        old = r - new
        if old > d - uncovered:
            continue
        total += comb(uncovered, new) * comb(d - uncovered, old) * _fill(rest, d, left)
    return total


def pr_distinct(parts, k):
    """Distribution of the number of distinct kernel indices a selection hits.

    Each group contributes a uniform ``part``-subset of the k indices,
    independently. Returns ``{d: Fraction}`` for ``d = 1..k``.
    """
    parts = tuple(int(p) for p in parts if p)
    if not parts:
        raise ParameterError("partition must select at least one share")
    if any(p > k for p in parts):
        raise ParameterError(f"part larger than the group size k={k}: {parts}")
    last = parts[-1]
    denom = prod(comb(k, p) for p in parts[:-1])
    out = {}
    for d in range(1, k + 1):
        if d < last:
            out[d] = Fraction(0)
            continue
        out[d] = Fraction(comb(k - last, d - last) * count_matrices(parts, d), denom)
    return out


def weight_partition(parts, k, n, t=None):
    """Probability that a uniform ``t``-subset of ``n`` shares falls in class ``parts``.

    Shares are grouped in blocks of ``k``; the last block holds ``u`` shares.
    """
    key = canonical(parts)
    total = sum(key)
    if t is not None and t != total:
        raise ParameterError(f"partition {key} sums to {total}, not t={t}")
    m, u = group_shape(k, n)
    if not key or len(key) > m or key[0] > k:
        return Fraction(0)
    padded = key + (0,) * (m - len(key))
    counts = Counter(padded)
    ways = 0
    for v in counts:
        if v > u:
            continue
        rest = counts.copy()
        rest[v] -= 1
        arrangements = factorial(m - 1) // prod(factorial(c) for c in rest.values())
        fill = prod(comb(k, part) ** c for part, c in rest.items())
        ways += comb(u, v) * arrangements * fill
    return Fraction(ways, comb(n, total))
