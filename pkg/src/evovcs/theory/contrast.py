"""Exact contrast formulas for the evolving schemes.

Everything returns ``fractions.Fraction`` except the better (2, inf) curve,
whose transmission sqrt(2) - 1 is irrational.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from math import comb

from ..better import B0, B1, LAMBDA
from ..exceptions import ParameterError
from .partitions import canonical, count_matrices, group_shape, pr_distinct, valid_partitions
from .partitions import weight_partition

__all__ = [
    "contrast",
    "or_transmissions",
    "alpha_or_partition",
    "sigma_or",
    "alpha_or_infinity",
    "pr_even",
    "xor_transmissions",
    "alpha_xor_partition",
    "sigma_xor",
    "alpha_xor_infinity",
    "alpha_or_stack_t",
    "better2_alpha_partition",
    "better2_alpha",
    "better2_alpha_infinity",
    "BETTER2_LIMIT_SYMBOLIC",
    "better3_alpha_partition",
    "better3_basis_transmissions",
    "better3_weights",
    "better3_alpha",
    "better3_alpha_infinity",
]


def contrast(white, black):
    """(L0 - L1) / (1 + L1)."""
    return (white - black) / (1 + black)


def _check_k(k):
    if int(k) != k or k < 2:
        raise ParameterError(f"k must be an integer >= 2, got {k}")
    return int(k)


def _transmissions_from_distinct(dist, k):
    white = black = Fraction(0)
    for d, p in dist.items():
        if d < k:
            white += p / 2**d
            black += p / 2**d
        else:
            white += p / 2 ** (k - 1)
    return white, black


def or_transmissions(parts, k):
    """White / black transmission of an OR stack whose groups contribute ``parts``."""
    k = _check_k(k)
    return _transmissions_from_distinct(pr_distinct(parts, k), k)


def alpha_or_partition(parts, k):
    """OR-stacking contrast of one partition class; 0 whenever fewer than k indices can appear."""
    return contrast(*or_transmissions(parts, k))


def _check_kn(k, n):
    k = _check_k(k)
    if int(n) != n or n < k:
        raise ParameterError(f"n must be an integer >= k, got n={n}, k={k}")
    return k, int(n)


def sigma_or(k, n, t=None):
    """Expected OR contrast of ``t`` shares drawn uniformly from ``n`` (default t = k)."""
    k, n = _check_kn(k, n)
    t = k if t is None else int(t)
    if not 1 <= t <= n:
        raise ParameterError(f"t must be in [1, n], got {t}")
    m, u = group_shape(k, n)
    return sum(
        (weight_partition(p, k, n, t) * alpha_or_partition(p, k) for p in valid_partitions(t, k, m, u)),
        Fraction(0),
    )


def alpha_or_infinity(k):
    """Limit OR contrast: every one of the k shares from a different group."""
    k = _check_k(k)
    return alpha_or_partition((1,) * k, k)


def _parity_expectation(part, k, zeros):
    # E[(-1)^(ones drawn)] when `part` bits are drawn without replacement
    ones = k - zeros
    total = sum((-1) ** h * comb(ones, h) * comb(zeros, part - h) for h in range(part + 1))
    return Fraction(total, comb(k, part))


def pr_even(parts, k, zeros):
    """Probability that the selected bits hold an even number of ones.

    ``zeros`` is the number of zeros among the k kernel bits.
    """
    k = _check_k(k)
    if not 0 <= zeros <= k:
        raise ParameterError(f"zero count must be in [0, {k}], got {zeros}")
    product = Fraction(1)
    for part in parts:
        if part:
            product *= _parity_expectation(int(part), k, zeros)
    return (1 + product) / 2


def xor_transmissions(parts, k):
    k = _check_k(k)
    white = black = Fraction(0)
    for zeros in range(k + 1):
        weight = Fraction(comb(k, zeros), 2 ** (k - 1))
        if (zeros - k) % 2 == 0:
            white += weight * pr_even(parts, k, zeros)
        else:
            black += weight * pr_even(parts, k, zeros)
    return white, black


def alpha_xor_partition(parts, k):
    """XOR-recovery contrast of one partition class."""
    return contrast(*xor_transmissions(parts, k))


def sigma_xor(k, n):
    """Expected XOR contrast of k shares drawn uniformly from n."""
    k, n = _check_kn(k, n)
    m, u = group_shape(k, n)
    return sum(
        (weight_partition(p, k, n, k) * alpha_xor_partition(p, k) for p in valid_partitions(k, k, m, u)),
        Fraction(0),
    )


def alpha_xor_infinity(k):
    """Closed-form limit XOR contrast as the number of shares grows."""
    k = _check_k(k)

    def f(zeros):
        return comb(k, zeros) * Fraction(2 * zeros - k, k) ** k

    same = sum((f(z) for z in range(k + 1) if (z - k) % 2 == 0), Fraction(0))
    other = sum((f(z) for z in range(k + 1) if (z - k) % 2 == 1), Fraction(0))
    return (same - other) / (3 * 2 ** (k - 1) + other)


def alpha_or_stack_t(k, t):
    """OR contrast of ``t >= k`` shares, each from a different group."""
    k = _check_k(k)
    if int(t) != t or t < k:
        raise ParameterError(f"t must be an integer >= k, got t={t}, k={k}")
    singles = (1,) * t
    dist = {d: Fraction(comb(k - 1, d - 1) * count_matrices(singles, d), k ** (t - 1)) for d in range(1, k + 1)}
    return contrast(*_transmissions_from_distinct(dist, k))


# -- better (2, inf) ---------------------------------------------------------

BETTER2_LIMIT_SYMBOLIC = ("sqrt(2) - 1", 2)
_BETTER2_CROSS = (LAMBDA - LAMBDA**2) / (1 + LAMBDA**2)


def better2_alpha_partition(parts):
    """Same pair -> lambda; different pairs -> (lambda - lambda^2) / (1 + lambda^2)."""
    key = canonical(parts)
    if key == (2,):
        return LAMBDA
    if key == (1, 1):
        return _BETTER2_CROSS
    if sum(key) < 2:
        return 0.0
    raise ParameterError(f"better (2, inf) contrast is defined for two shares, got {key}")


def better2_alpha(n):
    """Expected contrast of two shares drawn uniformly from the first ``n``."""
    if int(n) != n or n < 2:
        raise ParameterError(f"n must be an integer >= 2, got {n}")
    cross = (n - 2) / (n - 1) if n % 2 == 0 else (n - 1) / n
    return _BETTER2_CROSS * cross + LAMBDA * (1 - cross)


def better2_alpha_infinity():
    return (math.sqrt(2.0) - 1.0) / 2.0


# -- better (3, inf) ---------------------------------------------------------

_BETTER3_CLASSES = ((3,), (2, 1), (1, 1, 1))


def better3_basis_transmissions(parts):
    """Exact white / black transmissions computed from the basis matrices.

    Each group contributes ``part`` distinct columns of the same random row;
    different groups pick their columns independently.
    """
    key = canonical(parts)
    if not key or key[0] > 4:
        raise ParameterError(f"invalid better (3, inf) partition {key}")
    choices = [list(itertools.combinations(range(4), p)) for p in key]
    out = []
    for matrix in (B0, B1):
        clear = 0
        total = 0
        for row in matrix:
            for combo in itertools.product(*choices):
                cols = {c for group in combo for c in group}
                clear += all(row[c] == 0 for c in cols)
                total += 1
        out.append(Fraction(clear, total))
    return tuple(out)


@lru_cache(maxsize=None)
def _better3_alpha(key):
    return contrast(*better3_basis_transmissions(key))


def better3_alpha_partition(parts):
    return _better3_alpha(canonical(parts))


def better3_weights(n):
    """``(w1, w2, w3)`` for classes (3), (2, 1), (1, 1, 1) among the first ``n`` shares."""
    if int(n) != n or n < 3:
        raise ParameterError(f"n must be an integer >= 3, got {n}")
    m = -(-n // 4)
    u = (n - 1) % 4 + 1
    c = comb(n, 3)
    w1 = Fraction(comb(u, 3) + 4 * (m - 1), c)
    w2 = Fraction((m - 1) * (4 * comb(u, 2) + 6 * u + 24 * (m - 2)), c)
    w3 = Fraction(8 * (m - 1) * (m - 2) * (3 * u + 4 * (m - 3)), 3 * c)
    return w1, w2, w3


def better3_alpha(n):
    w = better3_weights(n)
    return sum((wi * better3_alpha_partition(p) for wi, p in zip(w, _BETTER3_CLASSES)), Fraction(0))


def better3_alpha_infinity():
    return better3_alpha_partition((1, 1, 1))
