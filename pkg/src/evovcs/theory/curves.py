"""Contrast-versus-participants curves, convergence search and scheme ordering."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from ..exceptions import ConvergenceError, ParameterError
from .contrast import (
    alpha_or_infinity,
    alpha_xor_infinity,
    better2_alpha,
    better2_alpha_infinity,
    better3_alpha,
    better3_alpha_infinity,
    sigma_or,
    sigma_xor,
)

__all__ = [
    "ContrastCurve",
    "SEARCH_BOUND",
    "find_convergence_n",
    "CurveComparison",
    "compare_curves",
    "or_curve",
    "xor_curve",
    "better2_curve",
    "better3_curve",
    "named_curve",
]

SEARCH_BOUND = 10_000
# limits that are floats (irrational) compare equal within this tolerance
_FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class ContrastCurve:
    """Contrast of k stacked shares as a function of the number of issued shares."""

    tag: str
    k: int
    value: Callable = field(compare=False)
    limit: object

    def __post_init__(self):
        object.__setattr__(self, "value", lru_cache(maxsize=None)(self.value))

    def __call__(self, n):
        return self.value(n)

    def values(self, n_max):
        return {n: self.value(n) for n in range(self.k, n_max + 1)}


def find_convergence_n(curve, eps, bound=SEARCH_BOUND):
    """Smallest ``n >= k`` with ``|curve(n) - limit| < eps``."""
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    eps = Fraction(eps) if isinstance(curve.limit, Fraction) else float(eps)
    for n in range(curve.k, bound + 1):
        if abs(curve(n) - curve.limit) < eps:
            return n
    raise ConvergenceError(f"{curve.tag} did not come within {eps} of its limit by n={bound}")


def _cmp(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    a, b = float(a), float(b)
    if abs(a - b) <= _FLOAT_TOL * max(1.0, abs(a), abs(b)):
        return 0
    return (a > b) - (a < b)


@dataclass(frozen=True)
class CurveComparison:
    outcome: str
    limit_order: int
    checked_range: tuple
    dominates: bool
    witnesses: tuple
    violations: tuple


def compare_curves(a, b, t_max):
    """Order scheme ``a`` against scheme ``b``.

    Outcomes: ``strictly_better``, ``better``, ``relatively_better`` or
    ``inconclusive``. The "for all t" dominance clause is only checked on
    ``[k, t_max]``; ``witnesses`` lists the t where ``a`` is strictly ahead.
    """
    if a.k != b.k:
        raise ParameterError(f"curves have different thresholds ({a.k} vs {b.k})")
    if t_max < a.k:
        raise ParameterError(f"t_max={t_max} is below k={a.k}")
    witnesses, violations = [], []
    for t in range(a.k, t_max + 1):
        order = _cmp(a(t), b(t))
        if order > 0:
            witnesses.append(t)
        elif order < 0:
            violations.append(t)
    dominates = not violations
    limit_order = _cmp(a.limit, b.limit)
    if limit_order > 0:
        outcome = "strictly_better" if dominates and witnesses else "better"
    elif limit_order == 0 and dominates and witnesses:
        outcome = "relatively_better"
    else:
        outcome = "inconclusive"
    return CurveComparison(
        outcome, limit_order, (a.k, t_max), dominates, tuple(witnesses), tuple(violations)
    )


def or_curve(k):
    return ContrastCurve(f"({k},inf) RGVCS OR", k, lambda n: sigma_or(k, n), alpha_or_infinity(k))


def xor_curve(k):
    return ContrastCurve(f"({k},inf) RGVCS XOR", k, lambda n: sigma_xor(k, n), alpha_xor_infinity(k))


def better2_curve():
    return ContrastCurve("better (2,inf)", 2, better2_alpha, better2_alpha_infinity())


def better3_curve():
    return ContrastCurve("better (3,inf)", 3, better3_alpha, better3_alpha_infinity())


def named_curve(name, k):
    """Curve by scheme name: ``or``, ``xor`` or ``better``."""
    if name == "or":
        return or_curve(k)
    if name == "xor":
        return xor_curve(k)
    if name == "better":
        if k == 2:
            return better2_curve()
        if k == 3:
            return better3_curve()
        raise ParameterError("better schemes exist only for k = 2 and k = 3")
    raise ParameterError(f"unknown curve {name!r}")
