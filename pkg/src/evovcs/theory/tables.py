"""Regenerate the reference contrast tables as exact cells, text or CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from ..exceptions import ParameterError
from .contrast import (
    alpha_or_infinity,
    alpha_or_partition,
    alpha_or_stack_t,
    alpha_xor_infinity,
    alpha_xor_partition,
    better2_alpha_partition,
    better3_alpha_partition,
    sigma_or,
)
from .curves import find_convergence_n, named_curve

__all__ = ["Cell", "table_cells", "render_text", "render_csv", "TABLES", "PARTITIONS"]

TABLE1_COLUMNS = (2, 3, 4, 5, 10, 50, 100)

PARTITIONS = {
    2: ((2,), (1, 1)),
    3: ((3,), (2, 1), (1, 1, 1)),
    4: ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)),
    5: ((5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)),
}


@dataclass(frozen=True)
class Cell:
    table: str
    scheme: str
    k: int
    n_or_t: str
    partition: str
    value: object

    @property
    def exact(self):
        return isinstance(self.value, (Fraction, int))

    def display(self, decimals=4):
        if isinstance(self.value, Fraction) and self.value.denominator < 10**5:
            return f"{self.value} ({float(self.value):.{decimals}f})"
        if isinstance(self.value, int):
            return str(self.value)
        return f"{float(self.value):.{decimals}f}"


def _part(p):
    return "[" + ",".join(map(str, p)) + "]"


def _table1(kmax):
    for k in range(2, kmax + 1):
        for n in TABLE1_COLUMNS:
            if n >= k:
                yield Cell("I", "OR", k, str(n), "", sigma_or(k, n))
        yield Cell("I", "OR", k, "inf", "", alpha_or_infinity(k))


def _table2(kmax):
    for k in range(2, kmax + 1):
        yield Cell("II", "XOR", k, "inf", "", alpha_xor_infinity(k))


def _table3(kmax):
    for k in range(4, kmax + 1):
        for t in range(k, 12):
            yield Cell("III", "OR", k, str(t), "", alpha_or_stack_t(k, t))


def _table4(kmax):
    for k in range(2, min(kmax, 5) + 1):
        for p in PARTITIONS[k]:
            yield Cell("IV", "OR", k, "inf", _part(p), alpha_or_partition(p, k))
        if k >= 4:
            for p in PARTITIONS[k]:
                yield Cell("IV", "XOR", k, "inf", _part(p), alpha_xor_partition(p, k))
        if k == 2:
            for p in PARTITIONS[2]:
                yield Cell("IV", "better", 2, "inf", _part(p), better2_alpha_partition(p))
        if k == 3:
            for p in PARTITIONS[3]:
                yield Cell("IV", "better", 3, "inf", _part(p), better3_alpha_partition(p))


EPSILON = {"or": Fraction(5, 1000), "xor": Fraction(5, 100), "better": 0.005}


def _table6(kmax):
    for k in range(2, kmax + 1):
        for scheme in ("or", "xor", "better"):
            if scheme == "better" and k > 3:
                continue
            n = find_convergence_n(named_curve(scheme, k), EPSILON[scheme])
            yield Cell("VI", scheme.upper(), k, "", "", n)


TABLES = {"I": _table1, "II": _table2, "III": _table3, "IV": _table4, "VI": _table6}
DEFAULT_KMAX = {"I": 4, "II": 6, "III": 5, "IV": 5, "VI": 6}


def table_cells(name, kmax=None):
    name = name.upper()
    if name not in TABLES:
        raise ParameterError(f"unknown table {name!r}; choose from {', '.join(TABLES)}")
    kmax = DEFAULT_KMAX[name] if kmax is None else int(kmax)
    if kmax < 2:
        raise ParameterError("kmax must be >= 2")
    return list(TABLES[name](kmax))


def render_text(cells):
    """Aligned plain-text listing, one cell per line."""
    headers = ("table", "scheme", "k", "n/t", "partition", "value")
    rows = [(c.table, c.scheme, str(c.k), c.n_or_t, c.partition, c.display()) for c in cells]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def render_csv(cells):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "n_or_t", "partition", "value_num", "value_den", "value_float", "scheme"])
    for c in cells:
        if isinstance(c.value, Fraction):
            num, den = c.value.numerator, c.value.denominator
        elif isinstance(c.value, int):
            num, den = c.value, 1
        else:
            num = den = ""
        writer.writerow([c.k, c.n_or_t, c.partition, num, den, f"{float(c.value):.10g}", c.scheme])
    return buf.getvalue()
