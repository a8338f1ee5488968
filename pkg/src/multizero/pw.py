"""Pellikaan-Wu zero-count bound versus the Schwartz-Zippel quantity.

For a degree-d polynomial over F_q^m, both bound the number of points of
multiplicity >= r:

    gamma1 = [C(m+r-1, m) q^m + (d - q w) C(m+r-w-2, m-1) q^(m-1)
              - C(m+r-w-1, m) q^m] / C(m+r-1, r-1),     w = floor(d / q)
    gamma2 = d q^(m-1) / r

gamma1 >= gamma2 on 0 <= d < r q, so the second is never worse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb


def _comb(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


@dataclass(frozen=True)
class PWQuery:
    q: int
    r: int
    m: int
    d: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"q must be at least 2, got {self.q}")
        if self.r < 1 or self.m < 1 or self.d < 0:
            raise ValueError(f"need r >= 1, m >= 1, d >= 0: {self}")


def gamma1(query: PWQuery, relaxed: bool = False) -> Fraction:
    """Pellikaan-Wu bound.  ``relaxed`` also admits the endpoint d = r q."""
    q, r, m, d = query.q, query.r, query.m, query.d
    limit = r * q + 1 if relaxed else r * q
    if d >= limit:
        raise ValueError(f"gamma1 needs d < r*q = {r * q}, got d = {d}")
    w = d // q
    numerator = (
        _comb(m + r - 1, m) * q**m
        + (d - q * w) * _comb(m + r - w - 2, m - 1) * q ** (m - 1)
        - _comb(m + r - w - 1, m) * q**m
    )
    return Fraction(numerator, _comb(m + r - 1, r - 1))


def gamma2(query: PWQuery) -> Fraction:
    return Fraction(query.d * query.q ** (query.m - 1), query.r)


@dataclass
class DominanceReport:
    q: int
    r: int
    m: int
    checked: int = 0
    violations: list[int] = field(default_factory=list)
    max_gap: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return not self.violations


def dominance_sweep(q: int, r: int, m: int) -> DominanceReport:
    """Check gamma1 >= gamma2 for every d in [0, r q - 1]."""
    report = DominanceReport(q, r, m)
    for d in range(r * q):
        query = PWQuery(q, r, m, d)
        gap = gamma1(query) - gamma2(query)
        report.checked += 1
        if gap < 0:
            report.violations.append(d)
        report.max_gap = max(report.max_gap, gap)
    return report
