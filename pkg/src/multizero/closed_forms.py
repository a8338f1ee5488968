"""Closed-form bounds, in exact rationals.

Covers the two-variable case split, Condition A and the product-form bound
it enables for any number of variables, and the footprint bound (r = 1).
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import prod
from typing import Sequence

from multizero.bounds import BoundQuery, trivial_full_grid


class CaseNotApplicable(ValueError):
    """The input lies outside every range a closed form is stated for."""


class ConditionAViolated(ValueError):
    pass


class Case(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    TRIVIAL_FULL_GRID = "TRIVIAL_FULL_GRID"


def classify_two_var(i1: int, i2: int, r: int, s1: int, s2: int) -> tuple[Case, int | None]:
    """Which closed form applies to (i1, i2, r, s1, s2), and with which k."""
    query = BoundQuery((i1, i2), r, (s1, s2))
    if trivial_full_grid(query):
        return Case.TRIVIAL_FULL_GRID, None
    if s1 * (r - 1) <= i1 < s1 * r and i2 < s2:
        return Case.C4, None
    # largest k in 1..r-1 with i1 < (r - k) s1
    k = r - 1 - i1 // s1
    if not 1 <= k <= r - 1:
        raise CaseNotApplicable(
            f"i1={i1} is not below (r-k)*s1 for any k in 1..{r - 1} (s1={s1}, r={r})"
        )
    threshold = Fraction((r - k) * r * s1, r + 1)
    if threshold <= i1:
        if i2 < k * s2:
            return Case.C1, k
        if i2 < (k + 1) * s2:
            return Case.C2, k
        raise CaseNotApplicable(f"i2={i2} is not below (k+1)*s2={(k + 1) * s2} for k={k}")
    if i2 < (k + 1) * s2:
        return Case.C3, k
    raise CaseNotApplicable(f"i2={i2} is not below (k+1)*s2={(k + 1) * s2} for k={k}")


def two_var_upper(i1: int, i2: int, r: int, s1: int, s2: int) -> tuple[Fraction, Case, int | None]:
    """Closed-form upper bound on D(i1, i2, r, s1, s2).

    Returns ``(value, case, k)``.  The C4 value is exactly D; C1-C3 are
    rational relaxations, so compare their floor against D.  Trivial
    full-grid inputs return s1*s2.
    """
    case, k = classify_two_var(i1, i2, r, s1, s2)
    a = Fraction(i1, r)
    if case is Case.TRIVIAL_FULL_GRID:
        value = Fraction(s1 * s2)
    elif case is Case.C4:
        fl = i1 // r
        value = Fraction(s2 * fl + i2 * (s1 - fl))
    elif case is Case.C1:
        value = s2 * a + Fraction(i2, r) * Fraction(i1, r - k)
    elif case is Case.C2:
        value = (
            s2 * a
            + ((k + 1) * s2 - i2) * (Fraction(i1, r - k) - a)
            + (i2 - k * s2) * (s1 - a)
        )
    else:
        value = s2 * a + Fraction(i2, k + 1) * (s1 - a)
    return value, case, k


def _factors_hold(i: Sequence[int], s: Sequence[int], l: int, t: int) -> bool:
    """t * prod(s_j - i_j/l) <= l * prod(s_j - i_j/t), cleared of denominators."""
    n = len(i)
    lhs = t * t**n * prod(l * sj - ij for ij, sj in zip(i, s))
    rhs = l * l**n * prod(t * sj - ij for ij, sj in zip(i, s))
    return lhs <= rhs


def condition_a_holds(query: BoundQuery) -> bool:
    """Condition A, with the exponent caps read per variable (i_j <= s_j)."""
    if query.m < 2:
        raise ValueError("Condition A needs at least two variables")
    i, s, r = query.exponents, query.sizes, query.r
    if any(ij > sj for ij, sj in zip(i, s)):
        return False
    head2, size2 = i[:-2], s[:-2]
    for l in range(2, r + 1):
        for t in range(1, l):
            if not _factors_hold(head2, size2, l, t):
                return False
    head1, size1 = i[:-1], s[:-1]
    return all(_factors_hold(head1, size1, r, t) for t in range(1, r))


def implied_exponent_caps(query: BoundQuery) -> bool:
    """i_j <= r/(r+1) * s_j for every variable but the last."""
    if query.m < 2 or query.r < 2:
        raise ValueError("defined for m >= 2 and r >= 2")
    r = query.r
    return all((r + 1) * ij <= r * sj for ij, sj in zip(query.exponents[:-1], query.sizes[:-1]))


def small_exponent_bound(query: BoundQuery) -> Fraction:
    """s_1..s_m - prod(s_j - i_j/r), valid under Condition A."""
    if not condition_a_holds(query):
        raise ConditionAViolated(f"Condition A fails for {query}")
    r = query.r
    return prod(query.sizes) - prod(
        (sj - Fraction(ij, r) for ij, sj in zip(query.exponents, query.sizes)), start=Fraction(1)
    )


def footprint_bound(exponents: Sequence[int], sizes: Sequence[int]) -> int:
    """s_1..s_m - prod(s_j - i_j): the zero count cap for plain zeros."""
    if len(exponents) != len(sizes):
        raise ValueError("exponents and sizes differ in length")
    if any(i > s for i, s in zip(exponents, sizes)):
        raise ValueError(f"footprint bound needs i_j <= s_j, got {tuple(exponents)} vs {tuple(sizes)}")
    return prod(sizes) - prod(s - i for i, s in zip(exponents, sizes))
