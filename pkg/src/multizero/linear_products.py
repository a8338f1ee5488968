"""Lower bound H from products of univariate linear factors.

A root assignment gives, for each variable t, a count vector
v = (v_1..v_r): v_j roots of S_t carry exponent j.  The product

    F = prod_t prod_roots (X_t - alpha)^exponent

has degree sum_j j*v_j in X_t and multiplicity at a grid point equal to the
sum of the exponents of the roots it hits.  H is the largest number of
points with multiplicity >= r over all assignments of the exact degrees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterator, Sequence

from multizero.bounds import BoundQuery
from multizero.closed_forms import condition_a_holds
from multizero.field import SparsePolynomial

Assignment = tuple[tuple[int, ...], ...]


class NoLinearProductError(ValueError):
    """No product of linear factors has this exact leading monomial and root budget."""


def enumerate_assignments(i_t: int, r: int, s_t: int) -> list[tuple[int, ...]]:
    """Vectors v of length r with sum(v) <= s_t and sum(j * v_j) == i_t, lex order."""
    out: list[tuple[int, ...]] = []

    def rec(j: int, count_left: int, weight_left: int, prefix: list[int]) -> None:
        if j == r:
            if weight_left % r == 0 and weight_left // r <= count_left:
                out.append((*prefix, weight_left // r))
            return
        for v in range(min(count_left, weight_left // j) + 1):
            prefix.append(v)
            rec(j + 1, count_left - v, weight_left - j * v, prefix)
            prefix.pop()

    rec(1, s_t, i_t, [])
    return out


def _extend(prefix: Sequence[int], v: Sequence[int], s_t: int, sub_grid: int) -> tuple[int, ...]:
    """Prefix profile after appending a variable with assignment ``v``.

    ``prefix[k-1]`` is H~ of the earlier variables at target k; the empty
    prefix is the all-zero profile with sub-grid size 1.
    """
    r = len(prefix)
    free = s_t - sum(v)
    out = []
    tail = sum(v)
    for k in range(1, r + 1):
        # tail = v_k + ... + v_r
        val = free * prefix[k - 1] + tail * sub_grid
        for j in range(1, k):
            val += v[j - 1] * prefix[k - j - 1]
        out.append(val)
        tail -= v[k - 1]
    return tuple(out)


def tilde_h(assignment: Sequence[Sequence[int]], k: int, sizes: Sequence[int]) -> int:
    """H~(v^(1)..v^(m), k, s_1..s_m) straight from its recursive definition."""
    r = len(assignment[0])
    if not 1 <= k <= r:
        raise ValueError(f"k must lie in [1, {r}], got {k}")
    if len(assignment) != len(sizes):
        raise ValueError("one assignment vector per variable is required")
    *head, last = assignment
    if not head:
        return sum(last[k - 1:])
    head_sizes = sizes[:-1]
    s_m = sizes[-1]
    value = (s_m - sum(last)) * tilde_h(head, k, head_sizes)
    for j in range(1, k):
        value += last[j - 1] * tilde_h(head, k - j, head_sizes)
    value += sum(last[k - 1:]) * prod(head_sizes)
    return value


def h_bound(query: BoundQuery) -> tuple[int, Assignment]:
    """H and the lexicographically smallest maximizing assignment.

    Raises ``NoLinearProductError`` when some variable admits no assignment.
    """
    r, sizes = query.r, query.sizes
    choices = [enumerate_assignments(i, r, s) for i, s in zip(query.exponents, sizes)]
    for t, opts in enumerate(choices):
        if not opts:
            raise NoLinearProductError(
                f"no root assignment of degree {query.exponents[t]} fits "
                f"{sizes[t]} roots at multiplicity cap {r} (variable {t + 1})"
            )
    m = query.m
    sub_grids = [prod(sizes[:t]) for t in range(m)]

    @lru_cache(maxsize=None)
    def best(t: int, profile: tuple[int, ...]) -> int:
        if t == m:
            return profile[r - 1]
        return max(
            best(t + 1, _extend(profile, v, sizes[t], sub_grids[t])) for v in choices[t]
        )

    start = (0,) * r
    value = best(0, start)
    witness = []
    profile = start
    for t in range(m):
        for v in choices[t]:
            nxt = _extend(profile, v, sizes[t], sub_grids[t])
            if best(t + 1, nxt) == value:
                witness.append(v)
                profile = nxt
                break
    return value, tuple(witness)


@dataclass(frozen=True)
class LinearProductSpec:
    """Per variable, the (root, exponent) pairs of a product of linear factors."""

    factors: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        for pairs in self.factors:
            roots = [a for a, _ in pairs]
            if len(set(roots)) != len(roots):
                raise ValueError(f"repeated root in {pairs}")
            if any(e < 1 for _, e in pairs):
                raise ValueError(f"factor exponents must be positive: {pairs}")

    @classmethod
    def from_assignment(cls, witness: Sequence[Sequence[int]], sets: Sequence[Sequence[int]]) -> LinearProductSpec:
        """Hand out roots in the listed order of each set: first v_1 roots get exponent 1, and so on."""
        factors = []
        for t, (v, pool) in enumerate(zip(witness, sets)):
            needed = sum(v)
            if len(set(pool)) < needed:
                raise ValueError(f"variable {t + 1} needs {needed} distinct roots, set has {len(set(pool))}")
            roots = iter(pool)
            pairs = []
            for exponent, count in enumerate(v, start=1):
                for _ in range(count):
                    pairs.append((next(roots), exponent))
            factors.append(tuple(pairs))
        return cls(tuple(factors))

    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(e for _, e in pairs) for pairs in self.factors)


def linear_product_multiplicity(spec: LinearProductSpec, point: Sequence[int]) -> int:
    """Sum over variables of the exponent of the factor vanishing at that coordinate."""
    total = 0
    for pairs, a in zip(spec.factors, point):
        for root, e in pairs:
            if root == a:
                total += e
                break
    return total


def _univariate_product(pairs: Sequence[tuple[int, int]], p: int) -> list[int]:
    coeffs = [1]
    for root, e in pairs:
        for _ in range(e):
            nxt = [0] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d + 1] = (nxt[d + 1] + c) % p
                nxt[d] = (nxt[d] - root * c) % p
            coeffs = nxt
    return coeffs


def expand(spec: LinearProductSpec, p: int, pad_monomial: Sequence[int] | None = None) -> SparsePolynomial:
    """Expanded product over GF(p), times X^pad_monomial."""
    m = len(spec.factors)
    poly = SparsePolynomial.constant(m, p, 1)
    for t, pairs in enumerate(spec.factors):
        poly = poly * SparsePolynomial.univariate(_univariate_product(pairs, p), t, m, p)
    if pad_monomial is not None:
        poly = poly * SparsePolynomial.monomial(pad_monomial, p)
    return poly


def build_extremal_polynomial(
    witness: Sequence[Sequence[int]],
    sets: Sequence[Sequence[int]],
    p: int,
    pad_monomial: Sequence[int] | None = None,
) -> SparsePolynomial:
    """Realize a root assignment as an explicit polynomial over GF(p)."""
    spec = LinearProductSpec.from_assignment(witness, [[a % p for a in s] for s in sets])
    return expand(spec, p, pad_monomial)


def full_grid_witness(query: BoundQuery) -> tuple[Assignment, tuple[int, ...]]:
    """Assignment and pad putting every grid point at multiplicity >= r.

    Every element of S_j gets exponent floor(i_j/s_j); the pad monomial
    makes up the remaining degree.  Requires the trivial full-grid condition.
    """
    exps = [i // s for i, s in zip(query.exponents, query.sizes)]
    if sum(exps) < query.r:
        raise ValueError(f"{query} is not in the full-grid region")
    witness = []
    for e, s in zip(exps, query.sizes):
        v = [0] * max(e, 1)
        if e:
            v[e - 1] = s
        witness.append(tuple(v))
    pad = tuple(i - e * s for i, e, s in zip(query.exponents, exps, query.sizes))
    return tuple(witness), pad


# -- equality predictions -----------------------------------------------------

def predict_equal_two_var(query: BoundQuery) -> int | None:
    """H = D = r s2 i1 + i2 s1 - i1 i2 - (r-1) s1 s2 on its range, else None."""
    if query.m != 2:
        return None
    (i1, i2), r, (s1, s2) = query.exponents, query.r, query.sizes
    if (r + 1) * i1 >= r * s1 and i1 < s1 and (r - 1) * s2 <= i2 < r * s2:
        return r * s2 * i1 + i2 * s1 - i1 * i2 - (r - 1) * s1 * s2
    return None


def predict_divisible(query: BoundQuery) -> int | None:
    """H = D = s_1..s_m - prod(s_j - i_j/r) under Condition A when r divides every i_j."""
    if query.m < 2 or any(i % query.r for i in query.exponents):
        return None
    if not condition_a_holds(query):
        return None
    r = query.r
    return prod(query.sizes) - prod(s - i // r for i, s in zip(query.exponents, query.sizes))


def predict_small_first_exponent(query: BoundQuery) -> int | None:
    """Experimental: floor(i2/r) s2 + delta for r <= s1, i1 < r, i2 < r s2.

    The formula leaves one symbol undefined; this reads it as
    w = i2 mod r.  Not verified, and not used by ``equality_prediction``.
    """
    if query.m != 2:
        return None
    (i1, i2), r, (s1, s2) = query.exponents, query.r, query.sizes
    if not (r <= s1 and i1 < r and i2 < r * s2):
        return None
    w = i2 - r * (i2 // r)
    delta = i1 - (r - w) + 1 if r - w <= i1 else 0
    return (i2 // r) * s2 + delta


def equality_prediction(query: BoundQuery) -> tuple[int, str] | None:
    """Value that H and D are known to share, tagged with the rule used.

    "P1": two variables, r/(r+1) s1 <= i1 < s1 and (r-1) s2 <= i2 < r s2.
    "P4": Condition A and r divides every exponent.
    """
    value = predict_equal_two_var(query)
    if value is not None:
        return value, "P1"
    value = predict_divisible(query)
    if value is not None:
        return value, "P4"
    return None


def insert_zero_exponent(query: BoundQuery, position: int, size: int) -> tuple[BoundQuery, int]:
    """Insert a variable with exponent 0 and set size ``size`` at ``position``.

    Returns the new query and the factor by which both H and D scale.
    """
    if not 0 <= position <= query.m:
        raise ValueError(f"position {position} outside [0, {query.m}]")
    exps = list(query.exponents)
    sizes = list(query.sizes)
    exps.insert(position, 0)
    sizes.insert(position, size)
    return BoundQuery(tuple(exps), query.r, tuple(sizes)), size


def relative_gap(d: int, h: int) -> Fraction:
    """(D - H) / ((D + H) / 2)."""
    return Fraction(2 * (d - h), d + h)


def assignments_product(query: BoundQuery) -> Iterator[Assignment]:
    """Every per-variable assignment combination, in lex order."""
    choices = [enumerate_assignments(i, query.r, s) for i, s in zip(query.exponents, query.sizes)]
    yield from itertools.product(*choices)
