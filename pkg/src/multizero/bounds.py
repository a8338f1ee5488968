"""Recursive upper bound D on zeros of multiplicity at least r.

A query is the tuple (i_1..i_m; r; s_1..s_m): the exponents of the
lexicographic leading monomial X_1^i_1 ... X_m^i_m (X_1 most significant),
the multiplicity target, and the sizes of the grid sets S_1..S_m.

D is computed by recursion on the last variable.  Writing P[k] for the bound
on the first m-1 variables at multiplicity target k (P[0] is the full
sub-grid), the last level maximizes

    (s_m - sum(u)) * P[r] + u_1 * P[r-1] + ... + u_r * P[0]

over the admissible set A(i_m, r, s_m) of count vectors u.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Sequence

MAX_R = 64


@dataclass(frozen=True)
class BoundQuery:
    exponents: tuple[int, ...]
    r: int
    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(int(i) for i in self.exponents))
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.exponents:
            raise ValueError("at least one variable is required")
        if len(self.exponents) != len(self.sizes):
            raise ValueError(
                f"{len(self.exponents)} exponents but {len(self.sizes)} set sizes"
            )
        if any(i < 0 for i in self.exponents):
            raise ValueError(f"exponents must be nonnegative: {self.exponents}")
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"set sizes must be positive: {self.sizes}")
        if not 1 <= self.r <= MAX_R:
            raise ValueError(f"multiplicity target must lie in [1, {MAX_R}], got {self.r}")

    @property
    def m(self) -> int:
        return len(self.exponents)

    @property
    def grid_size(self) -> int:
        return prod(self.sizes)

    def with_r(self, r: int) -> "BoundQuery":
        return BoundQuery(self.exponents, r, self.sizes)


def enumerate_admissible_u(i_last: int, r: int, s_last: int) -> list[tuple[int, ...]]:
    """Return A(i_last, r, s_last) in lexicographic order.

    These are the vectors (u_1..u_r) of nonnegative integers with
    u_1 + ... + u_r <= s_last and u_1 + 2 u_2 + ... + r u_r <= i_last.
    """
    out: list[tuple[int, ...]] = []

    def rec(j: int, count_left: int, weight_left: int, prefix: list[int]) -> None:
        if j > r:
            out.append(tuple(prefix))
            return
        for u in range(min(count_left, weight_left // j) + 1):
            prefix.append(u)
            rec(j + 1, count_left - u, weight_left - j * u, prefix)
            prefix.pop()

    rec(1, s_last, i_last, [])
    return out


def trivial_full_grid(query: BoundQuery) -> bool:
    """True when some polynomial with this leading monomial vanishes to order r everywhere."""
    return sum(i // s for i, s in zip(query.exponents, query.sizes)) >= query.r


def strip_zero_exponents(query: BoundQuery) -> tuple[int, BoundQuery]:
    """Factor out the variables with exponent 0.

    D(query) equals multiplier * D(reduced); the reduced query keeps the
    nonzero positions in order.
    """
    keep = [j for j, i in enumerate(query.exponents) if i > 0]
    if not keep:
        raise ValueError("all exponents are zero; nothing to reduce to")
    multiplier = prod(s for i, s in zip(query.exponents, query.sizes) if i == 0)
    reduced = BoundQuery(
        tuple(query.exponents[j] for j in keep),
        query.r,
        tuple(query.sizes[j] for j in keep),
    )
    return multiplier, reduced


def sz_gen_bound(query: BoundQuery) -> int:
    """Floor of (i_1 s_2..s_m + s_1 i_2 s_3..s_m + ... + s_1..s_{m-1} i_m) / r.

    Not clamped to the grid size.
    """
    return schwartz_zippel_sum(query.exponents, query.sizes) // query.r


def schwartz_zippel_sum(exponents: Sequence[int], sizes: Sequence[int]) -> int:
    """i_1 s_2..s_m + ... + s_1..s_{m-1} i_m, the cap on the total multiplicity."""
    total = 0
    for j, i in enumerate(exponents):
        total += i * prod(s for t, s in enumerate(sizes) if t != j)
    return total


def _best_over_admissible(values: Sequence[int], i_last: int, s_last: int) -> int:
    """Maximize (s - sum u) * values[r] + sum_j u_j * values[r - j] over A(i_last, r, s).

    ``values[k]`` is the prefix bound at multiplicity target k, with
    ``values[0]`` the size of the prefix grid.  The search walks A with
    u_r outermost and descending and cuts branches whose optimistic
    completion cannot beat the incumbent.
    """
    r = len(values) - 1
    base = values[r]
    gains = [0] + [values[r - j] - base for j in range(1, r + 1)]
    # gains are nonnegative because the prefix bound is antitone in its target.
    # top_gain[j], top_rate[j]: best gain and best gain-per-weight among items 1..j
    top_gain = [0] * (r + 1)
    top_rate = [(0, 1)] * (r + 1)
    for j in range(1, r + 1):
        top_gain[j] = max(top_gain[j - 1], gains[j])
        g, w = top_rate[j - 1]
        top_rate[j] = (gains[j], j) if gains[j] * w > g * j else (g, w)

    best = 0

    def rec(j: int, count_left: int, weight_left: int, acc: int) -> None:
        nonlocal best
        if j == 0:
            if acc > best:
                best = acc
            return
        g, w = top_rate[j]
        if acc + min(count_left * top_gain[j], weight_left * g // w) <= best:
            return
        for u in range(min(count_left, weight_left // j), -1, -1):
            rec(j - 1, count_left - u, weight_left - j * u, acc + u * gains[j])

    rec(r, s_last, i_last, 0)
    return s_last * base + best


@lru_cache(maxsize=None)
def _d(exponents: tuple[int, ...], r: int, sizes: tuple[int, ...]) -> int:
    if r == 0:
        return prod(sizes)
    if not any(exponents):
        return 0
    if len(exponents) == 1:
        return min(exponents[0] // r, sizes[0])
    if sum(i // s for i, s in zip(exponents, sizes)) >= r:
        return prod(sizes)
    if 0 in exponents:
        multiplier = prod(s for i, s in zip(exponents, sizes) if i == 0)
        keep = [j for j, i in enumerate(exponents) if i > 0]
        return multiplier * _d(
            tuple(exponents[j] for j in keep), r, tuple(sizes[j] for j in keep)
        )
    head_i, head_s = exponents[:-1], sizes[:-1]
    values = [_d(head_i, k, head_s) for k in range(r + 1)]
    return _best_over_admissible(values, exponents[-1], sizes[-1])


def d_bound(query: BoundQuery) -> int:
    """Upper bound D on the number of grid points of multiplicity >= r.

    Valid for every nonzero polynomial whose lex leading monomial has the
    query's exponents, over any grid with the query's set sizes.
    """
    return _d(query.exponents, query.r, query.sizes)


def d_cache_clear() -> None:
    _d.cache_clear()
