"""Prime-field polynomials, Hasse derivatives and multiplicities.

This is the ground truth the bounds are checked against.  Polynomials are
sparse: a dict from exponent tuples to nonzero residues mod p.

Two routes compute multiplicities.  ``multiplicity_at`` follows the
definition literally, evaluating every Hasse derivative of weight
0, 1, 2, ... at one point.  ``multiplicity_grid`` evaluates all Hasse
derivatives at every grid point at once with dense numpy contractions and
takes the minimum nonzero weight per point; the grid counters use it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]

INFINITE = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def binomial_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        result = result * math.comb(ni, ki) % p
        n //= p
        k //= p
    return result


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value: int) -> int:
        return value % self.p


@dataclass(frozen=True, eq=False)
class SparsePolynomial:
    """Polynomial in ``nvars`` variables over GF(p).

    ``terms`` never stores zero coefficients; the zero polynomial has no terms.
    """

    nvars: int
    p: int
    terms: Mapping[Exponent, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Exponent, int] = {}
        for mono, c in self.terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {self.nvars} variables")
            c %= self.p
            if c:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, p: int) -> SparsePolynomial:
        return cls(nvars, p, {})

    @classmethod
    def constant(cls, nvars: int, p: int, c: int) -> SparsePolynomial:
        return cls(nvars, p, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], p: int, c: int = 1) -> SparsePolynomial:
        return cls(len(exponent), p, {tuple(exponent): c})

    @classmethod
    def univariate(cls, coeffs: Sequence[int], var: int, nvars: int, p: int) -> SparsePolynomial:
        """Build sum_e coeffs[e] * X_var^e."""
        terms = {}
        for e, c in enumerate(coeffs):
            mono = [0] * nvars
            mono[var] = e
            terms[tuple(mono)] = c
        return cls(nvars, p, terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: SparsePolynomial) -> None:
        if (self.nvars, self.p) != (other.nvars, other.p):
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: SparsePolynomial) -> SparsePolynomial:
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return SparsePolynomial(self.nvars, self.p, out)

    def __neg__(self) -> SparsePolynomial:
        return SparsePolynomial(self.nvars, self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: SparsePolynomial) -> SparsePolynomial:
        return self + (-other)

    def __mul__(self, other: SparsePolynomial | int) -> SparsePolynomial:
        if isinstance(other, int):
            return SparsePolynomial(self.nvars, self.p, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = (out.get(mono, 0) + c1 * c2) % self.p
        return SparsePolynomial(self.nvars, self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SparsePolynomial:
        result = SparsePolynomial.constant(self.nvars, self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return (self.nvars, self.p, self.terms) == (other.nvars, other.p, other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 (mod {self.p})"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            vars_ = "*".join(f"X{j + 1}^{e}" if e > 1 else f"X{j + 1}" for j, e in enumerate(mono) if e)
            parts.append(f"{self.terms[mono]}*{vars_}" if vars_ else str(self.terms[mono]))
        return " + ".join(parts) + f" (mod {self.p})"

    # -- queries -------------------------------------------------------------

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for mono, c in self.terms.items():
            term = c
            for a, e in zip(point, mono):
                term = term * pow(a, e, self.p) % self.p
            total += term
        return total % self.p

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self.terms), default=-1)


def hasse_derivative(poly: SparsePolynomial, k: Sequence[int]) -> SparsePolynomial:
    """The coefficient of Z^k in F(X + Z), as a polynomial in X."""
    k = tuple(k)
    if len(k) != poly.nvars:
        raise ValueError("derivative index has the wrong length")
    out: dict[Exponent, int] = {}
    for mono, c in poly.terms.items():
        if any(e < kj for e, kj in zip(mono, k)):
            continue
        coeff = c
        for e, kj in zip(mono, k):
            coeff = coeff * binomial_mod(e, kj, poly.p) % poly.p
            if not coeff:
                break
        if coeff:
            shifted = tuple(e - kj for e, kj in zip(mono, k))
            out[shifted] = (out.get(shifted, 0) + coeff) % poly.p
    return SparsePolynomial(poly.nvars, poly.p, out)


def _hasse_at(poly: SparsePolynomial, k: Exponent, point: Sequence[int]) -> int:
    p = poly.p
    total = 0
    for mono, c in poly.terms.items():
        term = c
        for e, kj, a in zip(mono, k, point):
            if e < kj:
                term = 0
                break
            term = term * binomial_mod(e, kj, p) * pow(a, e - kj, p) % p
            if not term:
                break
        total += term
    return total % p


def _compositions(total: int, bounds: Sequence[int]) -> Iterable[Exponent]:
    """Vectors k with sum(k) == total and 0 <= k_j <= bounds[j]."""
    if len(bounds) == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    for first in range(min(total, bounds[0]) + 1):
        for rest in _compositions(total - first, bounds[1:]):
            yield (first, *rest)


def multiplicity_at(poly: SparsePolynomial, point: Sequence[int]) -> int | float:
    """Smallest weight of a Hasse derivative not vanishing at ``point``.

    Returns ``INFINITE`` for the zero polynomial.
    """
    if not poly:
        return INFINITE
    point = [a % poly.p for a in point]
    bounds = [poly.degree_in(j) for j in range(poly.nvars)]
    for weight in range(poly.total_degree() + 1):
        for k in _compositions(weight, bounds):
            if _hasse_at(poly, k, point):
                return weight
    raise AssertionError("a nonzero polynomial has a nonvanishing derivative by its degree")


def leading_monomial(poly: SparsePolynomial) -> Exponent:
    """Largest exponent under lex order with X_1 most significant."""
    if not poly:
        raise ValueError("the zero polynomial has no leading monomial")
    return max(poly.terms)


@dataclass(frozen=True)
class GridSpec:
    """Point sets S_1..S_m inside GF(p)."""

    sets: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self) -> None:
        sets = tuple(tuple(a % self.p for a in s) for s in self.sets)
        for s in sets:
            if not s:
                raise ValueError("grid sets must be nonempty")
            if len(set(s)) != len(s):
                raise ValueError(f"grid set {s} repeats an element mod {self.p}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def default(cls, sizes: Sequence[int], p: int) -> GridSpec:
        """S_j = {0, 1, ..., s_j - 1}."""
        if any(s > p for s in sizes):
            raise ValueError(f"GF({p}) has fewer than {max(sizes)} elements")
        return cls(tuple(tuple(range(s)) for s in sizes), p)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def points(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*self.sets)


def _dense(poly: SparsePolynomial) -> np.ndarray:
    shape = tuple(poly.degree_in(j) + 1 for j in range(poly.nvars))
    dense = np.zeros(shape, dtype=np.int64)
    for mono, c in poly.terms.items():
        dense[mono] = c
    return dense


def _taylor_matrix(max_exp: int, points: Sequence[int], p: int) -> np.ndarray:
    """B[k, a, e] = C(e, k) * a^(e - k) mod p, zero for e < k."""
    mat = np.zeros((max_exp + 1, len(points), max_exp + 1), dtype=np.int64)
    for k in range(max_exp + 1):
        for e in range(k, max_exp + 1):
            c = binomial_mod(e, k, p)
            if c:
                for idx, a in enumerate(points):
                    mat[k, idx, e] = c * pow(a, e - k, p) % p
    return mat


def hasse_table(poly: SparsePolynomial, grid: GridSpec) -> np.ndarray:
    """All Hasse derivatives at all grid points.

    Entry [a_1..a_m, k_1..k_m] is F^(k)(a) for grid-index tuple a and
    0 <= k_j <= deg_j(F).
    """
    if grid.p != poly.p or len(grid.sets) != poly.nvars:
        raise ValueError("grid does not match the polynomial ring")
    p = poly.p
    m = poly.nvars
    table = _dense(poly)
    if (p - 1) ** 2 * (max(table.shape) + 1) >= 2**62:
        raise OverflowError(f"GF({p}) too large for the int64 grid evaluator")
    # axes go from (e_1..e_m) to (k_1, a_1, ..., k_m, a_m), one variable at a time
    for j in range(m):
        mat = _taylor_matrix(table.shape[2 * j] - 1, grid.sets[j], p)
        table = np.tensordot(table, mat, axes=([2 * j], [2])) % p
        table = np.moveaxis(table, [-2, -1], [2 * j, 2 * j + 1])
    order = [2 * j + 1 for j in range(m)] + [2 * j for j in range(m)]
    return table.transpose(order)


def multiplicity_grid(poly: SparsePolynomial, grid: GridSpec) -> np.ndarray:
    """Multiplicity of ``poly`` at every grid point, indexed like the grid."""
    if not poly:
        raise ValueError("the zero polynomial has infinite multiplicity everywhere")
    m = poly.nvars
    table = hasse_table(poly, grid)
    kshape = table.shape[m:]
    weights = np.indices(kshape).sum(axis=0)
    sentinel = sum(kshape) + 1
    masked = np.where(table != 0, weights, sentinel)
    return masked.reshape(table.shape[:m] + (-1,)).min(axis=-1)


def count_zeros_with_min_mult(poly: SparsePolynomial, grid: GridSpec, r: int) -> int:
    """Number of grid points where ``poly`` has multiplicity >= r."""
    return int((multiplicity_grid(poly, grid) >= r).sum())


def total_multiplicity_sum(poly: SparsePolynomial, grid: GridSpec) -> int:
    """Sum of multiplicities over the grid."""
    return int(multiplicity_grid(poly, grid).sum())


def lex_below(lm: Sequence[int], cap: Sequence[int]) -> list[Exponent]:
    """Exponents inside the box [0, cap] strictly lex-smaller than ``lm``."""
    return [e for e in itertools.product(*(range(c + 1) for c in cap)) if e < tuple(lm)]


def random_poly_with_lm(
    lm: Sequence[int],
    field: PrimeField | int,
    support_cap: Sequence[int] | None = None,
    seed: int | Sequence[int] | None = None,
) -> SparsePolynomial:
    """Monic-in-``lm`` polynomial with uniform random lower coefficients.

    Every exponent in the box [0, support_cap] that is lex-below ``lm`` gets an
    independent uniform coefficient (zero included).  The cap defaults to
    the box spanned by ``lm``.
    """
    p = field.p if isinstance(field, PrimeField) else PrimeField(field).p
    lm = tuple(lm)
    cap = tuple(support_cap) if support_cap is not None else lm
    if len(cap) != len(lm) or any(e > c for e, c in zip(lm, cap)):
        raise ValueError(f"leading monomial {lm} lies outside the support cap {cap}")
    rng = np.random.default_rng(seed)
    below = lex_below(lm, cap)
    coeffs = rng.integers(0, p, size=len(below))
    terms = {mono: int(c) for mono, c in zip(below, coeffs)}
    terms[lm] = 1
    return SparsePolynomial(len(lm), p, terms)
