"""Property sweeps checking the bounds against each other and the field oracle.

Each suite returns a :class:`RunReport`.  Counterexamples carry enough
parameters (and seeds, for random suites) to replay them.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

import numpy as np

from multizero.bounds import BoundQuery, d_bound, schwartz_zippel_sum, trivial_full_grid
from multizero.closed_forms import (
    Case,
    condition_a_holds,
    implied_exponent_caps,
    small_exponent_bound,
    two_var_upper,
)
from multizero.field import (
    GridSpec,
    SparsePolynomial,
    count_zeros_with_min_mult,
    hasse_derivative,
    is_prime,
    multiplicity_at,
    multiplicity_grid,
    random_poly_with_lm,
)
from multizero.linear_products import (
    build_extremal_polynomial,
    h_bound,
    insert_zero_exponent,
    equality_prediction,
)
from multizero.pw import PWQuery, dominance_sweep, gamma1, gamma2

MAX_COUNTEREXAMPLES = 20


@dataclass
class RunReport:
    command: str
    params: dict
    passed: int = 0
    failed: int = 0
    results: dict = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    wall_time: float = 0.0

    def record(self, ok: bool, **details) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(details)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "passed": self.passed,
            "failed": self.failed,
            "results": self.results,
            "counterexamples": self.counterexamples,
            "seeds": self.seeds,
            "wall_time": round(self.wall_time, 3),
        }


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def oracle_suite(trials: int, seed: int, max_m: int, max_s: int, max_r: int) -> RunReport:
    """Random polynomials: zero counts stay under D, multiplicity sums under the SZ sum."""
    start = time.perf_counter()
    report = RunReport("verify oracle", dict(trials=trials, seed=seed, max_m=max_m, max_s=max_s, max_r=max_r))
    report.seeds.append(seed)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        m = int(rng.integers(1, max_m + 1))
        sizes = tuple(int(s) for s in rng.integers(1, max_s + 1, size=m))
        r = int(rng.integers(1, max_r + 1))
        p = next_prime(max(sizes))
        sets = tuple(tuple(int(a) for a in rng.choice(p, size=s, replace=False)) for s in sizes)
        lm = tuple(int(rng.integers(0, r * s + 1)) for s in sizes)
        poly = random_poly_with_lm(lm, p, seed=[seed, trial, 1])
        grid = GridSpec(sets, p)
        mults = multiplicity_grid(poly, grid)
        count = int((mults >= r).sum())
        total = int(mults.sum())
        bound = d_bound(BoundQuery(lm, r, sizes))
        sz = schwartz_zippel_sum(lm, sizes)
        report.record(
            count <= bound and total <= sz,
            seed=seed, trial=trial, p=p, sets=sets, lm=lm, r=r, count=count, d=bound,
            mult_sum=total, sz_sum=sz,
        )
    report.wall_time = time.perf_counter() - start
    return report


def witness_suite(max_m: int, max_s: int, max_r: int) -> RunReport:
    """Every H witness, realized over a prime field, hits exactly H points."""
    start = time.perf_counter()
    report = RunReport("verify witness", dict(max_m=max_m, max_s=max_s, max_r=max_r))
    for m in range(1, max_m + 1):
        for sizes in itertools.product(range(1, max_s + 1), repeat=m):
            p = next_prime(max(sizes))
            grid = GridSpec.default(sizes, p)
            for r in range(1, max_r + 1):
                for i in itertools.product(*(range(r * s) for s in sizes)):
                    query = BoundQuery(i, r, sizes)
                    if trivial_full_grid(query):
                        continue
                    h, witness = h_bound(query)
                    poly = build_extremal_polynomial(witness, grid.sets, p)
                    count = count_zeros_with_min_mult(poly, grid, r)
                    report.record(count == h, query=str(query), h=h, witness=witness, count=count)
    report.wall_time = time.perf_counter() - start
    return report


def dominance_suite(max_q: int, max_r: int, max_m: int) -> RunReport:
    """gamma1 >= gamma2 on [0, rq-1]; equality at d = 0 and d = rq."""
    start = time.perf_counter()
    report = RunReport("verify dominance", dict(max_q=max_q, max_r=max_r, max_m=max_m))
    worst = None
    for q in range(2, max_q + 1):
        for r in range(1, max_r + 1):
            for m in range(1, max_m + 1):
                sweep = dominance_sweep(q, r, m)
                report.passed += sweep.checked - len(sweep.violations)
                for d in sweep.violations:
                    report.record(False, q=q, r=r, m=m, d=d)
                for d in (0, r * q):
                    query = PWQuery(q, r, m, d)
                    report.record(gamma1(query, relaxed=True) == gamma2(query), q=q, r=r, m=m, d=d, endpoint=True)
                if worst is None or sweep.max_gap > worst[0]:
                    worst = (sweep.max_gap, q, r, m)
    if worst:
        report.results["max_gap"] = {"gap": str(worst[0]), "q": worst[1], "r": worst[2], "m": worst[3]}
    report.wall_time = time.perf_counter() - start
    return report


def closed_two_var_suite(r_values, s_values) -> RunReport:
    """floor(closed form) >= D everywhere, equality on the C4 range."""
    report = RunReport("verify closed/two-var", dict(r=list(r_values), s=list(s_values)))
    cases: dict[str, int] = {}
    for r in r_values:
        for s1, s2 in itertools.product(s_values, repeat=2):
            for i1, i2 in itertools.product(range(r * s1), range(r * s2)):
                query = BoundQuery((i1, i2), r, (s1, s2))
                if trivial_full_grid(query):
                    continue
                value, case, k = two_var_upper(i1, i2, r, s1, s2)
                d = d_bound(query)
                cases[case.value] = cases.get(case.value, 0) + 1
                ok = floor(value) >= d and value <= min(Fraction(schwartz_zippel_sum((i1, i2), (s1, s2)), r), s1 * s2)
                if case is Case.C4:
                    ok = ok and value == d
                report.record(ok, query=str(query), case=case.value, k=k, value=str(value), d=d)
    report.results["cases"] = cases
    return report


def condition_a_suite(max_m: int, max_s: int, max_r: int) -> RunReport:
    """Condition A implies the exponent caps and floor(product bound) >= D."""
    report = RunReport("verify closed/condition-a", dict(max_m=max_m, max_s=max_s, max_r=max_r))
    satisfied = 0
    for m in range(2, max_m + 1):
        for sizes in itertools.product(range(1, max_s + 1), repeat=m):
            for i in itertools.product(*(range(s + 1) for s in sizes)):
                for r in range(1, max_r + 1):
                    query = BoundQuery(i, r, sizes)
                    if not condition_a_holds(query):
                        continue
                    satisfied += 1
                    bound = small_exponent_bound(query)
                    d = d_bound(query)
                    ok = floor(bound) >= d
                    if r >= 2:
                        ok = ok and implied_exponent_caps(query)
                    report.record(ok, query=str(query), bound=str(bound), d=d)
    report.results["condition_a_inputs"] = satisfied
    return report


def closed_suite(max_m: int, max_s: int, max_r: int) -> RunReport:
    start = time.perf_counter()
    two = closed_two_var_suite(range(2, max_r + 1), range(2, max_s + 1))
    cond = condition_a_suite(max_m, max_s, max_r)
    report = RunReport("verify closed", dict(max_m=max_m, max_s=max_s, max_r=max_r))
    for part in (two, cond):
        report.passed += part.passed
        report.failed += part.failed
        report.counterexamples.extend(part.counterexamples)
        report.results.update(part.results)
    report.wall_time = time.perf_counter() - start
    return report


def equalities_suite(max_m: int, max_s: int, max_r: int) -> RunReport:
    """Predicted H = D values, and the zero-exponent scaling rule."""
    start = time.perf_counter()
    report = RunReport("verify equalities", dict(max_m=max_m, max_s=max_s, max_r=max_r))
    hits = {"P1": 0, "P3": 0, "P4": 0}
    for m in range(2, max_m + 1):
        for sizes in itertools.product(range(1, max_s + 1), repeat=m):
            for r in range(1, max_r + 1):
                for i in itertools.product(*(range(r * s) for s in sizes)):
                    query = BoundQuery(i, r, sizes)
                    if trivial_full_grid(query):
                        continue
                    pred = equality_prediction(query)
                    if pred is None:
                        continue
                    value, tag = pred
                    d, h = d_bound(query), h_bound(query)[0]
                    hits[tag] += 1
                    report.record(value == d == h, query=str(query), rule=tag, predicted=value, d=d, h=h)
    # zero-exponent insertion on two-variable queries where H = D
    for sizes in itertools.product(range(1, max_s + 1), repeat=2):
        for r in range(1, max_r + 1):
            for i in itertools.product(*(range(r * s) for s in sizes)):
                query = BoundQuery(i, r, sizes)
                if trivial_full_grid(query):
                    continue
                d, h = d_bound(query), h_bound(query)[0]
                if d != h:
                    continue
                for pos in range(3):
                    for extra in range(1, max_s + 1):
                        bigger, factor = insert_zero_exponent(query, pos, extra)
                        d2, h2 = d_bound(bigger), h_bound(bigger)[0]
                        hits["P3"] += 1
                        report.record(d2 == h2 == factor * d, query=str(bigger), rule="P3", d=d2, h=h2, base=d)
    report.results["rule_hits"] = hits
    report.wall_time = time.perf_counter() - start
    return report


def _random_vanishing_poly(rng: np.random.Generator, m: int, p: int, point: Sequence[int]) -> SparsePolynomial:
    """Random polynomial, often forced to vanish to some order at ``point``.

    A random factor of small degree is multiplied by a product of shifted
    linear forms through the point so that multiplicities above 0 are common.
    """
    terms = {
        tuple(int(e) for e in rng.integers(0, 3, size=m)): int(rng.integers(0, p))
        for _ in range(int(rng.integers(1, 5)))
    }
    poly = SparsePolynomial(m, p, terms)
    if not poly:
        poly = SparsePolynomial.constant(m, p, 1)
    for _ in range(int(rng.integers(0, 4))):
        coeffs = [int(c) for c in rng.integers(0, p, size=m)]
        if not any(coeffs):
            coeffs[0] = 1
        shift = -sum(c * a for c, a in zip(coeffs, point))
        linear = {(0,) * m: shift}
        for j, c in enumerate(coeffs):
            mono = [0] * m
            mono[j] = 1
            linear[tuple(mono)] = c
        poly = poly * SparsePolynomial(m, p, linear)
    return poly


def hasse_inequality_suite(trials: int, seed: int, primes: Sequence[int] = (5, 7), max_m: int = 3) -> RunReport:
    """mult(F^(k), a) >= mult(F, a) - |k| on random (F, k, a) triples."""
    start = time.perf_counter()
    report = RunReport("verify hasse-inequality", dict(trials=trials, seed=seed, primes=list(primes), max_m=max_m))
    report.seeds.append(seed)
    nontrivial = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        p = int(primes[trial % len(primes)])
        m = int(rng.integers(1, max_m + 1))
        point = tuple(int(a) for a in rng.integers(0, p, size=m))
        poly = _random_vanishing_poly(rng, m, p, point)
        k = tuple(int(e) for e in rng.integers(0, 3, size=m))
        base = multiplicity_at(poly, point)
        deriv = multiplicity_at(hasse_derivative(poly, k), point)
        nontrivial += base > sum(k)
        report.record(deriv >= base - sum(k), seed=seed, trial=trial, p=p, point=point, k=k,
                      poly=repr(poly), mult=base, mult_derivative=deriv)
    report.results["nontrivial_cases"] = nontrivial
    report.wall_time = time.perf_counter() - start
    return report


def multiplicity_cross_suite(trials: int, seed: int, primes: Sequence[int] = (5, 7), max_m: int = 3) -> RunReport:
    """The literal multiplicity search and the grid evaluator agree at every grid point."""
    start = time.perf_counter()
    report = RunReport("verify multiplicity-cross", dict(trials=trials, seed=seed, primes=list(primes), max_m=max_m))
    report.seeds.append(seed)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        p = int(primes[trial % len(primes)])
        m = int(rng.integers(1, max_m + 1))
        point = tuple(int(a) for a in rng.integers(0, p, size=m))
        poly = _random_vanishing_poly(rng, m, p, point)
        grid = GridSpec(tuple((a,) for a in point), p)
        fast = int(multiplicity_grid(poly, grid).reshape(-1)[0])
        slow = multiplicity_at(poly, point)
        report.record(fast == slow, seed=seed, trial=trial, p=p, point=point, poly=repr(poly), grid=fast, literal=slow)
    report.wall_time = time.perf_counter() - start
    return report


def oracle_grid_suite(p: int, r: int, max_exponent: int, per_monomial: int, seed: int) -> RunReport:
    """Two variables over the whole of GF(p): every non-trivial leading monomial
    with exponents <= ``max_exponent`` gets ``per_monomial`` random polynomials."""
    start = time.perf_counter()
    report = RunReport("verify oracle-grid", dict(p=p, r=r, max_exponent=max_exponent,
                                                  per_monomial=per_monomial, seed=seed))
    report.seeds.append(seed)
    sizes = (p, p)
    grid = GridSpec.default(sizes, p)
    monomials = 0
    for lm in itertools.product(range(max_exponent + 1), repeat=2):
        query = BoundQuery(lm, r, sizes)
        if trivial_full_grid(query):
            continue
        monomials += 1
        bound = d_bound(query)
        sz = schwartz_zippel_sum(lm, sizes)
        for trial in range(per_monomial):
            poly = random_poly_with_lm(lm, p, seed=[seed, *lm, trial])
            mults = multiplicity_grid(poly, grid)
            count = int((mults >= r).sum())
            total = int(mults.sum())
            report.record(count <= bound and total <= sz, seed=seed, lm=lm, trial=trial,
                          count=count, d=bound, mult_sum=total, sz_sum=sz)
    report.results["monomials"] = monomials
    report.wall_time = time.perf_counter() - start
    return report
