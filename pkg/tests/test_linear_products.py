from __future__ import annotations

import itertools
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multizero.bounds import BoundQuery, d_bound, schwartz_zippel_sum, trivial_full_grid
from multizero.field import GridSpec, count_zeros_with_min_mult, leading_monomial, multiplicity_grid
from multizero.linear_products import (
    LinearProductSpec,
    NoLinearProductError,
    assignments_product,
    build_extremal_polynomial,
    enumerate_assignments,
    expand,
    full_grid_witness,
    h_bound,
    insert_zero_exponent,
    linear_product_multiplicity,
    predict_small_first_exponent,
    relative_gap,
    equality_prediction,
    tilde_h,
)


def brute_h(query: BoundQuery) -> int:
    """Maximum zero count over explicit point sets, no recursion involved."""
    best = 0
    for assignment in assignments_product(query):
        spec = LinearProductSpec.from_assignment(assignment, [range(s) for s in query.sizes])
        count = sum(
            linear_product_multiplicity(spec, a) >= query.r
            for a in itertools.product(*(range(s) for s in query.sizes))
        )
        best = max(best, count)
    return best


@st.composite
def small_queries(draw, max_m=2, max_s=4, max_r=3):
    m = draw(st.integers(1, max_m))
    r = draw(st.integers(1, max_r))
    sizes = tuple(draw(st.lists(st.integers(1, max_s), min_size=m, max_size=m)))
    exps = tuple(draw(st.integers(0, r * s - 1)) for s in sizes)
    return BoundQuery(exps, r, sizes)


class TestAssignments:
    def test_examples(self):
        assert sorted(enumerate_assignments(3, 3, 5)) == sorted([(3, 0, 0), (1, 1, 0), (0, 0, 1)])
        assert enumerate_assignments(0, 2, 4) == [(0, 0)]
        assert enumerate_assignments(6, 2, 2) == []

    def test_lex_order(self):
        out = enumerate_assignments(6, 3, 6)
        assert out == sorted(out)

    @given(st.integers(0, 12), st.integers(1, 4), st.integers(1, 6))
    def test_matches_filtered_product(self, i, r, s):
        brute = [
            v for v in itertools.product(range(s + 1), repeat=r)
            if sum(v) <= s and sum((j + 1) * x for j, x in enumerate(v)) == i
        ]
        assert enumerate_assignments(i, r, s) == brute


class TestTildeH:
    def test_examples(self):
        assert tilde_h([(1, 0, 2)], 2, (5,)) == 2
        assert tilde_h([(1, 0, 2)], 1, (5,)) == 3
        assert tilde_h([(0, 0, 1), (0, 0, 1)], 3, (5, 5)) == 9

    def test_bad_k(self):
        with pytest.raises(ValueError):
            tilde_h([(1, 0)], 3, (5,))

    @settings(max_examples=100, deadline=None)
    @given(small_queries(), st.data())
    def test_counts_points(self, q, data):
        assignment = data.draw(st.sampled_from(list(assignments_product(q)) or [None]))
        if assignment is None:
            return
        spec = LinearProductSpec.from_assignment(assignment, [range(s) for s in q.sizes])
        points = list(itertools.product(*(range(s) for s in q.sizes)))
        for k in range(1, q.r + 1):
            expected = sum(linear_product_multiplicity(spec, a) >= k for a in points)
            assert tilde_h(assignment, k, q.sizes) == expected


class TestHBound:
    @pytest.mark.parametrize("i, expected", [((4, 1), 5), ((3, 3), 9), ((3, 0), 5)])
    def test_examples(self, i, expected):
        assert h_bound(BoundQuery(i, 3, (5, 5)))[0] == expected

    def test_no_assignment(self):
        with pytest.raises(NoLinearProductError):
            h_bound(BoundQuery((6, 1), 2, (2, 3)))

    @settings(max_examples=150, deadline=None)
    @given(small_queries())
    def test_matches_brute_force(self, q):
        try:
            value, witness = h_bound(q)
        except NoLinearProductError:
            assert not list(assignments_product(q))
            return
        assert value == brute_h(q)
        assert tilde_h(witness, q.r, q.sizes) == value
        first = next(a for a in assignments_product(q) if tilde_h(a, q.r, q.sizes) == value)
        assert witness == first

    @settings(max_examples=150, deadline=None)
    @given(small_queries(max_m=3))
    def test_below_d(self, q):
        try:
            assert h_bound(q)[0] <= d_bound(q)
        except NoLinearProductError:
            pass


class TestMultiplicityFormula:
    def test_examples(self):
        spec = LinearProductSpec((((1, 2),), ((2, 1),)))
        assert linear_product_multiplicity(spec, (1, 2)) == 3
        assert linear_product_multiplicity(spec, (0, 0)) == 0
        assert linear_product_multiplicity(spec, (1, 0)) == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            LinearProductSpec((((1, 2), (1, 1)),))
        with pytest.raises(ValueError):
            LinearProductSpec((((1, 0),),))
        with pytest.raises(ValueError):
            LinearProductSpec.from_assignment([(3,)], [[0, 1]])

    @settings(max_examples=60, deadline=None)
    @given(small_queries(max_s=5), st.data())
    def test_matches_field_oracle_and_sz_sum(self, q, data):
        choices = list(assignments_product(q))
        if not choices:
            return
        assignment = data.draw(st.sampled_from(choices))
        grid = GridSpec.default(q.sizes, 5)
        spec = LinearProductSpec.from_assignment(assignment, grid.sets)
        assert spec.degrees() == q.exponents
        poly = expand(spec, 5)
        mults = multiplicity_grid(poly, grid)
        for a in grid.points():
            assert mults[a] == linear_product_multiplicity(spec, a)
        assert int(mults.sum()) == schwartz_zippel_sum(q.exponents, q.sizes)


class TestExtremalPolynomial:
    def test_examples(self):
        q = BoundQuery((3, 3), 3, (5, 5))
        _, witness = h_bound(q)
        grid = GridSpec.default((5, 5), 5)
        poly = build_extremal_polynomial(witness, grid.sets, 5)
        assert leading_monomial(poly) == (3, 3)
        assert count_zeros_with_min_mult(poly, grid, 3) == 9

    def test_trivial_witness(self):
        grid = GridSpec.default((5, 5), 5)
        poly = build_extremal_polynomial([(0, 0, 0), (0, 0, 0)], grid.sets, 5, pad_monomial=(0, 0))
        assert poly.terms == {(0, 0): 1}
        assert count_zeros_with_min_mult(poly, grid, 3) == 0

    @pytest.mark.parametrize("i, r, sizes", [((10, 3), 2, (5, 5)), ((7, 9), 3, (3, 4)), ((5, 5, 5), 3, (2, 2, 2))])
    def test_full_grid(self, i, r, sizes):
        q = BoundQuery(i, r, sizes)
        assert trivial_full_grid(q)
        witness, pad = full_grid_witness(q)
        grid = GridSpec.default(sizes, 5)
        poly = build_extremal_polynomial(witness, grid.sets, 5, pad_monomial=pad)
        assert leading_monomial(poly) == i
        assert count_zeros_with_min_mult(poly, grid, r) == prod(sizes)

    def test_full_grid_rejects_nontrivial(self):
        with pytest.raises(ValueError):
            full_grid_witness(BoundQuery((2, 2), 3, (5, 5)))


class TestEqualityPrediction:
    def test_examples(self):
        assert equality_prediction(BoundQuery((4, 11), 3, (5, 5))) == (21, "P1")
        assert equality_prediction(BoundQuery((3, 3), 3, (5, 5))) == (9, "P4")
        assert equality_prediction(BoundQuery((2, 2), 3, (5, 5))) is None

    @settings(max_examples=200, deadline=None)
    @given(small_queries(max_m=3, max_s=5, max_r=4))
    def test_predictions_equal_d_and_h(self, q):
        pred = equality_prediction(q)
        if pred is not None:
            assert pred[0] == d_bound(q) == h_bound(q)[0]

    def test_zero_exponent_insertion(self):
        q = BoundQuery((4, 11), 3, (5, 5))
        for pos in range(3):
            bigger, factor = insert_zero_exponent(q, pos, 4)
            assert factor == 4
            assert d_bound(bigger) == h_bound(bigger)[0] == 4 * 21
        with pytest.raises(ValueError):
            insert_zero_exponent(q, 3, 2)

    def test_small_first_exponent_is_not_a_prediction(self):
        q = BoundQuery((1, 4), 3, (5, 5))
        assert predict_small_first_exponent(q) is not None
        assert equality_prediction(q) is None


def test_relative_gap():
    assert relative_gap(6, 5) == pytest.approx(2 / 11)
    assert relative_gap(5, 5) == 0
