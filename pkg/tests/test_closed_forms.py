from __future__ import annotations

from fractions import Fraction
from math import floor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multizero.bounds import BoundQuery, d_bound, trivial_full_grid
from multizero.closed_forms import (
    Case,
    ConditionAViolated,
    classify_two_var,
    condition_a_holds,
    footprint_bound,
    implied_exponent_caps,
    small_exponent_bound,
    two_var_upper,
)


class TestTwoVar:
    def test_examples(self):
        assert two_var_upper(12, 2, 3, 5, 5)[:2] == (22, Case.C4)
        assert d_bound(BoundQuery((12, 2), 3, (5, 5))) == 22
        assert two_var_upper(3, 3, 3, 5, 5) == (9, Case.C3, 2)
        assert two_var_upper(4, 10, 3, 5, 5) == (20, Case.C2, 2)
        assert two_var_upper(0, 0, 3, 5, 5) == (0, Case.C3, 2)

    def test_values_are_exact(self):
        value, _, _ = two_var_upper(4, 10, 3, 5, 5)
        assert isinstance(value, Fraction)

    def test_trivial_region(self):
        assert classify_two_var(10, 0, 2, 5, 5)[0] is Case.TRIVIAL_FULL_GRID
        assert two_var_upper(10, 0, 2, 5, 5) == (25, Case.TRIVIAL_FULL_GRID, None)

    def test_every_nontrivial_input_has_a_case(self):
        for r in range(2, 5):
            for i1 in range(r * 4):
                for i2 in range(r * 3):
                    case, _ = classify_two_var(i1, i2, r, 4, 3)
                    assert (case is Case.TRIVIAL_FULL_GRID) == trivial_full_grid(BoundQuery((i1, i2), r, (4, 3)))

    @settings(max_examples=400, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 8), st.integers(2, 8), st.data())
    def test_dominates_d(self, r, s1, s2, data):
        i1 = data.draw(st.integers(0, r * s1 - 1))
        i2 = data.draw(st.integers(0, r * s2 - 1))
        q = BoundQuery((i1, i2), r, (s1, s2))
        if trivial_full_grid(q):
            return
        value, case, k = two_var_upper(i1, i2, r, s1, s2)
        d = d_bound(q)
        assert floor(value) >= d
        if case is Case.C4:
            assert value == d and k is None
        else:
            assert 1 <= k <= r - 1


class TestConditionA:
    def test_examples(self):
        assert condition_a_holds(BoundQuery((3, 5), 3, (5, 5)))
        assert not condition_a_holds(BoundQuery((4, 5), 3, (5, 5)))
        assert condition_a_holds(BoundQuery((2, 4), 2, (5, 5)))

    def test_single_variable_rejected(self):
        with pytest.raises(ValueError):
            condition_a_holds(BoundQuery((1,), 2, (5,)))

    @given(st.lists(st.integers(1, 6), min_size=2, max_size=4), st.data())
    def test_r1_reduces_to_box(self, sizes, data):
        i = [data.draw(st.integers(0, s)) for s in sizes]
        assert condition_a_holds(BoundQuery(i, 1, sizes))

    def test_implied_caps(self):
        assert implied_exponent_caps(BoundQuery((3, 5), 3, (5, 5)))
        assert not implied_exponent_caps(BoundQuery((4, 0), 3, (5, 5)))
        assert implied_exponent_caps(BoundQuery((2, 2, 0), 2, (4, 4, 4)))

    @settings(max_examples=300, deadline=None)
    @given(st.integers(2, 3), st.integers(1, 4), st.data())
    def test_condition_implies_caps_and_bound(self, m, r, data):
        sizes = data.draw(st.lists(st.integers(1, 6), min_size=m, max_size=m))
        i = [data.draw(st.integers(0, s)) for s in sizes]
        q = BoundQuery(i, r, sizes)
        if not condition_a_holds(q):
            with pytest.raises(ConditionAViolated):
                small_exponent_bound(q)
            return
        if r >= 2:
            assert implied_exponent_caps(q)
        assert floor(small_exponent_bound(q)) >= d_bound(q)


class TestSmallExponent:
    def test_examples(self):
        assert small_exponent_bound(BoundQuery((3, 3), 3, (5, 5))) == 9
        assert small_exponent_bound(BoundQuery((1, 1), 1, (5, 5))) == 9
        q = BoundQuery((2, 4), 2, (5, 5))
        assert small_exponent_bound(q) == 13
        assert d_bound(q) <= 13


class TestFootprint:
    def test_examples(self):
        assert footprint_bound((1, 1), (5, 5)) == 9
        assert footprint_bound((0, 0, 0), (3, 4, 5)) == 0
        assert footprint_bound((5, 5), (5, 5)) == 25

    @given(st.lists(st.integers(1, 6), min_size=1, max_size=3), st.data())
    def test_equals_d_at_r1(self, sizes, data):
        i = [data.draw(st.integers(0, s)) for s in sizes]
        assert footprint_bound(i, sizes) == d_bound(BoundQuery(i, 1, sizes))
