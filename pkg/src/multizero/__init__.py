"""Bounds on the number of grid points where a polynomial vanishes to order r."""

from __future__ import annotations

from multizero.bounds import BoundQuery, d_bound, schwartz_zippel_sum, sz_gen_bound, trivial_full_grid
from multizero.closed_forms import Case, condition_a_holds, small_exponent_bound, two_var_upper
from multizero.linear_products import h_bound, equality_prediction, tilde_h
from multizero.pw import PWQuery, gamma1, gamma2

__all__ = [
    "BoundQuery",
    "Case",
    "PWQuery",
    "condition_a_holds",
    "d_bound",
    "gamma1",
    "gamma2",
    "h_bound",
    "schwartz_zippel_sum",
    "equality_prediction",
    "small_exponent_bound",
    "sz_gen_bound",
    "tilde_h",
    "trivial_full_grid",
    "two_var_upper",
]
