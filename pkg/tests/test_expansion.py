import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dexlab import (condition_check, convergence_experiment, delta_u, eval_orthopoly,
                    expansion_coefficients, partial_sum_eval, u_gamma, weighted_norm)
from dexlab.errors import DegreeOutOfRange, InvalidExponent, NonFinite
from dexlab.orthopoly import _discretized_measure

INF = float("inf")


def test_basis_function_expands_to_unit_vector(hermite_table):
    f = lambda x: eval_orthopoly(hermite_table, 2, x)
    c = expansion_coefficients(hermite_table, f, 6)
    expect = np.zeros(6)
    expect[2] = 1.0
    assert np.max(np.abs(c.coeffs - expect)) <= 1e-10


def test_linear_function_coefficient(hermite_table):
    # x = p_1 / gamma_1 with gamma_1 = 2 (pi/2)^(-1/4), so c_1 = (pi/2)^(1/4)/2
    c = expansion_coefficients(hermite_table, lambda x: x, 8)
    assert c.coeffs[1] == pytest.approx((np.pi / 2.0) ** 0.25 / 2.0, abs=1e-12)
    even = c.coeffs[[0, 2, 4, 6]]
    assert np.max(np.abs(even)) <= 1e-12


def test_odd_function_kills_even_coefficients(hermite_table):
    c = expansion_coefficients(hermite_table, lambda x: np.sin(x) + x**3, 12)
    assert np.max(np.abs(c.coeffs[::2])) <= 1e-12


def test_partial_sum_reproduces_low_degree_polynomial(hermite_table):
    f = lambda x: 2.0 * x**3 - x + 0.5
    c = expansion_coefficients(hermite_table, f, 10)
    xs = np.linspace(-3, 3, 11)
    for n in (4, 6, 10):
        assert np.max(np.abs(partial_sum_eval(c, n, xs) - f(xs))) <= 1e-9


def test_empty_partial_sum(hermite_table):
    c = expansion_coefficients(hermite_table, np.sin, 5)
    assert partial_sum_eval(c, 0, 1.7) == 0.0


def test_projection_idempotent(hermite_table):
    c = expansion_coefficients(hermite_table, lambda x: 1.0 / (1.0 + x**2), 12)
    truncated = lambda x: partial_sum_eval(c, 8, x)
    c2 = expansion_coefficients(hermite_table, truncated, 12)
    expect = np.concatenate([c.coeffs[:8], np.zeros(4)])
    assert np.max(np.abs(c2.coeffs - expect)) <= 1e-10


def test_bessel_bound(hermite_table, rng):
    f = lambda x: np.exp(-0.5 * x**2) * np.cos(2.0 * x) + 0.3 * np.sin(x)
    c = expansion_coefficients(hermite_table, f, 30)
    sums = c.parseval_partial_sums()
    assert np.all(np.diff(sums) >= 0.0)
    x, w = _discretized_measure(hermite_table.weight, hermite_table.radius, 2048)
    f_sq = float(np.sum(w * f(x) ** 2))
    assert sums[-1] <= f_sq + 1e-8


def test_linearity(hermite_table):
    f = lambda x: np.sin(x)
    g = lambda x: 1.0 / (1.0 + x**2)
    cf = expansion_coefficients(hermite_table, f, 10).coeffs
    cg = expansion_coefficients(hermite_table, g, 10).coeffs
    combo = expansion_coefficients(hermite_table, lambda x: 2.0 * f(x) - 3.0 * g(x), 10).coeffs
    assert np.max(np.abs(combo - (2.0 * cf - 3.0 * cg))) <= 1e-10


def test_degree_guard(hermite_table):
    c = expansion_coefficients(hermite_table, np.sin, 5)
    with pytest.raises(DegreeOutOfRange):
        partial_sum_eval(c, 6, 0.0)
    with pytest.raises(DegreeOutOfRange):
        expansion_coefficients(hermite_table, np.sin, 42)


# ---------------------------------------------------------------------------
# weighted norms and delta


def test_sup_norm_of_one(hermite_weight):
    val = weighted_norm(lambda x: np.ones_like(x), hermite_weight, 0.0, INF)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_l2_norm_of_one(hermite_weight):
    val = weighted_norm(lambda x: np.ones_like(x), hermite_weight, 0.0, 2.0)
    assert val == pytest.approx((np.pi / 2.0) ** 0.25, abs=1e-10)


def test_u_gamma_at_zero():
    for gamma in (-2.0, 0.0, 0.5, 7.0):
        assert u_gamma(gamma, 0.0) == 1.0


def test_norm_rejects_exploding_function(hermite_weight):
    with pytest.raises(NonFinite):
        weighted_norm(lambda x: np.exp(2.0 * x**2), hermite_weight, 0.0, INF)


def test_norm_p_validation(hermite_weight):
    with pytest.raises(InvalidExponent):
        weighted_norm(np.sin, hermite_weight, 0.0, 1.0)


def test_delta_u_values():
    assert delta_u(lambda x: np.full_like(x, 3.3), 0.7, 1.0) == 0.0
    assert delta_u(lambda x: x, 0.7, 5.0) == pytest.approx(0.7)
    assert delta_u(lambda x: x**2, 1.0, 2.0) == pytest.approx(5.0)


@settings(deadline=None, max_examples=25)
@given(st.floats(-30, 30))
def test_delta_u_zero_shift(x):
    assert delta_u(np.sin, 0.0, x) == 0.0


# ---------------------------------------------------------------------------
# condition evaluator


def test_sup_norm_requires_positive_weight_exponent():
    report = condition_check(INF, -1.0, 0.0, 2.0)
    assert not report.verdicts["weight_exponent_positive"]
    assert not report.overall


def test_critical_p_requires_strict_order():
    report = condition_check(4.0, 0.0, 0.0, 2.0)
    assert report.case == "critical_p"
    assert not report.verdicts["critical_p_strict_order"]
    assert not report.overall
    assert condition_check(4.0 / 3.0, 0.0, 0.0, 3.0).case == "critical_p"


def test_high_p_exponent_arithmetic():
    report = condition_check(6.0, 0.0, 1.0, 2.0)
    assert report.case == "high_p"
    assert report.c_tag == "log n"
    assert report.exponents["high_p_growth_bounded"] == pytest.approx(-13.0 / 36.0, abs=1e-12)
    assert report.overall


def test_low_p_exponent_arithmetic():
    # exponent oracle by hand: E = max(b, -1/p) - B, F = (4/p - 3)/6
    report = condition_check(1.2, -1.0, -0.3, 2.0)
    assert report.case == "low_p"
    expect = (max(-1.0, -1.0 / 1.2) + 0.3) / 2.0 + (4.0 / 1.2 - 3.0) / 6.0
    assert report.exponents["low_p_growth_bounded"] == pytest.approx(expect, abs=1e-12)


def test_mid_p_has_only_window():
    report = condition_check(2.0, 0.0, 0.5, 2.0)
    assert report.case == "mid_p"
    assert report.verdicts == {"norm_exponent_window": True}
    assert report.overall


def test_log_factor_blocks_zero_exponent():
    # net exponent exactly 0 is O(1) with C = 1 but not with the log factor
    flat = condition_check(INF, 2.0 / 3.0, 2.0, 2.0)  # E = -1/3: exponent 0, C = 1
    assert flat.exponents["sup_growth_bounded"] == pytest.approx(0.0, abs=1e-12)
    assert flat.c_tag == "1"
    assert flat.verdicts["sup_growth_bounded"]
    logged = condition_check(INF, 2.0 / 3.0, 1.0, 2.0)  # B = 1: C = log n
    assert logged.exponents["sup_growth_bounded"] == pytest.approx(0.0, abs=1e-12)
    assert logged.c_tag == "log n"
    assert not logged.verdicts["sup_growth_bounded"]


def test_condition_check_pure():
    a = condition_check(6.0, 0.0, 1.0, 2.0)
    b = condition_check(6.0, 0.0, 1.0, 2.0)
    assert a.to_dict() == b.to_dict()


def test_invalid_exponent():
    with pytest.raises(InvalidExponent):
        condition_check(1.0, 0.0, 0.0, 2.0)


# ---------------------------------------------------------------------------
# convergence experiments


def test_projection_error_vanishes_for_basis_function(hermite_table):
    f = lambda x: eval_orthopoly(hermite_table, 3, x)
    result = convergence_experiment(hermite_table, f, INF, 0.0, 0.0, [2, 4, 6])
    errors = {n: e for n, _, e in result.rows}
    assert errors[2] > 1e-3  # truncating below the degree really loses mass
    assert errors[4] <= 1e-9
    assert errors[6] <= 1e-9


def test_runge_errors_decrease(hermite_table):
    f = lambda x: 1.0 / (1.0 + x**2)
    result = convergence_experiment(hermite_table, f, 2.0, 0.0, 1.0, [4, 8, 16, 32])
    errors = [e for _, _, e in result.rows]
    assert all(e1 > e2 for e1, e2 in zip(errors, errors[1:]))
    assert result.slope < 0.0


def test_ratios_stable_under_quadrature_refinement(hermite_table):
    # integration-stability oracle: tightening the coefficient quadrature
    # tolerance leaves every reported ratio unchanged to 1e-6
    f = lambda x: np.exp(-np.abs(x))
    base = convergence_experiment(hermite_table, f, 2.0, 0.0, 1.0, [4, 8])
    from dexlab import expansion as expansion_mod

    tight = expansion_coefficients(hermite_table, f, 8, rtol=1e-12)
    norm_f = weighted_norm(f, hermite_table.weight, 1.0, 2.0)
    for n, r_n, _ in base.rows:
        s = lambda x, n=n: partial_sum_eval(tight, n, x)
        r_tight = weighted_norm(s, hermite_table.weight, 0.0, 2.0) / norm_f
        assert abs(r_n - r_tight) <= 1e-6
