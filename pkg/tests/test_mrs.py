import numpy as np
import pytest

from dexlab import (MRSTable, WeightSpec, eval_orthopoly, infinite_finite_check,
                    mrs_number, ratio_diagnostic)
from dexlab.errors import DegreeOutOfRange
from dexlab.mrs import _equilibrium_lhs


def test_beta2_closed_form():
    # symbolic oracle: G(a) = (2/pi) 2 a^2 int t^2/sqrt(1-t^2) = a^2, so a_u = sqrt(u)
    w = WeightSpec.power(2.0)
    assert mrs_number(w, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert mrs_number(w, 4.0) == pytest.approx(2.0, abs=1e-10)


def test_beta2_pure_power_scaling():
    w = WeightSpec.power(2.0)
    ratios = [mrs_number(w, u) / np.sqrt(u) for u in (1.0, 2.0, 5.0, 10.0, 100.0)]
    assert max(ratios) - min(ratios) <= 1e-6


@pytest.mark.parametrize("beta", [1.5, 2.0, 3.0])
def test_monotone_and_homogeneous(beta):
    w = WeightSpec.power(beta)
    us = [0.5, 1.0, 3.0, 7.0, 20.0]
    vals = [mrs_number(w, u) for u in us]
    assert all(v1 < v2 for v1, v2 in zip(vals, vals[1:]))
    # G is homogeneous of degree beta, so a_{2^beta u} = 2 a_u
    for u in (1.0, 5.0):
        assert mrs_number(w, 2.0**beta * u) == pytest.approx(
            2.0 * mrs_number(w, u), abs=1e-8)


def test_solver_consistency():
    w = WeightSpec.power(1.7)
    tol = 1e-10
    for u in (0.3, 2.0, 40.0):
        a = mrs_number(w, u, tol)
        assert abs(_equilibrium_lhs(w, a) - u) <= tol * u


def test_u_must_be_positive():
    with pytest.raises(ValueError):
        mrs_number(WeightSpec.power(2.0), 0.0)


def test_table_caches_and_sorts():
    w = WeightSpec.power(2.0)
    table = MRSTable.build(w, [4.0, 1.0])
    assert table.value(4.0) == pytest.approx(2.0, abs=1e-10)
    rows = table.rows()
    assert [u for u, _ in rows] == [1.0, 4.0]
    assert table.value(9.0) == pytest.approx(3.0, abs=1e-10)  # solved on miss


# ---------------------------------------------------------------------------
# infinite-finite experiments


def test_single_basis_argmax_inside(hermite_table):
    # grid-search oracle: |p_5 w| attains its sup inside [-sqrt(5), sqrt(5)]
    w = hermite_table.weight
    a5 = np.sqrt(5.0)
    x = np.linspace(-3 * a5, 3 * a5, 20001)
    vals = np.abs(eval_orthopoly(hermite_table, 5, x)) * w.w(x)
    x_star = x[np.argmax(vals)]
    assert abs(x_star) <= a5
    # and |w| itself (degree 0) peaks at the origin
    assert np.argmax(w.w(x)) == 10000


def test_infinite_finite_report(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    rep = infinite_finite_check(hermite_table, mrs, n=20, s=1.5, trials=10, seed=4)
    assert rep.a_n == pytest.approx(np.sqrt(20.0), abs=1e-9)
    assert rep.fraction_argmax_inside == 1.0
    assert rep.max_outer_inner_ratio <= 0.5
    assert len(rep.argmaxima) == 10


def test_infinite_finite_deterministic(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    r1 = infinite_finite_check(hermite_table, mrs, n=8, s=1.5, trials=5, seed=9)
    r2 = infinite_finite_check(hermite_table, mrs, n=8, s=1.5, trials=5, seed=9)
    assert r1.argmaxima == r2.argmaxima
    assert r1.max_outer_inner_ratio == r2.max_outer_inner_ratio


def test_infinite_finite_validation(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    with pytest.raises(DegreeOutOfRange):
        infinite_finite_check(hermite_table, mrs, n=41, s=1.5, trials=2, seed=0)
    with pytest.raises(ValueError):
        infinite_finite_check(hermite_table, mrs, n=5, s=1.0, trials=2, seed=0)


# ---------------------------------------------------------------------------
# ratio diagnostics


def test_ratio_closed_forms(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    rows = ratio_diagnostic(hermite_table, mrs, [10, 40])
    # closed forms: alpha_n = sqrt(n+1)/2, a_n = sqrt(n)
    assert rows[0].ratio == pytest.approx(np.sqrt(11.0) / 2.0 / np.sqrt(10.0), abs=1e-8)
    assert rows[1].ratio == pytest.approx(np.sqrt(41.0) / 2.0 / np.sqrt(40.0), abs=1e-8)
    assert rows[0].ratio == pytest.approx(0.5244, abs=5e-5)
    assert rows[1].ratio == pytest.approx(0.5062, abs=5e-5)


def test_ratio_deviation_decreasing(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    rows = ratio_diagnostic(hermite_table, mrs, [10, 20, 40])
    devs = [r.deviation for r in rows]
    assert devs[0] > devs[1] > devs[2]


def test_ratio_degree_guard(hermite_table):
    mrs = MRSTable(hermite_table.weight)
    with pytest.raises(DegreeOutOfRange):
        ratio_diagnostic(hermite_table, mrs, [41])
