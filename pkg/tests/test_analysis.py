import math

import numpy as np
import pytest

from indtrans.analysis import (
    IntegralParams,
    check_c_condition,
    integral_closed_form,
    integral_numeric,
    min_feasible_c,
    slack_function,
    verify_f_nonpositive,
)


def test_closed_form_at_zero():
    assert integral_closed_form(0.9, 0.0) == 0.0


def test_closed_form_vs_quadrature_point():
    assert abs(integral_closed_form(0.778, 0.5624) - integral_numeric(0.778, 0.5624, 10**6)) < 1e-9


@pytest.mark.parametrize("mu", [0.1, 0.3, 0.5, 1 / 1.778])
def test_closed_form_below_c_mu(mu):
    assert integral_closed_form(0.778, mu) <= 0.778 * mu


def test_domain_violation():
    with pytest.raises(ValueError):
        integral_closed_form(0.8, 1.0)
    with pytest.raises(ValueError):
        integral_numeric(0.8, 1.2, 100)
    with pytest.raises(ValueError):
        integral_numeric(0.8, 0.2, 1)
    with pytest.raises(ValueError):
        IntegralParams(c=1.5, mu=0.2)


def test_numeric_at_zero():
    assert integral_numeric(0.8, 0.0, 10) == 0.0


def test_numeric_independent_of_scipy():
    scipy_integrate = pytest.importorskip("scipy.integrate")
    c, mu = 0.85, 0.4
    ref, _ = scipy_integrate.quad(
        lambda x: 1 - (1 - c * mu - x) * (1 - c * x / (1 - x)), 0, mu, epsabs=1e-13)
    assert abs(integral_numeric(c, mu, 2000) - ref) < 1e-10


def test_numeric_monotone_in_mu():
    c = 0.9
    grid = np.linspace(0, 1 / (1 + c), 25)
    vals = [integral_numeric(c, mu, 2000) for mu in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_c_condition():
    assert check_c_condition(0.778)
    assert check_c_condition(1.0)
    assert abs(2 * math.log(2) - 1.386) < 1e-3
    assert not check_c_condition(0.5)
    assert abs(0.5 * math.log(3) - 0.549) < 1e-3


def test_c_condition_monotone():
    grid = np.linspace(0.5001, 1.0, 500)
    vals = [2 * c * c * math.log((1 + c) / c) for c in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_min_feasible_c():
    lo, hi = min_feasible_c(1e-6)
    assert hi - lo <= 1e-6
    assert not check_c_condition(lo) and check_c_condition(hi)
    c_star = 0.5 * (lo + hi)
    assert check_c_condition(c_star + 1e-6) and not check_c_condition(c_star - 1e-6)
    assert c_star < 0.778
    assert abs(c_star - 0.7777) < 1e-3
    assert 0.562 < 1 / (1 + c_star) < 0.563


def test_verify_f_report():
    rep = verify_f_nonpositive(0.778, 1e-4)
    assert rep.max_value <= 1e-12
    assert rep.value_at_zero == -0.778
    assert rep.strictly_increasing and rep.derivative_positive
    assert rep.increasing_threshold > rep.mu_max
    assert rep.margin > 0
    assert rep.passed


def test_verify_f_precondition():
    with pytest.raises(ValueError):
        verify_f_nonpositive(0.5, 1e-3)


def test_slack_matches_integral_over_mu():
    c = 0.9
    for mu in (0.05, 0.2, 0.45):
        assert abs(slack_function(mu, c) - (integral_closed_form(c, mu) / mu - c)) < 1e-12
