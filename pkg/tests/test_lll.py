from fractions import Fraction

import pytest

from lemmas.lll import (DEFAULT_DELTA, LllParams, d2g1_dt2, dgamma_dt, g1, gamma_of, quad_coeff, r1_of,
                        r1_unit_root, residual_exact, s_of, t_prime, t_prime_closed_form, t_star,
                        verify_lll)
from lemmas.report import INCONCLUSIVE, PASS, LemmaError


def test_default_run_passes():
    report = verify_lll()
    assert report.status == PASS, [c.to_dict() for c in report.failures()]
    assert report.values["t_prime"] == pytest.approx(0.3146, abs=2e-4)
    assert report.values["r1_root"] == pytest.approx(0.31379, abs=5e-5)


def test_coarse_grid_is_inconclusive_not_failing():
    report = verify_lll(grid_step=0.05)
    assert report.status == INCONCLUSIVE
    assert report.exit_code() == 2
    assert all(c.relation == "margin>" for c in report.failures())


def test_gamma_at_the_left_end():
    delta = DEFAULT_DELTA
    assert gamma_of(delta / 3, delta, 0.0) == pytest.approx((8 * delta - 2) / 9, abs=1e-12)
    assert gamma_of(delta / 3, delta, 1e-6) == pytest.approx(0.61465, abs=1.5e-4)


def test_slope_matches_difference_quotient():
    delta, t, h = DEFAULT_DELTA, 0.5, 1e-6
    fd = (gamma_of(t + h, delta, 0.0) - gamma_of(t - h, delta, 0.0)) / (2 * h)
    assert fd == pytest.approx(dgamma_dt(t, delta), rel=1e-6)


def test_closed_forms():
    assert g1(Fraction(8, 13)) == Fraction(4, 13)
    assert quad_coeff(2 / 3) == pytest.approx(0.0, abs=1e-12)
    assert quad_coeff(5 / 8) == pytest.approx(0.0, abs=1e-12)
    assert t_prime(DEFAULT_DELTA, 1e-6) == pytest.approx(t_prime_closed_form(DEFAULT_DELTA, 1e-6), abs=1e-10)
    assert gamma_of(t_prime(DEFAULT_DELTA, 1e-6), DEFAULT_DELTA, 1e-6) == pytest.approx(8 / 13, abs=1e-10)


def test_r1_root_lies_left_of_the_range():
    root = r1_unit_root(DEFAULT_DELTA)
    assert root < DEFAULT_DELTA / 3 < t_star(DEFAULT_DELTA)
    assert r1_of(s_of(root, DEFAULT_DELTA), DEFAULT_DELTA) == pytest.approx(1.0, abs=1e-9)


def test_second_derivative_positive_on_the_range():
    for t in (DEFAULT_DELTA / 3, 0.314, t_prime(DEFAULT_DELTA, 1e-6)):
        assert d2g1_dt2(t, DEFAULT_DELTA, 1e-6) > 0


def test_params_validation():
    p = LllParams(DEFAULT_DELTA, DEFAULT_DELTA / 3)
    assert p.s == pytest.approx(3 - 3 * DEFAULT_DELTA)
    assert p.to_dict()["gamma"] == pytest.approx(p.gamma)
    with pytest.raises(LemmaError):
        LllParams(DEFAULT_DELTA, 0.0)
    with pytest.raises(LemmaError):
        LllParams(DEFAULT_DELTA, 0.5, epsilon=-1.0)


@pytest.mark.parametrize("kwargs", [{"delta": 1.2}, {"delta": 0.0}, {"grid_step": 0.0}])
def test_verify_arguments(kwargs):
    with pytest.raises(LemmaError):
        verify_lll(**kwargs)


@pytest.mark.parametrize("t", [DEFAULT_DELTA / 3, 0.3146, 0.5, 1.0])
def test_residual_is_exactly_six_s_epsilon(t):
    s = s_of(Fraction(t), Fraction(DEFAULT_DELTA))
    assert residual_exact(t, DEFAULT_DELTA, 1e-6) == 6 * s * Fraction(1e-6)
    assert residual_exact(t, DEFAULT_DELTA, 0.0) == 0


def test_residual_identity_claim_at_default_delta():
    report = verify_lll(delta=0.9415)
    claim = next(c for c in report.claims if c.name == "(ii) residual = 6 s eps")
    assert claim.status == PASS
    assert claim.lhs == 0.0
    assert report.exit_code() == 0
