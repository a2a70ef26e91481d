from fractions import Fraction

import pytest

from lemmas.conditions import SAMPLE_GAMMAS, bound_d2_general_form, bound_d3, bound_d4, verify_condition_of_d
from lemmas.report import PASS
from lemmas.wheel import bound_d2, bound_general


def test_specialised_polynomials():
    for gamma in SAMPLE_GAMMAS + [Fraction(7, 9)]:
        assert bound_general(2, gamma) == bound_d2_general_form(gamma)
        assert bound_general(3, gamma) == bound_d3(gamma)
        assert bound_general(4, gamma) == bound_d4(gamma)


def test_d2_general_form_differs_from_the_sharp_bound_off_the_ceiling():
    assert bound_d2_general_form(Fraction(5, 8)) == bound_d2(Fraction(5, 8)) == Fraction(5, 16)
    assert bound_d2_general_form(Fraction(1, 2)) - bound_d2(Fraction(1, 2)) == Fraction(1, 3)


def test_constants_at_eight_thirteenths():
    assert bound_d3(Fraction(8, 13)) == Fraction(4, 13)
    assert bound_d2(Fraction(8, 13)) == Fraction(53, 169)


def test_table_at_eight_thirteenths():
    events = []
    report = verify_condition_of_d("8/13", restarts=5, on_event=events.append)
    assert report.status == PASS
    assert report.values["d=4 bound"] == bound_d4(Fraction(8, 13))
    assert "d=4 oracle" not in report.values
    assert report.values["d=3 oracle"] == pytest.approx(4 / 13, abs=1e-9)
    assert len(events) == len(report.claims)
    assert report.recheck()


def test_table_above_every_ceiling():
    report = verify_condition_of_d("0.7", restarts=2)
    assert report.status == PASS
    assert not any(k.endswith("oracle") for k in report.values)
