from fractions import Fraction

import pytest

from lemmas.report import FAIL, INCONCLUSIVE, PASS, Claim, LemmaError, LemmaReport, judge


@pytest.mark.parametrize("relation,lhs,rhs,tol,expected", [
    ("==", 1.0, 1.0 + 1e-10, 1e-9, PASS),
    ("==", 1.0, 1.1, 1e-9, FAIL),
    ("<=", Fraction(1, 3), Fraction(1, 3), 0, PASS),
    (">=", 0.5, 0.5 + 1e-7, 1e-6, PASS),
    ("<", 1, 1, 0, FAIL),
    (">", 2, 1, 0, PASS),
    ("is", True, True, 0, PASS),
    ("margin>", 0.01, 0.001, 0, PASS),
    ("margin>", 0.001, 0.01, 0, INCONCLUSIVE),
    ("margin>", -0.001, 0.01, 0, FAIL),
])
def test_judge(relation, lhs, rhs, tol, expected):
    assert judge(relation, lhs, rhs, tol) == expected


def test_unknown_relation():
    with pytest.raises(LemmaError):
        Claim("x", "~", 1, 1)


def test_status_and_exit_code_precedence():
    report = LemmaReport("demo")
    report.add("ok", "<=", 1, 2)
    assert report.exit_code() == 0
    report.add("unclear", "margin>", 0.001, 0.01)
    assert report.status == INCONCLUSIVE and report.exit_code() == 2
    report.add("broken", "<", 3, 2)
    assert report.status == FAIL and report.exit_code() == 1
    assert [c.name for c in report.failures()] == ["unclear", "broken"]


def test_recheck_detects_tampering():
    report = LemmaReport("demo")
    report.add("exact", "==", Fraction(4, 13), Fraction(4, 13))
    report.add("float", "<=", 0.3, 0.31, 1e-6)
    assert report.recheck()
    report.claims[1].status = FAIL
    assert not report.recheck()


def test_extend_prefixes_names():
    inner = LemmaReport("inner")
    inner.add("a", ">", 1, 0)
    inner.values["v"] = 1
    outer = LemmaReport("outer")
    outer.extend(inner, "inner.")
    assert outer.claims[0].name == "inner.a"
    assert outer.values == {"inner.v": 1}


def test_serialisation():
    report = LemmaReport("demo", {"gamma": Fraction(5, 8)})
    report.add("bound", "==", Fraction(5, 16), Fraction(5, 16), reference="5/16")
    d = report.to_dict()
    assert d["inputs"] == {"gamma": "5/8"}
    assert d["claims"][0]["lhs"] == "5/16"
    assert d["claims"][0]["pass"] is True
    table = report.summary_table()
    assert table.splitlines()[0].startswith("claim")
    assert table.splitlines()[-1] == "demo: pass"
