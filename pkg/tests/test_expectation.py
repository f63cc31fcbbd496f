import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import s_brute
from qmin.errors import InvalidInput
from qmin.expectation import (
    asymptotic_diagnostics,
    asymptotic_estimate,
    expectation_report,
    expected_value_mobius,
    expected_value_pmf,
    mobius_terms,
    s_function,
    verify_constants,
)
from qmin.pmf import pmf

F = Fraction


def test_expected_value_pmf_examples():
    assert expected_value_pmf(F(1, 2)) == F(3, 2)
    assert expected_value_pmf(F(1, 10)) >= F(3, 10)
    assert expected_value_pmf(F(1, 100)) == expected_value_mobius(F(1, 100))


def test_expected_value_pmf_uses_given_table():
    t = pmf(F(1, 7))
    assert expected_value_pmf(F(1, 7), table=t) == expected_value_pmf(F(1, 7))
    with pytest.raises(InvalidInput):
        expected_value_pmf(F(1, 8), table=t)


def test_s_function_examples():
    assert s_function(F(1, 2)) == 0
    assert s_function(F(1, 4)) == F(5, 3)


def test_s_function_hundredth():
    # value frozen from the brute-force pair enumeration
    s = s_function(F(1, 100))
    assert s == s_brute(F(1, 100))
    assert float(s) * 0.1 == pytest.approx(2.131526572531946, rel=1e-12)


@pytest.mark.parametrize("t", [F(1, 2), F(3, 4), F(1), F(7, 5), F(100), F(51, 100)])
def test_s_vanishes_above_half(t):
    assert s_function(t) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(2, 120))
def test_s_function_matches_brute(n, m):
    t = F(n, m)
    assert s_function(t) == s_brute(t)


def test_s_asymptotic_trend():
    ts = [F(1, 100), F(1, 1000), F(1, 10000)]
    gaps = [abs(float(s_function(t)) * math.sqrt(t) - 8 / 3) for t in ts]
    assert gaps[0] > gaps[1] > gaps[2]
    scale = [math.sqrt(t) * math.log(1 / t) for t in ts]
    c = gaps[0] / scale[0]
    assert all(g <= c * s for g, s in zip(gaps, scale))


def test_s_function_rejects_nonpositive():
    with pytest.raises(InvalidInput):
        s_function(F(0))


def test_mobius_examples():
    assert expected_value_mobius(F(1, 10)) == expected_value_pmf(F(1, 10))
    assert expected_value_mobius(F(1, 4)) == F(29, 12) == expected_value_pmf(F(1, 4))
    assert mobius_terms(F(1, 1000)) == list(range(1, 23))
    assert mobius_terms(F(1, 4)) == [1]


def test_mobius_domain():
    for bad in (F(1, 2), F(3, 4), F(0), F(-1, 3)):
        with pytest.raises(InvalidInput):
            expected_value_mobius(bad)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), st.integers(3, 400))
def test_routes_agree(n, m):
    delta = F(n, m)
    if not delta < F(1, 2):
        return
    assert expected_value_mobius(delta) == expected_value_pmf(delta)


def test_expectation_decreasing_in_delta():
    grid = sorted({F(k, n) for n in range(2, 41) for k in range(1, n)})
    values = [expected_value_pmf(d) for d in grid]
    assert all(v >= 1 for v in values)
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("delta,expected", [(1, 1.6211389382774044), (F(1, 4), 3.242277876554809), (F(1, 10**4), 162.11389382774044)])
def test_asymptotic_estimate(delta, expected):
    assert asymptotic_estimate(delta) == pytest.approx(expected, rel=1e-12)
    assert 16 / math.pi**2 == pytest.approx(1.6211389, abs=1e-7)


def test_asymptotic_estimate_rejects_nonpositive():
    with pytest.raises(InvalidInput):
        asymptotic_estimate(0)


@pytest.mark.parametrize("tol", [1e-8, 1e-2])
def test_verify_constants(tol):
    rep = verify_constants(tol)
    assert rep.passed
    assert abs(rep.D - 1.1715728753) < tol
    assert abs(rep.C - 8 / 3) < tol
    assert rep.error_bound < tol
    assert rep.tail_bound < tol


def test_verify_constants_rejects_bad_tolerance():
    with pytest.raises(InvalidInput):
        verify_constants(0)


def test_diagnostics_examples():
    reports = asymptotic_diagnostics([F(1, 10**k) for k in range(2, 6)])
    ratios = [r.ratio for r in reports]
    assert all(0 < x < math.inf for x in ratios)
    gaps = [abs(x - 1) for x in ratios]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    first = abs(reports[0].normalized_deficit)
    assert max(abs(r.normalized_deficit) for r in reports) <= 2 * first
    for r in reports:
        assert r.exact_value >= 1 and r.asymptotic > 0
        assert r.deficit == pytest.approx(float(r.exact_value) - r.asymptotic)
        assert r.normalized_deficit == pytest.approx(r.deficit / math.log(r.delta) ** 2)


def test_report_with_supplied_value():
    r = expectation_report(F(1, 10), exact_value=F(5323, 1260))
    assert r.exact_value == expected_value_pmf(F(1, 10))
