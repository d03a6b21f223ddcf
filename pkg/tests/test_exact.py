from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotset import (
    BoundaryCollision,
    ParseError,
    RotsetError,
    WindowError,
    alpha,
    ceil_mul,
    certify_stability,
    make_rho,
    parse_rho,
)
from rotset.exact import PRECISION_ENV, alpha_residue, boundary_name


def test_alpha_small_examples():
    assert alpha(make_rho(Fraction(7, 10)), 3) == Fraction(9, 10)
    assert alpha(make_rho(Fraction(3, 10)), 3) == Fraction(1, 10)


def test_ceil_mul_examples():
    assert ceil_mul(make_rho(Fraction(93, 100)), 14) == 14
    assert ceil_mul(make_rho(Fraction(31, 100)), 10) == 4
    assert ceil_mul(make_rho(Fraction(31, 100)), 0) == 0


@given(st.integers(2, 10_000), st.data())
def test_alpha_lies_strictly_between_zero_and_one(q, data):
    p = data.draw(st.integers(1, q - 1))
    rho = Fraction(p, q)
    if boundary_name(rho.numerator, rho.denominator) is not None:
        return
    r = make_rho(rho)
    m = data.draw(st.integers(1, r.max_safe_index))
    a = alpha(r, m)
    assert 0 < a < 1
    assert a == ceil_mul(r, m) - m * rho
    assert alpha_residue(r.numerator, r.denominator, m) == a * r.denominator


def test_window_is_enforced():
    rho = make_rho(Fraction(93, 100))
    assert rho.max_safe_index == 98
    with pytest.raises(WindowError):
        alpha(rho, 99)
    with pytest.raises(WindowError):
        make_rho(Fraction(93, 100), max_index=99)


@pytest.mark.parametrize("value", ["1/2", "1/7", "6/7", "3/5", "3/11", "2/3", "2/9"])
def test_boundary_values_are_rejected(value):
    with pytest.raises(BoundaryCollision):
        parse_rho(value)


def test_non_terminating_fraction_is_truncated():
    rho = parse_rho("3/7", precision=12)
    assert rho.value == Fraction(428571428571, 10**12)
    assert rho.uncertainty == Fraction(1, 10**12)


def test_parse_exact_decimal_keeps_zero_uncertainty():
    rho = parse_rho("0.93")
    assert (rho.numerator, rho.denominator) == (93, 100)
    assert rho.uncertainty == 0
    assert rho.max_safe_index == 98


def test_parse_irrational_truncates_to_precision():
    rho = parse_rho("0.93+pi*1e-5")
    assert rho.value == Fraction(930031415926535, 10**15)
    assert rho.uncertainty == Fraction(1, 10**15)
    assert rho.max_safe_index == 100_000


def test_parse_sqrt_and_quotients():
    rho = parse_rho("sqrt(2)/2", precision=12)
    assert rho.value == Fraction(707106781186, 10**12)
    assert parse_rho("1/2+1e-6").value == Fraction(500001, 1000000)
    assert parse_rho("1-0.07").value == Fraction(93, 100)


@pytest.mark.parametrize("expr", ["", "abc", "0.5 0.1", "pi*", "1/0"])
def test_parse_errors(expr):
    with pytest.raises(ParseError):
        parse_rho(expr)


@pytest.mark.parametrize("expr", ["0", "1", "1.5", "-0.3"])
def test_values_outside_unit_interval(expr):
    with pytest.raises(RotsetError):
        parse_rho(expr)


def test_precision_floor_and_environment(monkeypatch):
    with pytest.raises(ParseError):
        parse_rho("0.93+pi*1e-5", precision=11)
    monkeypatch.setenv(PRECISION_ENV, "20")
    rho = parse_rho("0.93+pi*1e-5")
    assert rho.precision == 20
    assert rho.uncertainty == Fraction(1, 10**20)
    monkeypatch.setenv(PRECISION_ENV, "x")
    with pytest.raises(ParseError):
        parse_rho("0.93+pi*1e-5")


def test_mirror_swaps_regime():
    rho = parse_rho("0.3+pi*1e-6")
    other = rho.mirror()
    assert other.value == 1 - rho.value
    assert other.high and not rho.high
    assert other.max_safe_index == rho.max_safe_index


def test_certify_passes_for_irrational_surrogate():
    rep = certify_stability(parse_rho("0.93+pi*1e-5"), 100_000)
    assert rep.passed
    assert rep.rho.max_safe_index == 100_000
    assert rep.describe()["status"] == "PASS"


def test_certify_fails_for_wide_uncertainty():
    rho = make_rho(Fraction(93, 100), uncertainty=Fraction(1, 100))
    rep = certify_stability(rho, 98)
    assert not rep.passed
    assert rep.first_failure == 12
    with pytest.raises(WindowError):
        certify_stability(rho, 99)


@settings(max_examples=50)
@given(st.integers(3, 400), st.data())
def test_certified_predicates_hold_at_both_ends_of_the_uncertainty(q, data):
    p = data.draw(st.integers(1, q - 1))
    frac = Fraction(p, q)
    if boundary_name(frac.numerator, frac.denominator) is not None:
        return
    eps = Fraction(1, 10**7)
    rho = make_rho(frac, uncertainty=eps)
    M = min(50, rho.max_safe_index)
    rep = certify_stability(rho, M)
    if not rep.passed:
        return
    for shifted in (frac - eps, frac + eps):
        for m in range(1, M + 1):
            c = -((-m * shifted.numerator) // shifted.denominator)
            assert c == ceil_mul(rho, m)
            assert (c - m * shifted < shifted) == (alpha(rho, m) < frac)
