from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import DomainError
from app.core.numeric import certified_log, decimal_str, iroot, log2_interval, parse_decimal, rational_root_interval, sqrt_interval

positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000)


def test_decimal_str_truncates():
    assert decimal_str(Fraction(2, 3), 5) == "0.66666"
    assert decimal_str(Fraction(-1, 8), 2) == "-0.12"
    assert decimal_str(7, 0) == "7"


def test_parse_decimal():
    assert parse_decimal("1e-9") == Fraction(1, 10**9)
    assert parse_decimal(" 3/7 ") == Fraction(3, 7)
    with pytest.raises(DomainError):
        parse_decimal("pi")


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=1, max_value=7))
def test_iroot_is_floor(n, k):
    x = iroot(n, k)
    assert x**k <= n < (x + 1) ** k


def test_rational_roots_are_exact():
    assert rational_root_interval(Fraction(4, 9), 2, 10).is_point
    assert rational_root_interval(Fraction(4, 9), 2, 10).lo == Fraction(2, 3)
    iv = sqrt_interval(2, Fraction(1, 10**12))
    assert iv.lo**2 < 2 < iv.hi**2
    assert iv.width <= Fraction(1, 10**12)


def test_log_two_digits():
    iv = certified_log(2, Fraction(1, 10**30))
    assert Fraction("0.6931471805599453094") < iv.lo
    assert iv.hi < Fraction("0.6931471805599453095")



@pytest.mark.parametrize("digits", [5, 20, 40])
def test_log2_enclosure(digits):
    iv = log2_interval(Fraction(1, 10**digits))
    assert iv.width <= Fraction(1, 10**digits)
    assert iv.lo <= Fraction("0.6931471805599453094173")
    assert iv.hi >= Fraction("0.6931471805599453094172")

def test_log_of_one_and_nonpositive():
    assert certified_log(1).is_point
    with pytest.raises(DomainError):
        certified_log(0)


@given(positive, positive)
def test_log_is_additive_within_enclosures(a, b):
    tol = Fraction(1, 10**15)
    assert (certified_log(a, tol) + certified_log(b, tol)).overlaps(certified_log(a * b, tol))
