"""Certified interval arithmetic: every operation must enclose the true value."""

from fractions import Fraction

import mpmath
from hypothesis import given, settings
from hypothesis import strategies as st

from skorbit.intervals import (
    ComplexBox,
    RatInterval,
    log_interval,
    log_positive_part,
    pi_interval,
    sqrt_interval,
)

rationals = st.fractions(
    min_value=Fraction(-100), max_value=Fraction(100), max_denominator=1000
)
positive_rationals = st.fractions(
    min_value=Fraction(1, 1000), max_value=Fraction(100), max_denominator=1000
)


def interval_around(x: Fraction, pad: Fraction) -> RatInterval:
    return RatInterval(x - pad, x + pad)


@given(rationals, rationals, rationals)
def test_sum_of_members_lies_in_interval_sum(x, y, pad):
    pad = abs(pad) + Fraction(1, 7)
    a, b = interval_around(x, pad), interval_around(y, pad)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)


@given(rationals, positive_rationals)
def test_quotient_of_members_lies_in_interval_quotient(x, y):
    a = interval_around(x, Fraction(1, 9))
    b = interval_around(y + Fraction(1), Fraction(1, 3))
    assert (a / b).contains(x / (y + 1))


def test_division_by_zero_straddling_interval_raises():
    a = RatInterval(Fraction(1), Fraction(2))
    b = RatInterval(Fraction(-1), Fraction(1))
    try:
        a / b
    except ZeroDivisionError:
        return
    raise AssertionError("expected ZeroDivisionError")


@given(rationals)
def test_square_never_dips_below_zero(x):
    a = interval_around(x, Fraction(3, 2))
    sq = a.square()
    assert sq.lo >= 0
    assert sq.contains(x * x)


def test_point_interval_has_zero_width():
    p = RatInterval.point(Fraction(5, 3))
    assert p.width == 0 and p.contains(Fraction(5, 3))


@given(positive_rationals)
@settings(max_examples=40)
def test_log_interval_encloses_high_precision_logarithm(x):
    iv = log_interval(RatInterval.point(x), 80)
    with mpmath.workprec(250):
        ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
        assert mpmath.mpf(iv.hi.numerator) / iv.hi.denominator >= ref
    assert iv.width <= Fraction(1, 2 ** 70)


def test_log_interval_rejects_nonpositive_input():
    try:
        log_interval(RatInterval(Fraction(-1), Fraction(2)))
    except ValueError:
        return
    raise AssertionError("expected ValueError")


def test_log_positive_part_clamps_at_zero():
    iv = log_positive_part(RatInterval.point(Fraction(1, 2)))
    assert iv.contains(Fraction(0)) and iv.hi == 0
    iv2 = log_positive_part(RatInterval.point(Fraction(3)))
    assert iv2.lo > 1  # log 3 > 1


@given(positive_rationals)
@settings(max_examples=40)
def test_sqrt_interval_encloses_square_root(x):
    iv = sqrt_interval(RatInterval.point(x), 64)
    assert iv.lo * iv.lo <= x <= iv.hi * iv.hi
    assert iv.width <= Fraction(1, 2 ** 60) * max(1, x)


def test_pi_interval_brackets_known_digits():
    iv = pi_interval(100)
    below = Fraction(314159265358979323846264338327, 10 ** 29)
    above = Fraction(314159265358979323846264338328, 10 ** 29)
    assert below < iv.lo < iv.hi < above
    assert iv.width < Fraction(1, 2 ** 95)
    with mpmath.workprec(300):
        ref = +mpmath.pi
        assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
        assert mpmath.mpf(iv.hi.numerator) / iv.hi.denominator >= ref


@given(rationals, rationals, rationals, rationals)
@settings(max_examples=40)
def test_complex_box_product_encloses_true_product(ar, ai, br, bi):
    pad = Fraction(1, 11)
    a = ComplexBox(interval_around(ar, pad), interval_around(ai, pad))
    b = ComplexBox(interval_around(br, pad), interval_around(bi, pad))
    prod = a * b
    assert prod.re.contains(ar * br - ai * bi)
    assert prod.im.contains(ar * bi + ai * br)


@given(rationals, rationals)
def test_abs_squared_encloses_squared_modulus(re, im):
    box = ComplexBox(interval_around(re, Fraction(1, 5)), interval_around(im, Fraction(1, 5)))
    assert box.abs_squared().contains(re * re + im * im)
    assert box.abs_squared().lo >= 0


def test_conjugate_flips_imaginary_part():
    box = ComplexBox(RatInterval(Fraction(1), Fraction(2)), RatInterval(Fraction(3), Fraction(4)))
    c = box.conjugate()
    assert c.im.lo == Fraction(-4) and c.im.hi == Fraction(-3)
    assert c.re == box.re
