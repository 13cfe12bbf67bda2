"""Exact rational interval and rectangle arithmetic.

All endpoints are fractions and all ring operations are outward-exact: the
result interval is computed with exact rational arithmetic and always contains
every possible value of the operation over the operand intervals.
Transcendental steps (log, sqrt) go through mpmath's interval context, which
rounds outward, and are widened to fractions on the way back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import iv

Rat = Union[int, Fraction]


def _to_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _mpf_endpoint_to_fraction(endpoint) -> Fraction:
    # endpoint is a point ivmpf; _mpi_ holds the raw mpf pair
    num, den = mpmath.libmp.to_rational(endpoint._mpi_[0])
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _to_fraction(self.lo))
        object.__setattr__(self, "hi", _to_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Rat) -> "RatInterval":
        x = _to_fraction(x)
        return RatInterval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: "RatInterval | Rat") -> "RatInterval":
        if not isinstance(other, RatInterval):
            other = RatInterval.point(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other: "RatInterval | Rat") -> "RatInterval":
        if not isinstance(other, RatInterval):
            other = RatInterval.point(other)
        return self + (-other)

    def __rsub__(self, other: Rat) -> "RatInterval":
        return RatInterval.point(other) - self

    def __mul__(self, other: "RatInterval | Rat") -> "RatInterval":
        if not isinstance(other, RatInterval):
            other = RatInterval.point(other)
        products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: "RatInterval | Rat") -> "RatInterval":
        if not isinstance(other, RatInterval):
            other = RatInterval.point(other)
        if other.contains_zero():
            raise ZeroDivisionError("division by interval containing zero")
        recip = RatInterval(1 / other.hi, 1 / other.lo)
        return self * recip

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x: Rat) -> bool:
        x = _to_fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def square(self) -> "RatInterval":
        # tighter than self * self: x^2 >= 0 always
        lo2, hi2 = self.lo * self.lo, self.hi * self.hi
        if self.contains_zero():
            return RatInterval(Fraction(0), max(lo2, hi2))
        return RatInterval(min(lo2, hi2), max(lo2, hi2))

    def max_with(self, x: Rat) -> "RatInterval":
        x = _to_fraction(x)
        return RatInterval(max(self.lo, x), max(self.hi, x))

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def strictly_less(self, other: "RatInterval") -> bool:
        return self.hi < other.lo

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle in C with exact rational corner coordinates."""

    re: RatInterval
    im: RatInterval

    @staticmethod
    def point(re: Rat, im: Rat = 0) -> "ComplexBox":
        return ComplexBox(RatInterval.point(re), RatInterval.point(im))

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __neg__(self) -> "ComplexBox":
        return ComplexBox(-self.re, -self.im)

    def __sub__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexBox | Rat") -> "ComplexBox":
        if not isinstance(other, ComplexBox):
            return ComplexBox(self.re * other, self.im * other)
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def abs_squared(self) -> RatInterval:
        return self.re.square() + self.im.square()

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def contains_box(self, other: "ComplexBox") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def intersects(self, other: "ComplexBox") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def __repr__(self) -> str:
        return f"Box(re={self.re}, im={self.im})"


def _fraction_to_iv(x: Fraction, prec: int):
    # int -> iv conversion rounds outward at the context precision
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def log_interval(x: RatInterval, precision_bits: int = 64) -> RatInterval:
    """Certified enclosure of log over a strictly positive interval."""
    if not x.is_positive():
        raise ValueError("log_interval requires a strictly positive interval")
    need = max(precision_bits + 16, x.lo.numerator.bit_length(),
               x.lo.denominator.bit_length(), x.hi.numerator.bit_length(),
               x.hi.denominator.bit_length()) + 16
    old = iv.prec
    try:
        iv.prec = need
        lo_iv = iv.log(_fraction_to_iv(x.lo, need))
        hi_iv = iv.log(_fraction_to_iv(x.hi, need))
        return RatInterval(
            _mpf_endpoint_to_fraction(lo_iv.a),
            _mpf_endpoint_to_fraction(hi_iv.b),
        )
    finally:
        iv.prec = old


def log_positive_part(x: RatInterval, precision_bits: int = 64) -> RatInterval:
    """Certified enclosure of max(0, log x); the upper endpoint must be positive."""
    if x.hi <= 0:
        raise ValueError("interval must reach into the positive axis")
    if x.hi <= 1:
        upper = Fraction(0)
    else:
        upper = log_interval(RatInterval.point(x.hi), precision_bits).hi
    if x.lo <= 1:
        lower = Fraction(0)
    else:
        lower = log_interval(RatInterval.point(x.lo), precision_bits).lo
    return RatInterval(max(lower, Fraction(0)), max(upper, Fraction(0)))


def exp_interval(x: RatInterval, precision_bits: int = 64) -> RatInterval:
    """Certified enclosure of exp over an interval."""
    need = max(precision_bits + 16, x.lo.numerator.bit_length(),
               x.lo.denominator.bit_length(), x.hi.numerator.bit_length(),
               x.hi.denominator.bit_length()) + 16
    old = iv.prec
    try:
        iv.prec = need
        lo_iv = iv.exp(_fraction_to_iv(x.lo, need))
        hi_iv = iv.exp(_fraction_to_iv(x.hi, need))
        return RatInterval(
            max(Fraction(0), _mpf_endpoint_to_fraction(lo_iv.a)),
            _mpf_endpoint_to_fraction(hi_iv.b),
        )
    finally:
        iv.prec = old


def sqrt_interval(x: RatInterval, precision_bits: int = 64) -> RatInterval:
    """Certified enclosure of sqrt over a nonnegative interval."""
    if x.hi < 0:
        raise ValueError("sqrt_interval requires a nonnegative interval")
    lo = max(x.lo, Fraction(0))
    scale = 1 << (2 * precision_bits)

    def isqrt_lower(f: Fraction) -> Fraction:
        n = f.numerator * scale * f.denominator
        return Fraction(_isqrt(n), f.denominator * (1 << precision_bits))

    def isqrt_upper(f: Fraction) -> Fraction:
        n = f.numerator * scale * f.denominator
        r = _isqrt(n)
        if r * r < n:
            r += 1
        return Fraction(r, f.denominator * (1 << precision_bits))

    return RatInterval(isqrt_lower(lo), isqrt_upper(x.hi))


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def pi_interval(precision_bits: int = 64) -> RatInterval:
    """Certified enclosure of pi."""
    old = iv.prec
    try:
        iv.prec = precision_bits + 16
        p = iv.pi
        return RatInterval(_mpf_endpoint_to_fraction(p.a), _mpf_endpoint_to_fraction(p.b))
    finally:
        iv.prec = old
