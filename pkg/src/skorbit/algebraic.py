"""Algebraic numbers as exact values: minimal polynomial + designated root.

A root is designated by its index in the canonical isolation order of its
(irreducible, primitive) minimal polynomial. Certified isolating rectangles
with rational corners are available at any requested precision, and refining
never changes which root is designated. Equality, arithmetic, and
root-of-unity questions are decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import sympy
from sympy.abc import x as _X, y as _Y

from .intervals import ComplexBox, RatInterval
from .polynomials import IntPolynomial, cyclotomic, rational_minpoly

DEFAULT_PRECISION = 32


class UnsupportedInstance(Exception):
    """An input outside the supported resource envelope (degree caps etc.)."""


class Factorization(list):
    """List of (irreducible primitive IntPolynomial, multiplicity) with a unit."""

    def __init__(self, unit: Fraction, factors):
        super().__init__(factors)
        self.unit = unit


def factor_rational_poly(p: IntPolynomial) -> Factorization:
    """Factor over Q into primitive irreducible integer polynomials.

    The product of factors^multiplicities times the rational unit equals p.
    Factor order is deterministic: by degree, then lexicographic coefficients.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree == 0:
        return Factorization(Fraction(p.coeffs[0]), [])
    _, fac_list = p.to_sympy().factor_list()
    factors = []
    for f, mult in fac_list:
        g = IntPolynomial.from_sympy(f).primitive()
        factors.append((g, int(mult)))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    prod = IntPolynomial((1,))
    for g, m in factors:
        prod = prod * (g ** m)
    unit = Fraction(p.leading, prod.leading)
    return Factorization(unit, factors)


def _fraction(r) -> Fraction:
    return Fraction(int(r.numerator), int(r.denominator))


@lru_cache(maxsize=None)
def _real_root_count(minpoly_coeffs: tuple) -> int:
    from sympy.polys.domains import QQ
    from sympy.polys.rootisolation import dup_isolate_real_roots_sqf

    f = [QQ(c) for c in reversed(minpoly_coeffs)]
    return len(dup_isolate_real_roots_sqf(f, QQ))


@lru_cache(maxsize=None)
def _isolated_boxes(minpoly_coeffs: tuple, precision_bits: int) -> tuple:
    """Disjoint isolating rectangles for all roots, canonical order.

    Real roots come first in ascending order, then the complex roots in the
    isolation algorithm's deterministic order, which is stable under
    refinement (verified against the coarsest level on every call).
    """
    from sympy.polys.domains import QQ
    from sympy.polys.rootisolation import (
        dup_isolate_complex_roots_sqf,
        dup_isolate_real_roots_sqf,
    )

    f = [QQ(c) for c in reversed(minpoly_coeffs)]
    eps = QQ(1, 2 ** precision_bits)
    boxes = []
    reals = dup_isolate_real_roots_sqf(f, QQ, eps=eps)
    for lo, hi in reals:
        boxes.append(
            ComplexBox(RatInterval(_fraction(lo), _fraction(hi)), RatInterval.point(0))
        )
    degree = len(minpoly_coeffs) - 1
    if len(reals) < degree:
        for (re_lo, im_lo), (re_hi, im_hi) in dup_isolate_complex_roots_sqf(f, QQ, eps=eps):
            boxes.append(
                ComplexBox(
                    RatInterval(_fraction(re_lo), _fraction(re_hi)),
                    RatInterval(_fraction(im_lo), _fraction(im_hi)),
                )
            )
    if len(boxes) != degree:
        raise RuntimeError("root isolation lost a root")
    if precision_bits > DEFAULT_PRECISION:
        coarse = _isolated_boxes(minpoly_coeffs, DEFAULT_PRECISION)
        for fine, base in zip(boxes, coarse):
            if not fine.intersects(base):
                raise RuntimeError("root isolation order changed under refinement")
    return tuple(boxes)


@dataclass(frozen=True)
class AlgebraicNumber:
    """A designated root of an irreducible primitive integer polynomial."""

    minpoly: IntPolynomial
    root_index: int

    def __post_init__(self):
        if self.minpoly.degree < 1:
            raise ValueError("minimal polynomial must have degree >= 1")

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "AlgebraicNumber":
        return AlgebraicNumber(rational_minpoly(Fraction(q)), 0)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        a, b = self.minpoly.coeffs
        return Fraction(-a, b)

    def is_real(self) -> bool:
        return self.root_index < _real_root_count(self.minpoly.coeffs)

    # -- certified boxes ----------------------------------------------------

    def box(self, precision_bits: int = DEFAULT_PRECISION) -> ComplexBox:
        """Isolating rectangle of width at most 2^-precision_bits."""
        if self.is_rational():
            return ComplexBox.point(self.as_fraction())
        return _isolated_boxes(self.minpoly.coeffs, precision_bits)[self.root_index]

    @property
    def isobox(self) -> ComplexBox:
        return self.box(DEFAULT_PRECISION)

    def abs_squared_interval(self, precision_bits: int = DEFAULT_PRECISION) -> RatInterval:
        return self.box(precision_bits).abs_squared()

    def __complex__(self) -> complex:
        b = self.box(53)
        return complex(float(b.re.mid), float(b.im.mid))

    # -- exact predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.minpoly.coeffs == (0, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        return self.minpoly == other.minpoly and self.root_index == other.root_index

    def __hash__(self):
        return hash((self.minpoly.coeffs, self.root_index))

    def conjugate(self) -> "AlgebraicNumber":
        """The complex conjugate (another root of the same minimal polynomial)."""
        if self.is_real():
            return self
        target = None
        prec = DEFAULT_PRECISION
        mine = self.box(prec)
        candidates = [i for i in range(self.degree) if i != self.root_index]
        while True:
            conj_box = mine.conjugate()
            live = []
            for i in candidates:
                other = AlgebraicNumber(self.minpoly, i)
                if other.box(prec).intersects(conj_box):
                    live.append(i)
            if len(live) == 1:
                target = live[0]
                break
            if not live:
                raise RuntimeError("conjugate root not found; isolation broken")
            candidates = live
            prec *= 2
            mine = self.box(prec)
        return AlgebraicNumber(self.minpoly, target)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "AlgebraicNumber":
        cs = tuple(-c if i % 2 else c for i, c in enumerate(self.minpoly.coeffs))
        mp = IntPolynomial(cs).primitive()
        return _designate(mp, lambda prec: -self.box(prec))

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        mp = self.minpoly.reversed_coeffs().primitive()
        prec0 = DEFAULT_PRECISION
        while self.box(prec0).abs_squared().contains_zero():
            prec0 *= 2
        return _designate(mp, lambda prec: _box_reciprocal(self.box(max(prec, prec0))))

    def __add__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if other.is_rational():
            return self._add_rational(other.as_fraction())
        if self.is_rational():
            return other._add_rational(self.as_fraction())
        res = _resultant_sum(self.minpoly, other.minpoly)
        return _designate_from_resultant(res, lambda prec: self.box(prec) + other.box(prec))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other) -> "AlgebraicNumber":
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return (-self) + _coerce(other)

    def __mul__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if other.is_rational():
            return self._mul_rational(other.as_fraction())
        if self.is_rational():
            return other._mul_rational(self.as_fraction())
        res = _resultant_product(self.minpoly, other.minpoly)
        return _designate_from_resultant(res, lambda prec: self.box(prec) * other.box(prec))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        return self * other.inverse()

    def __pow__(self, n: int) -> "AlgebraicNumber":
        if n == 0:
            return AlgebraicNumber.from_rational(1)
        if n < 0:
            return self.inverse() ** (-n)
        acc = self
        result = None
        while n:
            if n & 1:
                result = acc if result is None else result * acc
            n >>= 1
            if n:
                acc = acc * acc
        return result

    def _add_rational(self, q: Fraction) -> "AlgebraicNumber":
        if self.is_rational():
            return AlgebraicNumber.from_rational(self.as_fraction() + q)
        # p(x - q), denominators cleared
        shifted = _compose_linear(self.minpoly, Fraction(1), -q)
        return _designate(shifted, lambda prec: self.box(prec) + ComplexBox.point(q))

    def _mul_rational(self, q: Fraction) -> "AlgebraicNumber":
        if q == 0:
            return AlgebraicNumber.from_rational(0)
        if self.is_rational():
            return AlgebraicNumber.from_rational(self.as_fraction() * q)
        scaled = _compose_linear(self.minpoly, 1 / q, Fraction(0))
        return _designate(scaled, lambda prec: self.box(prec) * q)

    def __repr__(self) -> str:
        b = self.box(20)
        return f"AlgebraicNumber({self.minpoly!r}, root {self.root_index} ~ {float(b.re.mid):.6g}{float(b.im.mid):+.6g}i)"


def _coerce(v) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicNumber.from_rational(Fraction(v))
    raise TypeError(f"cannot interpret {v!r} as an algebraic number")


def _compose_linear(p: IntPolynomial, a: Fraction, b: Fraction) -> IntPolynomial:
    """Primitive integer form of p(a*x + b)."""
    from .polynomials import qp_add, qp_mul, qp_scale

    lin = (Fraction(b), Fraction(a))
    acc: tuple = ()
    power: tuple = (Fraction(1),)
    for c in p.coeffs:
        acc = qp_add(acc, qp_scale(power, Fraction(c)))
        power = qp_mul(power, lin)
    den = math.lcm(*[f.denominator for f in acc]) if acc else 1
    return IntPolynomial(tuple(int(f * den) for f in acc)).primitive()


def _box_reciprocal(box: ComplexBox) -> ComplexBox:
    """Enclosure of 1/z over a box excluding zero: conj(z) / |z|^2."""
    norm = box.abs_squared()
    if norm.contains_zero():
        raise ZeroDivisionError("box touches zero")
    inv_norm = RatInterval(1 / norm.hi, 1 / norm.lo)
    conj = box.conjugate()
    return ComplexBox(conj.re * inv_norm, conj.im * inv_norm)


def _resultant_sum(ma: IntPolynomial, mb: IntPolynomial) -> IntPolynomial:
    a_y = ma.to_sympy().as_expr().subs(_X, _Y)
    b_shift = sum(c * (_X - _Y) ** i for i, c in enumerate(mb.coeffs))
    res = sympy.resultant(a_y, sympy.expand(b_shift), _Y)
    return IntPolynomial.from_sympy(sympy.Poly(res, _X)).primitive()


def _resultant_product(ma: IntPolynomial, mb: IntPolynomial) -> IntPolynomial:
    db = mb.degree
    a_y = ma.to_sympy().as_expr().subs(_X, _Y)
    b_homog = sum(c * _X ** i * _Y ** (db - i) for i, c in enumerate(mb.coeffs))
    res = sympy.resultant(a_y, sympy.expand(b_homog), _Y)
    return IntPolynomial.from_sympy(sympy.Poly(res, _X)).primitive()


def _designate_from_resultant(res: IntPolynomial, box_fn) -> AlgebraicNumber:
    sf = res.squarefree_part()
    factors = [f for f, _ in factor_rational_poly(sf)]
    return _designate_among(factors, box_fn)


def _designate(minpoly: IntPolynomial, box_fn) -> AlgebraicNumber:
    return _designate_among([minpoly], box_fn)


def _designate_among(factors, box_fn) -> AlgebraicNumber:
    """Pick the unique (factor, root index) whose root lies in box_fn(prec)."""
    prec = DEFAULT_PRECISION
    live = list(factors)
    while True:
        target = box_fn(prec)
        still = []
        for f in live:
            if not f.evaluate_box(target).contains_zero():
                continue
            still.append(f)
        live = still if still else live
        if len(live) == 1:
            f = live[0]
            hits = []
            for i in range(f.degree):
                cand = AlgebraicNumber(f, i)
                if cand.box(prec).intersects(target):
                    hits.append(i)
            if len(hits) == 1:
                return AlgebraicNumber(f, hits[0])
        prec *= 2
        if prec > 1 << 16:
            raise RuntimeError("root designation failed to converge")


def isolate_roots(p: IntPolynomial, precision_bits: int = DEFAULT_PRECISION) -> list[AlgebraicNumber]:
    """All complex roots of a squarefree polynomial, deterministically ordered.

    Each root carries its true (irreducible) minimal polynomial; boxes at the
    requested precision are pairwise disjoint; complex roots are returned
    adjacent to their conjugates.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    if not p.is_squarefree():
        raise ValueError("polynomial is not squarefree; deflate first")
    roots: list[AlgebraicNumber] = []
    for f, _ in factor_rational_poly(p):
        roots.extend(AlgebraicNumber(f, i) for i in range(f.degree))
    roots = sort_algebraics(roots)
    # refine until pairwise disjoint at the caller's precision
    prec = precision_bits
    while True:
        boxes = [r.box(prec) for r in roots]
        ok = True
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes[i].intersects(boxes[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return roots
        prec *= 2
        if prec > 1 << 16:
            raise RuntimeError("root isolation failed to separate")


def _cmp_imaginary(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Order two distinct values already known to share their real part."""
    prec = DEFAULT_PRECISION
    while prec <= 1 << 16:
        ia, ib = a.box(prec).im, b.box(prec).im
        if ia.strictly_less(ib):
            return -1
        if ib.strictly_less(ia):
            return 1
        prec *= 2
    raise RuntimeError("imaginary parts failed to separate")


def _real_part(a: AlgebraicNumber) -> AlgebraicNumber:
    return (a + a.conjugate()) * Fraction(1, 2)


def compare_algebraics(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact comparison by (real part, imaginary part).

    Imaginary parts are only consulted once equal real parts are certain:
    either proven by conjugacy within one minimal polynomial, or by an exact
    zero test on the real part difference after refinement stalls.
    """
    if a == b:
        return 0
    if a.minpoly == b.minpoly and not a.is_real() and a.conjugate() == b:
        return _cmp_imaginary(a, b)
    prec = DEFAULT_PRECISION
    proven_distinct_re = False
    while prec <= 1 << 16:
        ra, rb = a.box(prec).re, b.box(prec).re
        if ra.strictly_less(rb):
            return -1
        if rb.strictly_less(ra):
            return 1
        prec *= 2
        if prec > 512 and not proven_distinct_re:
            if _real_part(a) == _real_part(b):
                return _cmp_imaginary(a, b)
            proven_distinct_re = True
    raise RuntimeError("comparison failed to resolve")


def sort_algebraics(roots: Sequence[AlgebraicNumber]) -> list[AlgebraicNumber]:
    """Sort by (real part, imaginary part) with exact tie handling."""
    import functools

    return sorted(roots, key=functools.cmp_to_key(compare_algebraics))


def is_root_of_unity(a: AlgebraicNumber) -> Optional[int]:
    """Exact multiplicative order if a is a root of unity, else None."""
    if a.is_zero():
        raise ValueError("zero is not a candidate root of unity")
    d = a.degree
    if not a.minpoly.is_monic():
        return None
    bound = 2 * d * d + 2
    for n in range(1, bound + 1):
        if sympy.totient(n) == d and cyclotomic(n) == a.minpoly:
            return n
    return None


def ratio_root_of_unity_lcm(roots: Sequence[AlgebraicNumber]) -> int:
    """lcm of orders of all root-of-unity ratios among distinct roots (1 if none)."""
    orders = [1]
    items = list(roots)
    for i in range(len(items)):
        for j in range(len(items)):
            if i == j or items[i] == items[j]:
                continue
            if not _possibly_equal_modulus(items[i], items[j]):
                continue
            ratio = items[i] / items[j]
            n = is_root_of_unity(ratio)
            if n is not None:
                orders.append(n)
    return math.lcm(*orders)


def _possibly_equal_modulus(a: AlgebraicNumber, b: AlgebraicNumber, precision_bits: int = 64) -> bool:
    sa = a.abs_squared_interval(precision_bits)
    sb = b.abs_squared_interval(precision_bits)
    return sa.intersects(sb)
