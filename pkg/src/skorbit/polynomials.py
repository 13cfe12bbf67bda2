"""Integer and rational univariate polynomial algebra.

IntPolynomial is the canonical carrier for minimal polynomials and
characteristic polynomials: integer coefficients, ascending order, primitive
representation available. Rational-coefficient polynomials (used for residue
arithmetic inside number fields) are plain tuples of fractions handled by the
qp_* helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import sympy
from sympy.abc import x as _sym_x

from .intervals import ComplexBox, RatInterval

QPoly = Tuple[Fraction, ...]


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, coeffs[i] multiplying x**i."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @staticmethod
    def from_coeffs(cs: Iterable[int]) -> "IntPolynomial":
        return IntPolynomial(tuple(cs))

    @staticmethod
    def zero() -> "IntPolynomial":
        return IntPolynomial(())

    @staticmethod
    def monomial(degree: int, coeff: int = 1) -> "IntPolynomial":
        return IntPolynomial((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        if not self.coeffs:
            return 0
        return math.gcd(*[abs(c) for c in self.coeffs]) if len(self.coeffs) > 1 else abs(self.coeffs[0])

    def primitive(self) -> "IntPolynomial":
        """Content 1, positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return IntPolynomial(tuple(v // c for v in self.coeffs))

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(u + v for u, v in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        result = IntPolynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, value):
        if isinstance(value, ComplexBox):
            return self.evaluate_box(value)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def evaluate_box(self, box: ComplexBox) -> ComplexBox:
        acc = ComplexBox.point(0)
        for c in reversed(self.coeffs):
            acc = acc * box + ComplexBox.point(c)
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def reversed_coeffs(self) -> "IntPolynomial":
        """x^deg * p(1/x)."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def shift_argument(self, c: int) -> "IntPolynomial":
        """p(x + c)."""
        result = IntPolynomial.zero()
        xc = IntPolynomial((c, 1))
        power = IntPolynomial((1,))
        for a in self.coeffs:
            result = result + power * a
            power = power * xc
        return result

    def affine_argument(self, scale: int, offset: int) -> "IntPolynomial":
        """p(scale*x + offset)."""
        result = IntPolynomial.zero()
        lin = IntPolynomial((offset, scale))
        for a in reversed(self.coeffs):
            result = result * lin + IntPolynomial((a,))
        return result

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def to_sympy(self):
        return sympy.Poly(list(reversed(self.coeffs)) or [0], _sym_x, domain="ZZ")

    @staticmethod
    def from_sympy(poly) -> "IntPolynomial":
        return IntPolynomial(tuple(int(c) for c in reversed(poly.all_coeffs())))

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return not self.is_zero()
        g = sympy.gcd(self.to_sympy(), self.derivative().to_sympy())
        return sympy.Poly(g, _sym_x).degree() == 0

    def squarefree_part(self) -> "IntPolynomial":
        if self.degree <= 0:
            return self.primitive()
        g = sympy.gcd(self.to_sympy(), self.derivative().to_sympy())
        q = sympy.div(self.to_sympy(), sympy.Poly(g, _sym_x), _sym_x)[0]
        return IntPolynomial.from_sympy(sympy.Poly(q, _sym_x)).primitive()

    def resultant(self, other: "IntPolynomial") -> int:
        r = sympy.resultant(self.to_sympy().as_expr(), other.to_sympy().as_expr(), _sym_x)
        return int(r)

    def __repr__(self) -> str:
        if self.is_zero():
            return "IntPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{c}*x")
                else:
                    terms.append(f"{c}*x^{i}")
        return "IntPolynomial(" + " + ".join(terms) + ")"


def cyclotomic(n: int) -> IntPolynomial:
    poly = sympy.Poly(sympy.cyclotomic_poly(n, _sym_x), _sym_x)
    return IntPolynomial.from_sympy(poly)


def rational_minpoly(q: Fraction) -> IntPolynomial:
    """Minimal polynomial of a rational number, primitive form."""
    q = Fraction(q)
    return IntPolynomial((-q.numerator, q.denominator)).primitive()


# ---------------------------------------------------------------------------
# rational-coefficient polynomial helpers (ascending tuples of Fraction)
# ---------------------------------------------------------------------------

def qp_trim(cs: Sequence[Fraction]) -> QPoly:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def qp_from_int(p: IntPolynomial) -> QPoly:
    return tuple(Fraction(c) for c in p.coeffs)


def qp_add(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    a = a + (Fraction(0),) * (n - len(a))
    b = b + (Fraction(0),) * (n - len(b))
    return qp_trim([u + v for u, v in zip(a, b)])


def qp_neg(a: QPoly) -> QPoly:
    return tuple(-c for c in a)


def qp_sub(a: QPoly, b: QPoly) -> QPoly:
    return qp_add(a, qp_neg(b))


def qp_scale(a: QPoly, s: Fraction) -> QPoly:
    if s == 0:
        return ()
    return tuple(c * s for c in a)


def qp_mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return qp_trim(out)


def qp_divmod(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and qp_trim(a):
        a = list(qp_trim(a))
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
    return qp_trim(q), qp_trim(a)


def qp_mod(a: QPoly, b: QPoly) -> QPoly:
    return qp_divmod(a, b)[1]


def qp_gcd_monic(a: QPoly, b: QPoly) -> QPoly:
    while b:
        a, b = b, qp_mod(a, b)
    if not a:
        return ()
    return qp_scale(a, 1 / a[-1])


def qp_ext_euclid(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Return (g, s, t) monic gcd with s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = qp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, qp_sub(s0, qp_mul(q, s1))
        t0, t1 = t1, qp_sub(t0, qp_mul(q, t1))
    if not r0:
        return (), s0, t0
    lead = r0[-1]
    return qp_scale(r0, 1 / lead), qp_scale(s0, 1 / lead), qp_scale(t0, 1 / lead)


def qp_eval(a: QPoly, v: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * v + c
    return acc


def qp_eval_box(a: QPoly, box: ComplexBox) -> ComplexBox:
    acc = ComplexBox.point(0)
    for c in reversed(a):
        acc = acc * box + ComplexBox.point(Fraction(c))
    return acc


def qp_clear_denominators(a: QPoly) -> tuple[IntPolynomial, int]:
    """Return (integer polynomial, positive denominator) with poly/den == a."""
    if not a:
        return IntPolynomial.zero(), 1
    den = math.lcm(*[c.denominator for c in a])
    return IntPolynomial(tuple(int(c * den) for c in a)), den
