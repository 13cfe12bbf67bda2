"""Logarithmic heights of algebraic numbers and explicit size bounds.

The height evaluator goes through the Mahler measure of the minimal
polynomial: h(a) = (1/deg) * (log|lead| + sum of log+ |conjugate|). All
outputs are certified intervals; precision escalates until the requested
width is met. The size-bound operations (determinant height bound, small
kernel bases, characteristic polynomial coefficient bounds) return explicit
quantities and assert them against the exactly computed objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebraic import AlgebraicNumber, isolate_roots
from .intervals import RatInterval, log_interval, log_positive_part
from .linalg import charpoly_faddeev, det_bareiss, det_exact, mat_mul, mat_transpose, rref
from .numberfield import FieldElement
from .polynomials import IntPolynomial

DEFAULT_HEIGHT_PRECISION = 64


def height(a: AlgebraicNumber, precision_bits: int = DEFAULT_HEIGHT_PRECISION) -> RatInterval:
    """Absolute logarithmic height as a certified interval.

    Nonnegative by construction; interval width at most 2^-precision_bits.
    """
    if a.is_zero():
        raise ValueError("height of zero is not defined here")
    if a.is_rational():
        q = a.as_fraction()
        m = max(abs(q.numerator), abs(q.denominator))
        if m == 1:
            return RatInterval.point(0)
        return log_interval(RatInterval.point(Fraction(m)), precision_bits).max_with(0)

    mp = a.minpoly
    d = mp.degree
    target = Fraction(1, 2 ** precision_bits)
    work = precision_bits + 8
    while True:
        total = log_interval(RatInterval.point(Fraction(abs(mp.leading))), work)
        for i in range(d):
            conj = AlgebraicNumber(mp, i)
            sq = conj.box(work).abs_squared()
            if sq.contains_zero():
                work *= 2
                break
            total = total + log_positive_part(sq, work) * Fraction(1, 2)
        else:
            result = (total * Fraction(1, d)).max_with(0)
            if result.width <= target:
                return result
            work *= 2
        if work > 1 << 16:
            raise RuntimeError("height computation failed to converge")


def height_of_element(x: FieldElement, precision_bits: int = DEFAULT_HEIGHT_PRECISION) -> RatInterval:
    """Height of a number field element (independent of the ambient field)."""
    if x.is_zero():
        return RatInterval.point(0)
    if x.is_rational():
        q = x.as_fraction()
        m = max(abs(q.numerator), abs(q.denominator))
        if m == 1:
            return RatInterval.point(0)
        return log_interval(RatInterval.point(Fraction(m)), precision_bits).max_with(0)
    return height(x.as_algebraic(0), precision_bits)


@dataclass(frozen=True)
class HeightPropertyReport:
    """Outcome of the standard height (in)equalities for one sample."""

    product_subadditive: bool
    sum_subadditive: bool
    power_homogeneous: bool
    place_bounded: bool
    details: dict

    def all_hold(self) -> bool:
        return (
            self.product_subadditive
            and self.sum_subadditive
            and self.power_homogeneous
            and self.place_bounded
        )


def check_height_props(
    a: AlgebraicNumber,
    b: AlgebraicNumber,
    n: int,
    tolerance: Fraction = Fraction(1, 10 ** 9),
    precision_bits: int = 80,
) -> HeightPropertyReport:
    """Verify the four standard height laws to interval tolerance.

    1. h(ab) <= h(a) + h(b)
    2. h(a+b) <= log 2 + h(a) + h(b)
    3. h(a^n) = |n| h(a)
    4. log|a| at each conjugate lies in [-deg*h(a), deg*h(a)]
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("height laws need nonzero inputs")
    ha = height(a, precision_bits)
    hb = height(b, precision_bits)

    prod = a * b
    hprod = RatInterval.point(0) if prod.is_zero() else height(prod, precision_bits)
    product_ok = hprod.lo <= ha.hi + hb.hi + tolerance

    total = a + b
    hsum = RatInterval.point(0) if total.is_zero() else height(total, precision_bits)
    log2 = log_interval(RatInterval.point(Fraction(2)), precision_bits)
    sum_ok = hsum.lo <= log2.hi + ha.hi + hb.hi + tolerance

    power = a ** n
    hpow = RatInterval.point(0) if power.is_zero() else height(power, precision_bits)
    scaled = ha * Fraction(abs(n))
    power_ok = abs(hpow.mid - scaled.mid) <= hpow.width + scaled.width + tolerance

    d = a.degree
    bound = ha * Fraction(d)
    place_ok = True
    for i in range(d):
        sq = AlgebraicNumber(a.minpoly, i).box(precision_bits).abs_squared()
        if sq.contains_zero():
            place_ok = False
            break
        log_mod = log_interval(sq, precision_bits) * Fraction(1, 2)
        if log_mod.lo > bound.hi + tolerance or log_mod.hi < -(bound.hi + tolerance):
            place_ok = False
            break

    return HeightPropertyReport(
        product_subadditive=product_ok,
        sum_subadditive=sum_ok,
        power_homogeneous=power_ok,
        place_bounded=place_ok,
        details={
            "h_a": ha,
            "h_b": hb,
            "h_prod": hprod,
            "h_sum": hsum,
            "h_pow": hpow,
        },
    )


def det_height_bound(
    matrix: Sequence[Sequence[FieldElement]],
    precision_bits: int = DEFAULT_HEIGHT_PRECISION,
) -> Tuple[RatInterval, FieldElement, RatInterval]:
    """Explicit determinant height bound (m/2) log m + m * sum of entry heights.

    Returns (bound, exact determinant, height of determinant) and raises if
    the certified intervals ever witness a violation of the bound.
    """
    m = len(matrix)
    if any(len(row) != m for row in matrix):
        raise ValueError("matrix must be square")
    log_m = (
        RatInterval.point(0)
        if m == 1
        else log_interval(RatInterval.point(Fraction(m)), precision_bits)
    )
    entry_sum = RatInterval.point(0)
    for row in matrix:
        for x in row:
            entry_sum = entry_sum + height_of_element(x, precision_bits)
    bound = log_m * Fraction(m, 2) + entry_sum * Fraction(m)

    field = matrix[0][0].field
    det = det_exact([list(row) for row in matrix], field.zero(), field.one())
    h_det = height_of_element(det, precision_bits)
    if h_det.lo > bound.hi:
        raise AssertionError("determinant height exceeded its explicit bound")
    return bound, det, h_det


@dataclass(frozen=True)
class KernelBasisResult:
    """Integral orthogonal-complement basis with its provable size bound."""

    basis: List[List[int]]
    gram_det: int
    entry_bound_log2: Fraction  # log2 of the Hadamard-style entry bound


def kernel_basis_small(vectors: Sequence[Sequence[Fraction]]) -> KernelBasisResult:
    """Integral basis of the orthogonal complement of the span of the inputs.

    Basis entries are k x k minors of the denominator-cleared input matrix,
    so each absolute value is at most sqrt(det(A A^T)) (Cauchy-Binet). The
    basis is content-reduced afterwards; the bound is reported pre-reduction.
    """
    k = len(vectors)
    if k == 0:
        raise ValueError("need at least one spanning vector")
    d = len(vectors[0])
    if any(len(v) != d for v in vectors):
        raise ValueError("vectors must share a dimension")

    rows: List[List[int]] = []
    for v in vectors:
        den = math.lcm(*[Fraction(x).denominator for x in v]) if v else 1
        rows.append([int(Fraction(x) * den) for x in v])

    reduced, pivots, transform = rref([[Fraction(x) for x in row] for row in rows])
    if len(pivots) < k:
        dependency = transform[len(pivots)]
        raise ValueError(f"input vectors are dependent: combination {dependency} vanishes")

    gram = mat_mul(rows, mat_transpose(rows))
    gram_det = det_bareiss(gram)
    free = [c for c in range(d) if c not in pivots]

    basis: List[List[int]] = []
    for c in free:
        w = [0] * d
        piv_matrix = [[rows[i][j] for j in pivots] for i in range(k)]
        base_det = det_bareiss(piv_matrix)
        w[c] = -base_det
        for idx, j in enumerate(pivots):
            replaced = [
                [rows[i][pivots[t]] if t != idx else rows[i][c] for t in range(k)]
                for i in range(k)
            ]
            w[j] = det_bareiss(replaced)
        for entry in w:
            if entry * entry > gram_det:
                raise AssertionError("kernel entry exceeded its Cauchy-Binet bound")
        content = math.gcd(*[abs(x) for x in w])
        if content > 1:
            w = [x // content for x in w]
        lead = next(x for x in w if x != 0)
        if lead < 0:
            w = [-x for x in w]
        basis.append(w)

    for w in basis:
        for row in rows:
            if sum(r * x for r, x in zip(row, w)) != 0:
                raise AssertionError("kernel vector not orthogonal to input")
    bound_log2 = Fraction(gram_det.bit_length(), 2)
    return KernelBasisResult(basis=basis, gram_det=gram_det, entry_bound_log2=bound_log2)


@dataclass(frozen=True)
class CharPolyResult:
    coefficients: Tuple[Fraction, ...]  # ascending, degree d monic
    numerator_bound: int
    denominator_bound: int

    @property
    def bit_size_bound(self) -> int:
        return self.numerator_bound.bit_length() + self.denominator_bound.bit_length()


def char_poly_with_bound(matrix: Sequence[Sequence[Fraction]]) -> CharPolyResult:
    """Exact characteristic polynomial with provable coefficient size bounds.

    For the denominator-cleared integer matrix C = q*M with max entry H, every
    coefficient of det(xI - C) is a binomial-weighted sum of minors, hence
    bounded by d! * max(1,H)^d * d^(d/2); coefficients of det(xI - M) then
    have numerator at most that and denominator dividing q^d. Both bounds are
    asserted against the exact output.
    """
    d = len(matrix)
    if any(len(row) != d for row in matrix):
        raise ValueError("matrix must be square")
    rational = [[Fraction(x) for x in row] for row in matrix]
    q = 1
    for row in rational:
        for x in row:
            q = math.lcm(q, x.denominator)
    h = max((abs(int(x * q)) for row in rational for x in row), default=0)
    # isqrt rounds down, so add one to keep d^(d/2) an upper bound
    num_bound = math.factorial(d) * max(1, h) ** d * (math.isqrt(d ** d) + 1)
    den_bound = q ** d

    coeffs = charpoly_faddeev(rational)
    for c in coeffs:
        if abs(c.numerator) > num_bound or c.denominator > den_bound:
            raise AssertionError("characteristic coefficient exceeded its size bound")
    return CharPolyResult(
        coefficients=tuple(coeffs),
        numerator_bound=num_bound,
        denominator_bound=den_bound,
    )
