"""Effective bounds on where an exponential-polynomial sum can vanish.

The chain has three layers. At the bottom sit the classical lower bounds
for linear forms in logarithms (matveev_bound for a complex embedding,
yu_bound for a finite place) and a small exact geometry result about the
distance between two circles. The middle layer turns those into gap bounds
for sums of two or three exponential terms: past an explicit threshold the
sum is at least the dominant root's power times exp(-C (1 + log n)). The
top layer, mstv_zero_bound, plays the gap of the dominant block against
the decay of the remaining terms and returns an integer N such that the
sequence cannot vanish at any n > N; orbit_zero_bound composes that with
the orbit-to-sequence bridge and the few-dominant-term search.

Every magnitude is handled on the logarithmic scale as an exact rational,
rounded outward where a transcendental constant enters, so the returned
bounds are sound whatever their size. Bounds labelled semi-explicit rest
on the linear-forms machinery plus implementer-chosen absorption slacks;
each slack is recorded in the accompanying notes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from .algebraic import UnsupportedInstance
from .heights import height_of_element
from .intervals import (
    ComplexBox,
    RatInterval,
    exp_interval,
    log_interval,
    pi_interval,
    sqrt_interval,
)
from .lds import (
    DEFAULT_SPLITTING_CAP,
    ExpPolyForm,
    LDSInstance,
    TermGroup,
    exp_poly_form,
    orbit_to_simskolem,
)
from .mstv import (
    ARCHIMEDEAN_DOMINANT_LIMIT,
    CoefficientMatrix,
    MSTVCertificate,
    NONARCHIMEDEAN_DOMINANT_LIMIT,
    recombine,
    search_mstv_combination,
    verify_certificate,
)
from .numberfield import FieldElement, NumberField
from .places import (
    ArchimedeanPlace,
    PadicPlace,
    Place,
    _compare_modulus_handles,
    _modulus_squared_handles,
    _ratio_is_root_of_unity,
    archimedean_place_at,
    dominance_profile,
    find_minority_place,
)

Rat = Union[int, Fraction]

# leading rational factors of the finite-place linear-forms constant
YU_A = 32
YU_C = 712

# any rational upper bound for pi works; this one errs by under 3e-7
PI_UPPER = Fraction(355, 113)

DEFAULT_BOUND_PRECISION = 96
MAX_REFINE_PRECISION = 1 << 16

MODE_FULL = "fully-explicit"
MODE_SEMI = "semi-explicit"


# ---------------------------------------------------------------------------
# Small exact-arithmetic helpers


def _log_point(x: Rat, precision_bits: int) -> RatInterval:
    return log_interval(RatInterval.point(Fraction(x)), precision_bits)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def _least_square_root_at_least(target: Fraction) -> int:
    """Smallest nonnegative integer n with n*n >= target."""
    if target <= 0:
        return 0
    t = math.isqrt(_floor_fraction(target))
    return t if t * t >= target else t + 1


def _approx_str(x: Fraction) -> str:
    """Decimal rendering that survives fractions too large for a float."""
    try:
        return f"{float(x):.6g}"
    except OverflowError:
        bits = x.numerator.bit_length() - x.denominator.bit_length()
        exponent = bits * Fraction(30103, 100000)
        sign = "-" if x < 0 else ""
        return f"{sign}10^{_floor_fraction(abs(exponent))}"


def _place_name(place: Place) -> str:
    if isinstance(place, PadicPlace):
        return f"{place.p}-adic place #{place.block_index}"
    kind = "real" if place.is_real else "complex"
    return f"{kind} embedding #{place.embedding_index}"


def _height_hi(x: FieldElement, precision_bits: int) -> Fraction:
    return height_of_element(x, precision_bits).hi


@dataclass(frozen=True)
class LogAffine:
    """An upper bound of the shape base + slope * log n, for n >= 1.

    Both coefficients are kept nonnegative so that coefficientwise sums
    and maxima stay sound bounds on sums and maxima of the functions.
    """

    base: Fraction
    slope: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "slope", Fraction(self.slope))
        if self.base < 0 or self.slope < 0:
            raise ValueError("log-affine bounds must have nonnegative parts")

    def __add__(self, other: "LogAffine") -> "LogAffine":
        return LogAffine(self.base + other.base, self.slope + other.slope)

    def scale(self, c: Rat) -> "LogAffine":
        return LogAffine(self.base * Fraction(c), self.slope * Fraction(c))

    def max_with(self, other: "LogAffine") -> "LogAffine":
        return LogAffine(
            max(self.base, other.base), max(self.slope, other.slope)
        )

    @staticmethod
    def constant(c: Rat) -> "LogAffine":
        return LogAffine(Fraction(c), Fraction(0))


# ---------------------------------------------------------------------------
# Linear forms in logarithms


@dataclass(frozen=True)
class LinearFormParams:
    """Validated inputs for the linear-forms-in-logarithms bounds.

    sizes[j] must dominate the j-th number's data: at least
    max(degree * height, |principal log|, 0.16) for the complex-embedding
    bound and at least max(height, log prime) for the finite-place bound.
    coeff_bound dominates the absolute values of the integer coefficients
    (at least 3 in the finite-place case). prime selects the finite-place
    variant; leave it None for the complex-embedding one.
    """

    terms: int
    degree: int
    sizes: Tuple[Fraction, ...]
    coeff_bound: Fraction
    prime: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(
            self, "sizes", tuple(Fraction(a) for a in self.sizes)
        )
        object.__setattr__(self, "coeff_bound", Fraction(self.coeff_bound))
        if self.terms < 1:
            raise ValueError("need at least one logarithm")
        if len(self.sizes) != self.terms:
            raise ValueError("need one size parameter per term")
        if self.degree < 1:
            raise ValueError("the degree must be positive")
        if self.prime is None:
            if any(a < Fraction(4, 25) for a in self.sizes):
                raise ValueError("size parameters must be at least 0.16")
            if self.coeff_bound < 1:
                raise ValueError("the coefficient bound must be at least 1")
            return
        if self.prime < 2 or not sympy.isprime(self.prime):
            raise ValueError("the finite-place bound needs a prime")
        if self.coeff_bound < 3:
            raise ValueError("the coefficient bound must be at least 3")
        for a in self.sizes:
            if not _at_least_log(a, self.prime):
                raise ValueError(
                    "size parameters must be at least log of the prime"
                )


def _at_least_log(a: Fraction, p: int) -> bool:
    # a == log p cannot happen for rational a, so the loop resolves
    prec = 64
    while True:
        enc = _log_point(p, prec)
        if a >= enc.hi:
            return True
        if a < enc.lo:
            return False
        prec *= 2


def matveev_bound(
    params: LinearFormParams,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> RatInterval:
    """Certified enclosure of the complex-embedding linear-forms exponent.

    For a nonzero form b_1 log a_1 + ... + b_s log a_s meeting the
    parameter contract, the modulus of the form is at least exp of the
    lower endpoint of the returned enclosure of
    -2^(6s + 20) * degree^2 * sizes_1 ... sizes_s
    * (1 + log degree) * (1 + log coeff_bound).
    """
    if params.prime is not None:
        raise ValueError("finite-place parameters belong to yu_bound")
    product = Fraction(2) ** (6 * params.terms + 20) * params.degree**2
    for a in params.sizes:
        product *= a
    one_log_d = _log_point(params.degree, precision_bits) + 1
    one_log_b = _log_point(params.coeff_bound, precision_bits) + 1
    return -(one_log_d * one_log_b * product)


def _yu_leading_rational(terms: int, degree: int, prime: int) -> Fraction:
    return (
        Fraction(4 * YU_C)
        * Fraction(YU_A) ** terms
        * Fraction(prime, prime - 1) ** terms
        * Fraction(terms + 1) ** (terms + 3)
        * (Fraction(prime) ** degree - 1)
        * Fraction(degree) ** (2 * terms + 2)
    )


def _yu_constant(
    terms: int, degree: int, prime: int, precision_bits: int
) -> RatInterval:
    """Enclosure of the finite-place constant C(terms, degree, prime)."""
    rational = _yu_leading_rational(terms, degree, prime)
    e_power = exp_interval(
        RatInterval.point(Fraction(terms)), precision_bits
    )
    d_log_p = _log_point(prime, precision_bits) * degree
    # the competing branch is log(e^4 (s+1) D) = 4 + log((s+1) D)
    other = _log_point((terms + 1) * degree, precision_bits) + 4
    tail = RatInterval(max(d_log_p.lo, other.lo), max(d_log_p.hi, other.hi))
    return e_power * tail * rational


def yu_bound(
    params: LinearFormParams,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> RatInterval:
    """Certified enclosure of the finite-place valuation bound.

    For a nonzero product a_1^(b_1) ... a_s^(b_s) - 1 of units at a place
    over the prime, the place valuation (normalized so the prime has
    valuation one at worst) is at most the upper endpoint of the returned
    enclosure of C(s, degree, prime) * sizes_1 ... sizes_s * log coeff_bound.
    """
    if params.prime is None:
        raise ValueError("complex-embedding parameters belong to matveev_bound")
    out = _yu_constant(
        params.terms, params.degree, params.prime, precision_bits
    )
    out = out * _log_point(params.coeff_bound, precision_bits)
    product = Fraction(1)
    for a in params.sizes:
        product *= a
    return out * product


def voutier_height_floor(
    degree: int, precision_bits: int = DEFAULT_BOUND_PRECISION
) -> Fraction:
    """Positive rational below the height of any non-torsion number whose
    degree is at most the argument: log 2 for degree one, the classical
    2 / (degree * log(3 degree)^3) floor otherwise."""
    if degree < 1:
        raise ValueError("the degree must be positive")
    if degree == 1:
        return _log_point(2, precision_bits).lo
    cube = _log_point(3 * degree, precision_bits).hi ** 3
    return Fraction(2) / (Fraction(degree) * cube)


# ---------------------------------------------------------------------------
# Distance between two circles


@dataclass(frozen=True)
class CircleCrossing:
    """Upper intersection point of the circles |z| = r0 and |z - 1| = r1.

    The point is real + i * sqrt(imag_squared); the other intersection is
    its mirror image across the real axis.
    """

    real: Fraction
    imag_squared: Fraction

    def box(self, precision_bits: int = DEFAULT_BOUND_PRECISION) -> ComplexBox:
        im = sqrt_interval(
            RatInterval.point(self.imag_squared), precision_bits
        )
        return ComplexBox(RatInterval.point(self.real), im)


@dataclass(frozen=True)
class TwoCirclesBound:
    """Certified lower bound on the distance from the given point of the
    first circle to every point of the second."""

    value: Fraction
    case: str  # "disjoint" | "tangent" | "crossing"
    crossing: Optional[CircleCrossing]


def two_circles_distance(
    rho0: Rat,
    rho1: Rat,
    z0_spec: ComplexBox,
    z1_spec: Optional[ComplexBox] = None,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> TwoCirclesBound:
    """Lower bound on |z0 - z1| for z0 on |z| = rho0 and z1 on |z - 1| = rho1.

    Radii must lie in (0, 1]. When the radii sum below one the circles are
    disjoint and the gap is the constant 1 - rho0 - rho1. When they sum to
    exactly one the circles touch at rho0 and the gap is
    |z0 - rho0|^2 / (2 rho0). Otherwise they cross at a conjugate pair of
    points and the gap is (2/3) (1 + 2 rho0 / Im zeta)^(-1/2) times the
    distance from z0 to the nearer crossing. The bound holds for every z1
    on the second circle; a supplied z1_spec is only checked for membership.
    """
    r0, r1 = Fraction(rho0), Fraction(rho1)
    if not (0 < r0 <= 1 and 0 < r1 <= 1):
        raise ValueError("radii must lie in (0, 1]")
    if not z0_spec.abs_squared().contains(r0 * r0):
        raise ValueError("z0 must lie on the circle of radius rho0 about 0")
    if z1_spec is not None:
        shifted = z1_spec - ComplexBox.point(1)
        if not shifted.abs_squared().contains(r1 * r1):
            raise ValueError("z1 must lie on the circle of radius rho1 about 1")

    if r0 + r1 < 1:
        return TwoCirclesBound(1 - r0 - r1, "disjoint", None)

    if r0 + r1 == 1:
        gap_sq = (z0_spec - ComplexBox.point(r0)).abs_squared()
        near = max(Fraction(0), gap_sq.lo)
        return TwoCirclesBound(near / (2 * r0), "tangent", None)

    real = (1 + r0 * r0 - r1 * r1) / 2
    imag_sq = (
        4 * r0 * r0 * r1 * r1 - (1 - r0 * r0 - r1 * r1) ** 2
    ) / 4
    # crossing circles force ((r0+r1)^2 - 1)(1 - (r0-r1)^2) > 0
    if imag_sq <= 0:
        raise RuntimeError("crossing circles must intersect off the axis")
    crossing = CircleCrossing(real, imag_sq)
    im = sqrt_interval(RatInterval.point(imag_sq), precision_bits)
    factor_sq = RatInterval.point(Fraction(1)) + (
        RatInterval.point(2 * r0) / im
    )
    scale = Fraction(2, 3) / sqrt_interval(factor_sq, precision_bits).hi
    zbox = crossing.box(precision_bits)
    d_up = sqrt_interval((z0_spec - zbox).abs_squared(), precision_bits).lo
    d_down = sqrt_interval(
        (z0_spec - zbox.conjugate()).abs_squared(), precision_bits
    ).lo
    near = max(Fraction(0), min(d_up, d_down))
    return TwoCirclesBound(scale * near, "crossing", crossing)


# ---------------------------------------------------------------------------
# Gap bounds for two-term sums


@dataclass(frozen=True)
class GapBound:
    """Lower bound |sum(n)| >= |reference root|^n * exp(-constant (1+log n)).

    Valid at the recorded place for every integer n > threshold at which
    the sum does not vanish; the reference root is the first one handed to
    the producing operation. notes record each implementer-chosen constant
    entering a semi-explicit bound.
    """

    place: Place
    threshold: int
    constant: Fraction
    mode: str
    notes: Tuple[str, ...]


def _absorption_notes() -> List[str]:
    return [
        "pi bounded above by 355/113",
        "size parameters padded to degree*height + 4 to cover |log| <= "
        "degree*height + pi and the 0.16 floor",
        "coefficient bound n + 2 absorbed via 1 + log(n+2) <= "
        "(1 + log 3)(1 + log n)",
        "branch |z - 1| > 1/2 contributes log 2; the other branch uses "
        "|log z| <= (2 log 2)|z - 1| and contributes log(2 log 2)",
    ]


def _arch_pair_constant(
    degree: int,
    gamma_height: LogAffine,
    mu_height: Fraction,
    precision_bits: int,
) -> Tuple[LogAffine, List[str]]:
    """Affine C with |gamma(n) mu^n - 1| >= exp(-C(n)(1 + log n)).

    Valid at a complex embedding for every n >= 1 where the quantity is
    nonzero, provided gamma(n) and mu lie in a field of the given degree,
    h(gamma(n)) obeys the affine bound, and h(mu) <= mu_height.
    """
    log2 = _log_point(2, precision_bits).hi
    log3_plus = _log_point(3, precision_bits).hi + 1
    log_d_plus = _log_point(degree, precision_bits).hi + 1
    two_log2 = log_interval(
        _log_point(2, precision_bits) * 2, precision_bits
    ).hi
    size_mu = Fraction(degree) * mu_height + 4
    size_one = PI_UPPER
    lead = (
        Fraction(2) ** 38
        * Fraction(degree) ** 2
        * log_d_plus
        * size_mu
        * size_one
        * log3_plus
    )
    size_gamma = gamma_height.scale(degree) + LogAffine.constant(4)
    absorbed = size_gamma.scale(lead)
    constant = absorbed + LogAffine.constant(log2 + two_log2)
    return constant, _absorption_notes()


def _padic_pair_constant(
    place: PadicPlace,
    gamma_height: LogAffine,
    mu_height: Fraction,
    precision_bits: int,
) -> Tuple[LogAffine, List[str]]:
    """Affine C with |gamma(n) mu^n - 1| at the place >= exp(-C(n)(1+log n)).

    Needs mu a unit at the place; indices where gamma(n) is not a unit
    fall into the trivial branch, the rest go through the finite-place
    linear-forms bound with coefficient bound max(n, 3).
    """
    p = place.p
    log_p = _log_point(p, precision_bits)
    cyu = _yu_constant(2, place.field.degree, p, precision_bits).hi
    size_gamma = LogAffine(
        max(gamma_height.base, log_p.hi), gamma_height.slope
    )
    size_mu = max(mu_height, log_p.hi)
    lead = log_p.hi * cyu * size_mu * Fraction(11, 10)
    constant = size_gamma.scale(lead)
    notes = [
        "non-unit coefficient ratios fall into the trivial branch of "
        "valuation at most zero",
        "coefficient bound max(n, 3) absorbed via log max(n, 3) <= "
        "1.1 (1 + log n)",
        "valuation bound used unnormalized, which only weakens it",
    ]
    return constant, notes


def _require_pair_contract(
    coeff1: FieldElement,
    coeff2: FieldElement,
    root1: FieldElement,
    root2: FieldElement,
) -> None:
    if root1.is_zero() or root2.is_zero():
        raise ValueError("roots must be nonzero")
    if coeff1.is_zero():
        raise ValueError("the reference coefficient must be nonzero")
    if not coeff2.is_zero() and _ratio_is_root_of_unity(root2, root1):
        raise ValueError("the ratio of the roots is a root of unity")


def two_term_gap(
    coeff1: FieldElement,
    coeff2: FieldElement,
    root1: FieldElement,
    root2: FieldElement,
    place: Place,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> GapBound:
    """Gap bound for coeff1 * root1^n + coeff2 * root2^n at one place.

    The reference root of the returned bound is root1. The ratio of the
    roots must not be a root of unity (the pair belongs to a degenerate
    sequence otherwise); coeff1 must be nonzero. coeff2 may be zero, in
    which case the bound is the plain height bound on coeff1.
    """
    _require_pair_contract(coeff1, coeff2, root1, root2)
    field = coeff1.field

    if coeff2.is_zero():
        c = Fraction(field.degree) * _height_hi(coeff1, precision_bits)
        return GapBound(
            place,
            0,
            c,
            MODE_FULL,
            ("single term; the constant is degree * height of the coefficient",),
        )

    gamma = coeff2 / coeff1
    mu = root2 / root1
    h_gamma = _height_hi(gamma, precision_bits)
    h_mu = _height_hi(mu, precision_bits)

    if isinstance(place, ArchimedeanPlace):
        pair, notes = _arch_pair_constant(
            field.degree, LogAffine.constant(h_gamma), h_mu, precision_bits
        )
        lead = Fraction(field.degree) * _height_hi(coeff1, precision_bits)
        return GapBound(
            place,
            0,
            lead + pair.base,
            MODE_SEMI,
            tuple(notes),
        )

    v_gamma = place.valuation(gamma)
    v_mu = place.valuation(mu)
    log_p_hi = _log_point(place.p, precision_bits).hi
    lead = max(Fraction(0), place.valuation(coeff1)) * log_p_hi

    if v_mu != 0:
        # |gamma mu^n| = 1 can happen at one index only; past it the
        # ultrametric inequality is immediate
        crossing = -v_gamma / v_mu
        threshold = (
            _ceil_fraction(crossing)
            if crossing.denominator == 1 and crossing >= 0
            else 0
        )
        return GapBound(
            place,
            int(threshold),
            lead,
            MODE_FULL,
            ("root valuations differ; single possible crossing excluded",),
        )
    if v_gamma != 0:
        return GapBound(
            place,
            0,
            lead,
            MODE_FULL,
            ("coefficient ratio is never a unit, so the sum never balances",),
        )

    pair, notes = _padic_pair_constant(
        place, LogAffine.constant(h_gamma), h_mu, precision_bits
    )
    return GapBound(place, 0, lead + pair.base, MODE_SEMI, tuple(notes))


# ---------------------------------------------------------------------------
# Three equal-modulus terms: vanishing threshold via a minority place


@dataclass(frozen=True)
class ThresholdBound:
    """Every index where the three-term sum vanishes is at most threshold."""

    threshold: int
    place: Place
    witness: str
    mode: str
    notes: Tuple[str, ...]


def _refine_log_modulus_gap(
    place: ArchimedeanPlace,
    larger: FieldElement,
    smaller: Sequence[FieldElement],
    precision_bits: int,
) -> Fraction:
    """Certified positive lower bound on min log|larger / s| at the place."""
    prec = precision_bits
    while prec <= MAX_REFINE_PRECISION:
        big = place.log_modulus(larger, prec).lo
        worst = min(big - place.log_modulus(x, prec).hi for x in smaller)
        if worst > 0:
            return worst
        prec *= 2
    raise RuntimeError("failed to certify the dominance gap")


def three_term_zero_threshold(
    coeffs: Sequence[FieldElement],
    roots: Sequence[FieldElement],
    distinguished_embedding: int = 0,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> ThresholdBound:
    """Last index where a three-term equal-modulus sum can vanish.

    The three roots must share their modulus at the distinguished
    embedding, with no ratio a root of unity, and the coefficients must
    be nonzero. Some place then sees exactly one dominant root, and a
    vanishing sum forces the dominant term to balance the other two,
    which caps n by a ratio of certified logarithms.
    """
    if len(coeffs) != 3 or len(roots) != 3:
        raise ValueError("need exactly three terms")
    if any(c.is_zero() for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    field = roots[0].field
    minority = find_minority_place(
        field, roots, distinguished_embedding
    )
    place = minority.place
    dominant = minority.profile.dominant_roots
    if len(dominant) != 1:
        raise RuntimeError("minority place must isolate one dominant root")
    d = dominant[0]
    rest = [i for i in range(3) if i != d]

    if isinstance(place, PadicPlace):
        vals = minority.profile.valuations
        gap = min(vals[i] for i in rest) - vals[d]
        excess = place.valuation(coeffs[d]) - min(
            place.valuation(coeffs[i]) for i in rest
        )
        threshold = max(0, _ceil_fraction(max(Fraction(0), excess) / gap))
        return ThresholdBound(
            threshold,
            place,
            minority.witness,
            MODE_FULL,
            ("ultrametric balance: n * valuation gap <= coefficient excess",),
        )

    gap = _refine_log_modulus_gap(
        place, roots[d], [roots[i] for i in rest], precision_bits
    )
    log2 = _log_point(2, precision_bits).hi
    others = max(
        place.log_modulus(coeffs[i], precision_bits).hi for i in rest
    )
    numer = log2 + others - place.log_modulus(coeffs[d], precision_bits).lo
    threshold = max(0, _ceil_fraction(max(Fraction(0), numer) / gap))
    return ThresholdBound(
        threshold,
        place,
        minority.witness,
        MODE_FULL,
        ("triangle inequality against the certified modulus gap",),
    )


# ---------------------------------------------------------------------------
# Three equal-modulus terms: gap bound through the circle geometry


def _field_real_sign(
    x: FieldElement, embedding_index: int
) -> int:
    """Sign of a field element known to be real at the embedding."""
    if x.is_zero():
        return 0
    prec = 64
    while prec <= MAX_REFINE_PRECISION:
        re = x.embed(embedding_index, prec).re
        if re.is_positive():
            return 1
        if re.is_negative():
            return -1
        prec *= 2
    raise RuntimeError("sign of a nonzero element failed to resolve")


def _embed_real(
    x: FieldElement, embedding_index: int, precision_bits: int
) -> RatInterval:
    return x.embed(embedding_index, precision_bits).re


def _modulus_ratio_squares(
    field: NumberField,
    numerators: Sequence[FieldElement],
    denominator: FieldElement,
    embedding_index: int,
) -> List[FieldElement]:
    """|num/den|^2 at the embedding as exact field elements."""
    tau = field.conjugation_automorphism(embedding_index)
    out = []
    for num in numerators:
        ratio = num / denominator
        out.append(ratio * ratio.apply_automorphism(tau))
    return out


def _voutier_power_threshold(
    value_height: Fraction,
    base_ratio: FieldElement,
    precision_bits: int,
) -> int:
    """Indices with base_ratio^n equal to a fixed value stop after this.

    Uses the height floor for the non-torsion base together with the
    height of the target value: a power relation forces
    n * h(base) = h(value).
    """
    field = base_ratio.field
    floor = voutier_height_floor(field.degree, precision_bits)
    enc = height_of_element(base_ratio, precision_bits)
    floor = max(floor, enc.lo)
    return max(0, _ceil_fraction(value_height / floor))


def three_term_gap(
    coeffs: Sequence[FieldElement],
    roots: Sequence[FieldElement],
    place: ArchimedeanPlace,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> GapBound:
    """Gap bound for a three-term sum whose roots share their modulus.

    At the given embedding the sum factors through a point moving on the
    circle of radius |second coeff / largest coeff| against the circle of
    radius |third coeff / largest coeff| about 1, and the two-circles
    geometry splits into three exact cases on the field elements carrying
    the squared radii. The reference root of the bound is the one paired
    with the largest coefficient. Needs the field closed under conjugation
    at the embedding so the squared radii stay in the field.
    """
    if len(coeffs) != 3 or len(roots) != 3:
        raise ValueError("need exactly three terms")
    if any(c.is_zero() for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    if any(r.is_zero() for r in roots):
        raise ValueError("roots must be nonzero")
    if not isinstance(place, ArchimedeanPlace):
        raise ValueError("the three-term gap works at a complex embedding")
    field = roots[0].field
    profile = dominance_profile(field, roots, place)
    if profile.dominant_root_count != 3:
        raise ValueError("the roots must share their modulus at the place")
    for i in range(3):
        for j in range(i + 1, 3):
            if _ratio_is_root_of_unity(roots[i], roots[j]):
                raise ValueError("a ratio of the roots is a root of unity")

    idx = place.embedding_index
    handles = _modulus_squared_handles(field, list(coeffs), idx)
    lead = 0
    for i in (1, 2):
        if _compare_modulus_handles(handles[i], handles[lead]) > 0:
            lead = i
    others = [i for i in range(3) if i != lead]
    a1, a2, a3 = coeffs[lead], coeffs[others[0]], coeffs[others[1]]
    mu = roots[others[0]] / roots[lead]
    degree = field.degree

    u, w = _modulus_ratio_squares(field, [a2, a3], a1, idx)
    sigma = field.one() + u - w
    t = sigma * sigma - u * field.from_fraction(Fraction(4))
    t_sign = _field_real_sign(t, idx)

    lead_height = Fraction(degree) * _height_hi(a1, precision_bits)
    gamma = -(a2 / a1)
    h_gamma = _height_hi(gamma, precision_bits)
    h_mu = _height_hi(mu, precision_bits)
    log2 = _log_point(2, precision_bits).hi
    # the radii stay at most one, so -log rho0 sits below degree*h(u)/2
    rho_penalty = Fraction(degree) * _height_hi(u, precision_bits) / 2

    if t_sign > 0:
        # disjoint circles: constant gap 1 - rho0 - rho1
        prec = precision_bits
        while True:
            r0 = sqrt_interval(_embed_real(u, idx, prec).max_with(0), prec)
            r1 = sqrt_interval(_embed_real(w, idx, prec).max_with(0), prec)
            gap_iv = (RatInterval.point(1) - r0) - r1
            if gap_iv.is_positive():
                break
            prec *= 2
            if prec > MAX_REFINE_PRECISION:
                raise RuntimeError("failed to certify the circle gap")
        penalty = max(
            Fraction(0), -log_interval(gap_iv, precision_bits).lo
        )
        return GapBound(
            place,
            0,
            lead_height + penalty,
            MODE_FULL,
            ("radii sum below one; the circles stay apart by a constant",),
        )

    if t_sign == 0:
        # tangent circles: the gap is quadratic in the distance to the
        # touching point, itself a two-term quantity over a degree-2 step
        pair, notes = _arch_pair_constant(
            2 * degree,
            LogAffine.constant(
                h_gamma + _height_hi(u, precision_bits) / 2
            ),
            h_mu,
            precision_bits,
        )
        constant = lead_height + log2 + 2 * (pair.base + rho_penalty)
        value_height = h_gamma + _height_hi(u, precision_bits) / 2
        threshold = _voutier_power_threshold(
            value_height, mu, precision_bits
        )
        notes = notes + [
            "tangency squares the crossing distance and divides by "
            "2 rho0 >= 2 rho0^2, absorbed as log 2 plus twice the "
            "radius penalty",
        ]
        return GapBound(
            place, threshold, constant, MODE_SEMI, tuple(notes)
        )

    # crossing circles: measure the distance to the nearer intersection
    h_sigma = _height_hi(sigma, precision_bits)
    h_t = _height_hi(t, precision_bits)
    zeta_height = h_sigma + h_t / 2 + 2 * log2
    pair, notes = _arch_pair_constant(
        2 * degree,
        LogAffine.constant(h_gamma + zeta_height),
        h_mu,
        precision_bits,
    )
    prec = precision_bits
    while True:
        t_iv = _embed_real(t, idx, prec)
        if t_iv.is_negative():
            break
        prec *= 2
        if prec > MAX_REFINE_PRECISION:
            raise RuntimeError("failed to certify the crossing geometry")
    im_zeta = sqrt_interval(-t_iv, prec) * Fraction(1, 2)
    r0 = sqrt_interval(_embed_real(u, idx, prec).max_with(0), prec)
    factor_sq = RatInterval.point(Fraction(1)) + (r0 * 2) / im_zeta
    scale_penalty = max(
        Fraction(0),
        log_interval(
            sqrt_interval(factor_sq, prec) * Fraction(3, 2), prec
        ).hi,
    )
    constant = lead_height + scale_penalty + pair.base + rho_penalty
    threshold = _voutier_power_threshold(
        h_gamma + zeta_height, mu, precision_bits
    )
    notes = notes + [
        "crossing factor (2/3)(1 + 2 rho0 / Im zeta)^(-1/2) absorbed "
        "through certified enclosures",
    ]
    return GapBound(place, threshold, constant, MODE_SEMI, tuple(notes))


# ---------------------------------------------------------------------------
# Slack solver for n * gap > quadratic in log n


def _slack_threshold(
    gap: Fraction, q0: Fraction, q1: Fraction, q2: Fraction
) -> int:
    """Least N with n * gap > q0 + q1 log n + q2 (log n)^2 for all n > N.

    Splits the right side into thirds and uses log n <= 2 n^(1/3) (valid
    for every n >= 1), so the k-th piece needs n^((3-k)/3) to reach
    3 * 2^k * q_k / gap; strictness comes from evaluating past N.
    """
    if gap <= 0:
        raise ValueError("the separation must be positive")
    best = 0
    for k, q in enumerate((q0, q1, q2)):
        if q <= 0:
            continue
        x = Fraction(3) * Fraction(2) ** k * q / gap
        if k == 0:
            need = _ceil_fraction(x)
        elif k == 1:
            need = _least_square_root_at_least(x**3)
        else:
            need = _ceil_fraction(x**3)
        best = max(best, need)
    return best


# ---------------------------------------------------------------------------
# Zero bound for a sequence in exponential-polynomial form


@dataclass(frozen=True)
class BoundComponent:
    """One named ingredient of a zero bound, for audit and display."""

    name: str
    value: str
    note: str = ""


@dataclass(frozen=True)
class ZeroBound:
    """All zeros of the sequence happen at indices no larger than value."""

    value: int
    mode: str
    place: Place
    provenance: Tuple[BoundComponent, ...]

    def describe(self, digit_cap: int = 40) -> str:
        text = str(self.value)
        if len(text) > digit_cap:
            text = f"{text[0]}.{text[1:13]}... * 10^{len(text) - 1}"
        lines = [f"zeros only at n <= {text} [{self.mode}]"]
        for c in self.provenance:
            note = f" ({c.note})" if c.note else ""
            lines.append(f"  {c.name}: {c.value}{note}")
        return "\n".join(lines)


def _group_poly_at(group: TermGroup, n: int) -> FieldElement:
    field = group.root.field
    total = field.zero()
    npow = field.one()
    n_elt = field.from_fraction(Fraction(n))
    for c in group.coefficients:
        total = total + c * npow
        npow = npow * n_elt
    return total


def _integer_zeros(group: TermGroup) -> List[int]:
    """Nonnegative integers where the group's polynomial part vanishes."""
    coeffs = group.coefficients
    width = max((len(c.residue) for c in coeffs), default=0)
    if width == 0:
        raise ValueError("the polynomial part vanishes identically")
    col = None
    for k in range(width):
        cand = [
            c.residue[k] if k < len(c.residue) else Fraction(0)
            for c in coeffs
        ]
        if any(cand):
            col = cand
            break
    if col is None:
        raise ValueError("the polynomial part vanishes identically")
    symbol = sympy.Symbol("n")
    poly = sympy.Poly(
        [sympy.Rational(c) for c in reversed(col)], symbol, domain="QQ"
    )
    out = []
    for root in poly.ground_roots():
        q = sympy.Rational(root)
        if q.q != 1 or q < 0:
            continue
        n0 = int(q)
        if _group_poly_at(group, n0).is_zero():
            out.append(n0)
    return sorted(out)


def _group_height_affine(
    group: TermGroup, precision_bits: int
) -> LogAffine:
    """Affine bound on the height of the group's polynomial part at n."""
    active = [j for j, c in enumerate(group.coefficients) if not c.is_zero()]
    if not active:
        raise ValueError("the polynomial part vanishes identically")
    delta = max(active)
    hmax = max(
        _height_hi(group.coefficients[j], precision_bits) for j in active
    )
    base = hmax
    if delta:
        base += _log_point(delta + 1, precision_bits).hi
    return LogAffine(base, Fraction(delta))


def _dominance_gap(
    field: NumberField,
    place: Place,
    dominant_root: FieldElement,
    tail_roots: Sequence[FieldElement],
    precision_bits: int,
) -> Tuple[Fraction, List[BoundComponent]]:
    """Certified log-scale separation between the dominant modulus and the
    largest tail modulus, with the linear-forms floor recorded alongside."""
    parts: List[BoundComponent] = []
    if isinstance(place, PadicPlace):
        v_dom = place.valuation(dominant_root)
        v_next = min(place.valuation(x) for x in tail_roots)
        delta = v_next - v_dom
        gap = _log_point(place.p, precision_bits).lo * delta
        # a nonzero valuation difference is at least 1 / ramification
        floor = _log_point(place.p, precision_bits).lo / place.e
        parts.append(
            BoundComponent(
                "separation",
                _approx_str(gap),
                "valuation difference; discreteness floor "
                f"{_approx_str(floor)}",
            )
        )
        return max(gap, floor), parts

    gap = _refine_log_modulus_gap(
        place, dominant_root, tail_roots, precision_bits
    )
    floor, floor_note = _arch_separation_floor(
        field, dominant_root, tail_roots, precision_bits
    )
    parts.append(
        BoundComponent("separation", _approx_str(gap), floor_note)
    )
    return max(gap, floor), parts


def _arch_separation_floor(
    field: NumberField,
    dominant_root: FieldElement,
    tail_roots: Sequence[FieldElement],
    precision_bits: int,
) -> Tuple[Fraction, str]:
    """Linear-forms floor under log|dominant / tail| at a complex embedding.

    Needs the squared moduli inside the field; gives up (floor zero) when
    the field is not closed under conjugation or the exponent is too large
    to exponentiate, recording which.
    """
    degree = field.degree
    worst = Fraction(0)
    for x in tail_roots:
        h_dom = _height_hi(dominant_root, precision_bits)
        h_x = _height_hi(x, precision_bits)
        sizes = (
            2 * Fraction(degree) * h_dom + 4,
            2 * Fraction(degree) * h_x + 4,
        )
        params = LinearFormParams(2, degree, sizes, Fraction(1))
        exponent = matveev_bound(params, precision_bits).lo
        worst = min(worst, exponent) if worst else exponent
    if worst < -256:
        return Fraction(0), (
            "linear-forms floor below exp(-256), kept symbolic: "
            f"exp({_approx_str(worst)})/2"
        )
    value = exp_interval(
        RatInterval.point(worst), precision_bits
    ).lo / 2
    return value, f"linear-forms floor {_approx_str(value)}"


def _dominant_block(
    form: ExpPolyForm,
    place: Place,
    groups: Sequence[TermGroup],
    precision_bits: int,
) -> Tuple[LogAffine, int, str, List[BoundComponent]]:
    """Gap data for the dominant part: affine constant, threshold, mode."""
    field = form.field
    degree = field.degree
    r = len(groups)
    parts: List[BoundComponent] = []

    if r == 1:
        aff = _group_height_affine(groups[0], precision_bits).scale(degree)
        zeros = _integer_zeros(groups[0])
        threshold = max(zeros, default=0)
        parts.append(
            BoundComponent(
                "dominant block",
                "single root",
                f"polynomial zeros at {zeros}" if zeros else "",
            )
        )
        return aff, threshold, MODE_FULL, parts

    if r == 2:
        g1, g2 = groups
        aff1 = _group_height_affine(g1, precision_bits)
        aff2 = _group_height_affine(g2, precision_bits)
        mu = g2.root / g1.root
        h_mu = _height_hi(mu, precision_bits)
        ratio = aff1 + aff2
        if isinstance(place, ArchimedeanPlace):
            pair, notes = _arch_pair_constant(
                degree, ratio, h_mu, precision_bits
            )
        else:
            pair, notes = _padic_pair_constant(
                place, ratio, h_mu, precision_bits
            )
        constant = aff1.scale(degree) + pair
        floor = voutier_height_floor(degree, precision_bits)
        floor = max(floor, height_of_element(mu, precision_bits).lo)
        balance = _slack_threshold(floor, ratio.base, ratio.slope, Fraction(0))
        zeros = sorted(set(_integer_zeros(g1)) | set(_integer_zeros(g2)))
        threshold = max([balance] + zeros)
        parts.append(
            BoundComponent(
                "dominant block",
                "two roots",
                f"balance threshold {balance}; polynomial zeros {zeros}",
            )
        )
        for note in notes:
            parts.append(BoundComponent("chosen constant", "", note))
        return constant, threshold, MODE_SEMI, parts

    # three dominant roots: only the constant-coefficient class is covered
    for g in groups:
        if len(g.coefficients) != 1 or g.coefficients[0].is_zero():
            raise UnsupportedInstance(
                "three dominant roots with polynomial coefficients fall "
                "outside the certified gap classes"
            )
    coeffs = [g.coefficients[0] for g in groups]
    roots = [g.root for g in groups]
    gap = three_term_gap(coeffs, roots, place, precision_bits)
    parts.append(
        BoundComponent(
            "dominant block",
            "three roots",
            f"circle case threshold {gap.threshold}",
        )
    )
    for note in gap.notes:
        parts.append(BoundComponent("chosen constant", "", note))
    return (
        LogAffine.constant(gap.constant),
        gap.threshold,
        gap.mode,
        parts,
    )


def _no_tail_threshold(
    form: ExpPolyForm,
    place: Place,
    groups: Sequence[TermGroup],
    precision_bits: int,
) -> Tuple[int, str, List[BoundComponent]]:
    """Zero threshold when every active root is dominant at the place."""
    field = form.field
    parts: List[BoundComponent] = []
    r = len(groups)

    if r == 1:
        zeros = _integer_zeros(groups[0])
        threshold = max(zeros, default=0)
        parts.append(
            BoundComponent(
                "whole sum", "single root", f"polynomial zeros {zeros}"
            )
        )
        return threshold, MODE_FULL, parts

    if r == 2:
        g1, g2 = groups
        mu = g1.root / g2.root
        ratio = _group_height_affine(g1, precision_bits) + (
            _group_height_affine(g2, precision_bits)
        )
        floor = voutier_height_floor(field.degree, precision_bits)
        floor = max(floor, height_of_element(mu, precision_bits).lo)
        balance = _slack_threshold(
            floor, ratio.base, ratio.slope, Fraction(0)
        )
        zeros = sorted(set(_integer_zeros(g1)) & set(_integer_zeros(g2)))
        threshold = max([balance] + zeros)
        parts.append(
            BoundComponent(
                "whole sum",
                "two roots",
                f"height balance threshold {balance}; common zeros {zeros}",
            )
        )
        return threshold, MODE_FULL, parts

    for g in groups:
        if len(g.coefficients) != 1 or g.coefficients[0].is_zero():
            raise UnsupportedInstance(
                "three equal-modulus roots with polynomial coefficients "
                "fall outside the certified gap classes"
            )
    coeffs = [g.coefficients[0] for g in groups]
    roots = [g.root for g in groups]
    if isinstance(place, PadicPlace):
        raise UnsupportedInstance(
            "three dominant roots at a finite place exceed the "
            "certified class"
        )
    thr = three_term_zero_threshold(
        coeffs,
        roots,
        distinguished_embedding=place.embedding_index,
        precision_bits=precision_bits,
    )
    parts.append(
        BoundComponent(
            "whole sum",
            "three roots",
            f"minority place {_place_name(thr.place)} ({thr.witness})",
        )
    )
    return thr.threshold, thr.mode, parts


def mstv_zero_bound(
    form: ExpPolyForm,
    place: Place,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> ZeroBound:
    """Explicit index past which the sequence's closed form cannot vanish.

    The place must keep the number of dominant roots within the certified
    classes (three at a complex embedding, two at a finite place, and the
    three-root case only with constant coefficients). The form must be
    nondegenerate: no ratio of distinct active roots a root of unity.
    """
    active = [
        g
        for g in form.groups
        if any(not c.is_zero() for c in g.coefficients)
    ]
    if not active:
        raise ValueError("the closed form vanishes identically")
    for g in active:
        if g.root.is_zero():
            raise ValueError("roots must be nonzero")
    for i in range(len(active)):
        for j in range(i + 1, len(active)):
            if _ratio_is_root_of_unity(active[i].root, active[j].root):
                raise ValueError(
                    "a ratio of active roots is a root of unity; reduce "
                    "the instance to its stable part first"
                )

    field = form.field
    roots = [g.root for g in active]
    counts = [len(g.coefficients) for g in active]
    profile = dominance_profile(field, roots, place, counts)
    limit = (
        ARCHIMEDEAN_DOMINANT_LIMIT
        if isinstance(place, ArchimedeanPlace)
        else NONARCHIMEDEAN_DOMINANT_LIMIT
    )
    r = profile.dominant_root_count
    if r > limit and r != len(active):
        raise ValueError(
            f"{r} dominant roots exceed the certified class at this place"
        )

    dominant = [active[i] for i in profile.dominant_roots]
    tail = [
        active[i]
        for i in range(len(active))
        if i not in set(profile.dominant_roots)
    ]
    parts: List[BoundComponent] = [
        BoundComponent("place", _place_name(place)),
        BoundComponent(
            "dominant roots", f"{r} of {len(active)} active"
        ),
    ]

    if not tail:
        if r > limit:
            # everything dominant but too wide for the gap classes
            raise ValueError(
                f"{r} dominant roots exceed the certified class at this "
                "place"
            )
        threshold, mode, sub = _no_tail_threshold(
            form, place, dominant, precision_bits
        )
        value = max(threshold, 0)
        parts.extend(sub)
        parts.append(
            BoundComponent("slack", "none", "no tail terms to outgrow")
        )
        return ZeroBound(value, mode, place, tuple(parts))

    constant, dom_threshold, mode, sub = _dominant_block(
        form, place, dominant, precision_bits
    )
    parts.extend(sub)

    gap, gap_parts = _dominance_gap(
        field,
        place,
        dominant[0].root,
        [g.root for g in tail],
        precision_bits,
    )
    parts.extend(gap_parts)

    tail_aff = None
    for g in tail:
        aff = _group_height_affine(g, precision_bits).scale(field.degree)
        tail_aff = aff if tail_aff is None else tail_aff.max_with(aff)
    tail_aff = tail_aff + LogAffine.constant(
        _log_point(len(tail), precision_bits).hi if len(tail) > 1 else 0
    )
    parts.append(
        BoundComponent(
            "tail",
            f"{len(tail)} groups",
            f"height growth {_approx_str(tail_aff.base)} + "
            f"{_approx_str(tail_aff.slope)} log n",
        )
    )

    # a zero forces gap * n <= constant(n)(1 + log n) + tail(n)
    q0 = constant.base + tail_aff.base
    q1 = constant.base + constant.slope + tail_aff.slope
    q2 = constant.slope
    main = _slack_threshold(gap, q0, q1, q2)
    parts.append(
        BoundComponent(
            "slack",
            str(main),
            "log n <= 2 n^(1/3) splits the quadratic into thirds",
        )
    )
    value = max(main, dom_threshold, 0)
    return ZeroBound(value, mode, place, tuple(parts))


# ---------------------------------------------------------------------------
# End-to-end bound for orbit instances


def _combined_form(
    matrix: CoefficientMatrix, beta: Sequence[FieldElement]
) -> ExpPolyForm:
    vec = recombine(matrix, beta)
    groups = []
    start = 0
    for root, mult in zip(matrix.roots, matrix.multiplicities):
        groups.append(TermGroup(root, tuple(vec[start : start + mult])))
        start += mult
    return ExpPolyForm(
        field=matrix.field,
        distinguished_embedding=matrix.distinguished_embedding,
        groups=tuple(groups),
        height_checks=(),
    )


def orbit_zero_bound(
    instance: LDSInstance,
    degree_cap: int = DEFAULT_SPLITTING_CAP,
    precision_bits: int = DEFAULT_BOUND_PRECISION,
) -> ZeroBound:
    """Explicit index past which the orbit cannot meet the target subspace.

    Runs the orbit-to-sequence bridge, searches for a combination with few
    dominant terms, re-verifies the certificate, and bounds the zeros of
    the combined sequence; the hitting set of the instance sits inside
    those zeros, so the bound transfers. Raises ValueError when the search
    proves no such combination exists (no bound of this kind applies).
    """
    bundle = orbit_to_simskolem(instance)
    outcome = search_mstv_combination(bundle, degree_cap=degree_cap)
    if not isinstance(outcome, MSTVCertificate):
        raise ValueError(
            "the instance admits no combination with few dominant terms; "
            "this bound class does not apply"
        )
    forms = exp_poly_form(bundle, degree_cap)
    matrix = CoefficientMatrix.from_forms(forms)
    verify_certificate(matrix, outcome)
    combined = _combined_form(matrix, outcome.beta)

    place = outcome.place
    active = [
        g
        for g in combined.groups
        if any(not c.is_zero() for c in g.coefficients)
    ]
    profile = dominance_profile(
        matrix.field,
        [g.root for g in active],
        place,
        [len(g.coefficients) for g in active],
    )
    if (
        isinstance(place, PadicPlace)
        and profile.dominant_root_count > NONARCHIMEDEAN_DOMINANT_LIMIT
    ):
        # low-order certificates may sit at a finite place whose dominance
        # is too wide; the embedding view keeps the class limits
        place = archimedean_place_at(
            matrix.field, matrix.distinguished_embedding
        )

    bound = mstv_zero_bound(combined, place, precision_bits)
    head = (
        BoundComponent(
            "bridge",
            f"order {bundle.order} sequence bundle",
            "hitting set equals the zero set of the bundle",
        ),
        BoundComponent(
            "combination",
            f"kind {outcome.kind}, support {list(outcome.support)}",
            "re-verified against the coefficient matrix",
        ),
    )
    return ZeroBound(
        bound.value, bound.mode, bound.place, head + bound.provenance
    )
