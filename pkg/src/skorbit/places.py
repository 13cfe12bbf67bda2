"""Absolute values on a number field and dominance analysis of root sets.

Archimedean places are the real embeddings and conjugate pairs of the field
generator. Non-Archimedean places above a rational prime p are recovered from
the factorization of the generator polynomial mod p, guarded by an index
check (the mod-p shape only reflects ramification when p does not divide the
index of the equation order); on failure the generator is shifted and the
check retried a few times before the prime is reported unsupported.

Valuations at a p-adic place are exact rationals computed through resultants
with Hensel-lifted local factors: lifting the factorization of g modulo p^N
changes the resultant with any fixed integer polynomial only by multiples of
p^N, so one lift to depth v_p(Res(g, A)) + 1 resolves every local valuation
of A(theta) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .algebraic import AlgebraicNumber, UnsupportedInstance, compare_algebraics
from .intervals import RatInterval, log_interval
from .numberfield import FieldElement, NumberField
from .polynomials import IntPolynomial

MAX_GENERATOR_DIVISOR_POWER = 3


@dataclass(frozen=True)
class ArchimedeanPlace:
    """One real embedding or one conjugate pair of embeddings."""

    field: NumberField
    embedding_index: int
    is_real: bool

    @property
    def local_degree(self) -> int:
        return 1 if self.is_real else 2

    def log_modulus(self, x: FieldElement, precision_bits: int = 64) -> RatInterval:
        """Certified interval around log|x| under this embedding."""
        if x.is_zero():
            raise ValueError("log modulus of zero")
        prec = precision_bits
        while True:
            sq = x.embed(self.embedding_index, prec).abs_squared()
            if not sq.contains_zero():
                return log_interval(sq, prec) * Fraction(1, 2)
            prec *= 2
            if prec > 1 << 16:
                raise RuntimeError("log modulus failed to separate from zero")

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"ArchimedeanPlace(#{self.embedding_index}, {kind})"


@dataclass(frozen=True)
class PadicPlace:
    """Prime-ideal place above p, described by one local factor of the
    minimal polynomial of the presented generator (theta + shift) / scale.

    scale > 1 appears only when p divides the index of Z[theta]; dividing
    the generator enlarges the equation order, which a plain shift cannot
    do (Z[theta + c] = Z[theta])."""

    field: NumberField
    p: int
    shift: int
    block_index: int
    residue_block: Tuple[int, ...]  # ascending coefficients mod p of gbar_i^e_i
    e: int
    f: int
    scale: int = 1

    @property
    def local_degree(self) -> int:
        return self.e * self.f

    def valuation(self, x: FieldElement) -> Fraction:
        """Exact v(x) normalized so that v(p) = 1; |x| at this place is
        p^(-valuation)."""
        if x.is_zero():
            raise ValueError("valuation of zero is infinite")
        if x.field != self.field:
            raise ValueError("element belongs to a different field")
        a, q = x.as_cleared()
        vq = _int_valuation(q, self.p)
        # theta = scale * eta - shift, so coordinates stay integral
        if self.scale == 1:
            shifted = a.shift_argument(-self.shift) if self.shift else a
        else:
            shifted = a.affine_argument(self.scale, -self.shift)
        gen = _presented_generator(self.field.gen.coeffs, self.shift, self.scale)
        total = gen.resultant(shifted)
        if total == 0:
            raise RuntimeError("nonzero element produced zero norm")
        depth = _int_valuation(abs(total), self.p) + 1
        blocks = _lifted_blocks(
            self.field.gen.coeffs, self.p, self.shift, self.scale, depth
        )
        block = blocks[self.block_index]
        res = block.resultant(shifted)
        # The true local valuation is at most v_p(total) < depth, and the
        # lifted block matches the exact local factor mod p^depth, so the
        # resultant's p-content below depth is exact.
        if res == 0 or _int_valuation(abs(res), self.p) >= depth:
            raise RuntimeError("lift depth failed to certify the valuation")
        return Fraction(_int_valuation(abs(res), self.p), self.e * self.f) - vq

    def __repr__(self):
        return f"PadicPlace(p={self.p}, e={self.e}, f={self.f}, block {self.block_index})"


Place = Union[ArchimedeanPlace, PadicPlace]


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def enumerate_archimedean(field: NumberField) -> List[ArchimedeanPlace]:
    """One place per real embedding plus one per conjugate pair,
    in embedding order with the first member of each pair as representative."""
    places = []
    seen = set()
    for i in range(field.degree):
        if i in seen:
            continue
        j = field.conjugate_embedding_index(i)
        if j == i:
            places.append(ArchimedeanPlace(field, i, True))
        else:
            places.append(ArchimedeanPlace(field, i, False))
            seen.add(j)
    return places


def archimedean_place_at(field: NumberField, embedding_index: int) -> ArchimedeanPlace:
    """The canonical place whose embedding pair contains the given index."""
    j = field.conjugate_embedding_index(embedding_index)
    if j == embedding_index:
        return ArchimedeanPlace(field, embedding_index, True)
    return ArchimedeanPlace(field, min(embedding_index, j), False)


def candidate_primes(roots: Sequence[FieldElement]) -> List[int]:
    """Primes where some root could have a nonzero valuation.

    Numerator and denominator data are factored separately (a quotient of
    conjugate primes has norm 1 yet nonzero valuations, so the reduced norm
    alone is not enough). At every prime outside this list all roots are
    units at every place above it.
    """
    primes = set()
    for x in roots:
        if x.is_zero():
            raise ValueError("roots must be nonzero")
        a, q = x.as_cleared()
        primes.update(sympy.factorint(q).keys())
        norm_num = x.field.gen.resultant(a)
        if norm_num == 0:
            raise RuntimeError("nonzero element with zero norm resultant")
        primes.update(sympy.factorint(abs(norm_num)).keys())
    return sorted(int(p) for p in primes)


# -- mod-p factorization, index check, Hensel data ---------------------------


def _gf_factor_blocks(gen: IntPolynomial, p: int):
    """[(irreducible factor mod p desc, multiplicity)] of gen mod p."""
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor

    desc = [ZZ(int(c)) % p for c in reversed(gen.coeffs)]
    lc, factors = gf_factor(desc, p, ZZ)
    return factors


def _dedekind_index_ok(gen: IntPolynomial, p: int) -> bool:
    """Whether p certainly does not divide the index of Z[theta] in the
    maximal order, for theta a root of gen."""
    factors = _gf_factor_blocks(gen, p)
    radical = IntPolynomial.from_coeffs((1,))
    cofactor = IntPolynomial.from_coeffs((1,))
    for fac, mult in factors:
        lift = IntPolynomial.from_coeffs([int(c) % p for c in reversed(fac)])
        radical = radical * lift
        for _ in range(mult - 1):
            cofactor = cofactor * lift
    diff = radical * cofactor - gen
    t = IntPolynomial.from_coeffs([c // p for c in diff.coeffs])
    if any(c % p for c in diff.coeffs):
        raise RuntimeError("radical/cofactor product not congruent to generator")

    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_gcd

    def to_gf(poly: IntPolynomial):
        desc = [ZZ(int(c)) % p for c in reversed(poly.coeffs)]
        while desc and not desc[0]:
            desc = desc[1:]
        return desc

    g = gf_gcd(to_gf(t), to_gf(radical), p, ZZ)
    g = gf_gcd(g, to_gf(cofactor), p, ZZ)
    return len(g) <= 1


@lru_cache(maxsize=None)
def _presented_generator(gen_coeffs: tuple, shift: int, scale: int) -> IntPolynomial:
    """Minimal polynomial of (theta + shift) / scale, for theta a root of the
    given polynomial. Raises ValueError when the quotient is not an algebraic
    integer (the scaled polynomial fails to be integral)."""
    gen = IntPolynomial(gen_coeffs)
    if scale == 1:
        return gen.shift_argument(-shift) if shift else gen
    raw = gen.affine_argument(scale, -shift)
    unit = scale ** gen.degree
    if any(c % unit for c in raw.coeffs):
        raise ValueError("divided generator is not integral")
    return IntPolynomial(tuple(c // unit for c in raw.coeffs))


@lru_cache(maxsize=None)
def _lifted_blocks(
    gen_coeffs: tuple, p: int, shift: int, scale: int, depth: int
) -> Tuple[IntPolynomial, ...]:
    """Hensel lift of the grouped factorization of the presented generator
    modulo p^depth, ordered like the mod-p factor list."""
    from sympy.polys.domains import ZZ
    from sympy.polys.factortools import dup_zz_hensel_lift
    from sympy.polys.galoistools import gf_mul

    gen = _presented_generator(gen_coeffs, shift, scale)
    factors = _gf_factor_blocks(gen, p)
    blocks = []
    for fac, mult in factors:
        b = list(fac)
        for _ in range(mult - 1):
            b = gf_mul(b, list(fac), p, ZZ)
        blocks.append(b)
    if len(blocks) == 1:
        return (gen,)
    desc = [ZZ(int(c)) for c in reversed(gen.coeffs)]
    lifted = dup_zz_hensel_lift(ZZ(p), desc, blocks, depth, ZZ)
    out = []
    for raw, original in zip(lifted, blocks):
        if [int(c) % p for c in raw] != [int(c) % p for c in original]:
            raise RuntimeError("Hensel lift permuted the factor order")
        out.append(IntPolynomial.from_coeffs([int(c) for c in reversed(raw)]))
    return tuple(out)


def _build_places(
    field: NumberField, p: int, shift: int, scale: int, gen: IntPolynomial
) -> List[PadicPlace]:
    factors = _gf_factor_blocks(gen, p)
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_mul

    places = []
    for idx, (fac, mult) in enumerate(factors):
        block = list(fac)
        for _ in range(mult - 1):
            block = gf_mul(block, list(fac), p, ZZ)
        places.append(
            PadicPlace(
                field,
                p,
                shift,
                idx,
                tuple(int(c) % p for c in reversed(block)),
                e=mult,
                f=len(fac) - 1,
                scale=scale,
            )
        )
    if sum(pl.e * pl.f for pl in places) != field.degree:
        raise RuntimeError("local degrees do not sum to the field degree")
    return places


def places_above(
    field: NumberField, p: int, max_divisor_power: int = MAX_GENERATOR_DIVISOR_POWER
) -> List[PadicPlace]:
    """All places of the field above the rational prime p.

    When p divides the index of Z[theta], the places are computed through a
    divided generator (theta + c) / p^j instead; translating the generator
    alone cannot grow the equation order. Raises UnsupportedInstance when no
    presentation up to the divisor cap is p-maximal, as happens at a common
    index divisor of the field.
    """
    if field.degree == 1:
        return [PadicPlace(field, p, 0, 0, (0, 1), 1, 1)]
    gen = IntPolynomial(field.gen.coeffs)
    if _dedekind_index_ok(gen, p):
        return _build_places(field, p, 0, 1, gen)
    unit = 1
    for power in range(1, max_divisor_power + 1):
        scale = p**power
        unit *= p**field.degree
        for shift in range(scale):
            # constant coefficient of gen(scale*x - shift) is gen(-shift)
            if int(gen(-shift)) % unit:
                continue
            try:
                divided = _presented_generator(field.gen.coeffs, shift, scale)
            except ValueError:
                continue
            if _dedekind_index_ok(divided, p):
                return _build_places(field, p, shift, scale, divided)
    raise UnsupportedInstance(
        f"prime {p} divides the equation-order index for every tried generator"
    )


def valuation(place: Place, x: FieldElement, precision_bits: int = 64):
    """Exact rational valuation (p-adic) or log-modulus interval (Archimedean)."""
    if isinstance(place, PadicPlace):
        return place.valuation(x)
    return place.log_modulus(x, precision_bits)


# -- exact modulus comparison and dominance ----------------------------------


def _modulus_squared_handles(
    field: NumberField, roots: Sequence[FieldElement], embedding_index: int
):
    """Exact |root|^2 handles at one embedding: field elements when the field
    is closed under conjugation, certified algebraic numbers otherwise."""
    try:
        tau = field.conjugation_automorphism(embedding_index)
        return [("field", x * x.apply_automorphism(tau), embedding_index) for x in roots]
    except UnsupportedInstance:
        out = []
        for x in roots:
            a = x.as_algebraic(embedding_index)
            out.append(("alg", a * a.conjugate(), embedding_index))
        return out


def _compare_modulus_handles(ha, hb) -> int:
    kind_a, va, idx = ha
    kind_b, vb, _ = hb
    if kind_a == "alg" or kind_b == "alg":
        return compare_algebraics(va, vb)
    if (va - vb).is_zero():
        return 0
    prec = 64
    while prec <= 1 << 16:
        box = (va - vb).embed(idx, prec)
        if box.re.is_positive():
            return 1
        if box.re.is_negative():
            return -1
        prec *= 2
    raise RuntimeError("modulus comparison failed to resolve")


@dataclass(frozen=True)
class DominanceProfile:
    place: Place
    dominant_roots: Tuple[int, ...]
    dominant_term_count: int
    valuations: Optional[Tuple[Fraction, ...]] = None  # p-adic places only

    @property
    def dominant_root_count(self) -> int:
        return len(self.dominant_roots)


def dominance_profile(
    field: NumberField,
    roots: Sequence[FieldElement],
    place: Place,
    term_counts: Optional[Sequence[int]] = None,
) -> DominanceProfile:
    """Indices of roots of maximal absolute value at the place.

    A term is dominant exactly when its root is, so the dominant term count
    is the sum of term counts over dominant roots.
    """
    if term_counts is None:
        term_counts = [1] * len(roots)
    if len(term_counts) != len(roots):
        raise ValueError("term counts must align with roots")
    if not roots:
        raise ValueError("need at least one root")

    if isinstance(place, PadicPlace):
        vals = tuple(place.valuation(x) for x in roots)
        best = min(vals)
        dominant = tuple(i for i, v in enumerate(vals) if v == best)
        return DominanceProfile(
            place,
            dominant,
            sum(term_counts[i] for i in dominant),
            valuations=vals,
        )

    handles = _modulus_squared_handles(field, roots, place.embedding_index)
    best = [0]
    for i in range(1, len(roots)):
        c = _compare_modulus_handles(handles[i], handles[best[0]])
        if c > 0:
            best = [i]
        elif c == 0:
            best.append(i)
    dominant = tuple(best)
    return DominanceProfile(place, dominant, sum(term_counts[i] for i in dominant))


# -- minority-place search -----------------------------------------------------


@dataclass(frozen=True)
class MinorityResult:
    place: Place
    profile: DominanceProfile
    witness: str  # "archimedean" or "nonarchimedean"


def _ratio_is_root_of_unity(num: FieldElement, den: FieldElement) -> bool:
    from .algebraic import is_root_of_unity

    ratio = num / den
    if ratio.is_rational():
        return ratio.as_fraction() in (1, -1)
    mp = ratio.minpoly()
    if not mp.is_monic():
        return False
    probe = AlgebraicNumber(mp, 0)
    return is_root_of_unity(probe) is not None


def find_minority_place(
    field: NumberField,
    roots: Sequence[FieldElement],
    distinguished_embedding: int,
    term_counts: Optional[Sequence[int]] = None,
) -> MinorityResult:
    """A place where at most half of the terms are dominant.

    Requires at least two roots, all of equal modulus under the distinguished
    embedding, with no ratio of two roots a root of unity. The search scans
    Archimedean places first (some embedding moves a ratio off the unit
    circle unless all ratios are algebraic integers of modulus one
    everywhere, which the root-of-unity exclusion forbids there), then places
    above the candidate primes of the ratios.
    """
    n = len(roots)
    if n < 2:
        raise ValueError("need at least two roots")
    if term_counts is None:
        term_counts = [1] * n
    total = sum(term_counts)
    target = total // 2

    base = dominance_profile(
        field, roots, archimedean_place_at(field, distinguished_embedding), term_counts
    )
    if len(base.dominant_roots) != n:
        raise ValueError("roots are not all of equal modulus at the distinguished embedding")
    for i in range(n):
        for j in range(i + 1, n):
            if _ratio_is_root_of_unity(roots[i], roots[j]):
                raise ValueError(
                    f"ratio of roots {i} and {j} is a root of unity; "
                    "the instance should have been split by period reduction"
                )

    for place in enumerate_archimedean(field):
        profile = dominance_profile(field, roots, place, term_counts)
        if profile.dominant_term_count <= target:
            return MinorityResult(place, profile, "archimedean")

    ratios = [roots[i] / roots[0] for i in range(1, n)]
    for p in candidate_primes([r for r in ratios if not r.is_zero()]):
        for place in places_above(field, p):
            profile = dominance_profile(field, roots, place, term_counts)
            if profile.dominant_term_count <= target:
                return MinorityResult(place, profile, "nonarchimedean")

    raise ValueError(
        "no minority place exists; some ratio of roots must be a root of unity"
    )


@dataclass(frozen=True)
class FewDominantResult:
    place: Place
    profile: DominanceProfile
    disjunct: str  # "archimedean" or "nonarchimedean"
    bound: int


def few_dominant_place(
    field: NumberField,
    roots: Sequence[FieldElement],
    t: int,
    distinguished_embedding: int,
    term_counts: Optional[Sequence[int]] = None,
) -> FewDominantResult:
    """A place with at most t dominant terms (Archimedean disjunct) or at
    most floor((t+1)/2) + d - (t+1) dominant terms (non-Archimedean),
    where d is the number of roots.

    Only simple roots are supported: the dominant-root and dominant-term
    counts diverge under repeated roots and the guarantee is stated for
    terms, so instances with multiplicities are reported unsupported.
    """
    d = len(roots)
    if term_counts is not None and any(c != 1 for c in term_counts):
        raise UnsupportedInstance(
            "repeated characteristic roots are outside the guarantee"
        )
    if not (0 < t <= d):
        raise ValueError("need 0 < t <= d")
    if not (d < 2 * t + 2 - (t + 1) // 2):
        raise ValueError("shape constraint d < 2t + 2 - floor((t+1)/2) violated")

    distinguished_profile = None
    distinguished = archimedean_place_at(field, distinguished_embedding)
    for place in enumerate_archimedean(field):
        profile = dominance_profile(field, roots, place)
        if profile.dominant_term_count <= t:
            return FewDominantResult(place, profile, "archimedean", t)
        if place == distinguished:
            distinguished_profile = profile
    if distinguished_profile is None:
        raise RuntimeError("distinguished embedding missing from the place list")

    # Every Archimedean place keeps at least t+1 roots on top, so the
    # maximal-modulus group at the distinguished embedding has >= t+1
    # members and a minority place for it caps the global dominant count.
    group = list(distinguished_profile.dominant_roots)
    minority = find_minority_place(
        field, [roots[i] for i in group], distinguished_embedding
    )
    profile = dominance_profile(field, roots, minority.place)
    bound = (t + 1) // 2 + d - (t + 1)
    if profile.dominant_term_count > bound:
        raise RuntimeError(
            "minority search exceeded the dominant-term bound: "
            f"{profile.dominant_term_count} > {bound}"
        )
    return FewDominantResult(minority.place, profile, "nonarchimedean", bound)
