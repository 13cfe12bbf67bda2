"""Arithmetic in explicit number fields Q[x]/(g) with certified embeddings.

A field is represented by a monic irreducible integer polynomial g; elements
are residues with rational coefficients. Embeddings into C are the roots of g
as certified algebraic numbers, so every element can be boxed at any requested
precision under any embedding. Compositum and splitting field construction
use the primitive element gamma = a + t*b with a squarefree resultant, which
guarantees both inputs are recoverable by a gcd in the new field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebraic import (
    AlgebraicNumber,
    UnsupportedInstance,
    _designate_among,
    factor_rational_poly,
    isolate_roots,
)
from .intervals import ComplexBox
from .linalg import charpoly_faddeev, det_exact, mat_transpose, solve_linear
from .polynomials import (
    IntPolynomial,
    QPoly,
    qp_clear_denominators,
    qp_eval_box,
    qp_ext_euclid,
    qp_mod,
    qp_mul,
    qp_trim,
)

DEFAULT_DEGREE_CAP = 64


class NumberField:
    """Q[x]/(gen) for a monic irreducible integer polynomial gen.

    Degree 1 (gen = x, generator 0) represents Q itself.
    """

    def __init__(self, gen: IntPolynomial):
        if not gen.is_monic() or gen.degree < 1:
            raise ValueError("field generator must be monic of positive degree")
        self.gen = gen
        self.degree = gen.degree
        self._gen_q: QPoly = tuple(Fraction(c) for c in gen.coeffs)
        self._auto_cache: Optional[List["FieldElement"]] = None
        self._perm_cache: Dict[Tuple[Fraction, ...], List[int]] = {}

    @staticmethod
    def rationals() -> "NumberField":
        return NumberField(IntPolynomial.monomial(1))

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.gen == other.gen

    def __hash__(self):
        return hash(("NumberField", self.gen))

    def __repr__(self):
        return f"NumberField({self.gen!r})"

    @cached_property
    def embeddings(self) -> List[AlgebraicNumber]:
        return isolate_roots(self.gen)

    @cached_property
    def power_sums(self) -> List[Fraction]:
        """Sums of k-th powers of the generator's conjugates, k < degree."""
        d = self.degree
        a = [Fraction(c) for c in self.gen.coeffs]
        sums = [Fraction(d)]
        for k in range(1, d):
            s = -k * a[d - k]
            for j in range(1, k):
                s -= a[d - j] * sums[k - j]
            sums.append(s)
        return sums

    # -- element constructors -------------------------------------------

    def element(self, coeffs: Sequence) -> "FieldElement":
        residue = qp_mod(tuple(Fraction(c) for c in coeffs), self._gen_q)
        return FieldElement(self, residue)

    def zero(self) -> "FieldElement":
        return FieldElement(self, ())

    def one(self) -> "FieldElement":
        return self.element((1,))

    def from_fraction(self, q) -> "FieldElement":
        return self.element((Fraction(q),))

    def generator(self) -> "FieldElement":
        return self.element((0, 1))

    # -- factoring over the field ---------------------------------------

    def factor_int_poly(self, p: IntPolynomial) -> List[Tuple[List["FieldElement"], int]]:
        """Monic irreducible factors of p over this field, with multiplicity.

        Each factor is a coefficient list (ascending) of field elements.
        Deterministic order: by degree, then by coefficient residues.
        """
        if p.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        if self.degree == 1:
            out = []
            for f, m in factor_rational_poly(p):
                lead = Fraction(f.leading)
                out.append(([self.from_fraction(Fraction(c) / lead) for c in f.coeffs], m))
            return self._sorted_factors(out)

        import sympy

        x = sympy.Symbol("x")
        dom = self._sympy_domain
        expr = sympy.Poly(p.to_sympy(), x, domain=dom)
        _, factors = expr.factor_list()
        out = []
        for fac, mult in factors:
            coeffs_desc = fac.rep.to_list()
            kp = [self._from_domain_coeff(c) for c in reversed(coeffs_desc)]
            lead_inv = kp[-1].inverse()
            kp = [c * lead_inv for c in kp]
            out.append((kp, mult))
        return self._sorted_factors(out)

    @staticmethod
    def _sorted_factors(factors):
        def key(item):
            kp, _ = item
            return (len(kp), tuple(c.residue for c in kp))

        return sorted(factors, key=key)

    @cached_property
    def _sympy_domain(self):
        import sympy

        root = sympy.CRootOf(self.gen.to_sympy(), 0, radicals=False)
        return sympy.QQ.algebraic_field(root)

    def _from_domain_coeff(self, c) -> "FieldElement":
        if hasattr(c, "to_list"):
            desc = c.to_list()
            asc = [Fraction(v.numerator, v.denominator) for v in reversed(desc)]
            return self.element(asc)
        return self.from_fraction(Fraction(c.numerator, c.denominator))

    def roots_in_field(self, p: IntPolynomial) -> List["FieldElement"]:
        """All roots of p that lie in this field."""
        roots = []
        for kp, _ in self.factor_int_poly(p.squarefree_part()):
            if len(kp) == 2:
                roots.append(-kp[0])
        return roots

    # -- automorphisms ----------------------------------------------------

    def automorphism_images(self) -> List["FieldElement"]:
        """Images of the generator under all automorphisms of the field.

        The count equals the degree exactly when the field is Galois over Q.
        """
        if self._auto_cache is None:
            images = self.roots_in_field(self.gen)
            images.sort(key=lambda e: e.residue)
            self._auto_cache = images
        return self._auto_cache

    def is_galois(self) -> bool:
        return len(self.automorphism_images()) == self.degree

    def embedding_permutation(self, theta_image: "FieldElement") -> List[int]:
        """Permutation pi with emb[i] composed with the automorphism = emb[pi(i)].

        Concretely pi[i] is the index j such that evaluating theta_image under
        embedding i yields the embedding value j of the generator.
        """
        key = theta_image.residue
        if key in self._perm_cache:
            return self._perm_cache[key]
        perm = [
            _match_root_index(self.gen, lambda prec, i=i: theta_image.embed(i, prec))
            for i in range(self.degree)
        ]
        self._perm_cache[key] = perm
        return perm

    def conjugate_embedding_index(self, i: int) -> int:
        target = self.embeddings[i].conjugate()
        for j, emb in enumerate(self.embeddings):
            if emb == target:
                return j
        raise RuntimeError("conjugate root missing from embedding list")

    def conjugation_automorphism(self, i: int) -> "FieldElement":
        """Generator image of the automorphism realizing complex conjugation
        at embedding i. Requires the field to be Galois."""
        want = self.conjugate_embedding_index(i)
        for img in self.automorphism_images():
            if self.embedding_permutation(img)[i] == want:
                return img
        raise UnsupportedInstance(
            "field is not closed under conjugation at embedding %d" % i
        )


@dataclass(frozen=True)
class FieldElement:
    """Residue representative of an element of a NumberField."""

    field: NumberField
    residue: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.residue) > self.field.degree:
            raise ValueError("residue longer than field degree")

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.residue

    def is_rational(self) -> bool:
        return len(self.residue) <= 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.residue[0] if self.residue else Fraction(0)

    def denominator_lcm(self) -> int:
        return lcm(1, *(c.denominator for c in self.residue))

    def as_cleared(self) -> Tuple[IntPolynomial, int]:
        """(A, q) with the element equal to A(generator)/q, q > 0."""
        q = self.denominator_lcm()
        return IntPolynomial.from_coeffs(int(c * q) for c in self.residue), q

    def __repr__(self):
        return f"FieldElement({list(self.residue)})"

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            return self.residue == self.field.from_fraction(other).residue
        return NotImplemented

    def __hash__(self):
        return hash((self.field.gen, self.residue))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.residue, o.residue
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return FieldElement(self.field, qp_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.residue))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = qp_mul(self.residue, o.residue)
        return FieldElement(self.field, qp_mod(prod, self.field._gen_q))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("field element inverse of zero")
        g, s, _ = qp_ext_euclid(self.residue, self.field._gen_q)
        if len(g) != 1:
            raise RuntimeError("generator polynomial is not irreducible")
        inv = tuple(c / g[0] for c in s)
        return FieldElement(self.field, qp_mod(inv, self.field._gen_q))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- embeddings and invariants ---------------------------------------

    def embed(self, embedding_index: int, precision_bits: int = 64) -> ComplexBox:
        """Certified box around the element's value under one embedding."""
        theta = self.field.embeddings[embedding_index].box(precision_bits)
        return qp_eval_box(self.residue, theta)

    def apply_automorphism(self, theta_image: "FieldElement") -> "FieldElement":
        acc = self.field.zero()
        for c in reversed(self.residue):
            acc = acc * theta_image + c
        return acc

    def mult_matrix(self) -> List[List[Fraction]]:
        """Matrix of multiplication by this element in the power basis."""
        d = self.field.degree
        cols = []
        power = self.field.one()
        gen = self.field.generator()
        for _ in range(d):
            prod = self * power
            col = list(prod.residue) + [Fraction(0)] * (d - len(prod.residue))
            cols.append(col)
            power = power * gen
        return mat_transpose(cols)

    def norm(self) -> Fraction:
        return det_exact(self.mult_matrix())

    def trace(self) -> Fraction:
        sums = self.field.power_sums
        return sum((c * sums[i] for i, c in enumerate(self.residue)), Fraction(0))

    def charpoly(self) -> List[Fraction]:
        """Characteristic polynomial over Q, ascending, degree = field degree."""
        return charpoly_faddeev(self.mult_matrix())

    def minpoly(self) -> IntPolynomial:
        """Primitive integer minimal polynomial over Q."""
        if self.is_rational():
            from .polynomials import rational_minpoly

            return rational_minpoly(self.as_fraction())
        cleared, _ = qp_clear_denominators(tuple(self.charpoly()))
        for factor, _ in factor_rational_poly(cleared):
            acc = self.field.zero()
            for c in reversed(factor.coeffs):
                acc = acc * self + c
            if acc.is_zero():
                return factor
        raise RuntimeError("no factor of the characteristic polynomial vanished")

    def as_algebraic(self, embedding_index: int) -> AlgebraicNumber:
        """The element's value under one embedding, as an algebraic number."""
        mp = self.minpoly()
        return _designate_among([mp], lambda prec: self.embed(embedding_index, prec))


# -- polynomials with field element coefficients ---------------------------

KPoly = List[FieldElement]


def kp_trim(p: KPoly) -> KPoly:
    while p and p[-1].is_zero():
        p = p[:-1]
    return list(p)


def kp_add(a: KPoly, b: KPoly) -> KPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return kp_trim(out)


def kp_neg(a: KPoly) -> KPoly:
    return [-c for c in a]

def kp_sub(a: KPoly, b: KPoly) -> KPoly:
    return kp_add(a, kp_neg(b))


def kp_scale(a: KPoly, s: FieldElement) -> KPoly:
    return kp_trim([c * s for c in a])


def kp_mul(a: KPoly, b: KPoly) -> KPoly:
    if not a or not b:
        return []
    field = a[0].field
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return kp_trim(out)


def kp_divmod(a: KPoly, b: KPoly) -> Tuple[KPoly, KPoly]:
    b = kp_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    field = b[-1].field
    rem = list(a)
    lead_inv = b[-1].inverse()
    db = len(b) - 1
    quot = [field.zero()] * max(0, len(a) - db)
    while len(kp_trim(rem)) - 1 >= db and rem:
        rem = kp_trim(rem)
        if len(rem) - 1 < db:
            break
        c = rem[-1] * lead_inv
        k = len(rem) - 1 - db
        quot[k] = c
        for i, bc in enumerate(b):
            rem[k + i] = rem[k + i] - c * bc
        rem = rem[:-1]
    return kp_trim(quot), kp_trim(rem)


def kp_gcd_monic(a: KPoly, b: KPoly) -> KPoly:
    a, b = kp_trim(a), kp_trim(b)
    while b:
        _, r = kp_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead_inv = a[-1].inverse()
    return kp_scale(a, lead_inv)


def kp_eval(p: KPoly, x: FieldElement) -> FieldElement:
    acc = x.field.zero()
    for c in reversed(p):
        acc = acc * x + c
    return acc


def kp_from_int_poly(field: NumberField, p: IntPolynomial) -> KPoly:
    return kp_trim([field.from_fraction(c) for c in p.coeffs])


def kp_derivative(p: KPoly) -> KPoly:
    return kp_trim([c * i for i, c in enumerate(p) if i > 0])


# -- root index matching ----------------------------------------------------


def _match_root_index(poly: IntPolynomial, box_fn: Callable[[int], ComplexBox]) -> int:
    """Index of the root of poly certified to equal the boxed value."""
    designated = _designate_among([poly], box_fn)
    return designated.root_index


# -- compositum --------------------------------------------------------------


@dataclass(frozen=True)
class ComposeResult:
    field: NumberField
    first: FieldElement
    second: FieldElement
    embedding_index: int


def _monicize(p: IntPolynomial) -> Tuple[IntPolynomial, int]:
    """Monic integer polynomial whose roots are lead(p) times the roots of p."""
    d = p.degree
    lead = p.leading
    if lead < 0:
        p = -p
        lead = -lead
    if lead == 1:
        return p, 1
    coeffs = [int(c) * lead ** (d - 1 - i) for i, c in enumerate(p.coeffs[:-1])]
    coeffs.append(1)
    return IntPolynomial.from_coeffs(coeffs), lead


def _field_of(a: AlgebraicNumber) -> Tuple[NumberField, FieldElement, int]:
    """Number field generated by a, the image of a, and the embedding index
    whose value is exactly a."""
    gen, scale = _monicize(a.minpoly)
    field = NumberField(gen)
    image = field.element((0, Fraction(1, scale)))
    if scale == 1:
        theta = a
    else:
        theta = a * scale
    idx = next(i for i, emb in enumerate(field.embeddings) if emb == theta)
    return field, image, idx


def _scale_roots_minpoly(p: IntPolynomial, t: int) -> IntPolynomial:
    """Primitive polynomial whose roots are t times the roots of p."""
    d = p.degree
    coeffs = [int(c) * t ** (d - i) for i, c in enumerate(p.coeffs)]
    return IntPolynomial.from_coeffs(coeffs).primitive()


def compose_field(
    a: AlgebraicNumber,
    b: AlgebraicNumber,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ComposeResult:
    """Smallest field containing both inputs, via a primitive element a + t*b.

    t is the least positive integer making the sum resultant squarefree, which
    certifies that a and b are rational in the composite. Raises
    UnsupportedInstance when the composite degree exceeds degree_cap.
    """
    from .algebraic import _resultant_sum

    if a.is_rational() and b.is_rational():
        field = NumberField.rationals()
        return ComposeResult(
            field,
            field.from_fraction(a.as_fraction()),
            field.from_fraction(b.as_fraction()),
            0,
        )
    if b.is_rational():
        field, image, idx = _field_of(a)
        return ComposeResult(field, image, field.from_fraction(b.as_fraction()), idx)
    if a.is_rational():
        field, image, idx = _field_of(b)
        return ComposeResult(field, field.from_fraction(a.as_fraction()), image, idx)

    for t in range(1, 1000):
        mb_t = _scale_roots_minpoly(b.minpoly, t)
        res = _resultant_sum(a.minpoly, mb_t)
        if not res.is_squarefree():
            continue

        def gamma_box(prec: int, t=t) -> ComplexBox:
            return a.box(prec) + b.box(prec) * Fraction(t)

        gamma = _designate_among([f for f, _ in factor_rational_poly(res)], gamma_box)
        if gamma.degree > degree_cap:
            raise UnsupportedInstance(
                "composite field degree %d exceeds cap %d"
                % (gamma.degree, degree_cap)
            )
        field, gamma_img, emb_idx = _field_of(gamma)

        # Recover b as the unique common root of its minimal polynomial and
        # of ma(gamma - t x) inside the new field.
        acc: KPoly = []
        lin: KPoly = [gamma_img, field.from_fraction(-t)]
        for c in reversed(a.minpoly.coeffs):
            acc = kp_add(kp_mul(acc, lin), [field.from_fraction(c)])
        g = kp_gcd_monic(kp_from_int_poly(field, b.minpoly), acc)
        if len(g) != 2:
            raise RuntimeError("primitive element gcd was not linear")
        b_img = -g[0]
        a_img = gamma_img - t * b_img

        _assert_embeds_to(a_img, emb_idx, a)
        _assert_embeds_to(b_img, emb_idx, b)
        return ComposeResult(field, a_img, b_img, emb_idx)
    raise RuntimeError("no squarefree shift found for primitive element")


def _assert_embeds_to(elt: FieldElement, emb_idx: int, value: AlgebraicNumber) -> None:
    box = elt.embed(emb_idx, 96)
    if not box.intersects(value.box(96)):
        raise RuntimeError("compositum image failed its embedding check")


# -- splitting fields --------------------------------------------------------


@dataclass(frozen=True)
class SplittingData:
    """A field containing every root of the given polynomials.

    roots[i] (an algebraic number) equals images[i] under the embedding
    with index embedding_index. The field is Galois over Q by construction.
    """

    field: NumberField
    embedding_index: int
    roots: List[AlgebraicNumber]
    images: List[FieldElement]


def splitting_field(
    polys: Sequence[IntPolynomial],
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> SplittingData:
    product = IntPolynomial.from_coeffs((1,))
    for p in polys:
        if p.is_zero():
            raise ValueError("zero polynomial has no splitting field")
        product = product * p
    if product.degree == 0:
        return SplittingData(NumberField.rationals(), 0, [], [])
    roots = isolate_roots(product.squarefree_part())

    field = NumberField.rationals()
    emb_idx = 0
    images: List[FieldElement] = []
    for alpha in roots:
        found = _locate_in_field(field, emb_idx, alpha)
        if found is not None:
            images.append(found)
            continue
        theta_alg = field.embeddings[emb_idx]
        result = compose_field(theta_alg, alpha, degree_cap)
        old_theta_img = result.first
        images = [
            FieldElement(
                result.field,
                qp_trim(
                    kp_eval(
                        [result.field.from_fraction(c) for c in img.residue],
                        old_theta_img,
                    ).residue
                ),
            )
            for img in images
        ]
        field = result.field
        emb_idx = result.embedding_index
        images.append(result.second)
    return SplittingData(field, emb_idx, roots, images)


def _locate_in_field(
    field: NumberField, emb_idx: int, alpha: AlgebraicNumber
) -> Optional[FieldElement]:
    """The element of the field embedding to alpha, or None."""
    if alpha.is_rational():
        return field.from_fraction(alpha.as_fraction())
    if field.degree == 1:
        return None
    if field.degree % alpha.degree != 0:
        return None
    for candidate in field.roots_in_field(alpha.minpoly):
        idx = _match_root_index(alpha.minpoly, lambda prec: candidate.embed(emb_idx, prec))
        if idx == alpha.root_index:
            return candidate
    return None


# -- rational span utilities -------------------------------------------------


def _coords(elt: FieldElement) -> List[Fraction]:
    d = elt.field.degree
    return list(elt.residue) + [Fraction(0)] * (d - len(elt.residue))


def element_in_span(elt: FieldElement, basis: Sequence[FieldElement]) -> bool:
    """Whether elt lies in the Q-linear span of the basis elements."""
    if not basis:
        return elt.is_zero()
    cols = mat_transpose([_coords(b) for b in basis])
    return solve_linear(cols, _coords(elt)) is not None


def rational_span_closure(generators: Sequence[FieldElement]) -> List[FieldElement]:
    """Basis of the Q-subalgebra (with 1) generated by the given elements.

    This is the smallest subfield containing them: a subalgebra of a number
    field that is closed under multiplication is a field.
    """
    if not generators:
        raise ValueError("need at least one generator")
    field = generators[0].field
    basis: List[FieldElement] = [field.one()]
    changed = True
    while changed:
        changed = False
        for g in generators:
            for b in list(basis):
                prod = b * g
                if not element_in_span(prod, basis):
                    basis.append(prod)
                    changed = True
    return basis
