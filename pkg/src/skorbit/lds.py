"""Linear dynamical systems, linear recurrences, and the bridge between them.

An orbit instance asks whether A^n x ever enters a target subspace S. A
recurrence bundle asks whether several scalar recurrences sharing one
characteristic polynomial ever vanish simultaneously. The two problems are
interreducible, and this module supplies both directions plus the
normalization that makes the reduction sound:

* ``reduce_to_stable`` splits an arbitrary instance into finitely many
  sub-instances whose dynamics are invertible, non-degenerate (no ratio of
  distinct eigenvalues is a root of unity), and full-dimensional on the
  Krylov space of the start vector. Hits in the first few steps are checked
  directly; the rest are indexed by arithmetic progressions.
* ``orbit_to_simskolem`` converts a reduced instance into d - t recurrences
  (pairings against an integral basis of the orthogonal complement of S)
  whose simultaneous zeros are exactly the hitting times.
* ``simskolem_to_orbit`` goes the other way with a companion matrix; the
  resulting instance is reduced by construction.
* ``exp_poly_form`` rewrites each rational recurrence as a sum of
  polynomial-times-power terms with algebraic data in a single splitting
  field, verifying the rewrite exactly on 2d initial terms and certifying
  explicit height bounds on the coefficients.

All arithmetic is exact: Fractions for rational data, number field elements
for the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebraic import (
    UnsupportedInstance,
    factor_rational_poly,
    isolate_roots,
    ratio_root_of_unity_lcm,
)
from .heights import height_of_element, kernel_basis_small
from .intervals import RatInterval, log_interval
from .linalg import (
    charpoly_faddeev,
    in_row_span,
    kernel_basis,
    mat_identity,
    mat_mul,
    mat_vec,
    rank,
    rref,
    solve_linear,
)
from .numberfield import (
    FieldElement,
    NumberField,
    _monicize,
    kp_add,
    kp_divmod,
    kp_mul,
    kp_scale,
    kp_trim,
    splitting_field,
)
from .polynomials import IntPolynomial, qp_clear_denominators

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

DEFAULT_TORSION_CAP = 10**6
DEFAULT_SPLITTING_CAP = 64


def _fraction_vector(v: Sequence) -> Vector:
    return tuple(Fraction(x) for x in v)


def _fraction_matrix(m: Sequence[Sequence]) -> Matrix:
    return tuple(_fraction_vector(row) for row in m)


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


# ---------------------------------------------------------------------------
# Orbit instances


@dataclass(frozen=True)
class LDSInstance:
    """Does the orbit A^n x meet the subspace spanned by target_basis?

    matrix is d x d over Q, start has length d, target_basis holds t
    independent rows with 0 <= t < d. The empty basis is the zero subspace.
    """

    matrix: Matrix
    start: Vector
    target_basis: Matrix

    def __post_init__(self):
        m = _fraction_matrix(self.matrix)
        d = len(m)
        if d == 0 or any(len(row) != d for row in m):
            raise ValueError("matrix must be square and non-empty")
        s = _fraction_vector(self.start)
        if len(s) != d:
            raise ValueError("start vector length must match the matrix")
        t_rows = _fraction_matrix(self.target_basis)
        if any(len(row) != d for row in t_rows):
            raise ValueError("target basis rows must have length d")
        if len(t_rows) >= d:
            raise ValueError("target must be a proper subspace")
        if t_rows and rank([list(r) for r in t_rows]) != len(t_rows):
            raise ValueError("target basis rows must be independent")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "target_basis", t_rows)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def target_dimension(self) -> int:
        return len(self.target_basis)

    def complement_rows(self) -> Matrix:
        """Rows spanning the orthogonal complement of the target.

        v lies in the target iff every returned row is orthogonal to v.
        """
        if not self.target_basis:
            return tuple(tuple(row) for row in mat_identity(self.dimension))
        ker = kernel_basis([list(r) for r in self.target_basis])
        return tuple(tuple(v) for v in ker)

    def orbit_prefix(self, count: int) -> List[Vector]:
        """The vectors A^n x for 0 <= n < count."""
        out = []
        v = self.start
        for _ in range(count):
            out.append(v)
            v = tuple(mat_vec([list(r) for r in self.matrix], list(v)))
        return out

    def membership_prefix(self, count: int) -> List[bool]:
        """Whether A^n x lies in the target, for 0 <= n < count."""
        comp = self.complement_rows()
        return [
            all(_dot(w, v) == 0 for w in comp) for v in self.orbit_prefix(count)
        ]


# ---------------------------------------------------------------------------
# Krylov spaces


@dataclass(frozen=True)
class KrylovResult:
    dimension: int
    basis: Matrix  # row i is A^i x; empty when x = 0


def krylov_dimension(matrix: Sequence[Sequence], start: Sequence) -> KrylovResult:
    """Dimension and basis of the span of {x, Ax, A^2 x, ...}."""
    a = [list(_fraction_vector(r)) for r in matrix]
    v = list(_fraction_vector(start))
    rows: List[List[Fraction]] = []
    for _ in range(len(a) + 1):
        if rows:
            if in_row_span(rows, v):
                break
        elif all(x == 0 for x in v):
            break
        rows.append(v)
        v = mat_vec(a, v)
    else:
        raise RuntimeError("Krylov iteration failed to close")
    return KrylovResult(len(rows), tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# Recurrence bundles


def _is_zero_value(x) -> bool:
    return x.is_zero() if isinstance(x, FieldElement) else x == 0


@dataclass(frozen=True)
class LRSBundle:
    """Several recurrence sequences sharing one linear recurrence.

    recurrence holds (c_1, ..., c_d) in u_n = c_1 u_{n-1} + ... + c_d u_{n-d}
    with c_d nonzero, so the recurrence cannot be shortened by dropping a
    trailing term. sequences holds the length-d initial segments, which must
    be linearly independent. Values are Fractions, or elements of ``field``
    when it is set.
    """

    recurrence: tuple
    sequences: tuple
    field: Optional[NumberField] = None

    def __post_init__(self):
        if self.field is None:
            coerce = Fraction
        else:
            fld = self.field

            def coerce(x):
                if isinstance(x, FieldElement):
                    if x.field != fld:
                        raise ValueError("values must live in the bundle's field")
                    return x
                return fld.from_fraction(Fraction(x))

        rec = tuple(coerce(c) for c in self.recurrence)
        d = len(rec)
        if d == 0:
            raise ValueError("recurrence must have positive order")
        if _is_zero_value(rec[-1]):
            raise ValueError("trailing recurrence coefficient must be nonzero")
        seqs = tuple(tuple(coerce(x) for x in row) for row in self.sequences)
        if not seqs:
            raise ValueError("bundle needs at least one sequence")
        if any(len(row) != d for row in seqs):
            raise ValueError("initial segments must have length equal to the order")
        zero = Fraction(0) if self.field is None else self.field.zero()
        one = Fraction(1) if self.field is None else self.field.one()
        _, pivots, _ = rref([list(r) for r in seqs], zero, one)
        if len(pivots) != len(seqs):
            raise ValueError("initial segments must be linearly independent")
        object.__setattr__(self, "recurrence", rec)
        object.__setattr__(self, "sequences", seqs)

    @property
    def order(self) -> int:
        return len(self.recurrence)

    @property
    def count(self) -> int:
        return len(self.sequences)

    def prefix(self, count: int) -> List[list]:
        """Values u_0 .. u_{count-1} of every sequence."""
        d = self.order
        out = [list(row[: min(count, d)]) for row in self.sequences]
        for row in out:
            while len(row) < count:
                n = len(row)
                row.append(
                    sum(
                        (self.recurrence[i - 1] * row[n - i] for i in range(2, d + 1)),
                        self.recurrence[0] * row[n - 1],
                    )
                )
        return out

    def zero_positions(self, count: int) -> List[int]:
        """Indices n < count where every sequence vanishes at once."""
        vals = self.prefix(count)
        return [
            n
            for n in range(count)
            if all(_is_zero_value(row[n]) for row in vals)
        ]


def characteristic_polynomial(bundle: LRSBundle) -> Tuple[Fraction, ...]:
    """Ascending monic characteristic polynomial of a rational bundle."""
    if bundle.field is not None:
        raise ValueError("characteristic polynomial is kept rational")
    c = bundle.recurrence
    return tuple(-x for x in reversed(c)) + (Fraction(1),)


def cleared_characteristic_polynomial(bundle: LRSBundle) -> IntPolynomial:
    poly, _ = qp_clear_denominators(list(characteristic_polynomial(bundle)))
    return poly


# ---------------------------------------------------------------------------
# Non-degeneracy


@dataclass(frozen=True)
class NondegeneracyReport:
    """Whether distinct nonzero eigenvalue ratios avoid roots of unity.

    torsion_lcm is the least L with all such ratios of finite order dividing
    L; it is 1 exactly when the dynamics are non-degenerate.
    """

    nondegenerate: bool
    torsion_lcm: int
    root_count: int


def _characteristic_int_poly(subject) -> IntPolynomial:
    if isinstance(subject, IntPolynomial):
        return subject
    if isinstance(subject, LRSBundle):
        return cleared_characteristic_polynomial(subject)
    rows = [list(_fraction_vector(r)) for r in subject]
    poly, _ = qp_clear_denominators(charpoly_faddeev(rows))
    return poly


def nondegeneracy_check(subject) -> NondegeneracyReport:
    """Inspect eigenvalue ratios of a matrix, bundle, or integer polynomial."""
    poly = _characteristic_int_poly(subject)
    roots = []
    for factor, _ in factor_rational_poly(poly):
        for root in isolate_roots(factor):
            if not root.is_zero():
                roots.append(root)
    torsion = ratio_root_of_unity_lcm(roots) if roots else 1
    return NondegeneracyReport(torsion == 1, torsion, len(roots))


# ---------------------------------------------------------------------------
# Normalization to stable sub-instances


@dataclass(frozen=True)
class SubOrbit:
    """One residue class of a decomposed instance, in Krylov coordinates.

    chart row i is B^i y expressed in the ambient space, where y is the
    start vector of this residue class; the sub-instance coordinates refer
    to that basis.
    """

    residue: int
    instance: LDSInstance
    chart: Matrix


@dataclass(frozen=True)
class ReducedDecomposition:
    """Membership of A^n x in the target, re-indexed over residue classes.

    For n < offset consult prefix_hits. For n >= offset write
    n = offset + r + torsion_lcm * m: membership holds iff r is a full
    residue or the sub-orbit with that residue hits its target at step m.
    """

    prefix_hits: Tuple[int, ...]
    torsion_lcm: int
    stable_dimension: int
    offset: int
    sub_orbits: Tuple[SubOrbit, ...]
    full_residues: Tuple[int, ...]

    def hits(self, n: int) -> bool:
        if n < self.offset:
            return n in self.prefix_hits
        r = (n - self.offset) % self.torsion_lcm
        m = (n - self.offset) // self.torsion_lcm
        if r in self.full_residues:
            return True
        for sub in self.sub_orbits:
            if sub.residue == r:
                return sub.instance.membership_prefix(m + 1)[m]
        return False


def _matrix_power(a: List[List[Fraction]], e: int) -> List[List[Fraction]]:
    result = mat_identity(len(a))
    base = [list(r) for r in a]
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def reduce_to_stable(
    instance: LDSInstance, torsion_cap: int = DEFAULT_TORSION_CAP
) -> ReducedDecomposition:
    """Decompose an instance into invertible non-degenerate sub-instances.

    Discards the first d steps (checked directly) so the nilpotent part of
    the matrix dies off, then steps by the least common torsion order L so
    root-of-unity eigenvalue ratios collapse to 1. Each residue class r
    becomes an instance for B = A^L acting on the Krylov space of
    y_r = A^(d+r) x, written in the Krylov chart; classes whose whole space
    lands inside the target are reported in full_residues instead.
    """
    d = instance.dimension
    a = [list(r) for r in instance.matrix]
    comp = instance.complement_rows()

    prefix_hits = tuple(
        n for n, hit in enumerate(instance.membership_prefix(d)) if hit
    )

    report = nondegeneracy_check(instance.matrix)
    torsion = report.torsion_lcm
    if torsion > torsion_cap:
        raise UnsupportedInstance(
            f"torsion order {torsion} exceeds the cap {torsion_cap}"
        )

    charpoly = charpoly_faddeev(a)
    zero_mult = next(i for i, c in enumerate(charpoly) if c != 0)

    b = _matrix_power(a, torsion)
    y = list(instance.start)
    for _ in range(d):
        y = mat_vec(a, y)

    mu: Optional[int] = None
    subs: List[SubOrbit] = []
    fulls: List[int] = []
    for r in range(torsion):
        kr = krylov_dimension(b, y)
        if mu is None:
            mu = kr.dimension
        elif kr.dimension != mu:
            raise RuntimeError("stable dimension varies across residue classes")
        if kr.dimension == 0:
            # y = 0 and the zero vector lies in every subspace.
            fulls.append(r)
        else:
            sub = _sub_orbit(b, kr, comp, r)
            if sub is None:
                fulls.append(r)
            else:
                subs.append(sub)
        y = mat_vec(a, y)

    assert mu is not None
    if mu > d - zero_mult:
        raise RuntimeError("stable dimension exceeds the invertible part")

    return ReducedDecomposition(
        prefix_hits=prefix_hits,
        torsion_lcm=torsion,
        stable_dimension=mu,
        offset=d,
        sub_orbits=tuple(subs),
        full_residues=tuple(fulls),
    )


def _sub_orbit(b, kr: KrylovResult, comp: Matrix, r: int) -> Optional[SubOrbit]:
    mu = kr.dimension
    basis = [list(row) for row in kr.basis]
    cols = [[basis[i][j] for i in range(mu)] for j in range(len(basis[0]))]
    gamma = solve_linear(cols, mat_vec(b, basis[-1]))
    if gamma is None:
        raise RuntimeError("Krylov basis does not close under the stepped matrix")
    if gamma[0] == 0:
        raise RuntimeError("stable part must act invertibly")
    m = [
        [gamma[i] if j == mu - 1 else Fraction(1 if i == j + 1 else 0) for j in range(mu)]
        for i in range(mu)
    ]
    # Target constraints pulled back through the chart.
    constraint = mat_mul([list(w) for w in comp], cols)
    sub_target = kernel_basis(constraint)
    if len(sub_target) == mu:
        return None
    start = tuple(Fraction(1 if i == 0 else 0) for i in range(mu))
    inst = LDSInstance(tuple(tuple(row) for row in m), start, tuple(tuple(v) for v in sub_target))
    check = nondegeneracy_check(inst.matrix)
    if not check.nondegenerate:
        raise RuntimeError("sub-instance is degenerate after stepping")
    return SubOrbit(residue=r, instance=inst, chart=kr.basis)


# ---------------------------------------------------------------------------
# The bridge between orbits and recurrence bundles


def orbit_to_simskolem(instance: LDSInstance) -> LRSBundle:
    """Recurrences whose simultaneous zeros are the orbit's hitting times.

    Requires a reduced instance: invertible, non-degenerate, and with the
    start vector generating the whole space. Pairs the orbit against an
    integral basis of the target's orthogonal complement; each pairing obeys
    the characteristic recurrence of the matrix.
    """
    d = instance.dimension
    report = nondegeneracy_check(instance.matrix)
    if not report.nondegenerate:
        raise ValueError("degenerate dynamics; decompose into stable residues first")
    if krylov_dimension(instance.matrix, instance.start).dimension != d:
        raise ValueError("start vector generates a proper subspace; decompose first")

    charpoly = charpoly_faddeev([list(r) for r in instance.matrix])
    recurrence = tuple(-charpoly[d - i] for i in range(1, d + 1))
    if recurrence[-1] == 0:
        raise ValueError("matrix is singular; decompose into stable residues first")

    if instance.target_basis:
        pairing_rows = kernel_basis_small([list(r) for r in instance.target_basis]).basis
    else:
        pairing_rows = [[1 if i == j else 0 for j in range(d)] for i in range(d)]

    orbit = instance.orbit_prefix(d)
    sequences = tuple(
        tuple(_dot(w, v) for v in orbit) for w in pairing_rows
    )
    if rank([list(s) for s in sequences]) != len(sequences):
        raise RuntimeError("pairings of a reduced instance must stay independent")
    return LRSBundle(recurrence, sequences)


def simskolem_to_orbit(bundle: LRSBundle) -> LDSInstance:
    """Companion-matrix instance whose hitting times are the bundle's zeros.

    The instance is reduced by construction: the companion matrix of a
    recurrence with nonzero trailing coefficient is invertible and cycles
    the start vector through a full basis.
    """
    if bundle.field is not None:
        raise ValueError("only rational bundles convert to orbit instances")
    report = nondegeneracy_check(bundle)
    if not report.nondegenerate:
        raise ValueError("degenerate recurrence; split over residue classes first")
    d = bundle.order
    c = bundle.recurrence
    m = tuple(
        tuple(
            c[d - 1 - i] if j == d - 1 else Fraction(1 if i == j + 1 else 0)
            for j in range(d)
        )
        for i in range(d)
    )
    start = tuple(Fraction(1 if i == 0 else 0) for i in range(d))
    target = kernel_basis([list(row) for row in bundle.sequences])
    return LDSInstance(m, start, tuple(tuple(v) for v in target))


# ---------------------------------------------------------------------------
# Exponential-polynomial form


@dataclass(frozen=True)
class TermGroup:
    """One distinct base of the closed form: sum_j coeff[j] n^j root^n."""

    root: FieldElement
    coefficients: Tuple[FieldElement, ...]


@dataclass(frozen=True)
class CoefficientHeightCheck:
    """A certified height bound for one closed-form coefficient.

    The coefficient c of n^power in the factor's coordinate field satisfies
    h(c) <= log(deg) + sum_j h(q_j) + sum_j j*h(theta) where c expands as
    sum q_j theta^j over the field generator theta. Both sides are interval
    enclosures; holds records that the lower height estimate stays below
    the upper bound estimate.
    """

    factor_index: int
    power: int
    height: RatInterval
    bound: RatInterval
    holds: bool


@dataclass(frozen=True)
class ExpPolyForm:
    """Closed form of one sequence over a shared splitting field.

    groups are ordered deterministically (factor order of the cleared
    characteristic polynomial, then root order inside each factor); the sum
    of group lengths equals the recurrence order. The value at n equals
    sum over groups of (sum_j coeff[j] n^j) root^n, a field element whose
    trace recovers the rational sequence value.
    """

    field: NumberField
    distinguished_embedding: int
    groups: Tuple[TermGroup, ...]
    height_checks: Tuple[CoefficientHeightCheck, ...]

    @property
    def order(self) -> int:
        return sum(len(g.coefficients) for g in self.groups)

    def term_order(self) -> List[Tuple[int, int]]:
        """(group index, power) pairs in the canonical column order."""
        return [
            (gi, j)
            for gi, g in enumerate(self.groups)
            for j in range(len(g.coefficients))
        ]

    def coefficient_vector(self) -> Tuple[FieldElement, ...]:
        return tuple(
            self.groups[gi].coefficients[j] for gi, j in self.term_order()
        )

    def evaluate(self, n: int) -> FieldElement:
        total = self.field.zero()
        for g in self.groups:
            poly = self.field.zero()
            npow = self.field.one()
            n_elt = self.field.from_fraction(n)
            for coeff in g.coefficients:
                poly = poly + coeff * npow
                npow = npow * n_elt
            total = total + poly * (g.root ** n)
        return total


def _binomial_polynomial(k: int) -> List[Fraction]:
    """Coefficients of C(n + k - 1, k - 1) as a polynomial in n."""
    poly = [Fraction(1)]
    for i in range(1, k):
        poly = [Fraction(0)] + poly
        for j in range(len(poly) - 1):
            poly[j] += Fraction(i) * poly[j + 1]
    denom = math.factorial(k - 1)
    return [c / denom for c in poly]


def _substitute_affine(poly, lam_inv: FieldElement, field: NumberField):
    """p(z) rewritten in w where z = (1 - w) / lambda."""
    one = field.one()
    acc: list = [field.zero()]
    basis = [one]
    scale = one
    for coeff in poly:
        acc = kp_add(acc, kp_scale(basis, coeff * scale))
        basis = kp_mul(basis, [one, -one])
        scale = scale * lam_inv
    return kp_trim(acc)


def _series_quotient(num, den, terms: int, field: NumberField):
    """First ``terms`` coefficients of num/den as a power series."""
    zero = field.zero()
    lead = den[0] if den else zero
    if lead.is_zero():
        raise RuntimeError("series division needs an invertible constant term")
    lead_inv = lead.inverse()
    out = []
    for j in range(terms):
        s = num[j] if j < len(num) else zero
        for l in range(1, j + 1):
            d_l = den[l] if l < len(den) else zero
            s = s - d_l * out[j - l]
        out.append(s * lead_inv)
    return out


def _rational_height(q: Fraction) -> RatInterval:
    if q == 0:
        return RatInterval.point(0)
    m = max(abs(q.numerator), abs(q.denominator))
    return log_interval(RatInterval.point(Fraction(m)))


def _coefficient_height_check(
    factor_index: int, power: int, coeff: FieldElement, gen_height: RatInterval
) -> CoefficientHeightCheck:
    residue = coeff.residue
    bound = log_interval(RatInterval.point(Fraction(max(len(residue), 1))))
    for j, q in enumerate(residue):
        bound = bound + _rational_height(Fraction(q))
        if j:
            bound = bound + gen_height * Fraction(j)
    height = height_of_element(coeff)
    holds = height.lo <= bound.hi
    return CoefficientHeightCheck(factor_index, power, height, bound, holds)


def exp_poly_form(
    bundle: LRSBundle, degree_cap: int = DEFAULT_SPLITTING_CAP
) -> List[ExpPolyForm]:
    """Closed forms for every sequence of a rational bundle, one common field.

    Factors the characteristic polynomial, splits the generating function
    into partial fractions over each factor's coordinate field, and expands
    the results over the splitting field of all factors. The returned forms
    share the field, the root list, and the term order. Each form is checked
    exactly against the first 2d sequence values, and every nonzero
    coefficient carries a certified height bound.

    Raises UnsupportedInstance when the splitting field degree exceeds
    degree_cap.
    """
    if bundle.field is not None:
        raise UnsupportedInstance(
            "closed forms are computed for rational bundles; algebraic bundles "
            "arise as linear combinations of these forms"
        )
    d = bundle.order
    c = bundle.recurrence
    cleared = cleared_characteristic_polynomial(bundle)
    factors = factor_rational_poly(cleared)
    split = splitting_field([f for f, _ in factors], degree_cap)
    big = split.field

    # Generating function denominator 1 - c_1 z - ... - c_d z^d.
    denom = [Fraction(1)] + [-x for x in c]

    prefix = bundle.prefix(d)
    numerators = []
    for values in prefix:
        num = [
            values[j] - sum((c[i - 1] * values[j - i] for i in range(1, j + 1)), Fraction(0))
            for j in range(d)
        ]
        numerators.append(num)

    group_roots: List[FieldElement] = []
    group_mults: List[int] = []
    coeff_columns: List[List[List[FieldElement]]] = [[] for _ in numerators]
    checks: List[List[CoefficientHeightCheck]] = [[] for _ in numerators]

    paired = list(zip(split.roots, split.images))
    for f_index, (factor, mult) in enumerate(factors):
        gen_poly, scale = _monicize(factor)
        small = NumberField(gen_poly)
        lam = small.element((0, Fraction(1, scale)))
        lam_inv = lam.inverse()
        theta_height = height_of_element(small.generator())

        images = [img for root, img in paired if root.minpoly == factor]
        if len(images) != factor.degree:
            raise RuntimeError("splitting data does not cover a factor's roots")

        denom_small = [small.from_fraction(q) for q in denom]
        lin = [small.one(), -lam]
        quotient = denom_small
        for _ in range(mult):
            quotient, rem = kp_divmod(quotient, lin)
            if any(not x.is_zero() for x in rem):
                raise RuntimeError("factor root does not divide the denominator")
        h_w = _substitute_affine(quotient, lam_inv, small)

        binomials = [_binomial_polynomial(mult - j) for j in range(mult)]
        for s_index, num in enumerate(numerators):
            num_small = [small.from_fraction(q) for q in num]
            n_w = _substitute_affine(num_small, lam_inv, small)
            series = _series_quotient(n_w, h_w, mult, small)
            poly = [small.zero()] * mult
            for j, t_j in enumerate(series):
                for p, b in enumerate(binomials[j]):
                    poly[p] = poly[p] + t_j * small.from_fraction(b)
            for p, coeff in enumerate(poly):
                if not coeff.is_zero():
                    check = _coefficient_height_check(f_index, p, coeff, theta_height)
                    if not check.holds:
                        raise RuntimeError("coefficient height exceeded its bound")
                    checks[s_index].append(check)
            # Map into the splitting field, one copy per conjugate root.
            for img in images:
                theta_img = img * scale
                mapped = [
                    _evaluate_residue(coeff, theta_img, big) for coeff in poly
                ]
                coeff_columns[s_index].append(mapped)
        for img in images:
            group_roots.append(img)
            group_mults.append(mult)

    if sum(group_mults) != d:
        raise RuntimeError("term multiplicities must add up to the order")

    forms = []
    for s_index, values in enumerate(prefix):
        groups = tuple(
            TermGroup(root, tuple(coeffs))
            for root, coeffs in zip(group_roots, coeff_columns[s_index])
        )
        form = ExpPolyForm(
            field=big,
            distinguished_embedding=split.embedding_index,
            groups=groups,
            height_checks=tuple(checks[s_index]),
        )
        _verify_form(form, bundle, s_index)
        forms.append(form)
    return forms


def _evaluate_residue(
    coeff: FieldElement, theta_img: FieldElement, big: NumberField
) -> FieldElement:
    out = big.zero()
    power = big.one()
    for q in coeff.residue:
        out = out + big.from_fraction(q) * power
        power = power * theta_img
    return out


def _verify_form(form: ExpPolyForm, bundle: LRSBundle, s_index: int) -> None:
    # 2d exact agreements pin down the form: the closed-form sequence obeys
    # the same order-d recurrence, so d agreements would already do.
    d = bundle.order
    expected = bundle.prefix(2 * d)[s_index]
    big = form.field
    root_powers = [big.one() for _ in form.groups]
    n_values = []
    for n in range(2 * d):
        total = big.zero()
        for gi, g in enumerate(form.groups):
            poly = big.zero()
            npow = big.one()
            n_elt = big.from_fraction(n)
            for coeff in g.coefficients:
                poly = poly + coeff * npow
                npow = npow * n_elt
            total = total + poly * root_powers[gi]
            root_powers[gi] = root_powers[gi] * g.root
        n_values.append(total)
    for n, total in enumerate(n_values):
        if total != big.from_fraction(expected[n]):
            raise RuntimeError("closed form disagrees with the recurrence")
