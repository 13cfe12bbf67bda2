"""Search for linear combinations of sequences with few dominant terms.

A sequence is tractable when at most 3 of its distinct roots are dominant
under some Archimedean absolute value, or at most 2 under some
non-Archimedean one; a sequence with at most 3 terms overall qualifies for
free. Given several sequences sharing one closed-form family, the engine
hunts for a nonzero linear combination in that class: first the rows
themselves, then exact row echelon restricted to a place's dominant columns,
which either exposes a short-support combination directly or yields
combinations vanishing on the whole dominant block, on which the search
recurses with the surviving columns. Every certificate is re-verified from
scratch, and can be post-processed into a minimal-support witness whose
coefficients come from signed maximal minors with certified height.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .algebraic import AlgebraicNumber, UnsupportedInstance, is_root_of_unity
from .heights import height_of_element
from .intervals import RatInterval, log_interval
from .lds import (
    DEFAULT_SPLITTING_CAP,
    ExpPolyForm,
    LRSBundle,
    characteristic_polynomial,
    exp_poly_form,
    nondegeneracy_check,
)
from .linalg import det_exact, kernel_basis, rref
from .numberfield import FieldElement, NumberField
from .places import (
    ArchimedeanPlace,
    PadicPlace,
    Place,
    archimedean_place_at,
    candidate_primes,
    dominance_profile,
    enumerate_archimedean,
    few_dominant_place,
    find_minority_place,
    places_above,
)

ARCHIMEDEAN_DOMINANT_LIMIT = 3
NONARCHIMEDEAN_DOMINANT_LIMIT = 2
LOW_ORDER_LIMIT = 3

KIND_ARCHIMEDEAN = "archimedean"
KIND_NONARCHIMEDEAN = "non_archimedean"
KIND_LOW_ORDER = "low_order"


def _size_proxy(x: FieldElement) -> int:
    """Bit-size measure used only to break pivot ties deterministically."""
    m = 0
    for q in x.residue:
        q = Fraction(q)
        m = max(m, abs(q.numerator).bit_length() + q.denominator.bit_length())
    return m


def _dominant_limit(place: Place) -> int:
    if isinstance(place, ArchimedeanPlace):
        return ARCHIMEDEAN_DOMINANT_LIMIT
    return NONARCHIMEDEAN_DOMINANT_LIMIT


# ---------------------------------------------------------------------------
# Coefficient matrices


@dataclass(frozen=True)
class CoefficientMatrix:
    """Closed-form coefficients of several sequences over one root family.

    Column j carries the coefficient of n^power root^n per the fixed term
    order (groups in family order, powers ascending inside each group), so
    a linear combination of rows is again a coefficient vector of the same
    shape. Rows must be linearly independent.
    """

    field: NumberField
    roots: Tuple[FieldElement, ...]
    multiplicities: Tuple[int, ...]
    rows: Tuple[Tuple[FieldElement, ...], ...]
    distinguished_embedding: int = 0

    def __post_init__(self):
        coerce = self._coerce
        roots = tuple(coerce(r) for r in self.roots)
        mults = tuple(int(m) for m in self.multiplicities)
        rows = tuple(tuple(coerce(x) for x in row) for row in self.rows)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "multiplicities", mults)
        object.__setattr__(self, "rows", rows)
        if not roots:
            raise ValueError("need at least one root")
        if len(mults) != len(roots):
            raise ValueError("multiplicities must align with roots")
        if any(m < 1 for m in mults):
            raise ValueError("multiplicities must be positive")
        for i in range(len(roots)):
            if roots[i].is_zero():
                raise ValueError("roots must be nonzero")
            for j in range(i + 1, len(roots)):
                if roots[i] == roots[j]:
                    raise ValueError("roots must be distinct")
        d = sum(mults)
        if not rows:
            raise ValueError("need at least one row")
        if any(len(row) != d for row in rows):
            raise ValueError("row length must match the term count")
        _, pivots, _ = rref(
            [list(row) for row in rows], self.field.zero(), self.field.one()
        )
        if len(pivots) != len(rows):
            raise ValueError("rows must be linearly independent")

    def _coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise ValueError("entries must live in the matrix field")
            return x
        return self.field.from_fraction(Fraction(x))

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    @property
    def count(self) -> int:
        return len(self.rows)

    def term_order(self) -> List[Tuple[int, int]]:
        """(group index, power) per column, the shared closed-form order."""
        return [
            (gi, j)
            for gi, m in enumerate(self.multiplicities)
            for j in range(m)
        ]

    def group_of_column(self) -> Tuple[int, ...]:
        return tuple(gi for gi, _ in self.term_order())

    @staticmethod
    def from_forms(forms: Sequence[ExpPolyForm]) -> "CoefficientMatrix":
        """Stack the coefficient vectors of closed forms sharing one family."""
        if not forms:
            raise ValueError("need at least one closed form")
        first = forms[0]
        for f in forms[1:]:
            if f.field != first.field:
                raise ValueError("forms must share the field")
            if len(f.groups) != len(first.groups):
                raise ValueError("forms must share the root family")
            for a, b in zip(f.groups, first.groups):
                if a.root != b.root or len(a.coefficients) != len(b.coefficients):
                    raise ValueError("forms must share the root family")
        return CoefficientMatrix(
            field=first.field,
            roots=tuple(g.root for g in first.groups),
            multiplicities=tuple(len(g.coefficients) for g in first.groups),
            rows=tuple(f.coefficient_vector() for f in forms),
            distinguished_embedding=first.distinguished_embedding,
        )


@dataclass(frozen=True)
class CombinationVector:
    """A vector in the row span together with its combination coefficients."""

    vector: Tuple[FieldElement, ...]
    combination: Tuple[FieldElement, ...]


@dataclass(frozen=True)
class EchelonReduction:
    """Outcome of echelon elimination restricted to a dominant block."""

    rank: int
    dominant_columns: Tuple[int, ...]
    zero_projections: Tuple[CombinationVector, ...]
    small_support: Optional[CombinationVector]


@dataclass(frozen=True)
class SearchStep:
    """One audited elimination step of the combination search."""

    depth: int
    place: str
    dominant_terms: int
    rank: int
    eliminated: Tuple[int, ...]
    note: str


@dataclass(frozen=True)
class MSTVCertificate:
    """A combination with few dominant terms, with the witnessing place.

    support lists the dominant active columns for place-kind certificates
    and every active column for low-order ones; the trail records the
    eliminations that led to the combination.
    """

    beta: Tuple[FieldElement, ...]
    place: Place
    kind: str
    dominant_count: int
    support: Tuple[int, ...]
    trail: Tuple[SearchStep, ...]


@dataclass(frozen=True)
class NotReducibleReport:
    """Exhaustive failure transcript over every relevant place."""

    transcript: Tuple[str, ...]
    vandermonde: Optional[str] = None


# ---------------------------------------------------------------------------
# Activity and dominance bookkeeping


def _active_columns(vectors: Sequence[Sequence[FieldElement]]) -> List[int]:
    if not vectors:
        return []
    width = len(vectors[0])
    return [
        j for j in range(width) if any(not v[j].is_zero() for v in vectors)
    ]


def _group_census(
    matrix: CoefficientMatrix, columns: Sequence[int]
) -> Tuple[List[int], List[int]]:
    """Active group indices and their surviving term counts."""
    owner = matrix.group_of_column()
    counts: Dict[int, int] = {}
    for c in columns:
        counts[owner[c]] = counts.get(owner[c], 0) + 1
    groups = sorted(counts)
    return groups, [counts[g] for g in groups]


def _dominant_columns(
    matrix: CoefficientMatrix, place: Place, columns: Sequence[int]
) -> Tuple[List[int], int]:
    """Columns of the dominant roots among the given columns, and their count."""
    groups, counts = _group_census(matrix, columns)
    profile = dominance_profile(
        matrix.field, [matrix.roots[g] for g in groups], place, counts
    )
    dominant_groups = {groups[i] for i in profile.dominant_roots}
    owner = matrix.group_of_column()
    dcols = [c for c in columns if owner[c] in dominant_groups]
    return dcols, profile.dominant_root_count


def _identity_rows(matrix: CoefficientMatrix) -> Tuple[CombinationVector, ...]:
    zero, one = matrix.field.zero(), matrix.field.one()
    k = matrix.count
    return tuple(
        CombinationVector(
            matrix.rows[i],
            tuple(one if i == j else zero for j in range(k)),
        )
        for i in range(k)
    )


def recombine(
    matrix: CoefficientMatrix, beta: Sequence[FieldElement]
) -> Tuple[FieldElement, ...]:
    """The coefficient vector of the combination sum_i beta_i row_i."""
    if len(beta) != matrix.count:
        raise ValueError("combination length must match the row count")
    zero = matrix.field.zero()
    out = [zero] * matrix.dimension
    for b, row in zip(beta, matrix.rows):
        if b.is_zero():
            continue
        out = [acc + b * x for acc, x in zip(out, row)]
    return tuple(out)


# ---------------------------------------------------------------------------
# The class predicate


def is_mstv(form: ExpPolyForm) -> Optional[Tuple[Place, int]]:
    """First place where the sequence has few dominant roots, with the count.

    Scans Archimedean places in embedding order, then places above the
    candidate primes of the active roots in ascending prime order. Roots
    whose coefficient polynomial vanishes identically do not participate.
    Returns None when no place qualifies; primes outside the candidate list
    cannot qualify because every active root is a unit there.
    """
    active = [
        g for g in form.groups if any(not c.is_zero() for c in g.coefficients)
    ]
    if not active:
        raise ValueError("sequence is identically zero")
    roots = [g.root for g in active]
    for place in enumerate_archimedean(form.field):
        profile = dominance_profile(form.field, roots, place)
        if profile.dominant_root_count <= ARCHIMEDEAN_DOMINANT_LIMIT:
            return place, profile.dominant_root_count
    for p in candidate_primes(roots):
        for place in places_above(form.field, p):
            profile = dominance_profile(form.field, roots, place)
            if profile.dominant_root_count <= NONARCHIMEDEAN_DOMINANT_LIMIT:
                return place, profile.dominant_root_count
    return None


# ---------------------------------------------------------------------------
# Echelon elimination of a dominant block


def _echelon(
    field: NumberField,
    rows: Sequence[CombinationVector],
    dominant_cols: Sequence[int],
) -> EchelonReduction:
    work = [(list(cv.vector), list(cv.combination)) for cv in rows]
    pivots = 0
    for c in dominant_cols:
        best = None
        for idx in range(pivots, len(work)):
            entry = work[idx][0][c]
            if entry.is_zero():
                continue
            key = (_size_proxy(entry), idx)
            if best is None or key < best[0]:
                best = (key, idx)
        if best is None:
            continue
        idx = best[1]
        work[pivots], work[idx] = work[idx], work[pivots]
        pvec, pcombo = work[pivots]
        pinv = pvec[c].inverse()
        for j in range(pivots + 1, len(work)):
            vec, combo = work[j]
            if vec[c].is_zero():
                continue
            f = vec[c] * pinv
            work[j] = (
                [a - f * b for a, b in zip(vec, pvec)],
                [a - f * b for a, b in zip(combo, pcombo)],
            )
        pivots += 1
        if pivots == len(work):
            break
    zero_projections = tuple(
        CombinationVector(tuple(vec), tuple(combo))
        for vec, combo in work[pivots:]
    )
    small = None
    if pivots:
        vec, combo = work[pivots - 1]
        small = CombinationVector(tuple(vec), tuple(combo))
    return EchelonReduction(
        rank=pivots,
        dominant_columns=tuple(dominant_cols),
        zero_projections=zero_projections,
        small_support=small,
    )


def echelon_reduce(
    matrix: CoefficientMatrix,
    place,
    rows: Optional[Sequence[CombinationVector]] = None,
    columns: Optional[Sequence[int]] = None,
) -> EchelonReduction:
    """Row echelon restricted to the dominant columns at a place.

    The rank equals the dimension of the projection of the row span onto
    the dominant block; the rows beyond it vanish on the whole block, and
    the last pivot row touches at most (block size - rank + 1) dominant
    columns. `place` may also be an explicit collection of column indices.
    All returned vectors carry their combination over the original rows.
    """
    if rows is None:
        rows = _identity_rows(matrix)
    if columns is None:
        columns = _active_columns([cv.vector for cv in rows])
    if isinstance(place, (ArchimedeanPlace, PadicPlace)):
        dcols, _ = _dominant_columns(matrix, place, columns)
    else:
        wanted = set(int(c) for c in place)
        if not wanted.issubset(range(matrix.dimension)):
            raise ValueError("dominant column indices out of range")
        dcols = sorted(wanted.intersection(columns))
    if not dcols:
        raise ValueError("the dominant block is empty")
    return _echelon(matrix.field, rows, dcols)


# ---------------------------------------------------------------------------
# Certificates


def _make_certificate(
    matrix: CoefficientMatrix,
    cv: CombinationVector,
    place: Place,
    trail: Tuple[SearchStep, ...],
) -> Optional[MSTVCertificate]:
    """Classify a combination at a place; None when it does not qualify."""
    vec = cv.vector
    active = [j for j in range(len(vec)) if not vec[j].is_zero()]
    if not active:
        return None
    groups, counts = _group_census(matrix, active)
    roots = [matrix.roots[g] for g in groups]
    profile = dominance_profile(matrix.field, roots, place, counts)
    count = profile.dominant_root_count
    if len(active) <= LOW_ORDER_LIMIT:
        return MSTVCertificate(
            beta=cv.combination,
            place=place,
            kind=KIND_LOW_ORDER,
            dominant_count=count,
            support=tuple(active),
            trail=trail,
        )
    if count > _dominant_limit(place):
        return None
    dominant_groups = {groups[i] for i in profile.dominant_roots}
    owner = matrix.group_of_column()
    support = tuple(j for j in active if owner[j] in dominant_groups)
    kind = (
        KIND_ARCHIMEDEAN
        if isinstance(place, ArchimedeanPlace)
        else KIND_NONARCHIMEDEAN
    )
    return MSTVCertificate(
        beta=cv.combination,
        place=place,
        kind=kind,
        dominant_count=count,
        support=support,
        trail=trail,
    )


def verify_certificate(
    matrix: CoefficientMatrix, cert: MSTVCertificate
) -> None:
    """Recompute the combination, its dominance, and the support from scratch.

    Raises ValueError when any recorded field disagrees with the
    recomputation; zero-set containment itself holds by linearity.
    """
    if len(cert.beta) != matrix.count:
        raise ValueError("combination length does not match the instance")
    if all(b.is_zero() for b in cert.beta):
        raise ValueError("combination coefficients are all zero")
    vec = recombine(matrix, cert.beta)
    active = [j for j in range(len(vec)) if not vec[j].is_zero()]
    if not active:
        raise ValueError("combination vanishes identically")
    groups, counts = _group_census(matrix, active)
    roots = [matrix.roots[g] for g in groups]
    profile = dominance_profile(matrix.field, roots, cert.place, counts)
    count = profile.dominant_root_count
    if count != cert.dominant_count:
        raise ValueError("dominant root count does not reproduce")
    if cert.kind == KIND_LOW_ORDER:
        if len(active) > LOW_ORDER_LIMIT:
            raise ValueError("low-order certificate with too many terms")
        if tuple(active) != cert.support:
            raise ValueError("support does not reproduce")
        return
    expected_kind = (
        KIND_ARCHIMEDEAN
        if isinstance(cert.place, ArchimedeanPlace)
        else KIND_NONARCHIMEDEAN
    )
    if cert.kind != expected_kind:
        raise ValueError("certificate kind does not match the place")
    if count > _dominant_limit(cert.place):
        raise ValueError("dominant root count exceeds the class limit")
    dominant_groups = {groups[i] for i in profile.dominant_roots}
    owner = matrix.group_of_column()
    support = tuple(j for j in active if owner[j] in dominant_groups)
    if support != cert.support:
        raise ValueError("support does not reproduce")
    if not support:
        raise ValueError("dominant projection of the combination is zero")


def _row_certificate(
    matrix: CoefficientMatrix,
    cv: CombinationVector,
    depth: int,
    trail: Tuple[SearchStep, ...],
) -> Optional[MSTVCertificate]:
    """Full place scan for a single combination vector."""
    vec = cv.vector
    active = [j for j in range(len(vec)) if not vec[j].is_zero()]
    if not active:
        return None
    groups, _ = _group_census(matrix, active)
    roots = [matrix.roots[g] for g in groups]
    arch = enumerate_archimedean(matrix.field)
    if len(active) <= LOW_ORDER_LIMIT:
        place = arch[0]
        step = SearchStep(
            depth, repr(place), len(active), 0, (), "row has at most 3 terms"
        )
        return _make_certificate(matrix, cv, place, trail + (step,))
    for place in arch:
        profile = dominance_profile(matrix.field, roots, place)
        if profile.dominant_root_count <= ARCHIMEDEAN_DOMINANT_LIMIT:
            step = SearchStep(
                depth,
                repr(place),
                profile.dominant_root_count,
                0,
                (),
                "row qualifies directly",
            )
            cert = _make_certificate(matrix, cv, place, trail + (step,))
            if cert is not None:
                return cert
    for p in candidate_primes(roots):
        for place in places_above(matrix.field, p):
            profile = dominance_profile(matrix.field, roots, place)
            if profile.dominant_root_count <= NONARCHIMEDEAN_DOMINANT_LIMIT:
                step = SearchStep(
                    depth,
                    repr(place),
                    profile.dominant_root_count,
                    0,
                    (),
                    "row qualifies directly",
                )
                cert = _make_certificate(matrix, cv, place, trail + (step,))
                if cert is not None:
                    return cert
    return None


def _equal_modulus_retest(
    matrix: CoefficientMatrix,
    cv: CombinationVector,
    depth: int,
    trail: Tuple[SearchStep, ...],
    transcript: List[str],
) -> Optional[MSTVCertificate]:
    """Minority-place maneuver for a combination whose surviving roots all
    share one modulus: some finite place demotes at least half its terms."""
    vec = cv.vector
    active = [j for j in range(len(vec)) if not vec[j].is_zero()]
    groups, counts = _group_census(matrix, active)
    if len(groups) < 2:
        return None
    roots = [matrix.roots[g] for g in groups]
    base = dominance_profile(
        matrix.field,
        roots,
        archimedean_place_at(matrix.field, matrix.distinguished_embedding),
        counts,
    )
    if base.dominant_root_count != len(roots):
        return None
    try:
        minority = find_minority_place(
            matrix.field, roots, matrix.distinguished_embedding, counts
        )
    except (ValueError, UnsupportedInstance) as exc:
        transcript.append(f"depth {depth}: minority retest failed: {exc}")
        return None
    step = SearchStep(
        depth,
        repr(minority.place),
        minority.profile.dominant_term_count,
        0,
        (),
        "equal-modulus survivors retested at a minority place",
    )
    cert = _make_certificate(matrix, cv, minority.place, trail + (step,))
    if cert is None:
        transcript.append(
            f"depth {depth}: minority place {minority.place!r} still has "
            f"{minority.profile.dominant_root_count} dominant roots"
        )
    return cert


# ---------------------------------------------------------------------------
# Minimal support and explicit coefficients


def _support_kernel(
    matrix: CoefficientMatrix, support: Sequence[int]
) -> List[List[FieldElement]]:
    """Combinations over the rows vanishing outside the given columns."""
    zero, one = matrix.field.zero(), matrix.field.one()
    outside = [j for j in range(matrix.dimension) if j not in set(support)]
    system = [[row[j] for row in matrix.rows] for j in outside]
    if not system:
        k = matrix.count
        return [
            [one if i == t else zero for t in range(k)] for i in range(k)
        ]
    return kernel_basis(system, zero, one)


def minimal_support_refine(
    matrix: CoefficientMatrix, w: CombinationVector, place: Place
) -> CombinationVector:
    """Shrink a qualifying combination until its support is span-minimal.

    While another independent row-span vector lives on the same support,
    subtract the right multiple to kill one support column while keeping a
    dominant column alive, so the result still qualifies at the same place.
    On return no nonzero row-span vector is supported strictly inside the
    result's support, hence anything supported within it is a scalar
    multiple.
    """
    if all(x.is_zero() for x in w.vector):
        raise ValueError("combination vanishes identically")
    current = w
    while True:
        vec = current.vector
        support = [j for j in range(len(vec)) if not vec[j].is_zero()]
        kernel = _support_kernel(matrix, support)
        if len(kernel) <= 1:
            break
        dcols, _ = _dominant_columns(matrix, place, support)
        if not dcols:
            raise RuntimeError("refinement lost every dominant column")
        other = None
        for combo in kernel:
            candidate = recombine(matrix, combo)
            ratio = None
            proportional = True
            for j in support:
                r = candidate[j] / vec[j]
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    proportional = False
                    break
            if not proportional:
                other = (tuple(combo), candidate)
                break
        if other is None:
            raise RuntimeError("kernel of dimension > 1 without a second ray")
        combo2, vec2 = other
        ratios = {j: vec2[j] / vec[j] for j in support}
        pivot_i = None
        drop_j = None
        for i in dcols:
            for j in support:
                if ratios[j] != ratios[i]:
                    pivot_i, drop_j = i, j
                    break
            if pivot_i is not None:
                break
        if pivot_i is None:
            raise RuntimeError("independent kernel vectors with equal ratios")
        f = ratios[drop_j]
        new_vec = tuple(a - f * b for a, b in zip(vec2, vec))
        new_combo = tuple(
            a - f * b for a, b in zip(combo2, current.combination)
        )
        current = CombinationVector(new_vec, new_combo)
    # the scalar-multiple consequence, checked on the surviving ray
    support = [
        j for j in range(len(current.vector)) if not current.vector[j].is_zero()
    ]
    kernel = _support_kernel(matrix, support)
    if len(kernel) != 1:
        raise RuntimeError("support kernel is not one-dimensional")
    return current


def _rational_height_interval(q: Fraction) -> RatInterval:
    if q == 0:
        return RatInterval.point(0)
    m = max(abs(q.numerator), abs(q.denominator))
    return log_interval(RatInterval.point(Fraction(m)))


def _entry_height(x) -> RatInterval:
    if isinstance(x, FieldElement):
        return height_of_element(x)
    return _rational_height_interval(Fraction(x))


def beta_via_minors(rows: Sequence[Sequence], field: Optional[NumberField] = None):
    """Kernel ray of a (k-1) x k full-rank matrix via signed maximal minors.

    beta_i is (-1)^(i+1) times the minor obtained by deleting column i, so
    row . beta expands the determinant of the row stacked on the matrix,
    which vanishes. The exact kernel identity and the determinant height
    bound (m/2) log m + m sum h(entries) are both asserted.
    """
    rows = [list(r) for r in rows]
    if not rows:
        if field is None:
            raise ValueError("an empty system needs an explicit field")
        return (field.one(),)
    k = len(rows[0])
    if len(rows) != k - 1 or any(len(r) != k for r in rows):
        raise ValueError("need a (k-1) x k system")
    sample = rows[0][0]
    if isinstance(sample, FieldElement):
        zero, one = sample.field.zero(), sample.field.one()
    else:
        rows = [[Fraction(x) for x in r] for r in rows]
        zero, one = Fraction(0), Fraction(1)
    _, pivots, _ = rref([list(r) for r in rows], zero, one)
    if len(pivots) != k - 1:
        raise ValueError("rows are not of full rank k-1")
    beta = []
    for i in range(k):
        minor = [[r[j] for j in range(k) if j != i] for r in rows]
        if minor and minor[0]:
            value = det_exact(minor, zero, one)
        else:
            value = one
        beta.append(value if i % 2 == 0 else zero - value)
    for r in rows:
        acc = zero
        for x, b in zip(r, beta):
            acc = acc + x * b
        if not acc == zero:
            raise RuntimeError("minor kernel identity failed")
    m = k - 1
    if m >= 1:
        bound = log_interval(RatInterval.point(Fraction(m))) * Fraction(m, 2)
        for r in rows:
            for x in r:
                bound = bound + _entry_height(x) * Fraction(m)
        for b in beta:
            hb = _entry_height(b)
            if hb.lo > bound.hi:
                raise RuntimeError(
                    "minor height exceeded the determinant bound"
                )
    return tuple(beta)


def independent_restriction_rows(
    matrix: CoefficientMatrix, support: Sequence[int]
) -> List[List[FieldElement]]:
    """k-1 independent rows of the outside-support restriction.

    Row j of the restriction is (row_1[j], ..., row_k[j]) for a column j
    outside the support; a one-dimensional support kernel makes the
    restriction rank k-1, so a greedy scan finds the rows.
    """
    zero, one = matrix.field.zero(), matrix.field.one()
    outside = [j for j in range(matrix.dimension) if j not in set(support)]
    chosen: List[List[FieldElement]] = []
    for j in outside:
        candidate = [row[j] for row in matrix.rows]
        trial = chosen + [candidate]
        _, pivots, _ = rref([list(r) for r in trial], zero, one)
        if len(pivots) == len(trial):
            chosen.append(candidate)
        if len(chosen) == matrix.count - 1:
            break
    if len(chosen) != matrix.count - 1:
        raise ValueError("restriction does not have rank k-1")
    return chosen


def rationalize_beta(beta: Sequence) -> tuple:
    """Normalize a kernel ray by its first nonzero coordinate.

    With a one-dimensional kernel the normalized ratios land in the field
    generated by the system's entries, which for a minimal-support
    combination is the field of its own roots.
    """
    beta = list(beta)
    idx = None
    for i, b in enumerate(beta):
        nonzero = not b.is_zero() if isinstance(b, FieldElement) else b != 0
        if nonzero:
            idx = i
            break
    if idx is None:
        raise ValueError("combination coefficients are all zero")
    lead = beta[idx]
    if isinstance(lead, FieldElement):
        inv = lead.inverse()
        return tuple(b * inv for b in beta)
    return tuple(Fraction(b) / Fraction(lead) for b in beta)


def refine_certificate(
    matrix: CoefficientMatrix, cert: MSTVCertificate
) -> MSTVCertificate:
    """Minimal-support, height-certified, normalized form of a certificate.

    Refines the combination to span-minimal support at the certificate's
    place, recomputes the coefficients from signed maximal minors of the
    outside-support restriction, normalizes by the leading coordinate, and
    re-verifies. The refined support meets at most (target dimension + 1)
    roots, which callers use to bound the coordinate field degree.
    """
    verify_certificate(matrix, cert)
    start = CombinationVector(recombine(matrix, cert.beta), cert.beta)
    refined = minimal_support_refine(matrix, start, cert.place)
    support = [
        j
        for j in range(len(refined.vector))
        if not refined.vector[j].is_zero()
    ]
    if matrix.count == 1:
        beta = (matrix.field.one(),)
    else:
        rows = independent_restriction_rows(matrix, support)
        beta = beta_via_minors(rows, matrix.field)
    vec = recombine(matrix, beta)
    ratio = None
    for j in range(len(vec)):
        a, b = vec[j], refined.vector[j]
        if a.is_zero() != b.is_zero():
            raise RuntimeError("minor ray differs from the refined support")
        if not b.is_zero():
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                raise RuntimeError("minor ray is not proportional")
    if ratio is None or ratio.is_zero():
        raise RuntimeError("minor ray vanished")
    gamma = rationalize_beta(beta)
    cv = CombinationVector(recombine(matrix, gamma), gamma)
    out = _make_certificate(matrix, cv, cert.place, cert.trail)
    if out is None:
        raise RuntimeError("refined combination no longer qualifies")
    verify_certificate(matrix, out)
    return out


# ---------------------------------------------------------------------------
# The recursive search


def _place_scan(
    matrix: CoefficientMatrix,
    roots: List[FieldElement],
    counts: List[int],
    k_active: int,
    transcript: List[str],
    skipped: List[int],
) -> List[Place]:
    """Deterministic place order: theorem-guided place first when available,
    then Archimedean places, then places above each candidate prime."""
    places: List[Place] = []
    n = sum(counts)
    if all(c == 1 for c in counts):
        for t in dict.fromkeys([k_active + 2, max(1, (2 * n) // 3)]):
            if 0 < t <= n and n < 2 * t + 2 - (t + 1) // 2:
                try:
                    guided = few_dominant_place(
                        matrix.field,
                        roots,
                        t,
                        matrix.distinguished_embedding,
                    )
                except (ValueError, RuntimeError, UnsupportedInstance):
                    continue
                places.append(guided.place)
                break
    places.extend(enumerate_archimedean(matrix.field))
    for p in candidate_primes(roots):
        try:
            places.extend(places_above(matrix.field, p))
        except UnsupportedInstance as exc:
            transcript.append(f"prime {p} skipped: {exc}")
            skipped.append(p)
    seen: Set[Place] = set()
    ordered = []
    for place in places:
        if place in seen:
            continue
        seen.add(place)
        ordered.append(place)
    return ordered


def search_mstv_combination(
    instance: Union[LRSBundle, CoefficientMatrix],
    degree_cap: int = DEFAULT_SPLITTING_CAP,
    max_depth: Optional[int] = None,
) -> Union[MSTVCertificate, NotReducibleReport]:
    """Find a combination with few dominant terms, or report exhaustion.

    Strategy per level: (a) scan each row over all places; (b) at every
    place, eliminate the dominant block by echelon and keep the last pivot
    row when its dominant support is within the class limit; (c) recurse on
    the combinations vanishing on the block, over the surviving columns;
    (d) before recursing, retest survivors whose roots all share one
    modulus at a minority place. Certificates are re-verified before being
    returned. The failure report's transcript covers every Archimedean
    place and every place above a candidate prime; omitted primes keep all
    roots dominant, so they can never qualify.
    """
    if isinstance(instance, LRSBundle):
        if instance.field is not None:
            raise UnsupportedInstance(
                "bundles over an extension field have no rational closed "
                "form; search their coefficient matrix instead"
            )
        verdict = nondegeneracy_check(instance)
        if not verdict.nondegenerate:
            raise ValueError(
                "degenerate bundle; split over residue classes first"
            )
        matrix = CoefficientMatrix.from_forms(
            exp_poly_form(instance, degree_cap)
        )
    elif isinstance(instance, CoefficientMatrix):
        matrix = instance
    else:
        raise TypeError("expected a sequence bundle or a coefficient matrix")

    depth_cap = matrix.dimension if max_depth is None else max_depth
    transcript: List[str] = []
    skipped: List[int] = []
    truncated: List[int] = []
    memo: Set[tuple] = set()

    def explore(
        rows: Tuple[CombinationVector, ...],
        columns: Tuple[int, ...],
        depth: int,
        trail: Tuple[SearchStep, ...],
    ) -> Optional[MSTVCertificate]:
        for cv in rows:
            cert = _row_certificate(matrix, cv, depth, trail)
            if cert is not None:
                transcript.append(
                    f"depth {depth}: a row qualifies at {cert.place!r}"
                )
                return cert
        if depth >= depth_cap:
            transcript.append(f"depth {depth}: depth bound reached")
            truncated.append(depth)
            return None
        groups, counts = _group_census(matrix, columns)
        roots = [matrix.roots[g] for g in groups]
        reductions = []
        for place in _place_scan(
            matrix, roots, counts, len(rows), transcript, skipped
        ):
            dcols, droots = _dominant_columns(matrix, place, columns)
            if not dcols:
                continue
            red = _echelon(matrix.field, rows, dcols)
            limit = _dominant_limit(place)
            entry = (
                f"depth {depth} {place!r}: {len(dcols)} dominant terms over "
                f"{droots} roots, rank {red.rank}, "
                f"{len(red.zero_projections)} vanishing"
            )
            if red.small_support is not None:
                dsupp = [
                    c
                    for c in dcols
                    if not red.small_support.vector[c].is_zero()
                ]
                entry += f", short row touches {len(dsupp)}"
                if 1 <= len(dsupp) <= limit:
                    step = SearchStep(
                        depth,
                        repr(place),
                        len(dcols),
                        red.rank,
                        tuple(dcols),
                        "echelon left a short dominant support",
                    )
                    cert = _make_certificate(
                        matrix, red.small_support, place, trail + (step,)
                    )
                    if cert is not None:
                        transcript.append(entry + " -> certificate")
                        return cert
                    entry += " (failed reclassification)"
            transcript.append(entry)
            if red.zero_projections:
                reductions.append((place, red))
        for place, red in reductions:
            step = SearchStep(
                depth,
                repr(place),
                len(red.dominant_columns),
                red.rank,
                red.dominant_columns,
                "eliminated the dominant block",
            )
            for cv in red.zero_projections:
                cert = _equal_modulus_retest(
                    matrix, cv, depth, trail + (step,), transcript
                )
                if cert is not None:
                    transcript.append(
                        f"depth {depth}: minority retest found {cert.place!r}"
                    )
                    return cert
            subcols = tuple(
                c for c in columns if c not in set(red.dominant_columns)
            )
            if not subcols:
                continue
            key = (subcols, tuple(cv.vector for cv in red.zero_projections))
            if key in memo:
                transcript.append(
                    f"depth {depth}: surviving block after {place!r} "
                    "already explored"
                )
                continue
            memo.add(key)
            cert = explore(
                red.zero_projections, subcols, depth + 1, trail + (step,)
            )
            if cert is not None:
                return cert
        return None

    top_rows = _identity_rows(matrix)
    top_columns = tuple(_active_columns([cv.vector for cv in top_rows]))
    result = explore(top_rows, top_columns, 0, ())
    if result is not None:
        verify_certificate(matrix, result)
        return result
    if skipped:
        raise UnsupportedInstance(
            "no combination found, but primes "
            f"{sorted(set(skipped))} could not be analyzed; "
            "refusing an incomplete negative verdict"
        )
    if truncated:
        raise UnsupportedInstance(
            "no combination found within the depth bound; a truncated "
            "search cannot certify non-reducibility"
        )
    transcript.append(
        "primes outside the candidate list keep every root a unit, hence "
        f"all {len(top_columns)} terms dominant"
    )
    return NotReducibleReport(
        transcript=tuple(transcript),
        vandermonde=_vandermonde_witness(matrix, top_columns),
    )


def _vandermonde_witness(
    matrix: CoefficientMatrix, columns: Tuple[int, ...]
) -> Optional[str]:
    """Structural lower bound on every combination's dominant support.

    When the coefficient columns are geometric in the row index with
    pairwise distinct rational nodes, every k columns form a scaled
    Vandermonde minor with nonzero determinant, so no nonzero combination
    can vanish on k dominant columns: its dominant support always has at
    least (block size - k + 1) entries. If that floor beats the class
    limits at every place, non-reducibility holds independently of the
    echelon transcript.
    """
    k = matrix.count
    rows = matrix.rows
    nodes = []
    for j in columns:
        if rows[0][j].is_zero():
            return None
        if k == 1:
            nodes.append(None)
            continue
        base = rows[0][j]
        node = rows[1][j] / base
        if not node.is_rational():
            return None
        power = base
        for i in range(1, k):
            power = power * node
            if rows[i][j] != power:
                return None
        nodes.append(node.as_fraction())
    if k > 1 and len(set(nodes)) != len(nodes):
        return None
    groups, counts = _group_census(matrix, columns)
    roots = [matrix.roots[g] for g in groups]
    arch_min = None
    for place in enumerate_archimedean(matrix.field):
        profile = dominance_profile(matrix.field, roots, place, counts)
        ell = profile.dominant_term_count
        arch_min = ell if arch_min is None else min(arch_min, ell)
    fin_min = len(columns)
    for p in candidate_primes(roots):
        try:
            above = places_above(matrix.field, p)
        except UnsupportedInstance:
            return None
        for place in above:
            profile = dominance_profile(matrix.field, roots, place, counts)
            fin_min = min(fin_min, profile.dominant_term_count)
    floor_arch = arch_min - (k - 1)
    floor_fin = fin_min - (k - 1)
    if (
        floor_arch > ARCHIMEDEAN_DOMINANT_LIMIT
        and floor_fin > NONARCHIMEDEAN_DOMINANT_LIMIT
    ):
        return (
            "columns are geometric in the row index with distinct nodes, so "
            "every k columns give a nonsingular scaled Vandermonde minor and "
            f"every combination keeps at least {floor_arch} dominant terms "
            f"at Archimedean places and {floor_fin} at finite ones"
        )
    return None


# ---------------------------------------------------------------------------
# Padding


def _is_unity_ratio(num: FieldElement, den: FieldElement) -> bool:
    ratio = num / den
    if ratio.is_rational():
        return ratio.as_fraction() in (1, -1)
    mp = ratio.minpoly()
    if not mp.is_monic():
        return False
    return is_root_of_unity(AlgebraicNumber(mp, 0)) is not None


def pad_instance(
    bundle: LRSBundle,
    fresh_root=None,
    roots: Optional[Sequence[FieldElement]] = None,
) -> LRSBundle:
    """Embed a (d, k) instance into (d+1, k+1) with a fresh geometric row.

    The recurrence gains one new root and the bundle one new sequence, the
    pure powers of that root; the old sequences keep their values. A
    combination for the padded instance that ignores the new row restricts
    to one for the original, and eliminating the new root's column from the
    padded rows recovers the original rows, so reducibility transfers both
    ways. For bundles over an extension field the caller must supply the
    current root list so freshness can be checked exactly.
    """
    d = bundle.order

    def build(mu) -> LRSBundle:
        c = list(bundle.recurrence)
        new_c = [c[0] + mu]
        for i in range(1, d):
            new_c.append(c[i] - mu * c[i - 1])
        new_c.append(zero - mu * c[d - 1])
        sequences = [list(seq) for seq in bundle.prefix(d + 1)]
        powers = []
        acc = one
        for _ in range(d + 1):
            powers.append(acc)
            acc = acc * mu
        sequences.append(powers)
        return LRSBundle(tuple(new_c), sequences, field=bundle.field)

    if bundle.field is None:
        zero, one = Fraction(0), Fraction(1)
        candidates = (
            [Fraction(fresh_root)]
            if fresh_root is not None
            else [Fraction(p) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)]
        )
        char = characteristic_polynomial(bundle)
        for mu in candidates:
            # a repeated root slips past the unity-ratio check below
            value = Fraction(0)
            for coeff in reversed(char):
                value = value * mu + coeff
            if value == 0:
                continue
            padded = build(mu)
            if nondegeneracy_check(padded).nondegenerate:
                return padded
        raise RuntimeError("no fresh root kept the padded bundle nondegenerate")

    if roots is None:
        raise UnsupportedInstance(
            "padding a bundle over an extension field needs its root list"
        )
    field = bundle.field
    zero, one = field.zero(), field.one()
    if fresh_root is not None:
        candidates = [fresh_root]
    else:
        candidates = [field.from_fraction(p) for p in (2, 3, 5, 7, 11, 13)]
    for mu in candidates:
        mu = mu if isinstance(mu, FieldElement) else field.from_fraction(mu)
        if any(mu == r for r in roots):
            continue
        if any(_is_unity_ratio(r, mu) for r in roots):
            continue
        return build(mu)
    raise RuntimeError("no fresh root was distinct from the existing ones")
