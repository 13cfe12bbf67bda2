"""Tests for orbit instances, recurrence bundles, and the bridge between them.

Orbit membership is always cross-checked against a brute-force oracle that
iterates the matrix and solves a span-membership system directly, without
the orthogonal-complement pairing the library uses internally. Recurrence
values are cross-checked by unrolling the recurrence in plain Fractions.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from skorbit.algebraic import UnsupportedInstance
from skorbit.lds import (
    LDSInstance,
    LRSBundle,
    characteristic_polynomial,
    exp_poly_form,
    krylov_dimension,
    nondegeneracy_check,
    orbit_to_simskolem,
    reduce_to_stable,
    simskolem_to_orbit,
)
from skorbit.linalg import det_exact, in_row_span, mat_mul, mat_vec, rank
from skorbit.numberfield import NumberField
from skorbit.polynomials import IntPolynomial

# --- oracles ---------------------------------------------------------------


def brute_force_hits(matrix, start, target_rows, horizon):
    """Oracle: all n < horizon with A^n x in the row span of target_rows."""
    a = [[Fraction(x) for x in row] for row in matrix]
    v = [Fraction(x) for x in start]
    hits = []
    for n in range(horizon):
        if target_rows:
            inside = in_row_span([list(r) for r in target_rows], v)
        else:
            inside = all(x == 0 for x in v)
        if inside:
            hits.append(n)
        v = mat_vec(a, v)
    return hits


def naive_recurrence_values(recurrence, initial, count):
    """Oracle: unroll u_n = c_1 u_{n-1} + ... + c_d u_{n-d} directly."""
    vals = [Fraction(x) for x in initial]
    d = len(recurrence)
    while len(vals) < count:
        vals.append(sum(Fraction(recurrence[i]) * vals[-1 - i] for i in range(d)))
    return vals[:count]


# --- fixtures ----------------------------------------------------------------

FIB_MATRIX = ((0, 1), (1, 1))
FIB_INSTANCE = LDSInstance(FIB_MATRIX, (1, 0), ((0, 1),))
ROTATION = ((0, -1), (1, 0))
REFLECTION = ((1, 0), (0, -1))

# Factors whose root ratios are never roots of unity, in any combination:
# moduli 2, 3, 5, golden ratio pair, squared golden ratio pair.
SAFE_FACTORS = [
    IntPolynomial((-2, 1)),
    IntPolynomial((-3, 1)),
    IntPolynomial((-5, 1)),
    IntPolynomial((-1, -1, 1)),
    IntPolynomial((1, -3, 1)),
]


def recurrence_of(poly):
    """Recurrence coefficients of a monic ascending polynomial."""
    d = poly.degree
    assert poly.is_monic()
    return tuple(Fraction(-poly.coeffs[d - i]) for i in range(1, d + 1))


def companion_of(recurrence):
    d = len(recurrence)
    return tuple(
        tuple(
            Fraction(recurrence[d - 1 - i]) if j == d - 1 else Fraction(1 if i == j + 1 else 0)
            for j in range(d)
        )
        for i in range(d)
    )


def random_unimodular(rng, d):
    """Unimodular integer matrix with its exact inverse, via shear products."""
    ops = []
    if d >= 2:
        for _ in range(d + 2):
            i, j = rng.sample(range(d), 2)
            ops.append((i, j, rng.randint(-2, 2)))
    u = [[Fraction(1 if r == c else 0) for c in range(d)] for r in range(d)]
    for i, j, c in ops:
        u[i] = [u[i][k] + c * u[j][k] for k in range(d)]
    uinv = [[Fraction(1 if r == c else 0) for c in range(d)] for r in range(d)]
    for i, j, c in reversed(ops):
        uinv[i] = [uinv[i][k] - c * uinv[j][k] for k in range(d)]
    return u, uinv


def random_target_rows(rng, d, t):
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(t)]
        if t == 0 or rank([[Fraction(x) for x in r] for r in rows]) == t:
            return tuple(tuple(Fraction(x) for x in r) for r in rows)


def random_reduced_instance(rng, max_degree=4):
    """Invertible, non-degenerate, full-Krylov instance with a random target."""
    pool = SAFE_FACTORS[:]
    rng.shuffle(pool)
    poly = IntPolynomial((1,))
    for f in pool:
        if poly.degree + f.degree <= max_degree:
            poly = poly * f
        if poly.degree >= 2 and rng.random() < 0.5:
            break
    d = poly.degree
    rec = recurrence_of(poly)
    u, uinv = random_unimodular(rng, d)
    a = mat_mul(mat_mul(u, [list(r) for r in companion_of(rec)]), uinv)
    x = tuple(row[0] for row in u)  # image of the cyclic basis vector
    target = random_target_rows(rng, d, rng.randrange(0, d))
    inst = LDSInstance(tuple(tuple(r) for r in a), x, target)
    assert krylov_dimension(inst.matrix, inst.start).dimension == d
    assert nondegeneracy_check(inst.matrix).nondegenerate
    return inst


MIXED_BLOCKS = [
    ROTATION,
    REFLECTION,
    ((0, 1), (0, 0)),  # nilpotent
    ((2,),),
    ((0,),),
    FIB_MATRIX,
]


def random_mixed_instance(rng):
    """Possibly degenerate, possibly singular block instance for decomposition."""
    blocks = []
    total = 0
    while total < 4 and (not blocks or rng.random() < 0.6):
        b = MIXED_BLOCKS[rng.randrange(len(MIXED_BLOCKS))]
        if total + len(b) > 5:
            break
        blocks.append(b)
        total += len(b)
    d = total
    a = [[Fraction(0)] * d for _ in range(d)]
    pos = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                a[pos + i][pos + j] = Fraction(x)
        pos += len(b)
    u, uinv = random_unimodular(rng, d)
    a = mat_mul(mat_mul(u, a), uinv)
    x = tuple(rng.randint(-2, 2) for _ in range(d))
    target = random_target_rows(rng, d, rng.randrange(0, d))
    return LDSInstance(tuple(tuple(r) for r in a), x, target)


# --- instance validation -----------------------------------------------------


class TestInstanceValidation:
    def test_rejects_non_square_matrix(self):
        with pytest.raises(ValueError, match="square"):
            LDSInstance(((1, 2),), (1,), ())

    def test_rejects_start_length_mismatch(self):
        with pytest.raises(ValueError, match="start"):
            LDSInstance(FIB_MATRIX, (1, 0, 0), ((0, 1),))

    def test_rejects_dependent_target_rows(self):
        m3 = ((2, 0, 0), (0, 3, 0), (0, 0, 5))
        with pytest.raises(ValueError, match="independent"):
            LDSInstance(m3, (1, 0, 0), ((1, 1, 0), (2, 2, 0)))

    def test_rejects_full_space_target(self):
        with pytest.raises(ValueError, match="proper"):
            LDSInstance(FIB_MATRIX, (1, 0), ((1, 0), (0, 1)))

    def test_zero_target_means_zero_vector(self):
        inst = LDSInstance(((0, 1), (0, 0)), (0, 1), ())
        # orbit e2 -> e1 -> 0 -> 0 ...
        assert inst.membership_prefix(4) == [False, False, True, True]

    @pytest.mark.parametrize("seed", range(12))
    def test_membership_matches_span_oracle(self, seed):
        rng = random.Random(seed)
        inst = random_mixed_instance(rng)
        hits = brute_force_hits(inst.matrix, inst.start, inst.target_basis, 12)
        member = inst.membership_prefix(12)
        assert [n for n, m in enumerate(member) if m] == hits


# --- Krylov spaces -----------------------------------------------------------


class TestKrylov:
    def test_identity_from_basis_vector(self):
        assert krylov_dimension(((1, 0), (0, 1)), (1, 0)).dimension == 1

    def test_companion_start_is_cyclic(self):
        assert krylov_dimension(FIB_MATRIX, (1, 0)).dimension == 2

    def test_nilpotent_start_spans_two(self):
        assert krylov_dimension(((0, 1), (0, 0)), (0, 1)).dimension == 2

    def test_nilpotent_shifted_start_drops(self):
        # One step into the orbit the dimension is smaller: not stable yet.
        assert krylov_dimension(((0, 1), (0, 0)), (1, 0)).dimension == 1

    def test_zero_start(self):
        res = krylov_dimension(FIB_MATRIX, (0, 0))
        assert res.dimension == 0 and res.basis == ()

    @pytest.mark.parametrize("seed", range(8))
    def test_basis_is_independent_and_closes(self, seed):
        rng = random.Random(100 + seed)
        inst = random_mixed_instance(rng)
        res = krylov_dimension(inst.matrix, inst.start)
        if res.dimension == 0:
            return
        rows = [list(r) for r in res.basis]
        assert rank(rows) == res.dimension
        nxt = mat_vec([list(r) for r in inst.matrix], list(res.basis[-1]))
        assert in_row_span(rows, nxt)

    @given(
        st.lists(st.integers(-3, 3), min_size=9, max_size=9),
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    )
    @settings(max_examples=40, deadline=None)
    def test_invertible_step_preserves_dimension(self, flat, start):
        a = [flat[0:3], flat[3:6], flat[6:9]]
        assume(det_exact([[Fraction(x) for x in r] for r in a]) != 0)
        before = krylov_dimension(a, start).dimension
        stepped = mat_vec([[Fraction(x) for x in r] for r in a], [Fraction(x) for x in start])
        assert krylov_dimension(a, stepped).dimension == before


# --- bundles -----------------------------------------------------------------


class TestBundleBasics:
    def test_rejects_zero_trailing_coefficient(self):
        with pytest.raises(ValueError, match="trailing"):
            LRSBundle((1, 0), ((0, 1),))

    def test_rejects_dependent_initial_segments(self):
        with pytest.raises(ValueError, match="independent"):
            LRSBundle((1, 1), ((1, 2), (2, 4)))

    def test_rejects_wrong_segment_length(self):
        with pytest.raises(ValueError, match="length"):
            LRSBundle((1, 1), ((1, 2, 3),))

    def test_prefix_matches_naive_oracle(self):
        b = LRSBundle((1, 1), ((0, 1),))
        assert b.prefix(10)[0] == naive_recurrence_values((1, 1), (0, 1), 10)

    @given(
        st.integers(1, 4).flatmap(
            lambda d: st.tuples(
                st.lists(st.integers(-3, 3), min_size=d, max_size=d),
                st.lists(st.integers(-3, 3), min_size=d, max_size=d),
            )
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_prefix_property(self, pair):
        rec, init = pair
        assume(rec[-1] != 0)
        assume(any(x != 0 for x in init))
        b = LRSBundle(tuple(rec), (tuple(init),))
        assert b.prefix(12)[0] == naive_recurrence_values(rec, init, 12)

    def test_zero_positions_fibonacci(self):
        assert LRSBundle((1, 1), ((0, 1),)).zero_positions(25) == [0]

    def test_characteristic_polynomial(self):
        b = LRSBundle((Fraction(1, 2), 3), ((1, 0),))
        assert characteristic_polynomial(b) == (-3, Fraction(-1, 2), 1)

    def test_field_valued_bundle(self):
        gauss = NumberField(IntPolynomial((1, 0, 1)))
        i = gauss.generator()
        b = LRSBundle((i,), ((gauss.one(),),), field=gauss)
        vals = b.prefix(5)[0]
        assert vals[2] == gauss.from_fraction(-1) and vals[4] == gauss.one()
        assert b.zero_positions(8) == []

    def test_field_mismatch_rejected(self):
        gauss = NumberField(IntPolynomial((1, 0, 1)))
        other = NumberField(IntPolynomial((-2, 0, 1)))
        with pytest.raises(ValueError, match="field"):
            LRSBundle((other.generator(),), ((other.one(),),), field=gauss)


# --- non-degeneracy ----------------------------------------------------------


class TestNondegeneracy:
    def test_fibonacci_is_nondegenerate(self):
        rep = nondegeneracy_check(FIB_MATRIX)
        assert rep.nondegenerate and rep.torsion_lcm == 1 and rep.root_count == 2

    def test_sign_flip_has_torsion_two(self):
        rep = nondegeneracy_check(REFLECTION)
        assert not rep.nondegenerate and rep.torsion_lcm == 2

    def test_cube_root_block_has_torsion_three(self):
        # block diag of [1] and the companion of x^2 + x + 1
        m = ((1, 0, 0), (0, 0, -1), (0, 1, -1))
        assert nondegeneracy_check(m).torsion_lcm == 3

    def test_polynomial_input(self):
        rep = nondegeneracy_check(IntPolynomial((-2, 0, 1)))
        assert rep.torsion_lcm == 2  # the two square roots differ by sign

    def test_bundle_input(self):
        assert nondegeneracy_check(LRSBundle((1, 1), ((0, 1),))).nondegenerate

    def test_zero_eigenvalues_are_ignored(self):
        m = ((0, 1, 0), (0, 0, 0), (0, 0, 2))
        rep = nondegeneracy_check(m)
        assert rep.nondegenerate and rep.root_count == 1


# --- decomposition -----------------------------------------------------------


class TestReduceToStable:
    def test_fibonacci_already_stable(self):
        dec = reduce_to_stable(FIB_INSTANCE)
        assert dec.torsion_lcm == 1
        assert dec.stable_dimension == 2
        assert dec.prefix_hits == (1,)
        assert dec.full_residues == ()
        sub = dec.sub_orbits[0]
        # In the Krylov chart the dynamics look identical, just shifted d steps.
        assert sub.instance.matrix == FIB_INSTANCE.matrix

    def test_sign_flip_splits_into_two_lines(self):
        inst = LDSInstance(REFLECTION, (1, 1), ((1, 0),))
        dec = reduce_to_stable(inst)
        assert dec.torsion_lcm == 2
        assert dec.stable_dimension == 1
        assert len(dec.sub_orbits) == 2
        assert dec.full_residues == ()
        assert not any(dec.hits(n) for n in range(12))

    def test_rotation_hits_odd_indices(self):
        inst = LDSInstance(ROTATION, (1, 0), ((0, 1),))
        dec = reduce_to_stable(inst)
        assert dec.torsion_lcm == 2
        assert dec.prefix_hits == (1,)
        assert dec.full_residues == (1,)
        assert [sub.residue for sub in dec.sub_orbits] == [0]
        for n in range(16):
            assert dec.hits(n) == (n % 2 == 1)

    def test_nilpotent_block_drops_dimension(self):
        inst = LDSInstance(
            ((0, 1, 0), (0, 0, 0), (0, 0, 2)), (1, 1, 1), ((1, 0, 0), (0, 1, 0))
        )
        dec = reduce_to_stable(inst)
        assert dec.stable_dimension == 1  # three minus the double zero eigenvalue

    def test_zero_start_hits_everywhere(self):
        inst = LDSInstance(FIB_MATRIX, (0, 0), ((0, 1),))
        dec = reduce_to_stable(inst)
        assert dec.stable_dimension == 0
        assert dec.full_residues == (0,)
        assert all(dec.hits(n) for n in range(10))

    def test_torsion_cap(self):
        inst = LDSInstance(ROTATION, (1, 0), ((0, 1),))
        with pytest.raises(UnsupportedInstance, match="torsion"):
            reduce_to_stable(inst, torsion_cap=1)

    @pytest.mark.parametrize("seed", range(25))
    def test_decomposition_matches_oracle(self, seed):
        rng = random.Random(1000 + seed)
        inst = random_mixed_instance(rng)
        dec = reduce_to_stable(inst)
        hits = brute_force_hits(inst.matrix, inst.start, inst.target_basis, 36)
        assert [n for n in range(36) if dec.hits(n)] == hits

    @pytest.mark.parametrize("seed", range(10))
    def test_sub_orbit_invariants(self, seed):
        rng = random.Random(2000 + seed)
        dec = reduce_to_stable(random_mixed_instance(rng))
        for sub in dec.sub_orbits:
            inst = sub.instance
            mu = dec.stable_dimension
            assert inst.dimension == mu
            assert nondegeneracy_check(inst.matrix).nondegenerate
            # Full Krylov dimension, stable under dropping short prefixes.
            orbit = inst.orbit_prefix(4)
            for v in orbit:
                assert krylov_dimension(inst.matrix, v).dimension == mu


# --- bridge: orbits to bundles -----------------------------------------------


class TestBridgeForward:
    def test_fibonacci_fixture(self):
        bundle = orbit_to_simskolem(FIB_INSTANCE)
        assert bundle.recurrence == (1, 1)
        assert bundle.sequences == ((1, 0),)
        assert bundle.zero_positions(20) == brute_force_hits(
            FIB_INSTANCE.matrix, FIB_INSTANCE.start, FIB_INSTANCE.target_basis, 20
        )

    def test_zero_target_gives_full_pairing(self):
        inst = LDSInstance(FIB_MATRIX, (1, 0), ())
        bundle = orbit_to_simskolem(inst)
        assert bundle.count == 2
        assert bundle.zero_positions(20) == []

    def test_rejects_degenerate(self):
        inst = LDSInstance(REFLECTION, (1, 1), ((1, 0),))
        with pytest.raises(ValueError, match="degenerate"):
            orbit_to_simskolem(inst)

    def test_rejects_krylov_deficient(self):
        inst = LDSInstance(((2, 0), (0, 3)), (1, 0), ((0, 1),))
        with pytest.raises(ValueError, match="proper subspace"):
            orbit_to_simskolem(inst)

    def test_rejects_singular(self):
        inst = LDSInstance(((2, 0), (0, 0)), (1, 1), ((0, 1),))
        with pytest.raises(ValueError, match="singular"):
            orbit_to_simskolem(inst)

    @pytest.mark.parametrize("seed", range(20))
    def test_zero_sets_agree_with_oracle(self, seed):
        rng = random.Random(3000 + seed)
        inst = random_reduced_instance(rng)
        bundle = orbit_to_simskolem(inst)
        assert bundle.count == inst.dimension - inst.target_dimension
        hits = brute_force_hits(inst.matrix, inst.start, inst.target_basis, 60)
        assert bundle.zero_positions(60) == hits


# --- bridge: bundles to orbits -----------------------------------------------


class TestBridgeReverse:
    def test_fibonacci_fixture(self):
        bundle = LRSBundle((1, 1), ((0, 1),))
        inst = simskolem_to_orbit(bundle)
        assert inst.matrix == ((0, 1), (1, 1))
        assert inst.start == (1, 0)
        assert inst.target_basis == ((1, 0),)
        hits = brute_force_hits(inst.matrix, inst.start, inst.target_basis, 20)
        assert hits == bundle.zero_positions(20) == [0]

    def test_result_is_reduced(self):
        bundle = LRSBundle((2, 1, -2, -1), ((0, 1, 1, 3),))
        inst = simskolem_to_orbit(bundle)
        d = inst.dimension
        assert krylov_dimension(inst.matrix, inst.start).dimension == d
        assert nondegeneracy_check(inst.matrix).nondegenerate

    def test_rejects_field_bundle(self):
        gauss = NumberField(IntPolynomial((1, 0, 1)))
        b = LRSBundle((gauss.from_fraction(2),), ((gauss.one(),),), field=gauss)
        with pytest.raises(ValueError, match="rational"):
            simskolem_to_orbit(b)

    def test_rejects_degenerate_bundle(self):
        with pytest.raises(ValueError, match="degenerate"):
            simskolem_to_orbit(LRSBundle((0, 4), ((0, 4),)))

    @pytest.mark.parametrize("seed", range(15))
    def test_round_trip_preserves_hitting_times(self, seed):
        rng = random.Random(4000 + seed)
        inst = random_reduced_instance(rng)
        back = simskolem_to_orbit(orbit_to_simskolem(inst))
        assert brute_force_hits(
            inst.matrix, inst.start, inst.target_basis, 50
        ) == brute_force_hits(back.matrix, back.start, back.target_basis, 50)

    @pytest.mark.parametrize("seed", range(10))
    def test_reverse_then_forward_preserves_zero_sets(self, seed):
        rng = random.Random(5000 + seed)
        pool = SAFE_FACTORS[:]
        rng.shuffle(pool)
        poly = pool[0] * pool[1]
        rec = recurrence_of(poly)
        d = poly.degree
        k = rng.randint(1, d)
        rows = []
        while len(rows) < k:
            cand = [rng.randint(-3, 3) for _ in range(d)]
            if rank([[Fraction(x) for x in r] for r in rows + [cand]]) == len(rows) + 1:
                rows.append(cand)
        bundle = LRSBundle(rec, tuple(tuple(r) for r in rows))
        again = orbit_to_simskolem(simskolem_to_orbit(bundle))
        assert bundle.zero_positions(60) == again.zero_positions(60)


# --- closed forms ------------------------------------------------------------


class TestExpPolyForm:
    def test_fibonacci_coefficients(self):
        # Partial fractions of z / (1 - z - z^2) give 1/(2r - 1) at each
        # root r, the classical 1/sqrt(5) pair.
        form = exp_poly_form(LRSBundle((1, 1), ((0, 1),)))[0]
        assert form.field.degree == 2 and len(form.groups) == 2
        one = form.field.one()
        for g in form.groups:
            assert len(g.coefficients) == 1
            assert g.coefficients[0] * (g.root * 2 - one) == one

    def test_linear_times_power(self):
        # u_n = n 2^n from u = (0, 2) under u_n = 4u_{n-1} - 4u_{n-2}.
        form = exp_poly_form(LRSBundle((4, -4), ((0, 2),)))[0]
        assert len(form.groups) == 1
        g = form.groups[0]
        assert g.root == form.field.from_fraction(2)
        assert g.coefficients[0].is_zero()
        assert g.coefficients[1] == form.field.one()

    def test_sum_of_two_powers(self):
        form = exp_poly_form(LRSBundle((5, -6), ((2, 5),)))[0]
        roots = sorted(g.root.residue[0] for g in form.groups)
        assert roots == [2, 3]
        assert all(g.coefficients == (form.field.one(),) for g in form.groups)

    def test_non_monic_factor(self):
        # 1^n + (-1/2)^n: the cleared characteristic polynomial has a
        # non-monic irreducible factor 2x + 1.
        b = LRSBundle((Fraction(1, 2), Fraction(1, 2)), ((2, Fraction(1, 2)),))
        form = exp_poly_form(b)[0]
        roots = sorted(g.root.residue[0] for g in form.groups)
        assert roots == [Fraction(-1, 2), 1]
        vals = b.prefix(10)[0]
        assert all(form.evaluate(n) == form.field.from_fraction(vals[n]) for n in range(10))

    def test_degenerate_bundle_allowed(self):
        form = exp_poly_form(LRSBundle((0, 4), ((0, 4),)))[0]
        roots = sorted(g.root.residue[0] for g in form.groups)
        assert roots == [-2, 2]

    def test_repeated_quadratic_factor(self):
        poly = IntPolynomial((-1, -1, 1)) ** 2
        b = LRSBundle(recurrence_of(poly), ((0, 1, 1, 3),))
        form = exp_poly_form(b)[0]
        assert form.order == 4
        assert [len(g.coefficients) for g in form.groups] == [2, 2]
        vals = b.prefix(12)[0]
        assert all(form.evaluate(n) == form.field.from_fraction(vals[n]) for n in range(12))

    def test_two_sequences_share_roots_and_field(self):
        poly = IntPolynomial((-2, 1)) * IntPolynomial((-1, -1, 1))
        b = LRSBundle(recurrence_of(poly), ((1, 0, 2), (0, 1, 1)))
        forms = exp_poly_form(b)
        assert len(forms) == 2
        assert forms[0].field == forms[1].field
        assert [g.root for g in forms[0].groups] == [g.root for g in forms[1].groups]
        assert forms[0].term_order() == forms[1].term_order()
        vals = b.prefix(10)
        for i, form in enumerate(forms):
            assert all(
                form.evaluate(n) == form.field.from_fraction(vals[i][n]) for n in range(10)
            )

    def test_height_checks_hold(self):
        poly = IntPolynomial((-1, -1, 1)) ** 2
        form = exp_poly_form(LRSBundle(recurrence_of(poly), ((0, 1, 1, 3),)))[0]
        assert form.height_checks
        assert all(c.holds for c in form.height_checks)
        for c in form.height_checks:
            assert c.height.lo <= c.bound.hi

    def test_rejects_field_bundle(self):
        gauss = NumberField(IntPolynomial((1, 0, 1)))
        b = LRSBundle((gauss.from_fraction(2),), ((gauss.one(),),), field=gauss)
        with pytest.raises(UnsupportedInstance):
            exp_poly_form(b)

    def test_splitting_degree_cap(self):
        b = LRSBundle((0, 5, 0, -6), ((1, 2, 3, 4),))  # (x^2-2)(x^2-3)
        with pytest.raises(UnsupportedInstance):
            exp_poly_form(b, degree_cap=2)
        form = exp_poly_form(b)[0]
        assert form.field.degree == 4 and len(form.groups) == 4

    def test_term_order_enumerates_all_columns(self):
        poly = IntPolynomial((-2, 1)) * IntPolynomial((-1, -1, 1))
        form = exp_poly_form(LRSBundle(recurrence_of(poly), ((1, 0, 2),)))[0]
        order = form.term_order()
        assert len(order) == form.order == 3
        assert len(form.coefficient_vector()) == 3

    @pytest.mark.parametrize("seed", range(10))
    def test_reconstruction_property(self, seed):
        rng = random.Random(6000 + seed)
        pool = SAFE_FACTORS[:]
        rng.shuffle(pool)
        poly = pool[0] * pool[1]
        if rng.random() < 0.4:
            poly = poly * pool[0]  # repeat a factor for a higher multiplicity
        d = poly.degree
        init = tuple(rng.randint(-4, 4) for _ in range(d))
        if not any(init):
            init = (1,) + init[1:]
        b = LRSBundle(recurrence_of(poly), (init,))
        form = exp_poly_form(b)[0]
        assert form.order == d
        vals = b.prefix(2 * d + 4)[0]
        assert all(
            form.evaluate(n) == form.field.from_fraction(vals[n])
            for n in range(2 * d + 4)
        )
        assert all(c.holds for c in form.height_checks)
