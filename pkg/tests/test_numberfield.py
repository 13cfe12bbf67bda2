"""Number field arithmetic, compositum construction, and automorphisms."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skorbit.algebraic import AlgebraicNumber, isolate_roots
from skorbit.linalg import charpoly_principal_minors
from skorbit.numberfield import (
    NumberField,
    compose_field,
    element_in_span,
    kp_eval,
    kp_from_int_poly,
    kp_gcd_monic,
    kp_mul,
    rational_span_closure,
    splitting_field,
)
from skorbit.polynomials import IntPolynomial, cyclotomic

GAUSS = NumberField(IntPolynomial.from_coeffs((1, 0, 1)))
CYC12 = NumberField(cyclotomic(12))

small_fracs = st.fractions(
    min_value=Fraction(-8), max_value=Fraction(8), max_denominator=6
)


def gauss_elements(draw):
    a = draw(small_fracs)
    b = draw(small_fracs)
    return GAUSS.element((a, b))


gauss_elts = st.builds(lambda a, b: GAUSS.element((a, b)), small_fracs, small_fracs)


class TestFieldAxioms:
    @given(gauss_elts, gauss_elts, gauss_elts)
    @settings(max_examples=50)
    def test_ring_laws(self, x, y, z):
        assert (x + y) * z == x * z + y * z
        assert x * (y * z) == (x * y) * z
        assert x + y == y + x

    @given(gauss_elts)
    @settings(max_examples=50)
    def test_inverse_roundtrip(self, x):
        if x.is_zero():
            with pytest.raises(ZeroDivisionError):
                x.inverse()
            return
        assert x * x.inverse() == 1
        assert (1 / x) * x == GAUSS.one()

    @given(gauss_elts, gauss_elts)
    @settings(max_examples=40)
    def test_norm_is_multiplicative(self, x, y):
        assert (x * y).norm() == x.norm() * y.norm()

    @given(gauss_elts, gauss_elts)
    @settings(max_examples=40)
    def test_trace_is_additive(self, x, y):
        assert (x + y).trace() == x.trace() + y.trace()

    def test_norm_and_trace_of_gaussian_integer(self):
        z = GAUSS.element((2, 1))
        assert z.norm() == 5
        assert z.trace() == 4

    @given(gauss_elts)
    @settings(max_examples=25, deadline=None)
    def test_characteristic_polynomial_matches_minor_expansion_oracle(self, x):
        assert x.charpoly() == charpoly_principal_minors(x.mult_matrix())

    @given(gauss_elts)
    @settings(max_examples=25, deadline=None)
    def test_minimal_polynomial_annihilates(self, x):
        if x.is_zero():
            return
        mp = x.minpoly()
        acc = GAUSS.zero()
        for c in reversed(mp.coeffs):
            acc = acc * x + c
        assert acc.is_zero()
        assert GAUSS.degree % mp.degree == 0


class TestEmbeddings:
    def test_embedding_boxes_satisfy_generator(self):
        for i in range(CYC12.degree):
            box = CYC12.generator().embed(i, 80)
            val = CYC12.gen.evaluate_box(box)
            assert val.contains_zero()

    def test_element_embedding_respects_arithmetic(self):
        x = GAUSS.element((Fraction(1, 2), 3))
        y = GAUSS.element((-2, Fraction(5, 7)))
        prod_box = (x * y).embed(1, 100)
        sep_box = x.embed(1, 100) * y.embed(1, 100)
        assert prod_box.intersects(sep_box)

    def test_as_algebraic_recovers_designated_root(self):
        z = GAUSS.element((0, 1))
        alg = z.as_algebraic(1)
        assert alg.minpoly == IntPolynomial.from_coeffs((1, 0, 1))


class TestAutomorphisms:
    def test_gaussians_have_two_automorphisms(self):
        assert GAUSS.is_galois()
        assert len(GAUSS.automorphism_images()) == 2

    def test_cyclotomic_field_is_galois_of_full_degree(self):
        assert CYC12.is_galois()
        assert len(CYC12.automorphism_images()) == 4

    def test_conjugation_automorphism_realizes_modulus_squared(self):
        lam = GAUSS.element((2, 1))
        for i in range(2):
            tau = GAUSS.conjugation_automorphism(i)
            prod = lam * lam.apply_automorphism(tau)
            assert prod.as_fraction() == 5

    def test_conjugation_in_degree_four_field(self):
        lam = CYC12.generator() + 2
        for i in range(CYC12.degree):
            tau = CYC12.conjugation_automorphism(i)
            prod = lam * lam.apply_automorphism(tau)
            box = prod.embed(i, 100)
            assert box.im.contains(Fraction(0))
            assert box.re.lo > 0

    def test_automorphisms_permute_embeddings(self):
        for img in CYC12.automorphism_images():
            perm = CYC12.embedding_permutation(img)
            assert sorted(perm) == list(range(CYC12.degree))


class TestCompositum:
    def test_sqrt2_sqrt3_compose_to_quartic(self):
        r2 = isolate_roots(IntPolynomial.from_coeffs((-2, 0, 1)))[1]
        r3 = isolate_roots(IntPolynomial.from_coeffs((-3, 0, 1)))[1]
        res = compose_field(r2, r3)
        assert res.field.gen == IntPolynomial.from_coeffs((1, 0, -10, 0, 1))
        assert (res.first * res.first).as_fraction() == 2
        assert (res.second * res.second).as_fraction() == 3

    def test_rational_operand_is_absorbed(self):
        r2 = isolate_roots(IntPolynomial.from_coeffs((-2, 0, 1)))[1]
        res = compose_field(r2, AlgebraicNumber.from_rational(Fraction(7, 2)))
        assert res.field.degree == 2
        assert res.second.as_fraction() == Fraction(7, 2)

    def test_two_rationals_compose_to_rationals(self):
        res = compose_field(
            AlgebraicNumber.from_rational(3), AlgebraicNumber.from_rational(-1)
        )
        assert res.field.degree == 1

    def test_degree_cap_is_enforced(self):
        r2 = isolate_roots(IntPolynomial.from_coeffs((-2, 0, 1)))[1]
        r3 = isolate_roots(IntPolynomial.from_coeffs((-3, 0, 1)))[1]
        from skorbit.algebraic import UnsupportedInstance

        with pytest.raises(UnsupportedInstance):
            compose_field(r2, r3, degree_cap=2)


class TestSplittingField:
    def test_splitting_field_of_two_quadratics(self):
        polys = [IntPolynomial.from_coeffs((-2, 0, 1)), IntPolynomial.from_coeffs((-3, 0, 1))]
        sd = splitting_field(polys)
        assert sd.field.degree == 4
        assert sd.field.is_galois()
        assert len(sd.roots) == 4
        for alg, img in zip(sd.roots, sd.images):
            sq = (img * img).as_fraction()
            assert sq in (2, 3)

    def test_images_match_roots_under_designated_embedding(self):
        polys = [IntPolynomial.from_coeffs((1, 0, 1))]
        sd = splitting_field(polys)
        for alg, img in zip(sd.roots, sd.images):
            assert img.embed(sd.embedding_index, 90).intersects(alg.box(90))

    def test_rational_roots_stay_in_degree_one_field(self):
        sd = splitting_field([IntPolynomial.from_coeffs((-6, 5, -1))])  # (x-2)(x-3) scaled
        assert sd.field.degree == 1
        assert sorted(img.as_fraction() for img in sd.images) == [2, 3]

    def test_repeated_factors_are_deduplicated(self):
        p = IntPolynomial.from_coeffs((-2, 0, 1))
        sd = splitting_field([p, p])
        assert sd.field.degree == 2
        assert len(sd.roots) == 2

    def test_gaussian_products_split_in_quadratic_field(self):
        # char poly of multiplication by (2+i)(2-i)=5 together with 2+i itself
        p = IntPolynomial.from_coeffs((5, -4, 1))  # minpoly of 2+i
        sd = splitting_field([p])
        assert sd.field.degree == 2
        assert sd.field.is_galois()


class TestPolynomialOverField:
    def test_factoring_over_gaussians_splits_sum_of_squares(self):
        p = IntPolynomial.from_coeffs((1, 0, 1))
        factors = GAUSS.factor_int_poly(p)
        assert len(factors) == 2
        assert all(len(kp) == 2 and m == 1 for kp, m in factors)

    def test_gcd_over_field_finds_common_linear_factor(self):
        i_elt = GAUSS.element((0, 1))
        a = [GAUSS.element((0, -1)), GAUSS.one()]  # x - i
        b = kp_mul(a, [GAUSS.one(), GAUSS.one()])  # (x - i)(x + 1)
        c = kp_mul(a, [GAUSS.element((3, 0)), GAUSS.one()])  # (x - i)(x + 3)
        g = kp_gcd_monic(b, c)
        assert len(g) == 2
        assert kp_eval(g, i_elt).is_zero()

    def test_roots_in_field_of_cyclotomic(self):
        roots = GAUSS.roots_in_field(IntPolynomial.from_coeffs((1, 0, 1)))
        assert len(roots) == 2
        assert {tuple(r.residue) for r in roots} == {
            (Fraction(0), Fraction(1)),
            (Fraction(0), Fraction(-1)),
        }


class TestRationalSpans:
    def test_span_closure_of_i_is_whole_field(self):
        basis = rational_span_closure([GAUSS.element((0, 1))])
        assert len(basis) == 2

    def test_span_closure_of_rational_is_trivial(self):
        basis = rational_span_closure([GAUSS.from_fraction(5)])
        assert len(basis) == 1

    def test_membership_distinguishes_subfield(self):
        zeta = CYC12.generator()
        sq = zeta * zeta  # primitive 6th root, generates a proper subfield
        basis = rational_span_closure([sq])
        assert len(basis) == 2
        assert element_in_span(sq * sq, basis)
        assert not element_in_span(zeta, basis)
