"""Height computation and explicit size bounds.

Numeric oracle: mpmath at 80 digits evaluates reference heights; certified
intervals must contain the reference value.
"""

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skorbit.algebraic import AlgebraicNumber, isolate_roots
from skorbit.heights import (
    char_poly_with_bound,
    check_height_props,
    det_height_bound,
    height,
    height_of_element,
    kernel_basis_small,
)
from skorbit.linalg import charpoly_principal_minors, kernel_basis, mat_mul
from skorbit.numberfield import NumberField
from skorbit.polynomials import IntPolynomial


def contains_ref(interval, ref, slack=1e-15):
    return float(interval.lo) - slack <= ref <= float(interval.hi) + slack


GOLDEN = [r for r in isolate_roots(IntPolynomial.from_coeffs((-1, -1, 1))) if float(r.box(30).re.mid) > 0][0]


class TestHeightValues:
    def test_height_of_integer_two_is_log_two(self):
        iv = height(AlgebraicNumber.from_rational(2))
        assert contains_ref(iv, math.log(2))
        assert iv.width <= Fraction(1, 2 ** 64)

    def test_height_of_one_third_is_log_three(self):
        iv = height(AlgebraicNumber.from_rational(Fraction(1, 3)))
        assert contains_ref(iv, math.log(3))

    def test_height_of_unit_is_zero(self):
        assert height(AlgebraicNumber.from_rational(-1)).hi == 0

    def test_golden_ratio_height_matches_mahler_oracle(self):
        # Mahler measure of x^2-x-1 is the golden ratio itself: the other
        # root has modulus < 1 and the leading coefficient is 1.
        with mpmath.workdps(40):
            ref = float(mpmath.log((1 + mpmath.sqrt(5)) / 2) / 2)
        iv = height(GOLDEN)
        assert contains_ref(iv, ref)

    def test_height_is_conjugation_invariant(self):
        other = GOLDEN.conjugate()
        h1, h2 = height(GOLDEN, 70), height(other, 70)
        assert h1.intersects(h2)

    def test_height_nonnegative_even_for_tiny_values(self):
        iv = height(AlgebraicNumber.from_rational(Fraction(1, 1)))
        assert iv.lo >= 0

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            height(AlgebraicNumber.from_rational(0))


class TestHeightLaws:
    def test_power_law_for_golden_ratio_cubed(self):
        report = check_height_props(GOLDEN, GOLDEN, 3)
        assert report.power_homogeneous
        h1 = height(GOLDEN, 90)
        h3 = height(GOLDEN ** 3, 90)
        assert abs(h3.mid - 3 * h1.mid) < Fraction(1, 10 ** 9)

    def test_trivial_inputs_satisfy_all_laws(self):
        one = AlgebraicNumber.from_rational(1)
        report = check_height_props(one, one, 5)
        assert report.all_hold()

    def test_random_quadratic_integers_satisfy_all_laws(self):
        rng = random.Random(7)
        for _ in range(25):
            c0 = rng.randint(-9, -1)
            c1 = rng.randint(-5, 5)
            p = IntPolynomial.from_coeffs((c0, c1, 1))
            if not p.is_squarefree():
                continue
            roots = isolate_roots(p)
            report = check_height_props(roots[0], roots[-1], rng.choice([2, 3, 4]))
            assert report.all_hold()


class TestDeterminantBound:
    def test_identity_matrix_bound(self):
        K = NumberField.rationals()
        ident = [[K.one() if i == j else K.zero() for j in range(3)] for i in range(3)]
        bound, det, h_det = det_height_bound(ident)
        assert det == 1
        assert h_det.hi == 0
        assert float(bound.hi) >= 1.5 * math.log(3) - 1e-9

    def test_two_by_two_diagonal(self):
        K = NumberField.rationals()
        m = [[K.from_fraction(2), K.zero()], [K.zero(), K.from_fraction(2)]]
        bound, det, h_det = det_height_bound(m)
        assert det.as_fraction() == 4
        assert contains_ref(h_det, math.log(4))
        assert float(bound.lo) >= math.log(4)

    def test_random_gaussian_matrices_respect_bound(self):
        K = NumberField(IntPolynomial.from_coeffs((1, 0, 1)))
        rng = random.Random(11)
        for _ in range(20):
            m = [
                [K.element((rng.randint(-2, 2), rng.randint(-2, 2))) for _ in range(3)]
                for _ in range(3)
            ]
            det_height_bound(m)  # raises on violation


class TestKernelBasis:
    def test_axis_vector_complement(self):
        res = kernel_basis_small([[Fraction(1), Fraction(0), Fraction(0)]])
        assert res.basis == [[0, 1, 0], [0, 0, 1]]

    def test_diagonal_line_complement(self):
        res = kernel_basis_small([[Fraction(1), Fraction(1)]])
        assert res.basis == [[1, -1]]

    def test_two_vectors_in_three_space(self):
        res = kernel_basis_small([
            [Fraction(1), Fraction(2), Fraction(3)],
            [Fraction(0), Fraction(1), Fraction(1)],
        ])
        assert len(res.basis) == 1
        w = res.basis[0]
        assert [abs(x) for x in w] == [1, 1, 1]
        assert w[0] * 1 + w[1] * 2 + w[2] * 3 == 0
        assert w[1] * 1 + w[2] * 1 == 0

    def test_matches_exact_elimination_oracle(self):
        rng = random.Random(3)
        for _ in range(30):
            k, d = rng.randint(1, 3), rng.randint(2, 5)
            if k >= d:
                continue
            vecs = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)] for _ in range(k)]
            try:
                res = kernel_basis_small(vecs)
            except ValueError:
                continue  # dependent sample
            oracle = kernel_basis(vecs)
            assert len(res.basis) == len(oracle) == d - k
            for w in res.basis:
                for v in vecs:
                    assert sum(Fraction(a) * b for a, b in zip(v, w)) == 0

    def test_dependent_input_rejected_with_dependency(self):
        with pytest.raises(ValueError, match="dependent"):
            kernel_basis_small([
                [Fraction(1), Fraction(2)],
                [Fraction(2), Fraction(4)],
            ])

    def test_entries_within_cauchy_binet_bound(self):
        rng = random.Random(5)
        for _ in range(20):
            vecs = [[Fraction(rng.randint(-9, 9)) for _ in range(4)] for _ in range(2)]
            try:
                res = kernel_basis_small(vecs)
            except ValueError:
                continue
            for w in res.basis:
                for x in w:
                    assert x * x <= res.gram_det


class TestCharPoly:
    def test_fibonacci_companion(self):
        res = char_poly_with_bound([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(1)]])
        assert list(res.coefficients) == [Fraction(-1), Fraction(-1), Fraction(1)]

    def test_identity_matrix_power(self):
        d = 4
        res = char_poly_with_bound(
            [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
        )
        # (x-1)^4 = x^4 -4x^3 +6x^2 -4x +1
        assert list(res.coefficients) == [Fraction(1), Fraction(-4), Fraction(6), Fraction(-4), Fraction(1)]

    def test_agrees_with_principal_minor_oracle(self):
        rng = random.Random(13)
        for _ in range(15):
            d = rng.randint(2, 5)
            m = [[Fraction(rng.randint(-9, 9)) for _ in range(d)] for _ in range(d)]
            res = char_poly_with_bound(m)
            assert list(res.coefficients) == charpoly_principal_minors(m)

    def test_cayley_hamilton_up_to_eight(self):
        rng = random.Random(17)
        for d in (2, 4, 6, 8):
            m = [[Fraction(rng.randint(-4, 4)) for _ in range(d)] for _ in range(d)]
            coeffs = char_poly_with_bound(m).coefficients
            acc = [[Fraction(0)] * d for _ in range(d)]
            for c in reversed(coeffs):
                acc = mat_mul(acc, m)
                for i in range(d):
                    acc[i][i] += c
            assert all(x == 0 for row in acc for x in row)

    def test_rational_entries_respect_denominator_bound(self):
        m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(0), Fraction(1, 5)]]
        res = char_poly_with_bound(m)
        for c in res.coefficients:
            assert c.denominator <= res.denominator_bound
            assert abs(c.numerator) <= res.numerator_bound
