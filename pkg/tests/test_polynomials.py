"""Integer and rational polynomial arithmetic against evaluation oracles."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from skorbit.polynomials import (
    IntPolynomial,
    cyclotomic,
    qp_clear_denominators,
    qp_divmod,
    qp_eval,
    qp_ext_euclid,
    qp_gcd_monic,
    qp_mul,
    qp_trim,
    rational_minpoly,
)

small_ints = st.integers(min_value=-30, max_value=30)
int_polys = st.lists(small_ints, min_size=0, max_size=6).map(IntPolynomial.from_coeffs)
rational_coeffs = st.fractions(
    min_value=Fraction(-10), max_value=Fraction(10), max_denominator=20
)
q_polys = st.lists(rational_coeffs, min_size=0, max_size=5).map(qp_trim)
eval_points = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=12
)


@given(int_polys, int_polys, eval_points)
def test_ring_operations_commute_with_evaluation(p, q, v):
    assert (p + q)(v) == p(v) + q(v)
    assert (p - q)(v) == p(v) - q(v)
    assert (p * q)(v) == p(v) * q(v)


@given(int_polys)
def test_primitive_part_has_unit_content_and_positive_lead(p):
    if p.is_zero():
        return
    prim = p.primitive()
    assert prim.content() == 1
    assert prim.leading > 0


@given(int_polys, eval_points)
def test_derivative_matches_difference_quotient_on_linear_terms(p, v):
    # d/dx respects linearity: (p + p)' = 2 p'
    doubled = (p + p).derivative()
    single = p.derivative()
    assert doubled(v) == 2 * single(v)


def test_reversed_coefficients_invert_nonzero_roots():
    p = IntPolynomial.from_coeffs((-2, 1))  # x - 2, root 2
    r = p.reversed_coeffs()  # 1 - 2x, root 1/2
    assert r(Fraction(1, 2)) == 0


@given(int_polys, small_ints)
def test_argument_shift_is_evaluation_shift(p, c):
    v = Fraction(3, 7)
    assert p.shift_argument(c)(v) == p(v + c)


def test_cyclotomic_polynomials_match_known_values():
    assert cyclotomic(1) == IntPolynomial.from_coeffs((-1, 1))
    assert cyclotomic(4) == IntPolynomial.from_coeffs((1, 0, 1))
    assert cyclotomic(12) == IntPolynomial.from_coeffs((1, 0, -1, 0, 1))


def test_rational_minpoly_is_primitive_with_positive_lead():
    p = rational_minpoly(Fraction(-6, 4))
    assert p == IntPolynomial.from_coeffs((3, 2))
    assert p(Fraction(-3, 2)) == 0


def test_squarefree_detection():
    p = IntPolynomial.from_coeffs((-2, 0, 1))  # x^2 - 2
    sq = p * p
    assert p.is_squarefree()
    assert not sq.is_squarefree()
    assert sq.squarefree_part() == p.primitive()


def test_resultant_of_coprime_quadratics_is_nonzero():
    a = IntPolynomial.from_coeffs((-2, 0, 1))
    b = IntPolynomial.from_coeffs((-3, 0, 1))
    assert a.resultant(b) == 1  # (2-3)^2 = 1


@given(q_polys, q_polys, eval_points)
@settings(max_examples=60)
def test_rational_poly_division_reconstructs_dividend(a, b, v):
    if not b:
        return
    q, r = qp_divmod(a, b)
    lhs = qp_eval(a, v)
    rhs = qp_eval(qp_mul(q, b), v) + qp_eval(r, v)
    assert lhs == rhs
    assert len(r) < len(b)


@given(q_polys, q_polys, eval_points)
@settings(max_examples=60)
def test_extended_euclid_produces_bezout_identity(a, b, v):
    if not a and not b:
        return
    g, s, t = qp_ext_euclid(a, b)
    assert qp_eval(s, v) * qp_eval(a, v) + qp_eval(t, v) * qp_eval(b, v) == qp_eval(g, v)
    if g:
        assert g[-1] == 1  # monic


def test_gcd_of_multiples_recovers_common_factor():
    common = qp_trim((Fraction(-1), Fraction(1)))  # x - 1
    a = qp_mul(common, qp_trim((Fraction(2), Fraction(3))))
    b = qp_mul(common, qp_trim((Fraction(5),)))
    g = qp_gcd_monic(a, b)
    assert g == common


@given(q_polys)
def test_clearing_denominators_preserves_roots_up_to_scale(p):
    if not p:
        return
    ip, den = qp_clear_denominators(p)
    assert den > 0
    v = Fraction(2, 3)
    assert ip(v) == qp_eval(p, v) * den
