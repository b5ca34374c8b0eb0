from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimernet.algebra import (
    EXACT,
    FLOAT,
    ExactScalar,
    FloatScalar,
    LaurentPoly2,
    PolyMatrix,
    RationalFunction,
    as_scalar,
    det_fraction_free,
    equal_up_to_spin,
    format_poly,
    format_scalar,
    gcd_for_lambda_divisor,
    parse_scalar,
    uni_divmod,
)
from dimernet.algebra.laurent import SPIN_ORDER
from dimernet.errors import (
    DivisionByZeroError,
    FloatBackendUnsupported,
    MixedBackendError,
    NonSquareError,
    ZeroPolynomialError,
)

from oracles import euclid_gcd, laplace_det, lambda_list

Z = ExactScalar.zeta
LAM = LaurentPoly2.lam()
MU = LaurentPoly2.mu()
ONE = LaurentPoly2.constant(1)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exact_scalars = st.tuples(small, small, small, small).map(
    lambda c: sum((ExactScalar.rational(c[k]) * Z(k) for k in range(4)), ExactScalar.rational(0)))
nonzero_scalars = exact_scalars.filter(lambda s: not s.is_zero())


@st.composite
def laurent_polys(draw, max_terms=4, deg=2):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        key = (draw(st.integers(-deg, deg)), draw(st.integers(-deg, deg)))
        terms[key] = draw(st.integers(-4, 4).filter(bool))
    return LaurentPoly2(terms)


# -- scalars -----------------------------------------------------------------


def test_zeta_relations():
    assert Z(1) * Z(3) == ExactScalar.rational(-1)
    assert (1 + Z(2)) * (1 - Z(2)) == ExactScalar.rational(2)
    assert Z(1).inverse() == -Z(3)
    assert Z(4) == ExactScalar.rational(-1)


def test_inverse_by_linear_solve():
    # solve zeta * x = 1 in the basis (1, z, z^2, z^3): multiplication by z shifts and negates the top
    x = [Fraction(0)] * 4
    # z * (x0 + x1 z + x2 z^2 + x3 z^3) = -x3 + x0 z + x1 z^2 + x2 z^3 = 1
    x[3] = Fraction(-1)
    assert ExactScalar(tuple(x)) == Z(1).inverse()


def test_mixed_backend_rejected():
    with pytest.raises(MixedBackendError):
        _ = ExactScalar.rational(1) + FloatScalar(1.0)
    with pytest.raises(MixedBackendError):
        as_scalar(0.5, EXACT)


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        ExactScalar.rational(0).inverse()


def test_float_tolerance_equality():
    a = FloatScalar(1.0)
    assert a.close_to(FloatScalar(1.0 + 1e-12))
    assert not a.close_to(FloatScalar(1.0 + 1e-6))


@pytest.mark.parametrize("text", ["3", "-7/2", "z", "-z^3", "1/2 + 3/4*z^2"])
def test_scalar_text_round_trip(text):
    s = parse_scalar(text)
    assert parse_scalar(format_scalar(s)) == s


@settings(max_examples=300, deadline=None)
@given(exact_scalars, exact_scalars, exact_scalars)
def test_field_associativity_and_float_image(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).to_float().close_to(a.to_float() * b.to_float())


@settings(max_examples=300, deadline=None)
@given(nonzero_scalars)
def test_inverse_property(a):
    assert a * a.inverse() == ExactScalar.rational(1)


def test_thousand_random_field_elements():
    rng = random.Random(0)

    def draw():
        return sum((ExactScalar.rational(Fraction(rng.randint(-9, 9), rng.randint(1, 9))) * Z(k)
                    for k in range(4)), ExactScalar.rational(0))

    for _ in range(1000):
        a, b, c = draw(), draw(), draw()
        assert (a * b) * c == a * (b * c)
        if not a.is_zero():
            assert a * a.inverse() == ExactScalar.rational(1)
        assert (a * b).to_float().close_to(a.to_float() * b.to_float())


# -- Laurent polynomials -----------------------------------------------------


def test_polynomial_examples():
    assert format_poly((ONE + LAM * MU) * (ONE - LAM * MU)) == "1 - lambda^2*mu^2"
    assert format_poly((ONE - 2 * LAM + MU).substitute(-1, 1)) == "1 + 2*lambda + mu"
    assert (ONE - 2 * MU + MU * MU).evaluate(5, 1) == ExactScalar.rational(0)


def test_normalize_examples():
    p, shift, lead = (3 * LAM ** 2 * MU - 3 * LAM ** 3 * MU ** 2).normalize()
    assert (format_poly(p), shift, lead) == ("1 - lambda*mu", (2, 1), ExactScalar.rational(3))
    assert ONE.normalize() == (ONE, (0, 0), ExactScalar.rational(1))
    p, shift, lead = LaurentPoly2({(0, -1): -2, (0, 0): 2}).normalize()
    assert (format_poly(p), shift, lead) == ("1 - mu", (0, -1), ExactScalar.rational(-2))


def test_normalize_zero_raises():
    with pytest.raises(ZeroPolynomialError):
        LaurentPoly2({}).normalize()


def test_golden_rendering():
    assert format_poly(ONE - 2 * MU + MU * MU) == "1 - 2*mu + mu^2"
    assert format_poly(LaurentPoly2({(1, -1): ExactScalar((0, 1, 0, 0), 2)})) == "(1/2)*z*lambda*mu^-1"


def test_spin_examples():
    assert equal_up_to_spin(ONE + LAM, ONE - LAM) == (-1, 1)
    p = ONE - 2 * MU + MU * MU
    assert equal_up_to_spin(p, p) == (1, 1)
    assert equal_up_to_spin(MU - LAM, MU + LAM) == (-1, 1)
    assert equal_up_to_spin(ONE + LAM, ONE + 2 * LAM) is None


@settings(max_examples=150, deadline=None)
@given(laurent_polys(), st.sampled_from(SPIN_ORDER))
def test_spin_flip_always_matches(p, s):
    assert equal_up_to_spin(p.substitute(*s), p) is not None
    assert p.substitute(-1, -1).substitute(-1, -1) == p


@settings(max_examples=150, deadline=None)
@given(laurent_polys())
def test_normalize_idempotent_and_reconstructs(p):
    c, (a, b), lead = p.normalize()
    assert c.normalize() == (c, (0, 0), ExactScalar.rational(1))
    assert (c * lead).shift(a, b) == p


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys(), st.integers(-3, 3), st.integers(-3, 3))
def test_evaluation_is_homomorphism(p, q, x, y):
    if x == 0 or y == 0:
        return
    assert (p * q).evaluate(x, y) == p.evaluate(x, y) * q.evaluate(x, y)
    assert (p + q).evaluate(x, y) == p.evaluate(x, y) + q.evaluate(x, y)


def test_float_polynomial_drops_tiny_terms():
    p = LaurentPoly2({(0, 0): 1.0, (1, 0): 1e-14}, FLOAT)
    assert list(p.terms) == [(0, 0)]


# -- determinants ------------------------------------------------------------


def test_det_examples():
    assert det_fraction_free(PolyMatrix([[ONE - MU]])) == ONE - MU
    assert det_fraction_free(PolyMatrix([[ONE, LAM], [MU, ONE]])) == ONE - LAM * MU


def test_det_nonsquare():
    with pytest.raises(NonSquareError):
        det_fraction_free(PolyMatrix([[ONE, ONE]]))


def _random_matrix(rng, n, deg, laurent=False):
    lo = -1 if laurent else 0
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            terms = {(rng.randint(lo, deg), rng.randint(lo, deg)): rng.randint(-3, 3) for _ in range(rng.randint(0, 3))}
            row.append(LaurentPoly2(terms))
        rows.append(row)
    return rows


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_det_matches_laplace(n):
    rng = random.Random(n)
    for _ in range(8 if n < 4 else 4):
        rows = _random_matrix(rng, n, 2)
        assert det_fraction_free(PolyMatrix(rows)) == laplace_det(rows)


def test_det_laurent_entries_match_laplace():
    rng = random.Random(11)
    for _ in range(10):
        rows = _random_matrix(rng, 3, 1, laurent=True)
        assert det_fraction_free(PolyMatrix(rows)) == laplace_det(rows)


def test_det_float_matches_exact():
    rng = random.Random(5)
    rows = _random_matrix(rng, 3, 1)
    exact = det_fraction_free(PolyMatrix(rows))
    fl = det_fraction_free(PolyMatrix([[p.to_float() for p in r] for r in rows], FLOAT))
    assert fl.equals(exact.to_float()) if not exact.is_zero() else fl.is_zero()


def test_sylvester_pivot_identity():
    # det(I + PQ) = det(I + QP) for rectangular P, Q
    rng = random.Random(3)
    for n, m in [(2, 3), (3, 5), (4, 6)]:
        P = PolyMatrix([[LaurentPoly2({(rng.randint(0, 1), rng.randint(0, 1)): rng.randint(-3, 3)}) for _ in range(m)] for _ in range(n)], ncols=m)
        Q = PolyMatrix([[LaurentPoly2({(rng.randint(0, 1), 0): rng.randint(-3, 3)}) for _ in range(n)] for _ in range(m)], ncols=n)
        left = det_fraction_free(PolyMatrix.identity(n) + P @ Q)
        right = det_fraction_free(PolyMatrix.identity(m) + Q @ P)
        assert left == right


# -- gcd ---------------------------------------------------------------------


def test_gcd_examples():
    K = (ONE - LAM) * (ONE - MU)
    assert gcd_for_lambda_divisor(K).canonical() == (ONE - LAM).canonical()
    assert gcd_for_lambda_divisor(ONE - 2 * MU + MU * MU) == ONE
    K1 = LaurentPoly2({(0, 0): 77, (0, 1): -178, (0, 2): 65})
    assert gcd_for_lambda_divisor(K1) == ONE


def test_gcd_float_unsupported():
    with pytest.raises(FloatBackendUnsupported):
        gcd_for_lambda_divisor(LaurentPoly2({(0, 0): 1.0}, FLOAT))


lam_polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(
    lambda cs: LaurentPoly2({(i, 0): c for i, c in enumerate(cs)}))


@settings(max_examples=120, deadline=None)
@given(lam_polys, lam_polys, lam_polys, lam_polys)
def test_gcd_divides_and_matches_euclid(common, a, b, c):
    K = common * (a + b * MU + c * MU * MU)
    if K.is_zero() or K.evaluate_mu(0).is_zero():
        return
    Q = gcd_for_lambda_divisor(K)
    for part in list(K.mu_coefficients().values()) + [K.evaluate_mu(0)]:
        lo = part.min_degrees()[0]
        _, r = uni_divmod(part.shift(-lo, 0), Q)
        assert r.is_zero()
    g = lambda_list(K.evaluate_mu(0))
    for part in K.mu_coefficients().values():
        g = euclid_gcd(g, lambda_list(part))
    assert lambda_list(Q) == g


# -- rational functions ------------------------------------------------------


def test_rational_equality_by_cross_multiplication():
    a = RationalFunction(ONE - LAM * LAM, ONE - LAM)
    assert a.equals(RationalFunction(ONE + LAM))
    assert not a.equals(RationalFunction(ONE - LAM))


def test_rational_arithmetic():
    x = RationalFunction(ONE, ONE - LAM)
    y = RationalFunction(LAM, ONE - LAM)
    assert (x + y).equals(RationalFunction((ONE + LAM), ONE - LAM))
    assert (x * y).equals(RationalFunction(LAM, (ONE - LAM) * (ONE - LAM)))
