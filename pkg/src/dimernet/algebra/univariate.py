"""Univariate (lambda-only) polynomial division and gcd over Q(zeta_8)."""

from __future__ import annotations

from ..errors import FloatBackendUnsupported, ZeroPolynomialError
from .laurent import LaurentPoly2
from .scalar import EXACT, as_scalar


def _require_exact(p: LaurentPoly2):
    if p.backend != EXACT:
        raise FloatBackendUnsupported("gcd requires the exact backend")


def _as_list(p: LaurentPoly2) -> list:
    """Dense coefficient list (index = lambda power) of a polynomial with min degree >= 0."""
    if p.is_zero():
        return []
    hi = max(i for i, _ in p.terms)
    out = [None] * (hi + 1)
    for (i, j), c in p.terms.items():
        if j or i < 0:
            raise ValueError("expected a lambda polynomial with non-negative exponents")
        out[i] = c
    zero = as_scalar(0, p.backend, p.tol)
    return [zero if c is None else c for c in out]


def _from_list(coeffs: list, like: LaurentPoly2) -> LaurentPoly2:
    return LaurentPoly2({(i, 0): c for i, c in enumerate(coeffs)}, like.backend, like.tol)


def uni_divmod(a: LaurentPoly2, b: LaurentPoly2):
    """Euclidean division of lambda polynomials: ``a = q*b + r`` with deg r < deg b."""
    _require_exact(a)
    if b.is_zero():
        raise ZeroPolynomialError("division by zero polynomial")
    ra = _as_list(a)
    rb = _as_list(b)
    db = len(rb) - 1
    inv = rb[-1].inverse()
    q = [None] * max(len(ra) - db, 0)
    while len(ra) - 1 >= db and ra:
        k = len(ra) - 1 - db
        c = ra[-1] * inv
        q[k] = c
        for t in range(db + 1):
            ra[k + t] = ra[k + t] - c * rb[t]
        ra.pop()
        while ra and ra[-1].is_zero():
            ra.pop()
    zero = as_scalar(0, a.backend, a.tol)
    q = [zero if c is None else c for c in q]
    return _from_list(q, a), _from_list(ra, a)


def monic(p: LaurentPoly2) -> LaurentPoly2:
    if p.is_zero():
        return p
    return p * p.coeff(max(i for i, _ in p.terms), 0).inverse()


def uni_gcd(a: LaurentPoly2, b: LaurentPoly2) -> LaurentPoly2:
    """Monic gcd of two lambda Laurent polynomials (lambda is a unit, so
    lambda-power factors are stripped first)."""
    _require_exact(a)
    _require_exact(b)
    if a.is_zero():
        return monic(b.strip_lambda_monomial()) if not b.is_zero() else b
    if b.is_zero():
        return monic(a.strip_lambda_monomial())
    x, y = a.strip_lambda_monomial(), b.strip_lambda_monomial()
    while not y.is_zero():
        x, y = y, uni_divmod(x, y)[1]
    return monic(x)


def lambda_content(p: LaurentPoly2) -> LaurentPoly2:
    """Monic gcd of all mu-coefficients of ``p`` viewed as lambda polynomials."""
    _require_exact(p)
    if p.is_zero():
        raise ZeroPolynomialError("content of zero polynomial")
    g = None
    for c in p.mu_coefficients().values():
        g = c.strip_lambda_monomial() if g is None else uni_gcd(g, c)
        if g.is_constant():
            break
    return monic(g)


def gcd_for_lambda_divisor(K: LaurentPoly2) -> LaurentPoly2:
    """Largest monic lambda polynomial Q dividing both ``K(lambda, mu)`` and ``K(lambda, 0)``.

    ``K`` is first shifted so its lowest mu-degree is 0.
    """
    if K.backend != EXACT:
        raise FloatBackendUnsupported("gcd requires the exact backend")
    if K.is_zero():
        raise ZeroPolynomialError("K must be nonzero")
    a, b = K.min_degrees()
    Kn = K.shift(-a, -b)
    base = Kn.mu_coefficients()[0]
    return monic(uni_gcd(base, lambda_content(Kn)))
