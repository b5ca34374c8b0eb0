"""Rational functions ``N(lambda, mu) / D(lambda)`` with a mu-free denominator."""

from __future__ import annotations

from ..errors import DivisionByZeroError
from .laurent import LaurentPoly2, format_poly
from .scalar import EXACT
from .univariate import lambda_content, uni_gcd


class RationalFunction:
    """Immutable ``num / den``; ``den`` never involves mu.

    In EXACT mode the pair is reduced by the gcd of ``den`` with the
    lambda-content of ``num`` and scaled so that ``den`` has lowest lambda
    degree 0 with coefficient 1 there. That makes the pair canonical.
    FLOAT pairs are only scaled, never gcd-reduced.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly2, den: LaurentPoly2 | None = None, reduce: bool = True):
        if den is None:
            den = num.one_like()
        if den.is_zero():
            raise DivisionByZeroError("zero denominator")
        if not den.mu_free():
            raise ValueError("denominator must not involve mu")
        num._check(den)
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def backend(self) -> str:
        return self.num.backend

    @classmethod
    def from_poly(cls, p: LaurentPoly2) -> "RationalFunction":
        return cls(p, p.one_like())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        if isinstance(other, LaurentPoly2):
            other = RationalFunction.from_poly(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.den.equals(other.den):
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly2):
            return RationalFunction(self.num * other, self.den)
        if isinstance(other, RationalFunction):
            return RationalFunction(self.num * other.num, self.den * other.den)
        return RationalFunction(self.num * other, self.den)

    __rmul__ = __mul__

    def substitute(self, eps_lam: int = 1, eps_mu: int = 1) -> "RationalFunction":
        return RationalFunction(self.num.substitute(eps_lam, eps_mu), self.den.substitute(eps_lam, 1))

    def evaluate(self, lam, mu=None):
        d = self.den.evaluate(lam)
        if d.is_zero():
            raise DivisionByZeroError("denominator vanishes at this point")
        return self.num.evaluate(lam, mu) / d

    def equals(self, other: "RationalFunction") -> bool:
        """Cross-multiplied equality (valid for both backends)."""
        lhs = self.num * other.den
        rhs = other.num * self.den
        if self.backend == EXACT:
            return lhs.equals(rhs)
        # compare after scaling both sides to unit max coefficient
        return _scaled(lhs).equals(_scaled(rhs))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly2):
            other = RationalFunction.from_poly(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def to_json(self) -> dict:
        return {"num": format_poly(self.num), "den": format_poly(self.den)}

    def __str__(self):
        if self.den.is_constant() and self.den.equals(self.den.one_like()):
            return format_poly(self.num)
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"

    __repr__ = __str__


def _scaled(p: LaurentPoly2) -> LaurentPoly2:
    if p.is_zero():
        return p
    big = max(p.terms.values(), key=abs)
    return p * big.inverse()


def _reduce(num: LaurentPoly2, den: LaurentPoly2):
    if num.is_zero():
        return num, den.one_like()
    if num.backend == EXACT and not den.is_constant():
        g = uni_gcd(den, lambda_content(num))
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
    a = den.min_degrees()[0]
    lead = den.coeff(a, 0)
    inv = lead.inverse()
    return num.shift(-a, 0) * inv, den.shift(-a, 0) * inv

