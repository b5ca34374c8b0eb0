"""Scalars: exact elements of Q(zeta_8) and tolerance-aware complex floats.

An exact scalar is ``(c0 + c1 z + c2 z^2 + c3 z^3) / d`` with ``z = exp(i pi/4)``
(so ``z^4 = -1``), integer ``c_k`` and ``d > 0`` kept in lowest terms.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from typing import Union

from ..errors import DivisionByZeroError, InstanceFormatError, MixedBackendError

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOL = 1e-9

_ZETA_C = [cmath.exp(1j * math.pi * k / 4) for k in range(4)]


def _reduce(c0: int, c1: int, c2: int, c3: int, d: int):
    if d < 0:
        c0, c1, c2, c3, d = -c0, -c1, -c2, -c3, -d
    g = math.gcd(math.gcd(math.gcd(c0, c1), math.gcd(c2, c3)), d)
    if g > 1:
        c0 //= g
        c1 //= g
        c2 //= g
        c3 //= g
        d //= g
    return c0, c1, c2, c3, d


class ExactScalar:
    __slots__ = ("c", "d")
    backend = EXACT

    def __init__(self, coeffs=(0, 0, 0, 0), d: int = 1, _normalized: bool = False):
        if _normalized:
            self.c = coeffs
            self.d = d
            return
        fr = [Fraction(x) for x in coeffs]
        if len(fr) != 4:
            raise ValueError("exact scalar needs 4 coefficients")
        den = math.lcm(*(f.denominator for f in fr)) if any(fr) else 1
        nums = [int(f * den) for f in fr]
        *c, dd = _reduce(nums[0], nums[1], nums[2], nums[3], den * int(d))
        self.c = tuple(c)
        self.d = dd

    # -- construction helpers -------------------------------------------------
    @classmethod
    def _make(cls, c0, c1, c2, c3, d):
        c0, c1, c2, c3, d = _reduce(c0, c1, c2, c3, d)
        obj = cls.__new__(cls)
        obj.c = (c0, c1, c2, c3)
        obj.d = d
        return obj

    @classmethod
    def rational(cls, q) -> "ExactScalar":
        q = Fraction(q)
        return cls._make(q.numerator, 0, 0, 0, q.denominator)

    @classmethod
    def zeta(cls, k: int = 1) -> "ExactScalar":
        """Return ``z^k`` for any integer ``k``."""
        k %= 8
        sign = 1
        if k >= 4:
            k -= 4
            sign = -1
        c = [0, 0, 0, 0]
        c[k] = sign
        return cls._make(c[0], c[1], c[2], c[3], 1)

    # -- accessors -------------------------------------------------------------
    @property
    def coefficients(self) -> tuple:
        return tuple(Fraction(x, self.d) for x in self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.c[0], self.d)

    def __complex__(self) -> complex:
        return sum(ck * zk for ck, zk in zip(self.c, _ZETA_C)) / self.d

    def to_float(self, tol: float = DEFAULT_TOL) -> "FloatScalar":
        return FloatScalar(complex(self), tol)

    def __abs__(self) -> float:
        return abs(complex(self))

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar.rational(other)
        if isinstance(other, FloatScalar):
            raise MixedBackendError("cannot combine exact and float scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        if self.d == o.d:
            return ExactScalar._make(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], self.d)
        da, db = self.d, o.d
        return ExactScalar._make(a[0] * db + b[0] * da, a[1] * db + b[1] * da,
                                 a[2] * db + b[2] * da, a[3] * db + b[3] * da, da * db)

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return ExactScalar._make(-a[0], -a[1], -a[2], -a[3], self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        if not (b1 or b2 or b3):
            return ExactScalar._make(a0 * b0, a1 * b0, a2 * b0, a3 * b0, self.d * o.d)
        if not (a1 or a2 or a3):
            return ExactScalar._make(a0 * b0, a0 * b1, a0 * b2, a0 * b3, self.d * o.d)
        # z^4 = -1 folds degrees 4..6 back with a sign flip
        c0 = a0 * b0 - (a1 * b3 + a2 * b2 + a3 * b1)
        c1 = a0 * b1 + a1 * b0 - (a2 * b3 + a3 * b2)
        c2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        return ExactScalar._make(c0, c1, c2, c3, self.d * o.d)

    __rmul__ = __mul__

    def galois(self, k: int) -> "ExactScalar":
        """Apply the automorphism ``z -> z^k`` (``k`` odd)."""
        if k % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        out = ExactScalar._make(self.c[0], 0, 0, 0, self.d)
        for j in (1, 2, 3):
            if self.c[j]:
                out = out + ExactScalar.zeta(j * k) * Fraction(self.c[j], self.d)
        return out

    def conjugate(self) -> "ExactScalar":
        return self.galois(7)

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of the four Galois conjugates."""
        p = self * self.galois(3) * self.galois(5) * self.galois(7)
        return p.to_fraction()

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise DivisionByZeroError("division by exact zero")
        if self.is_rational():
            return ExactScalar._make(self.d, 0, 0, 0, self.c[0])
        rest = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * rest).to_fraction()
        return rest * (1 / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactScalar._make(1, 0, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FloatScalar):
            raise MixedBackendError("cannot compare exact and float scalars")
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.c == other.c and self.d == other.d

    def __hash__(self):
        return hash((self.c, self.d))

    def close_to(self, other, tol=None) -> bool:
        return self == other

    def __repr__(self):
        return f"ExactScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


class FloatScalar:
    """A complex double with an ambient relative tolerance."""

    __slots__ = ("z", "tol")
    backend = FLOAT

    def __init__(self, z, tol: float = DEFAULT_TOL):
        self.z = complex(z)
        self.tol = tol

    def _coerce(self, other):
        if isinstance(other, FloatScalar):
            return other.z
        if isinstance(other, (int, float, Fraction, complex)) and not isinstance(other, bool):
            return complex(other)
        if isinstance(other, ExactScalar):
            raise MixedBackendError("cannot combine float and exact scalars")
        return NotImplemented

    def is_zero(self) -> bool:
        return abs(self.z) <= self.tol

    def __complex__(self):
        return self.z

    def __abs__(self):
        return abs(self.z)

    def to_float(self, tol=None):
        return self if tol is None else FloatScalar(self.z, tol)

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FloatScalar(self.z + o, self.tol)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FloatScalar(self.z - o, self.tol)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FloatScalar(o - self.z, self.tol)

    def __neg__(self):
        return FloatScalar(-self.z, self.tol)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FloatScalar(self.z * o, self.tol)

    __rmul__ = __mul__

    def inverse(self):
        if abs(self.z) <= self.tol:
            raise DivisionByZeroError(f"division by near-zero float {self.z}")
        return FloatScalar(1 / self.z, self.tol)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if abs(o) <= self.tol:
            raise DivisionByZeroError(f"division by near-zero float {o}")
        return FloatScalar(self.z / o, self.tol)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FloatScalar(o, self.tol) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FloatScalar(self.z ** k, self.tol)

    def conjugate(self):
        return FloatScalar(self.z.conjugate(), self.tol)

    def close_to(self, other, tol=None) -> bool:
        o = self._coerce(other)
        tol = self.tol if tol is None else tol
        return abs(self.z - o) <= tol * max(1.0, abs(self.z), abs(o))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.close_to(other)

    __hash__ = None

    def __repr__(self):
        return f"FloatScalar({self.z!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[ExactScalar, FloatScalar]


def one(backend: str = EXACT, tol: float = DEFAULT_TOL) -> Scalar:
    return ExactScalar.rational(1) if backend == EXACT else FloatScalar(1.0, tol)


def zero(backend: str = EXACT, tol: float = DEFAULT_TOL) -> Scalar:
    return ExactScalar.rational(0) if backend == EXACT else FloatScalar(0.0, tol)


def as_scalar(x, backend: str = EXACT, tol: float = DEFAULT_TOL) -> Scalar:
    """Lift ints/Fractions/complex into the requested backend.

    An exact scalar may be pushed to FLOAT; a float is never pulled to EXACT.
    """
    if isinstance(x, ExactScalar):
        return x if backend == EXACT else x.to_float(tol)
    if isinstance(x, FloatScalar):
        if backend == EXACT:
            raise MixedBackendError("float scalar requested in exact backend")
        return x
    if backend == EXACT:
        if isinstance(x, (float, complex)):
            raise MixedBackendError("python float in exact backend")
        return ExactScalar.rational(x)
    return FloatScalar(complex(x), tol)


def backend_of(x) -> str | None:
    return getattr(x, "backend", None)


# -- text --------------------------------------------------------------------------

def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _zpow(k: int) -> str:
    return "" if k == 0 else ("z" if k == 1 else f"z^{k}")


def exact_terms(s: ExactScalar) -> list:
    """Nonzero ``(Fraction, power)`` pairs of an exact scalar."""
    return [(Fraction(c, s.d), k) for k, c in enumerate(s.c) if c]


def format_scalar(s: Scalar) -> str:
    """Scalar literal, e.g. ``3/2`` or ``1/2+1/2*z^2`` or ``{re,im}`` text."""
    if isinstance(s, FloatScalar):
        return f"{s.z.real!r}{s.z.imag:+r}j" if s.z.imag else repr(s.z.real)
    terms = exact_terms(s)
    if not terms:
        return "0"
    out = ""
    for idx, (q, k) in enumerate(terms):
        sign = "-" if q < 0 else ("+" if idx else "")
        q = abs(q)
        if k == 0:
            body = _frac_text(q)
        elif q == 1:
            body = _zpow(k)
        else:
            body = f"{_frac_text(q)}*{_zpow(k)}"
        out += sign + body
    return out


_TERM = re.compile(r"""\s*([+-]?)\s*(?:(\d+)(?:\s*/\s*(\d+))?)?\s*(\*?\s*z(?:\s*\^\s*(\d+))?)?\s*""")


def parse_scalar(text, tol: float = DEFAULT_TOL) -> Scalar:
    """Parse a scalar literal.

    Accepts rational/zeta strings such as ``"3/2"`` or ``"1/2+1/2*z^2"``, plain
    ints, and ``{"re": .., "im": ..}`` mappings (FLOAT).
    """
    if isinstance(text, dict):
        try:
            return FloatScalar(complex(float(text.get("re", 0.0)), float(text.get("im", 0.0))), tol)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad float literal {text!r}") from exc
    if isinstance(text, bool):
        raise InstanceFormatError(f"bad scalar literal {text!r}")
    if isinstance(text, int):
        return ExactScalar.rational(text)
    if isinstance(text, float):
        raise InstanceFormatError("bare floats are not exact literals; use {'re':..,'im':..}")
    if not isinstance(text, str) or not text.strip():
        raise InstanceFormatError(f"bad scalar literal {text!r}")
    s = text.strip()
    pos = 0
    coeffs = [Fraction(0)] * 4
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise InstanceFormatError(f"cannot parse scalar literal {text!r}")
        sign, num, den, zpart, zexp = m.groups()
        if not first and not sign:
            raise InstanceFormatError(f"missing operator in {text!r}")
        if num is None and zpart is None:
            raise InstanceFormatError(f"empty term in {text!r}")
        if zpart is not None and num is not None and not zpart.lstrip().startswith("*"):
            raise InstanceFormatError(f"expected '*' before z in {text!r}")
        q = Fraction(int(num), int(den) if den else 1) if num is not None else Fraction(1)
        if sign == "-":
            q = -q
        k = 0 if zpart is None else (int(zexp) if zexp else 1)
        term = ExactScalar.zeta(k) * q
        for j in range(4):
            coeffs[j] += term.coefficients[j]
        pos = m.end()
        first = False
    return ExactScalar(coeffs)
