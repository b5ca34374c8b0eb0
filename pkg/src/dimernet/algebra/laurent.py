"""Bivariate Laurent polynomials in ``lambda`` and ``mu`` over a scalar backend."""

from __future__ import annotations

from fractions import Fraction

from ..errors import InexactDivisionError, MixedBackendError, ZeroPolynomialError
from .scalar import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    ExactScalar,
    FloatScalar,
    as_scalar,
    exact_terms,
    _frac_text,
    _zpow,
)


class LaurentPoly2:
    """Immutable map ``(i, j) -> coefficient`` of ``lambda^i mu^j``.

    Zero coefficients are never stored. In FLOAT mode coefficients whose
    magnitude is below ``tol`` times the largest magnitude are dropped too.
    """

    __slots__ = ("terms", "backend", "tol")

    def __init__(self, terms=None, backend: str = EXACT, tol: float = DEFAULT_TOL):
        self.backend = backend
        self.tol = tol
        clean = {}
        if terms:
            for key, c in terms.items():
                c = as_scalar(c, backend, tol)
                if backend == EXACT:
                    if not c.is_zero():
                        clean[(int(key[0]), int(key[1]))] = c
                else:
                    clean[(int(key[0]), int(key[1]))] = c
            if backend == FLOAT and clean:
                big = max(abs(c) for c in clean.values())
                cut = tol * big
                clean = {k: c for k, c in clean.items() if abs(c) > cut and abs(c) > 0}
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, backend: str, tol: float) -> "LaurentPoly2":
        # terms already cleaned of exact zeros
        if backend == FLOAT:
            return cls(terms, backend, tol)
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.backend = backend
        obj.tol = tol
        return obj

    @classmethod
    def constant(cls, c, backend: str = EXACT, tol: float = DEFAULT_TOL) -> "LaurentPoly2":
        return cls({(0, 0): c}, backend, tol)

    @classmethod
    def monomial(cls, i: int = 0, j: int = 0, c=1, backend: str = EXACT,
                 tol: float = DEFAULT_TOL) -> "LaurentPoly2":
        return cls({(i, j): c}, backend, tol)

    @classmethod
    def lam(cls, backend: str = EXACT) -> "LaurentPoly2":
        return cls.monomial(1, 0, 1, backend)

    @classmethod
    def mu(cls, backend: str = EXACT) -> "LaurentPoly2":
        return cls.monomial(0, 1, 1, backend)

    def zero_like(self) -> "LaurentPoly2":
        return LaurentPoly2._raw({}, self.backend, self.tol)

    def one_like(self) -> "LaurentPoly2":
        return LaurentPoly2.constant(1, self.backend, self.tol)

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, i: int, j: int = 0):
        c = self.terms.get((i, j))
        return c if c is not None else as_scalar(0, self.backend, self.tol)

    def support(self) -> list:
        return sorted(self.terms)

    def min_degrees(self) -> tuple:
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no degrees")
        return (min(i for i, _ in self.terms), min(j for _, j in self.terms))

    def max_degrees(self) -> tuple:
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no degrees")
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def mu_free(self) -> bool:
        return all(j == 0 for _, j in self.terms)

    def mu_coefficients(self) -> dict:
        """Split into ``{j: lambda-only polynomial}``."""
        out: dict = {}
        for (i, j), c in self.terms.items():
            out.setdefault(j, {})[(i, 0)] = c
        return {j: LaurentPoly2._raw(t, self.backend, self.tol) for j, t in sorted(out.items())}

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "LaurentPoly2"):
        if other.backend != self.backend:
            raise MixedBackendError(f"{self.backend} vs {other.backend} polynomial")

    def _lift(self, other):
        if isinstance(other, LaurentPoly2):
            self._check(other)
            return other
        if isinstance(other, (ExactScalar, FloatScalar, int, Fraction)):
            return LaurentPoly2.constant(other, self.backend, self.tol)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for k, c in o.terms.items():
            if k in out:
                s = out[k] + c
                if self.backend == EXACT and s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return LaurentPoly2._raw(out, self.backend, self.tol)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2._raw({k: -c for k, c in self.terms.items()}, self.backend, self.tol)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (ExactScalar, FloatScalar, int, Fraction)):
            c0 = as_scalar(other, self.backend, self.tol)
            if self.backend == EXACT and c0.is_zero():
                return self.zero_like()
            return LaurentPoly2._raw({k: c * c0 for k, c in self.terms.items()},
                                     self.backend, self.tol)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in o.terms.items():
                k = (i1 + i2, j1 + j2)
                if k in out:
                    out[k] = out[k] + a * b
                else:
                    out[k] = a * b
        if self.backend == EXACT:
            out = {k: c for k, c in out.items() if not c.is_zero()}
        return LaurentPoly2._raw(out, self.backend, self.tol)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (i, j), c = next(iter(self.terms.items()))
            return LaurentPoly2({(i * k, j * k): c ** k}, self.backend, self.tol)
        out = self.one_like()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, a: int, b: int) -> "LaurentPoly2":
        """Multiply by ``lambda^a mu^b``."""
        if a == 0 and b == 0:
            return self
        return LaurentPoly2._raw({(i + a, j + b): c for (i, j), c in self.terms.items()},
                                 self.backend, self.tol)

    def substitute(self, eps_lam: int = 1, eps_mu: int = 1) -> "LaurentPoly2":
        """Return ``p(eps_lam * lambda, eps_mu * mu)`` for signs ``eps``."""
        if eps_lam not in (1, -1) or eps_mu not in (1, -1):
            raise ValueError("substitution signs must be +1 or -1")
        out = {}
        for (i, j), c in self.terms.items():
            neg = (eps_lam == -1 and i % 2) ^ (eps_mu == -1 and j % 2)
            out[(i, j)] = -c if neg else c
        return LaurentPoly2._raw(out, self.backend, self.tol)

    def invert_variables(self) -> "LaurentPoly2":
        """Return ``p(1/lambda, 1/mu)``."""
        return LaurentPoly2._raw({(-i, -j): c for (i, j), c in self.terms.items()},
                                 self.backend, self.tol)

    def evaluate(self, lam, mu=None):
        """Evaluate at scalar values; ``mu=None`` requires a mu-free polynomial."""
        total = as_scalar(0, self.backend, self.tol)
        lam = as_scalar(lam, self.backend, self.tol)
        mu_s = as_scalar(mu, self.backend, self.tol) if mu is not None else None
        for (i, j), c in self.terms.items():
            t = c * (lam ** i)
            if j:
                if mu_s is None:
                    raise ValueError("mu value required")
                t = t * (mu_s ** j)
            total = total + t
        return total

    def evaluate_mu(self, mu) -> "LaurentPoly2":
        """Substitute a scalar for mu, leaving a lambda polynomial."""
        mu = as_scalar(mu, self.backend, self.tol)
        out = self.zero_like()
        for (i, j), c in self.terms.items():
            out = out + LaurentPoly2({(i, 0): c * (mu ** j)}, self.backend, self.tol)
        return out

    def map_coefficients(self, fn) -> "LaurentPoly2":
        return LaurentPoly2({k: fn(c) for k, c in self.terms.items()}, self.backend, self.tol)

    def to_float(self, tol: float = DEFAULT_TOL) -> "LaurentPoly2":
        if self.backend == FLOAT:
            return self
        return LaurentPoly2({k: c.to_float(tol) for k, c in self.terms.items()}, FLOAT, tol)

    # -- division ----------------------------------------------------------
    def leading(self):
        """Lexicographically largest ``(i, j)`` and its coefficient."""
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        k = max(self.terms)
        return k, self.terms[k]

    def divexact(self, other: "LaurentPoly2") -> "LaurentPoly2":
        """Exact quotient ``self / other``.

        Raises InexactDivisionError (EXACT) if a nonzero remainder is left; in
        FLOAT mode residuals below tolerance are discarded.
        """
        self._check(other)
        if other.is_zero():
            raise ZeroPolynomialError("division by zero polynomial")
        if self.is_zero():
            return self
        if len(other.terms) == 1:
            (a, b), c = next(iter(other.terms.items()))
            ci = c.inverse()
            return LaurentPoly2._raw({(i - a, j - b): v * ci for (i, j), v in self.terms.items()},
                                     self.backend, self.tol)
        (la, lb), lc = other.leading()
        lci = lc.inverse()
        rem = dict(self.terms)
        quot: dict = {}
        scale = max(abs(c) for c in self.terms.values()) if self.backend == FLOAT else 0
        lo_i, lo_j = other.min_degrees()
        rem_min = self.min_degrees()
        steps = 0
        limit = 4 * (len(self.terms) + 1) * (len(other.terms) + 1) + 10_000
        while rem:
            k = max(rem)
            c = rem[k]
            if self.backend == FLOAT and abs(c) <= self.tol * scale:
                del rem[k]
                continue
            qk = (k[0] - la, k[1] - lb)
            # min degrees add under multiplication, so an exact quotient lives in this box
            if qk[0] + lo_i < rem_min[0] or qk[1] + lo_j < rem_min[1]:
                if self.backend == EXACT:
                    raise InexactDivisionError("remainder does not vanish")
                del rem[k]
                continue
            qc = c * lci
            quot[qk] = quot[qk] + qc if qk in quot else qc
            for (i, j), v in other.terms.items():
                kk = (i + qk[0], j + qk[1])
                val = rem.get(kk)
                nv = -(v * qc) if val is None else val - v * qc
                if self.backend == EXACT:
                    if nv.is_zero():
                        rem.pop(kk, None)
                    else:
                        rem[kk] = nv
                else:
                    if kk == k:
                        rem.pop(kk, None)
                    else:
                        rem[kk] = nv
            steps += 1
            if steps > limit:
                raise InexactDivisionError("division did not terminate")
        return LaurentPoly2(quot, self.backend, self.tol)

    # -- normalization -----------------------------------------------------
    def normalize(self):
        """Canonical form: ``(canonical, (a, b), leading)`` with
        ``self == lambda^a mu^b * leading * canonical``.
        """
        if not self.terms:
            raise ZeroPolynomialError("cannot normalize the zero polynomial")
        a, b = self.min_degrees()
        shifted = self.shift(-a, -b)
        lead = shifted.terms[min(shifted.terms)]
        return shifted * lead.inverse(), (a, b), lead

    def canonical(self) -> "LaurentPoly2":
        return self.normalize()[0]

    def strip_lambda_monomial(self) -> "LaurentPoly2":
        a = self.min_degrees()[0]
        return self.shift(-a, 0)

    # -- comparison --------------------------------------------------------
    def equals(self, other: "LaurentPoly2", tol: float | None = None) -> bool:
        self._check(other)
        if self.backend == EXACT:
            return self.terms == other.terms
        tol = self.tol if tol is None else tol
        if not self.terms or not other.terms:
            return not self.terms and not other.terms
        scale = max(max(abs(c) for c in self.terms.values()),
                    max(abs(c) for c in other.terms.values()))
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            d = complex(self.coeff(*k)) - complex(other.coeff(*k))
            if abs(d) > tol * scale:
                return False
        return True

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar, FloatScalar)):
            other = LaurentPoly2.constant(other, self.backend, self.tol)
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        if self.backend != EXACT:
            raise TypeError("float polynomials are unhashable")
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LaurentPoly2({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def equal_up_to_spin(p: LaurentPoly2, q: LaurentPoly2):
    """First sign pair ``(e1, e2)`` with canonical(p(e1 lam, e2 mu)) == canonical(q).

    Pairs are tried in the order (+,+), (-,+), (+,-), (-,-). Returns None if
    no flip matches.
    """
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomialError("spin comparison needs nonzero polynomials")
    target = q.canonical()
    for signs in SPIN_ORDER:
        if p.substitute(*signs).canonical().equals(target):
            return signs
    return None


SPIN_ORDER = ((1, 1), (-1, 1), (1, -1), (-1, -1))


# -- text rendering --------------------------------------------------------------------

def _monomial_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("lambda" if i == 1 else f"lambda^{i}")
    if j:
        parts.append("mu" if j == 1 else f"mu^{j}")
    return "*".join(parts)


def _coeff_text(c):
    """Return (negative?, text) for a coefficient; text '' means unit 1."""
    if c.backend == FLOAT:
        z = complex(c)
        if abs(z.imag) <= c.tol * abs(z):
            neg = z.real < 0
            r = abs(z.real)
            return neg, ("" if r == 1 else repr(r))
        return False, f"({z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}j)"
    terms = exact_terms(c)
    if len(terms) == 1:
        q, k = terms[0]
        neg = q < 0
        q = abs(q)
        zp = _zpow(k)
        if q == 1:
            return neg, zp
        qt = _frac_text(q) if q.denominator == 1 else f"({_frac_text(q)})"
        return neg, f"{qt}*{zp}" if zp else qt
    inner = ""
    for idx, (q, k) in enumerate(terms):
        sign = "-" if q < 0 else ("+" if idx else "")
        q = abs(q)
        zp = _zpow(k)
        if k == 0:
            body = _frac_text(q)
        elif q == 1:
            body = zp
        else:
            body = f"{_frac_text(q)}*{zp}"
        if idx:
            inner += f" {sign} {body}"
        else:
            inner += ("-" if sign == "-" else "") + body
    return False, f"({inner})"


def format_poly(p: LaurentPoly2) -> str:
    """Golden text rendering, terms ordered by (mu-degree, lambda-degree)."""
    if p.is_zero():
        return "0"
    out = []
    for idx, (i, j) in enumerate(sorted(p.terms, key=lambda k: (k[1], k[0]))):
        neg, ct = _coeff_text(p.terms[(i, j)])
        mono = _monomial_text(i, j)
        if ct and mono:
            body = f"{ct}*{mono}"
        elif ct:
            body = ct
        elif mono:
            body = mono
        else:
            body = "1"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)
