"""Dense matrices of Laurent polynomials and a fraction-free determinant."""

from __future__ import annotations

import cmath

from ..errors import MixedBackendError, NonSquareError
from .laurent import LaurentPoly2
from .scalar import DEFAULT_TOL, EXACT, FloatScalar


class PolyMatrix:
    """Rectangular grid of :class:`LaurentPoly2` entries with fixed shape."""

    __slots__ = ("rows", "nrows", "ncols", "backend", "tol")

    def __init__(self, rows, backend: str = EXACT, tol: float = DEFAULT_TOL, ncols: int | None = None):
        rows = [list(r) for r in rows]
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else (ncols or 0)
        self.backend = backend
        self.tol = tol
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for k, e in enumerate(r):
                if not isinstance(e, LaurentPoly2):
                    r[k] = LaurentPoly2.constant(e, backend, tol)
                elif e.backend != backend:
                    raise MixedBackendError("matrix entry backend mismatch")
        self.rows = rows

    @classmethod
    def zeros(cls, n: int, m: int | None = None, backend: str = EXACT, tol: float = DEFAULT_TOL):
        m = n if m is None else m
        z = LaurentPoly2({}, backend, tol)
        return cls([[z] * m for _ in range(n)], backend, tol, ncols=m)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT, tol: float = DEFAULT_TOL):
        out = cls.zeros(n, n, backend, tol)
        one = LaurentPoly2.constant(1, backend, tol)
        for i in range(n):
            out.rows[i][i] = one
        return out

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def set(self, i: int, j: int, value) -> "PolyMatrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return PolyMatrix(rows, self.backend, self.tol, ncols=self.ncols)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          self.backend, self.tol, ncols=self.ncols)

    def __neg__(self):
        return PolyMatrix([[-a for a in r] for r in self.rows], self.backend, self.tol, ncols=self.ncols)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch for product")
        zero = LaurentPoly2({}, self.backend, self.tol)
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = zero
                for k, a in enumerate(r):
                    if a.terms and other.rows[k][j].terms:
                        acc = acc + a * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.backend, self.tol, ncols=other.ncols)

    def scale(self, p) -> "PolyMatrix":
        return PolyMatrix([[a * p for a in r] for r in self.rows], self.backend, self.tol, ncols=self.ncols)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(a) for a in r] for r in self.rows], self.backend, self.tol, ncols=self.ncols)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.rows)] if self.nrows else [],
                          self.backend, self.tol, ncols=self.nrows)

    def substitute(self, eps_lam: int = 1, eps_mu: int = 1) -> "PolyMatrix":
        return self.map(lambda p: p.substitute(eps_lam, eps_mu))

    def equals(self, other: "PolyMatrix") -> bool:
        return self.shape == other.shape and all(
            a.equals(b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __repr__(self):
        return "PolyMatrix(" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + ")"


def det_fraction_free(m: PolyMatrix) -> LaurentPoly2:
    """Determinant by Bareiss elimination over the polynomial ring.

    Each row is first multiplied by the inverse of its lowest monomial so every
    entry is an ordinary polynomial; the factor is restored at the end. Every
    Bareiss division is exact (asserted in EXACT mode).

    FLOAT matrices skip Bareiss: polynomial long division is unstable in
    floating point, so the determinant is interpolated from numeric
    determinants at roots of unity instead.
    """
    if m.nrows != m.ncols:
        raise NonSquareError(f"determinant of a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    one = LaurentPoly2.constant(1, m.backend, m.tol)
    if n == 0:
        return one
    shift_i = shift_j = 0
    a = []
    for r in m.rows:
        nz = [e for e in r if e.terms]
        if not nz:
            return LaurentPoly2({}, m.backend, m.tol)
        si = min(e.min_degrees()[0] for e in nz)
        sj = min(e.min_degrees()[1] for e in nz)
        shift_i += si
        shift_j += sj
        a.append([e.shift(-si, -sj) for e in r])
    if m.backend != EXACT:
        return _det_by_interpolation(a, m.tol).shift(shift_i, shift_j)
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k].terms:
            piv = next((i for i in range(k + 1, n) if a[i][k].terms), None)
            if piv is None:
                return LaurentPoly2({}, m.backend, m.tol)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                t = akk * row_i[j]
                if aik.terms and row_k[j].terms:
                    t = t - aik * row_k[j]
                row_i[j] = t.divexact(prev) if prev is not one else t
            row_i[k] = LaurentPoly2({}, m.backend, m.tol)
        prev = akk
    d = a[n - 1][n - 1]
    if sign < 0:
        d = -d
    return d.shift(shift_i, shift_j)


def _numeric_det(rows: list) -> complex:
    a = [list(r) for r in rows]
    n = len(a)
    det = 1 + 0j
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv][k] == 0:
            return 0j
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                ri, rk = a[i], a[k]
                for j in range(k + 1, n):
                    ri[j] -= f * rk[j]
    return det


def _det_by_interpolation(a: list, tol: float) -> LaurentPoly2:
    """Determinant of a matrix of genuine polynomials, via a 2D inverse DFT."""
    deg_i = deg_j = 0
    for r in a:
        nz = [e for e in r if e.terms]
        deg_i += max(e.max_degrees()[0] for e in nz)
        deg_j += max(e.max_degrees()[1] for e in nz)
    ni, nj = deg_i + 1, deg_j + 1
    wi = [cmath.exp(2j * cmath.pi * k / ni) for k in range(ni)]
    wj = [cmath.exp(2j * cmath.pi * k / nj) for k in range(nj)]
    terms = [[[(i, j, complex(c)) for (i, j), c in e.terms.items()] for e in r] for r in a]
    values = {}
    for p in range(ni):
        for q in range(nj):
            x, y = wi[p], wj[q]
            rows = [[sum(c * x ** i * y ** j for i, j, c in cell) for cell in r] for r in terms]
            values[p, q] = _numeric_det(rows)
    coeffs = {}
    for i in range(ni):
        for j in range(nj):
            total = sum(values[p, q] * wi[p] ** -i * wj[q] ** -j for p in range(ni) for q in range(nj))
            coeffs[(i, j)] = FloatScalar(total / (ni * nj), tol)
    return LaurentPoly2(coeffs, "float", tol)
