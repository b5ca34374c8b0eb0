"""Slow, obviously-correct reference computations used only by the tests."""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction

from dimernet.algebra import ExactScalar, LaurentPoly2


def as_fraction(x) -> Fraction:
    if isinstance(x, ExactScalar):
        return x.to_fraction()
    return Fraction(x)


def laplace_det(rows: list) -> LaurentPoly2:
    """Cofactor expansion along the first row."""
    n = len(rows)
    if n == 0:
        return LaurentPoly2.constant(1)
    if n == 1:
        return rows[0][0]
    total = rows[0][0].zero_like()
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# -- univariate polynomials as coefficient lists (lowest degree first) --------


def trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a: list, b: list) -> tuple:
    a, b = trim(a), trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(x) for x in a]
    while len(trim(r)) >= len(b):
        r = trim(r)
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        q[k] = c
        for i, x in enumerate(b):
            r[i + k] -= c * x
    return trim(q), trim(r)


def euclid_gcd(a: list, b: list) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    return [x / a[-1] for x in a]


def lambda_list(p: LaurentPoly2) -> list:
    """Coefficients of a mu-free polynomial after removing its lowest lambda power."""
    if p.is_zero():
        return []
    lo = p.min_degrees()[0]
    hi = p.max_degrees()[0]
    return [as_fraction(p.coeff(i, 0)) if p.coeff(i, 0) is not None else Fraction(0) for i in range(lo, hi + 1)]


def sylvester_resultant(a: list, b: list) -> Fraction:
    a, b = trim(a), trim(b)
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 or n == 0:
        return Fraction(1)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(reversed(a)) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(reversed(b)) + [Fraction(0)] * (size - n - 1 - i))
    return fraction_det(rows)


def fraction_det(rows: list) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return det


# -- matchings ---------------------------------------------------------------


def permanent(mat: list) -> int:
    n = len(mat)
    return sum(all(mat[i][p[i]] for i in range(n)) and
               _prod(mat[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# -- paths on a cylinder network ----------------------------------------------


def enumerate_paths(c) -> dict:
    """(source index, sink index) -> {lambda exponent: weight sum}, for acyclic networks."""
    out_edges: dict = {}
    for e in c.edges:
        out_edges.setdefault(e.tail, []).append(e)
    sinks = {t: k for k, t in enumerate(c.sinks)}
    result: dict = {}

    def walk(v, s, wt, lam):
        if v in sinks:
            cell = result.setdefault((s, sinks[v]), {})
            cell[lam] = cell.get(lam, Fraction(0)) + wt
            return
        for e in out_edges.get(v, []):
            walk(e.head, s, wt * as_fraction(e.weight), lam + e.lam)

    for s, src in enumerate(c.sources):
        walk(src, s, Fraction(1), 0)
    return result


def truncated_series(c, lam: complex = 1, depth: int = 40) -> list:
    """``X (I + A + ... + A^(depth-1)) Y`` at a numeric lambda, in plain complex arithmetic."""
    m, n = len(c.internal), len(c.sources)
    vi = {v: k for k, v in enumerate(c.internal)}
    si = {s: k for k, s in enumerate(c.sources)}
    ti = {t: k for k, t in enumerate(c.sinks)}
    A = [[0j] * m for _ in range(m)]
    X = [[0j] * m for _ in range(n)]
    Y = [[0j] * n for _ in range(m)]
    for e in c.edges:
        w = complex(e.weight) * lam ** e.lam
        if e.tail in si:
            X[si[e.tail]][vi[e.head]] += w
        elif e.head in ti:
            Y[vi[e.tail]][ti[e.head]] += w
        else:
            A[vi[e.tail]][vi[e.head]] += w
    power = [[1 + 0j if i == j else 0j for j in range(m)] for i in range(m)]
    acc = [[0j] * m for _ in range(m)]
    for _ in range(depth):
        acc = [[acc[i][j] + power[i][j] for j in range(m)] for i in range(m)]
        power = [[sum(power[i][k] * A[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
    XS = [[sum(X[i][k] * acc[k][j] for k in range(m)) for j in range(m)] for i in range(n)]
    return [[sum(XS[i][k] * Y[k][j] for k in range(m)) for j in range(n)] for i in range(n)]


def phase(k: int) -> complex:
    return cmath.exp(1j * cmath.pi * k / 4)
