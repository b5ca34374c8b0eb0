"""Dimer covers, Kasteleyn markings and the characteristic polynomial K(lambda, mu)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .algebra.laurent import SPIN_ORDER, LaurentPoly2
from .algebra.matrix import PolyMatrix, det_fraction_free
from .algebra.scalar import as_scalar, format_scalar
from .errors import ColorCountMismatch, NoPerfectMatching, NoSolutionError
from .geometry import natural_key
from .torus import WHITE, Face, ToricGraph, compute_faces, half_edge_start


@dataclass(frozen=True)
class DimerCover:
    edges: tuple
    weight: object
    homology: tuple  # (lambda degree from cut crossings, mu degree from rim crossings)

    def to_json(self) -> dict:
        return {"edges": list(self.edges), "weight": format_scalar(self.weight), "class": list(self.homology)}


def oriented_white_to_black(g: ToricGraph, eid: str) -> tuple:
    """``(cross_cut, cross_rim)`` of edge ``eid`` traversed from its white to its black end."""
    e = g.edge(eid)
    s = 1 if g.color(e.tail) == WHITE else -1
    return (s * (e.cross_cut or 0), s * (e.cross_rim or 0))


def _white_edges(g: ToricGraph) -> dict:
    out = defaultdict(list)
    for e in g.edges:
        w = e.tail if g.color(e.tail) == WHITE else e.head
        b = e.head if w == e.tail else e.tail
        out[w].append((e.id, b))
    return out


def _iter_matchings(g: ToricGraph):
    """Yield ``(edge ids, weight, class)`` by backtracking over white vertices in id order.

    After a black vertex is taken, only its white neighbours can lose their last
    option, so just those are rechecked before descending.
    """
    whites, blacks = g.whites(), g.blacks()
    if len(whites) != len(blacks):
        return
    options = _white_edges(g)
    for w in whites:
        options[w].sort(key=lambda t: natural_key(t[0]))
    near = defaultdict(set)
    for w in whites:
        for _, b in options[w]:
            near[b].add(w)
    step = {eid: (g.edge(eid).weight, oriented_white_to_black(g, eid)) for eid in g._eindex}
    matched: set = set()
    used: set = set()
    path: list = []

    def stuck(b) -> bool:
        return any(w not in matched and all(x in used for _, x in options[w]) for w in near[b])

    def go(k, wt, ci, cj):
        if k == len(whites):
            yield tuple(path), wt, (ci, cj)
            return
        w = whites[k]
        matched.add(w)
        for eid, b in options[w]:
            if b in used:
                continue
            used.add(b)
            if not stuck(b):
                path.append(eid)
                x, (a, c) = step[eid]
                yield from go(k + 1, wt * x, ci + a, cj + c)
                path.pop()
            used.discard(b)
        matched.discard(w)

    yield from go(0, as_scalar(1, g.backend, g.tol), 0, 0)


def enumerate_covers(g: ToricGraph) -> list:
    """All perfect matchings in lexicographic search order (whites by id, then edge id)."""
    return [DimerCover(tuple(sorted(ids, key=natural_key)), wt, cls) for ids, wt, cls in _iter_matchings(g)]


@dataclass
class HamiltonianTable:
    table: dict  # (i, j) -> Scalar, classes shifted to minimum 0
    shift: tuple  # subtracted from raw classes

    @property
    def poly(self) -> LaurentPoly2:
        some = next(iter(self.table.values()))
        return LaurentPoly2(dict(self.table), some.backend, getattr(some, "tol", 1e-9))

    def to_json(self) -> dict:
        return {
            "shift": list(self.shift),
            "classes": [{"class": list(k), "H": format_scalar(v)} for k, v in sorted(self.table.items())],
        }


def hamiltonians(g: ToricGraph, covers: list | None = None) -> HamiltonianTable:
    """Sum cover weights by homology class (streams the matchings when ``covers`` is omitted)."""
    pairs = ((c.homology, c.weight) for c in covers) if covers is not None else \
        ((cls, wt) for _, wt, cls in _iter_matchings(g))
    raw: dict = {}
    for cls, wt in pairs:
        raw[cls] = raw[cls] + wt if cls in raw else wt
    if not raw:
        raise NoPerfectMatching("graph has no dimer cover")
    si = min(k[0] for k in raw)
    sj = min(k[1] for k in raw)
    return HamiltonianTable({(a - si, b - sj): v for (a, b), v in raw.items()}, (si, sj))


# -- markings ----------------------------------------------------------------


def find_kasteleyn_marking(g: ToricGraph, faces: list | None = None) -> dict:
    """Integral Kasteleyn marking from the GF(2) face system.

    One unknown ``s(e)`` per edge (marking ``(-1)^s(e)``), one equation per face:
    the sum of ``s`` around the face is ``l(f)/2 + 1`` mod 2. Pivots are chosen by
    lowest edge index and free unknowns are set to 0.
    """
    faces = compute_faces(g) if faces is None else faces
    index = {e.id: k for k, e in enumerate(g.edges)}
    n = len(index)
    rows = []
    for f in faces:
        bits = 0
        for eid, _ in f.walk:
            bits ^= 1 << index[eid]
        rhs = (f.length // 2 + 1) % 2
        rows.append(bits | (rhs << n))
    pivots = []  # (column, row)
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i] >> col & 1), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> col & 1:
                rows[i] ^= rows[r]
        pivots.append((col, r))
        r += 1
    mask = (1 << n) - 1
    for i in range(r, len(rows)):
        if rows[i] & mask == 0 and rows[i] >> n & 1:
            raise NoSolutionError("face parity system is inconsistent")
    s = [0] * n
    for col, row in pivots:
        s[col] = rows[row] >> n & 1  # free unknowns are 0, so the pivot equals the rhs
    minus = as_scalar(-1, g.backend, g.tol)
    one = as_scalar(1, g.backend, g.tol)
    return {e.id: (minus if s[k] else one) for k, e in enumerate(g.edges)}


def alternating_product(g: ToricGraph, walk, marking: dict):
    """Product around a closed walk: ``m(e)`` when stepping white to black, ``1/m(e)`` otherwise."""
    acc = as_scalar(1, g.backend, g.tol)
    for eid, d in walk:
        m = marking[eid]
        if g.color(half_edge_start(g, eid, d)) == WHITE:
            acc = acc * m
        else:
            acc = acc * m.inverse()
    return acc


def face_target(f: Face) -> int:
    return -1 if (f.length // 2) % 2 == 0 else 1


def face_condition_failures(g: ToricGraph, marking: dict, faces: list | None = None) -> list:
    """Indices of faces whose alternating product is not ``(-1)^(l/2+1)``."""
    faces = compute_faces(g) if faces is None else faces
    bad = []
    for k, f in enumerate(faces):
        prod = alternating_product(g, f.walk, marking)
        if not prod.close_to(as_scalar(face_target(f), prod.backend, getattr(prod, "tol", 1e-9))):
            bad.append(k)
    return bad


def spin_variants(marking: dict, g: ToricGraph) -> list:
    """The marking, flipped on odd rim crossers, flipped on odd cut crossers, and both."""
    minus = as_scalar(-1, g.backend, g.tol)

    def flip(pred):
        return {eid: (m * minus if pred(g.edge(eid)) else m) for eid, m in marking.items()}

    return [
        dict(marking),
        flip(lambda e: (e.cross_rim or 0) % 2 == 1),
        flip(lambda e: (e.cross_cut or 0) % 2 == 1),
        flip(lambda e: (e.cross_rim or 0) % 2 != (e.cross_cut or 0) % 2),
    ]


def kasteleyn_matrix(g: ToricGraph, marking: dict) -> tuple:
    """Magnetically altered Kasteleyn matrix; returns ``(matrix, white ids, black ids)``."""
    whites, blacks = g.whites(), g.blacks()
    if len(whites) != len(blacks):
        raise ColorCountMismatch(f"{len(whites)} white vs {len(blacks)} black vertices")
    wi = {w: k for k, w in enumerate(whites)}
    bi = {b: k for k, b in enumerate(blacks)}
    backend, tol = g.backend, g.tol
    zero = LaurentPoly2({}, backend, tol)
    rows = [[zero] * len(blacks) for _ in whites]
    for e in g.edges:
        if g.color(e.tail) == g.color(e.head):
            raise ColorCountMismatch(f"edge {e.id} is not bipartite")
        w = e.tail if g.color(e.tail) == WHITE else e.head
        b = e.head if w == e.tail else e.tail
        i, j = oriented_white_to_black(g, e.id)
        term = LaurentPoly2.monomial(i, j, marking[e.id] * e.weight, backend, tol)
        rows[wi[w]][bi[b]] = rows[wi[w]][bi[b]] + term
    return PolyMatrix(rows, backend, tol, ncols=len(blacks)), whites, blacks


def char_poly(g: ToricGraph, marking: dict) -> LaurentPoly2:
    """``det`` of the magnetically altered Kasteleyn matrix (raw, not normalized)."""
    m, _, _ = kasteleyn_matrix(g, marking)
    return det_fraction_free(m)


def normalize_in_mu(K: LaurentPoly2) -> LaurentPoly2:
    """Shift so that K is a polynomial in mu not divisible by mu."""
    return K.shift(0, -K.min_degrees()[1])


# -- Kasteleyn's theorem -----------------------------------------------------


@dataclass
class CheckReport:
    ok: bool
    spin: tuple | None = None
    negative_class: tuple | None = None
    pattern: dict = field(default_factory=dict)
    details: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "spin": list(self.spin) if self.spin else None,
            "negative_parity_class": list(self.negative_class) if self.negative_class else None,
            "pattern": {f"{a}{b}": s for (a, b), s in sorted(self.pattern.items())},
            "details": self.details,
        }


def kasteleyn_check(g: ToricGraph, marking: dict, K: LaurentPoly2 | None = None,
                    table: HamiltonianTable | None = None) -> CheckReport:
    """Compare det coefficients with enumerated Hamiltonians class by class.

    For each spin flip the determinant is shifted onto the support of the
    Hamiltonian table, divided by a global unit, and the remaining coefficient
    ratios must be +-1, constant on each parity class, with one negative class.
    """
    K = char_poly(g, marking) if K is None else K
    table = hamiltonians(g) if table is None else table
    details = []
    if K.is_zero():
        return CheckReport(False, details=["determinant vanishes"])
    for spin in SPIN_ORDER:
        Ks = K.substitute(*spin)
        a, b = Ks.min_degrees()
        Ks = Ks.shift(-a, -b)
        if set(Ks.terms) != set(table.table):
            details.append(f"spin {spin}: supports differ")
            continue
        ratios = {k: Ks.terms[k] * table.table[k].inverse() for k in table.table}
        first = ratios[min(ratios)]
        plus = as_scalar(1, g.backend, g.tol)
        for c in (first, -first):
            signs = {}
            good = True
            for k, r in ratios.items():
                q = r * c.inverse()
                if q.close_to(plus):
                    s = 1
                elif q.close_to(-plus):
                    s = -1
                else:
                    good = False
                    details.append(f"spin {spin}: |K| differs from H at class {k}")
                    break
                par = (k[0] % 2, k[1] % 2)
                if signs.setdefault(par, s) != s:
                    good = False
                    details.append(f"spin {spin}: parity class {par} mixes signs")
                    break
            if not good:
                break
            negatives = [p for p, s in signs.items() if s < 0]
            positives = [p for p, s in signs.items() if s > 0]
            if len(negatives) <= 1 and len(positives) <= 3:
                neg = negatives[0] if negatives else None
                return CheckReport(True, spin, neg, signs, details)
    return CheckReport(False, details=details)

