"""Cylinder networks, boundary path/measurement matrices and det(I - mu M(lambda))."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.laurent import LaurentPoly2, format_poly
from .algebra.matrix import PolyMatrix, det_fraction_free
from .algebra.rational import RationalFunction
from .algebra.scalar import DEFAULT_TOL, EXACT, as_scalar
from .errors import MethodMismatch, PreconditionViolation, RelabelingImpossible, SingularPathSystem
from .geometry import natural_key
from .network import TurningData, measurement_preconditions, validate_rim_cut
from .torus import BLACK, WHITE, ToricGraph, edge_curve_crossing

DIRECT = "direct"
RATIO = "ratio"


@dataclass(frozen=True)
class CylEdge:
    tail: str
    head: str
    weight: object
    lam: int = 0  # exponent of lambda carried by the edge
    origin: str = ""  # id of the torus edge it came from


@dataclass(frozen=True)
class CylinderNetwork:
    """Network on a cylinder: internal vertices plus labeled sources and sinks.

    Source ``k`` and sink ``k`` are glued back together when the cylinder is
    closed up into the torus.
    """

    internal: tuple
    sources: tuple
    sinks: tuple
    edges: tuple
    backend: str = EXACT
    tol: float = DEFAULT_TOL
    labels: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.sources) != len(self.sinks):
            raise ValueError("sources and sinks must pair up")
        src, snk = set(self.sources), set(self.sinks)
        for e in self.edges:
            if e.head in src or e.tail in snk:
                raise ValueError(f"edge {e.tail}->{e.head} enters a source or leaves a sink")
            if e.tail in src and e.head in snk:
                raise ValueError(f"edge {e.origin or e.tail} joins a source directly to a sink")

    @property
    def size(self) -> int:
        return len(self.sources)

    def _term(self, e: CylEdge, mu_power: int = 0) -> LaurentPoly2:
        return LaurentPoly2.monomial(e.lam, mu_power, e.weight, self.backend, self.tol)

    def path_blocks(self) -> tuple:
        """``(A_hat, X, Y)``: internal adjacency, source rows, sink columns (all in lambda)."""
        m, n = len(self.internal), self.size
        vi = {v: k for k, v in enumerate(self.internal)}
        si = {s: k for k, s in enumerate(self.sources)}
        ti = {t: k for k, t in enumerate(self.sinks)}
        A = PolyMatrix.zeros(m, m, self.backend, self.tol)
        X = PolyMatrix.zeros(n, m, self.backend, self.tol)
        Y = PolyMatrix.zeros(m, n, self.backend, self.tol)
        for e in self.edges:
            t = self._term(e)
            if e.tail in si:
                X.rows[si[e.tail]][vi[e.head]] += t
            elif e.head in ti:
                Y.rows[vi[e.tail]][ti[e.head]] += t
            else:
                A.rows[vi[e.tail]][vi[e.head]] += t
        return A, X, Y

    def glued_adjacency(self) -> PolyMatrix:
        """Adjacency of the closed-up network: glued source/sink pairs carry one factor of mu."""
        A, X, Y = self.path_blocks()
        out = PolyMatrix([list(r) for r in A.rows], self.backend, self.tol, ncols=A.ncols)
        mu = LaurentPoly2.monomial(0, 1, 1, self.backend, self.tol)
        for k in range(self.size):
            for u in range(len(self.internal)):
                yu = Y.rows[u][k]
                if not yu.terms:
                    continue
                for v in range(len(self.internal)):
                    xv = X.rows[k][v]
                    if xv.terms:
                        out.rows[u][v] = out.rows[u][v] + yu * xv * mu
        return out


# -- building the cylinder from a torus network ------------------------------


def cut_to_cylinder(n: ToricGraph, turning: TurningData | None = None, check: bool = True) -> CylinderNetwork:
    """Cut the torus open along the rim.

    A rim-crossing edge ``u -> v`` becomes ``u -> sink_k`` (full weight) and
    ``source_k -> v`` (weight 1). Sources and sinks are numbered by decreasing
    position along the rim, and each fragment keeps the cut crossings on its
    own side of the rim. With ``turning`` given, white-to-black weights are
    multiplied by their turning numbers.
    """
    if n.curves is None:
        raise PreconditionViolation([("NO_CURVES", "network has no rim/cut")])
    if check:
        rep = validate_rim_cut(n)
        problems = [v for v in rep.violations]
        problems += [v for v in measurement_preconditions(n).violations if v[0] == "MULTIPLE_RIM_CROSSINGS"]
        if problems:
            raise PreconditionViolation(problems)
    backend, tol = n.backend, n.tol
    if turning is not None and not turning.exact:
        backend = "float"
    crossers = []
    edges = []
    for e in n.edges:
        w = as_scalar(e.weight, backend, tol)
        if turning is not None and e.id in turning.entries:
            w = w * as_scalar(turning.turn(e.id), backend, tol)
        rim_hits = edge_curve_crossing(n, e, n.curves.rim)
        if not rim_hits:
            edges.append(CylEdge(e.tail, e.head, w, e.cross_cut or 0, e.id))
            continue
        if len(rim_hits) > 1:
            raise PreconditionViolation([("MULTIPLE_RIM_CROSSINGS", f"edge {e.id} crosses the rim twice")])
        _, t, pos = rim_hits[0]
        cut_hits = edge_curve_crossing(n, e, n.curves.cut)
        before = sum(h[0] for h in cut_hits if h[1] < t)
        after = sum(h[0] for h in cut_hits if h[1] > t)
        crossers.append((pos, e, w, before, after))
    crossers.sort(key=lambda c: c[0], reverse=True)
    sources, sinks, labels = [], [], {}
    one = as_scalar(1, backend, tol)
    for k, (pos, e, w, before, after) in enumerate(crossers, 1):
        s, t = f"source{k}", f"sink{k}"
        sources.append(s)
        sinks.append(t)
        labels[k] = e.id
        edges.append(CylEdge(e.tail, t, w, before, e.id))
        edges.append(CylEdge(s, e.head, one, after, e.id))
    internal = tuple(v.id for v in n.vertices)
    return CylinderNetwork(internal, tuple(sources), tuple(sinks), tuple(edges), backend, tol, labels)


# -- boundary matrices -------------------------------------------------------


@dataclass
class BoundaryMatrix:
    entries: list  # rows of RationalFunction

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def equals(self, other: "BoundaryMatrix") -> bool:
        return self.size == other.size and all(
            a.equals(b) for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    def evaluate(self, lam):
        return [[x.evaluate(lam) for x in row] for row in self.entries]

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.entries) + "]"


def _path_system(c: CylinderNetwork) -> tuple:
    A, X, Y = c.path_blocks()
    M = PolyMatrix.identity(len(c.internal), c.backend, c.tol) - A
    d = det_fraction_free(M)
    if d.is_zero():
        raise SingularPathSystem("det(I - A_hat) vanishes identically")
    return M, X, Y, d


def _bordered_numerators(c: CylinderNetwork) -> tuple:
    """``(N, d)`` with ``B = N / d``: numerators from bordered determinants (Cramer's rule)."""
    M, X, Y, d = _path_system(c)
    m, n = len(c.internal), c.size
    zero = LaurentPoly2({}, c.backend, c.tol)
    N = []
    for s in range(n):
        row = []
        for t in range(n):
            if not any(X.rows[s][v].terms for v in range(m)) or not any(Y.rows[u][t].terms for u in range(m)):
                row.append(zero)
                continue
            big = [list(M.rows[u]) + [Y.rows[u][t]] for u in range(m)]
            big.append(list(X.rows[s]) + [zero])
            row.append(-det_fraction_free(PolyMatrix(big, c.backend, c.tol)))
        N.append(row)
    return N, d


def boundary_path_matrix(c: CylinderNetwork) -> BoundaryMatrix:
    """``B(lambda) = X (I - A_hat)^(-1) Y`` as exact rational functions of lambda."""
    N, d = _bordered_numerators(c)
    return BoundaryMatrix([[RationalFunction(x, d) for x in row] for row in N])


def boundary_measurement_matrix(n: ToricGraph, turning: TurningData) -> BoundaryMatrix:
    """Signed boundary measurements: path matrix after multiplying by turning numbers."""
    return boundary_path_matrix(cut_to_cylinder(n, turning))


# -- adjacency matrices on the torus -----------------------------------------


def adjacency_matrix(n: ToricGraph, turning: TurningData | None = None) -> tuple:
    """Full adjacency ``A(lambda, mu)`` with cut/rim twists; returns ``(matrix, vertex ids)``."""
    backend = n.backend if turning is None or turning.exact else "float"
    ids = [v.id for v in n.vertices]
    idx = {v: k for k, v in enumerate(ids)}
    A = PolyMatrix.zeros(len(ids), len(ids), backend, n.tol)
    for e in n.edges:
        w = as_scalar(e.weight, backend, n.tol)
        if turning is not None and e.id in turning.entries:
            w = w * as_scalar(turning.turn(e.id), backend, n.tol)
        A.rows[idx[e.tail]][idx[e.head]] += LaurentPoly2.monomial(e.cross_cut or 0, e.cross_rim or 0, w, backend, n.tol)
    return A, ids


@dataclass
class BipartiteBlocks:
    blacks: list  # black i's unique outgoing edge ends at whites[i]
    whites: list
    bw: PolyMatrix  # black x white, diagonal
    wb: PolyMatrix  # white x black


def bipartite_blocks(n: ToricGraph, turning: TurningData | None = None) -> BipartiteBlocks:
    """Split the adjacency into black-to-white and white-to-black parts.

    Blacks are taken in id order and whites are relabeled so that the unique
    edge leaving black ``i`` ends at white ``i``.
    """
    backend = n.backend if turning is None or turning.exact else "float"
    blacks = n.blacks()
    whites = []
    out_edge = {}
    for b in blacks:
        outs = [e for e in n.edges if e.tail == b]
        if len(outs) != 1 or n.color(outs[0].head) != WHITE:
            raise RelabelingImpossible(f"black vertex {b} does not have a unique edge to a white vertex")
        out_edge[b] = outs[0]
        whites.append(outs[0].head)
    if sorted(whites, key=natural_key) != n.whites():
        raise RelabelingImpossible("black-to-white edges do not form a perfect matching")
    bi = {b: k for k, b in enumerate(blacks)}
    wi = {w: k for k, w in enumerate(whites)}
    k = len(blacks)
    bw = PolyMatrix.zeros(k, k, backend, n.tol)
    wb = PolyMatrix.zeros(k, k, backend, n.tol)
    for e in n.edges:
        w = as_scalar(e.weight, backend, n.tol)
        if turning is not None and e.id in turning.entries:
            w = w * as_scalar(turning.turn(e.id), backend, n.tol)
        term = LaurentPoly2.monomial(e.cross_cut or 0, e.cross_rim or 0, w, backend, n.tol)
        ct, ch = n.color(e.tail), n.color(e.head)
        if ct == BLACK and ch == WHITE:
            bw.rows[bi[e.tail]][wi[e.head]] += term
        elif ct == WHITE and ch == BLACK:
            wb.rows[wi[e.tail]][bi[e.head]] += term
        else:
            raise RelabelingImpossible(f"edge {e.id} is unicolored")
    return BipartiteBlocks(blacks, whites, bw, wb)


# -- characteristic polynomial of the boundary matrix ------------------------


def det_ratio(P: LaurentPoly2) -> RationalFunction:
    """``P(lambda, mu) / P(lambda, 0)``."""
    P0 = P.evaluate_mu(0)
    if P0.is_zero():
        raise SingularPathSystem("P(lambda, 0) vanishes")
    return RationalFunction(P, P0)


def charpoly_ratio_general(c: CylinderNetwork) -> RationalFunction:
    """``det(I - A_bar(mu)) / det(I - A_bar(0))`` for any cylinder network."""
    m = len(c.internal)
    P = det_fraction_free(PolyMatrix.identity(m, c.backend, c.tol) - c.glued_adjacency())
    return det_ratio(P)


def charpoly_direct(c: CylinderNetwork) -> RationalFunction:
    """``det(I - mu B)`` computed from ``B = N/d`` as ``det(d I - mu N) / d^n``."""
    n = c.size
    if n == 0:
        return RationalFunction(LaurentPoly2.constant(1, c.backend, c.tol))
    N, d = _bordered_numerators(c)
    mu = LaurentPoly2.monomial(0, 1, 1, c.backend, c.tol)
    rows = [[(d if i == j else d.zero_like()) - mu * N[i][j] for j in range(n)] for i in range(n)]
    num = det_fraction_free(PolyMatrix(rows, c.backend, c.tol))
    return RationalFunction(num, d ** n)


def bipartite_P(n: ToricGraph, turning: TurningData | None = None) -> LaurentPoly2:
    """``P = det(I - A_bw A_wb)`` with twists (turning numbers on white-to-black edges if given)."""
    blocks = bipartite_blocks(n, turning)
    k = len(blocks.blacks)
    return det_fraction_free(PolyMatrix.identity(k, blocks.bw.backend, n.tol) - blocks.bw @ blocks.wb)


def charpoly_boundary(n: ToricGraph, turning: TurningData | None = None, method: str = RATIO) -> RationalFunction:
    """``det(I - mu M(lambda))`` (``det(I - mu B)`` when no turning data is given)."""
    if method == RATIO:
        if n.is_bipartite():
            return det_ratio(bipartite_P(n, turning))
        return charpoly_ratio_general(cut_to_cylinder(n, turning))
    if method == DIRECT:
        return charpoly_direct(cut_to_cylinder(n, turning))
    raise ValueError(f"unknown method {method!r}")


def charpoly_both(n: ToricGraph, turning: TurningData | None = None) -> RationalFunction:
    """RATIO result, cross-checked against DIRECT."""
    r = charpoly_boundary(n, turning, RATIO)
    d = charpoly_boundary(n, turning, DIRECT)
    if not r.equals(d):
        raise MethodMismatch(f"ratio {r} != direct {d}")
    return r


def render(rf: RationalFunction) -> str:
    return format_poly(rf.num) if rf.is_polynomial() else str(rf)
