"""Perfect networks on the torus: validation, moves, bipartite doubling and turning numbers."""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .algebra.scalar import EXACT, FLOAT, ExactScalar, FloatScalar, as_scalar, format_scalar
from .dimer import alternating_product, face_target
from .errors import (
    IsLoopError,
    NonAxisParallelInExactMode,
    NonTransversalCrossing,
    NotADirectedCycle,
    NotUnicolored,
    StraightAngleError,
    ZeroWeightOnCoverEdge,
)
from .geometry import add, cross, dot, mod1, natural_key, neg, sign
from .torus import (
    BLACK,
    WHITE,
    Edge,
    ToricGraph,
    ValidationReport,
    Vertex,
    _point_on_curve,
    compute_crossings,
    compute_faces,
    curves_meet_once,
    edge_curve_crossing,
    validate_curves,
    validate_graph,
)


class PerfectNetwork(ToricGraph):
    """A toric graph whose stored edge direction (tail -> head) is the perfect orientation."""

    def incoming(self, vid: str) -> list:
        return [e for e in self.edges if e.head == vid]

    def outgoing(self, vid: str) -> list:
        return [e for e in self.edges if e.tail == vid]


def as_network(g: ToricGraph) -> PerfectNetwork:
    return g if isinstance(g, PerfectNetwork) else PerfectNetwork(g.vertices, g.edges, g.curves)


def opposite(color: str) -> str:
    return WHITE if color == BLACK else BLACK


# -- validation --------------------------------------------------------------


def perfectness_violations(n: ToricGraph) -> list:
    out = []
    for v in n.vertices:
        if v.color == WHITE:
            k = sum(e.head == v.id for e in n.edges)
            if k != 1:
                out.append(f"white vertex {v.id} has {k} incoming edges")
        else:
            k = sum(e.tail == v.id for e in n.edges)
            if k != 1:
                out.append(f"black vertex {v.id} has {k} outgoing edges")
    return out


def validate_network(n: ToricGraph) -> ValidationReport:
    report = validate_graph(n)
    for msg in perfectness_violations(n):
        report.add("PERFECTNESS_VIOLATION", msg)
    return report


def rim_crossings(n: ToricGraph) -> dict:
    """Edge id -> list of local ``<rim, e>`` signs ordered along the edge."""
    out = {}
    for e in n.edges:
        hits = edge_curve_crossing(n, e, n.curves.rim)
        if hits:
            out[e.id] = [-h[0] for h in hits]
    return out


def validate_rim_cut(n: ToricGraph) -> ValidationReport:
    """Ideal-rim and cut conditions (see also :func:`measurement_preconditions`)."""
    report = ValidationReport()
    if n.curves is None:
        report.add("NO_CURVES", "network has no rim/cut")
        return report
    report.merge(validate_curves(n))
    try:
        crossings = rim_crossings(n)
        for e in n.edges:
            edge_curve_crossing(n, e, n.curves.cut)
    except NonTransversalCrossing as exc:
        report.add("NON_TRANSVERSAL", str(exc))
        return report
    signs = {s for ss in crossings.values() for s in ss}
    if len(signs) > 1:
        bad = sorted((eid for eid, ss in crossings.items() if -1 in ss), key=natural_key)
        report.add("NOT_IDEAL", f"rim is crossed in both directions (negative at {', '.join(bad)})")
    elif signs == {-1}:
        report.add("CUT_DIRECTION", "all edges cross the rim negatively; reverse both rim and cut")
    meets = curves_meet_once(n.curves)
    if meets != 1:
        report.add("CUT_NOT_SIMPLE_CROSSING", f"cut meets the rim at {meets if meets is not None else 'infinitely many'} points")
    report.info["rim_crossers"] = sorted(crossings, key=natural_key)
    return report


def measurement_preconditions(n: ToricGraph) -> ValidationReport:
    """Conditions under which measurement and turning numbers are computed.

    The network must be bipartite, each rim-crossing edge must cross once and
    run black to white, and all rim crossers must be parallel.
    """
    report = ValidationReport()
    if not n.is_bipartite():
        report.add("NOT_BIPARTITE", "network has unicolored edges")
    if n.curves is None:
        return report
    crossings = rim_crossings(n)
    directions = []
    for eid, ss in sorted(crossings.items(), key=lambda t: natural_key(t[0])):
        e = n.edge(eid)
        if len(ss) > 1:
            report.add("MULTIPLE_RIM_CROSSINGS", f"edge {eid} crosses the rim {len(ss)} times")
        if not (n.color(e.tail) == BLACK and n.color(e.head) == WHITE):
            report.add("RIM_CROSSER_NOT_BLACK_TO_WHITE", f"edge {eid} runs {n.color(e.tail)} to {n.color(e.head)}")
        directions.append((eid, e.lift))
    for (a, u), (b, v) in zip(directions, directions[1:]):
        if cross(u, v) != 0:
            report.add("RIM_CROSSERS_NOT_PARALLEL", f"edges {a} and {b} are not parallel")
    return report


# -- equivalence moves -------------------------------------------------------


def _fresh(existing, base: str) -> str:
    if base not in existing:
        return base
    k = 2
    while f"{base}~{k}" in existing:
        k += 1
    return f"{base}~{k}"


def split_edge(n: ToricGraph, eid: str, cuts: list) -> tuple:
    """Subdivide ``eid`` at parameters ``t`` with new vertices of the given colors.

    ``cuts`` is a list of ``(t, color)`` with ``0 < t < 1`` increasing. The first
    fragment keeps the full weight, later fragments get weight 1. Returns
    ``(network, new edge ids in order)``.
    """
    e = n.edge(eid)
    start = n.vertex(e.tail).pos
    vids = {v.id for v in n.vertices}
    eids = {x.id for x in n.edges}
    chain = [e.tail]
    new_vertices = []
    for k, (t, color) in enumerate(cuts, 1):
        t = Fraction(t)
        p = add(start, (e.lift[0] * t, e.lift[1] * t))
        vid = _fresh(vids, f"{eid}.v{k}")
        vids.add(vid)
        new_vertices.append(Vertex(vid, color, mod1(p)))
        chain.append(vid)
    chain.append(e.head)
    ts = [Fraction(0)] + [Fraction(t) for t, _ in cuts] + [Fraction(1)]
    one = as_scalar(1, n.backend, n.tol)
    frags = []
    for k in range(len(chain) - 1):
        fid = _fresh(eids, f"{eid}.{k + 1}")
        eids.add(fid)
        dt = ts[k + 1] - ts[k]
        frags.append(Edge(fid, chain[k], chain[k + 1], e.weight if k == 0 else one,
                          (e.lift[0] * dt, e.lift[1] * dt),
                          e.cross_rim if k == 0 else (0 if e.cross_rim is not None else None),
                          e.cross_cut if k == 0 else (0 if e.cross_cut is not None else None)))
    out = type(n)(n.vertices + tuple(new_vertices), tuple(x for x in n.edges if x.id != eid) + tuple(frags), n.curves)
    if n.curves is not None and e.cross_rim is not None:
        # fragments get their own geometric crossing counts
        sub_g = type(n)(out.vertices, tuple(frags), n.curves)
        fixed = {f.id: f for f in compute_crossings(sub_g).edges}
        out = out.with_edges(fixed.get(x.id, x) for x in out.edges)
    return out, [f.id for f in frags]


def insert_vertex(n: ToricGraph, eid: str, color: str | None = None, t=Fraction(1, 2)) -> PerfectNetwork:
    """Move (a): put a 2-valent vertex on ``eid`` (default color opposite to the tail)."""
    color = color or opposite(n.color(n.edge(eid).tail))
    out, _ = split_edge(n, eid, [(t, color)])
    return as_network(out)


def contract_edge(n: ToricGraph, eid: str) -> PerfectNetwork:
    """Move (b): merge the endpoints of a unicolored edge into its tail.

    Paths through the removed edge keep their weight: for two white ends the
    head's outgoing edges absorb the weight, for two black ends the tail's
    incoming edges do.
    """
    e = n.edge(eid)
    u, v = e.tail, e.head
    if u == v:
        raise IsLoopError(f"edge {eid} is a loop")
    color = n.color(u)
    if color != n.color(v):
        raise NotUnicolored(f"edge {eid} joins {color} and {n.color(v)}")
    edges = []
    for x in n.edges:
        if x.id == eid:
            continue
        if {x.tail, x.head} == {u, v}:
            raise IsLoopError(f"contracting {eid} turns parallel edge {x.id} into a loop")
        w = x.weight
        if color == WHITE and x.tail == v:
            w = w * e.weight
        if color == BLACK and x.head == u:
            w = w * e.weight
        lift, cr, cc = x.lift, x.cross_rim, x.cross_cut
        if x.tail == v:
            lift = add(lift, e.lift)
            cr = None if cr is None else cr + (e.cross_rim or 0)
            cc = None if cc is None else cc + (e.cross_cut or 0)
        if x.head == v:
            lift = add(lift, neg(e.lift))
            cr = None if cr is None else cr - (e.cross_rim or 0)
            cc = None if cc is None else cc - (e.cross_cut or 0)
        edges.append(replace(x, tail=u if x.tail == v else x.tail, head=u if x.head == v else x.head,
                             weight=w, lift=lift, cross_rim=cr, cross_cut=cc))
    return PerfectNetwork(tuple(x for x in n.vertices if x.id != v), tuple(edges), n.curves)


def reverse_cycle(n: ToricGraph, cycle: list) -> PerfectNetwork:
    """Move (c): reverse a directed cycle, replacing each weight by its reciprocal."""
    if not cycle:
        raise NotADirectedCycle("empty cycle")
    es = [n.edge(c) for c in cycle]
    for a, b in zip(es, es[1:] + es[:1]):
        if a.head != b.tail:
            raise NotADirectedCycle(f"{a.id} does not continue into {b.id}")
    if len(set(cycle)) != len(cycle):
        raise NotADirectedCycle("cycle repeats an edge")
    ids = set(cycle)
    return PerfectNetwork(n.vertices, tuple(
        replace(x.reversed(), weight=x.weight.inverse()) if x.id in ids else x for x in n.edges), n.curves)


MOVES = {
    "insert": lambda n, a: insert_vertex(n, a["edge"], a.get("color"), Fraction(a.get("t", "1/2"))),
    "contract": lambda n, a: contract_edge(n, a["edge"]),
    "reverse": lambda n, a: reverse_cycle(n, list(a["cycle"])),
}


def apply_moves(n: ToricGraph, transcript: list) -> PerfectNetwork:
    """Replay a JSON transcript ``[{"move": ..., "args": {...}}, ...]``."""
    for step in transcript:
        n = MOVES[step["move"]](n, step.get("args", {}))
    return as_network(n)


# -- bipartite graph and Psi -------------------------------------------------


def bipartite_double(n: ToricGraph) -> tuple:
    """Split every unicolored edge by an opposite-color midpoint.

    Returns ``(bipartite network, {original edge id: tuple of new edge ids})``.
    """
    corr = {}
    out = n
    for e in n.edges:
        if n.color(e.tail) == n.color(e.head):
            t = _clear_parameter(out, e, Fraction(0), Fraction(1))
            out, frags = split_edge(out, e.id, [(t, opposite(n.color(e.tail)))])
            corr[e.id] = tuple(frags)
        else:
            corr[e.id] = (e.id,)
    return as_network(out), corr


def psi_weights(n: ToricGraph) -> dict:
    """Reciprocal weights on black-to-white edges, unchanged weights elsewhere."""
    out = {}
    for e in n.edges:
        if n.color(e.tail) == BLACK and n.color(e.head) == WHITE:
            if e.weight.is_zero():
                raise ZeroWeightOnCoverEdge(f"edge {e.id} has zero weight")
            out[e.id] = e.weight.inverse()
        else:
            out[e.id] = e.weight
    return out


def psi_map(n: ToricGraph) -> ToricGraph:
    return n.with_weights(psi_weights(n))


# -- preparation for measurement ---------------------------------------------


def _clear_parameter(n: ToricGraph, e: Edge, lo: Fraction, hi: Fraction) -> Fraction:
    """A parameter strictly between lo and hi whose point avoids both curves and all vertices."""
    start = n.vertex(e.tail).pos
    taken = {v.pos for v in n.vertices}
    for den in range(2, 64):
        for num in range(1, den):
            t = lo + (hi - lo) * Fraction(num, den)
            p = mod1(add(start, (e.lift[0] * t, e.lift[1] * t)))
            if p in taken:
                continue
            if n.curves and (_point_on_curve(p, n.curves.rim) or _point_on_curve(p, n.curves.cut)):
                continue
            return t
    raise ValueError(f"no free point on edge {e.id}")


def prepare_for_measurement(n: ToricGraph) -> tuple:
    """Bipartite network where every rim crossing sits on its own black-to-white edge.

    Rim-crossing edges are subdivided by 2-valent vertices: a black vertex just
    before each crossing unless the tail is already black, and a white vertex
    just after unless the head is already white. Returns ``(network, log)``.
    """
    n = as_network(n)
    if not n.has_crossings() and n.curves is not None:
        n = as_network(compute_crossings(n))
    log = []
    g, corr = bipartite_double(n)
    for orig, frags in corr.items():
        if len(frags) > 1:
            log.append({"move": "bipartite_double", "edge": orig, "fragments": list(frags)})
    if g.curves is None:
        return g, log
    for e in list(g.edges):
        hits = edge_curve_crossing(g, e, g.curves.rim)
        if not hits:
            continue
        ts = [h[1] for h in hits]
        need = []
        bounds = [Fraction(0)] + ts + [Fraction(1)]
        for k, t in enumerate(ts):
            before_black = k > 0 or g.color(e.tail) != BLACK
            after_white = k < len(ts) - 1 or g.color(e.head) != WHITE
            lo, hi = bounds[k], bounds[k + 2]
            if before_black:
                # the interval before t is shared with the previous crossing's white vertex
                left = lo if k == 0 else (lo + t) / 2
                need.append((_clear_parameter(g, e, left, t), BLACK))
            if after_white:
                right = hi if k == len(ts) - 1 else (t + hi) / 2
                need.append((_clear_parameter(g, e, t, right), WHITE))
        if need:
            need.sort()
            g2, frags = split_edge(g, e.id, need)
            g = as_network(g2)
            log.append({"move": "insert", "edge": e.id, "fragments": frags,
                        "colors": [c for _, c in need]})
    return g, log


# -- turning numbers ---------------------------------------------------------


@dataclass
class TurningData:
    exact: bool
    entries: dict = field(default_factory=dict)  # edge id -> dict(pred, succ, a_minus, a_plus, turn)

    def turn(self, eid: str):
        return self.entries[eid]["turn"]

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "edges": {
                eid: {
                    "pred": d["pred"],
                    "succ": d["succ"],
                    "alpha_minus": d["a_minus"],
                    "alpha_plus": d["a_plus"],
                    "turn": format_scalar(d["turn"]),
                }
                for eid, d in sorted(self.entries.items(), key=lambda t: natural_key(t[0]))
            },
        }


def _quarter(u, v) -> int | None:
    """Signed angle from u to v in quarter turns when it is a multiple of pi/2."""
    c, d = cross(u, v), dot(u, v)
    if c == 0 and d < 0:
        raise StraightAngleError("two successive edges form a straight angle (pi)")
    if c == 0:
        return 0
    if d == 0:
        return sign(c)
    return None


def _angle(u, v) -> float:
    c, d = cross(u, v), dot(u, v)
    if c == 0 and d < 0:
        raise StraightAngleError("two successive edges form a straight angle (pi)")
    return math.atan2(float(c), float(d))


def turning_numbers(n: ToricGraph, backend: str | None = None, tol: float | None = None) -> TurningData:
    """Turning number of every white-to-black edge of a bipartite perfect network.

    Exact values (powers of zeta_8) are produced whenever every relevant angle is
    a multiple of pi/2; otherwise the FLOAT backend is required.
    """
    backend = backend or n.backend
    tol = n.tol if tol is None else tol
    inc = {}
    out = {}
    for e in n.edges:
        inc.setdefault(e.head, []).append(e)
        out.setdefault(e.tail, []).append(e)
    triples = []
    for e in n.edges:
        if not (n.color(e.tail) == WHITE and n.color(e.head) == BLACK):
            continue
        pred = inc.get(e.tail, [])
        succ = out.get(e.head, [])
        if len(pred) != 1 or len(succ) != 1:
            raise ValueError(f"edge {e.id}: network is not perfect at its endpoints")
        triples.append((e, pred[0], succ[0]))
    quarters = []
    for e, p, s in triples:
        quarters.append((_quarter(p.lift, e.lift), _quarter(e.lift, s.lift)))
    all_quarter = all(a is not None and b is not None for a, b in quarters)
    if backend == EXACT and not all_quarter:
        raise NonAxisParallelInExactMode("angles are not multiples of pi/2; use the float backend")
    data = TurningData(exact=backend == EXACT)
    for (e, p, s), (qa, qb) in zip(triples, quarters):
        if backend == EXACT:
            turn = ExactScalar.zeta(qa + qb)
            a_minus, a_plus = f"{qa}*pi/2", f"{qb}*pi/2"
        else:
            am, ap = _angle(p.lift, e.lift), _angle(e.lift, s.lift)
            turn = FloatScalar(cmath.exp(0.5j * (am + ap)), tol)
            a_minus, a_plus = am, ap
        data.entries[e.id] = {"pred": p.id, "succ": s.id, "a_minus": a_minus, "a_plus": a_plus, "turn": turn}
    return data


def fractional_marking(n: ToricGraph, data: TurningData | None = None, backend: str | None = None) -> dict:
    """Turning number on white-to-black edges, -1 on black-to-white edges."""
    data = data or turning_numbers(n, backend)
    b = EXACT if data.exact else FLOAT
    minus = as_scalar(-1, b, n.tol)
    return {e.id: data.turn(e.id) if e.id in data.entries else minus for e in n.edges}


# -- marking verification ----------------------------------------------------


@dataclass
class MarkingReport:
    face_failures: list = field(default_factory=list)
    cycle_failures: list = field(default_factory=list)
    switch_count_failures: list = field(default_factory=list)
    cycle_signs: dict = field(default_factory=dict)
    faces: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.face_failures or self.cycle_failures or self.switch_count_failures)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "face_failures": self.face_failures,
            "cycle_failures": self.cycle_failures,
            "switch_count_failures": self.switch_count_failures,
            "cycle_signs": self.cycle_signs,
            "faces": self.faces,
        }


def switch_count(f) -> int:
    """Vertices of a face where the two boundary edges point in opposite senses along the walk."""
    ds = [d for _, d in f.walk]
    return sum(ds[k] != ds[k - 1] for k in range(len(ds)))


def black_to_white_count(n: ToricGraph, f) -> int:
    return sum(n.color(n.edge(eid).tail) == BLACK and n.color(n.edge(eid).head) == WHITE for eid, _ in f.walk)


def fundamental_cycles(g: ToricGraph) -> list:
    """One closed walk per non-tree edge of a BFS spanning tree (spans all cycles)."""
    adj = {}
    for e in g.edges:
        adj.setdefault(e.tail, []).append((e.id, 1, e.head))
        adj.setdefault(e.head, []).append((e.id, -1, e.tail))
    root = g.vertices[0].id
    parent = {root: None}
    depth = {root: 0}
    tree = set()
    q = deque([root])
    while q:
        v = q.popleft()
        for eid, d, w in sorted(adj.get(v, []), key=lambda t: natural_key(t[0])):
            if w not in parent:
                parent[w] = (eid, d, v)  # half-edge from v to w
                depth[w] = depth[v] + 1
                tree.add(eid)
                q.append(w)

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            eid, d, p = parent[v]
            out.append((eid, -d))  # step from v up to p
            v = p
        return out

    cycles = []
    for e in g.edges:
        if e.id in tree:
            continue
        # e.tail -> e.head, then head up to root, then root down to tail
        up = path_to_root(e.head)
        down = [(eid, -d) for eid, d in reversed(path_to_root(e.tail))]
        walk = [(e.id, 1)] + up + down
        cycles.append((e.id, _cancel(walk)))
    return cycles


def _cancel(walk: list) -> list:
    out = []
    for h in walk:
        if out and out[-1][0] == h[0] and out[-1][1] == -h[1]:
            out.pop()
        else:
            out.append(h)
    while len(out) > 1 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


def verify_marking(n: ToricGraph, marking: dict, faces: list | None = None) -> MarkingReport:
    """Face condition, cycle condition on a cycle basis, and the switch-count identity."""
    faces = compute_faces(n) if faces is None else faces
    rep = MarkingReport()
    for k, f in enumerate(faces):
        prod = alternating_product(n, f.walk, marking)
        target = as_scalar(face_target(f), prod.backend, getattr(prod, "tol", n.tol))
        ok = prod.close_to(target)
        s, bw = switch_count(f), black_to_white_count(n, f)
        rep.faces.append({"face": k, "length": f.length, "product_ok": ok, "switches": s, "bw": bw})
        if not ok:
            rep.face_failures.append(k)
        if s != f.length - 2 * bw:
            rep.switch_count_failures.append(k)
    for eid, walk in fundamental_cycles(n):
        prod = alternating_product(n, walk, marking)
        one = as_scalar(1, prod.backend, getattr(prod, "tol", n.tol))
        if prod.close_to(one):
            rep.cycle_signs[eid] = 1
        elif prod.close_to(-one):
            rep.cycle_signs[eid] = -1
        else:
            rep.cycle_failures.append(eid)
    return rep

