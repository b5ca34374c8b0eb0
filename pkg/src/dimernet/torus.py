"""Graphs embedded on the flat torus with straight edges.

The torus is the unit square with opposite sides identified. Every edge stores
the displacement of a straight lift from its tail to its head, so the whole
geometry is exact rational data.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .algebra.scalar import DEFAULT_TOL, EXACT, Scalar, as_scalar, backend_of
from .errors import (
    DegenerateAnglesError,
    NonTransversalCrossing,
    UnknownVertexError,
    ZeroScalarError,
)
from .geometry import (
    Curve,
    add,
    bbox,
    compare_angles,
    curve_meeting_points,
    intersection_sign,
    natural_key,
    neg,
    point_on_segment,
    pt,
    same_direction,
    segment_hit,
    sub,
    translates,
)

BLACK = "black"
WHITE = "white"


@dataclass(frozen=True)
class Vertex:
    id: str
    color: str
    pos: tuple

    def __post_init__(self):
        object.__setattr__(self, "pos", pt(*self.pos))


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    weight: Scalar
    lift: tuple
    cross_rim: int | None = None
    cross_cut: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "lift", pt(*self.lift))

    def reversed(self) -> "Edge":
        """Same geometric edge traversed head to tail; crossing counts flip sign."""
        return replace(
            self,
            tail=self.head,
            head=self.tail,
            lift=neg(self.lift),
            cross_rim=None if self.cross_rim is None else -self.cross_rim,
            cross_cut=None if self.cross_cut is None else -self.cross_cut,
        )


@dataclass(frozen=True)
class CurvePair:
    """Rim (first basis curve) and cut (second basis curve)."""

    rim: Curve
    cut: Curve

    def pairing(self) -> int:
        """Homological intersection number of rim with cut."""
        (a, b), (c, d) = self.rim.homology, self.cut.homology
        return c * b - d * a


@dataclass(frozen=True)
class Face:
    """Boundary walk as ``(edge id, +1 along / -1 against)`` pairs."""

    walk: tuple

    @property
    def length(self) -> int:
        return len(self.walk)

    def edge_ids(self) -> list:
        return [e for e, _ in self.walk]


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str):
        self.violations.append((code, message))

    def codes(self) -> list:
        return [c for c, _ in self.violations]

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        self.info.update(other.info)
        return self

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [{"code": c, "message": m} for c, m in self.violations],
            **self.info,
        }


@dataclass(frozen=True)
class ToricGraph:
    vertices: tuple
    edges: tuple
    curves: CurvePair | None = None

    def __post_init__(self):
        vs = tuple(sorted(self.vertices, key=lambda v: natural_key(v.id)))
        es = tuple(sorted(self.edges, key=lambda e: natural_key(e.id)))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "_vindex", {v.id: v for v in vs})
        object.__setattr__(self, "_eindex", {e.id: e for e in es})

    # lookups --------------------------------------------------------------
    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vindex[vid]
        except KeyError:
            raise UnknownVertexError(vid) from None

    def edge(self, eid: str) -> Edge:
        return self._eindex[eid]

    def has_vertex(self, vid: str) -> bool:
        return vid in self._vindex

    @property
    def backend(self) -> str:
        for e in self.edges:
            b = backend_of(e.weight)
            if b is not None:
                return b
        return EXACT

    @property
    def tol(self) -> float:
        for e in self.edges:
            if hasattr(e.weight, "tol"):
                return e.weight.tol
        return DEFAULT_TOL

    def color(self, vid: str) -> str:
        return self.vertex(vid).color

    def whites(self) -> list:
        return [v.id for v in self.vertices if v.color == WHITE]

    def blacks(self) -> list:
        return [v.id for v in self.vertices if v.color == BLACK]

    def incident(self, vid: str) -> list:
        return [e for e in self.edges if vid in (e.tail, e.head)]

    def degree(self, vid: str) -> int:
        return sum((e.tail == vid) + (e.head == vid) for e in self.edges)

    def is_bipartite(self) -> bool:
        return all(self.color(e.tail) != self.color(e.head) for e in self.edges)

    def has_crossings(self) -> bool:
        return all(e.cross_rim is not None and e.cross_cut is not None for e in self.edges)

    # rebuilding -----------------------------------------------------------
    def with_edges(self, edges) -> "ToricGraph":
        return type(self)(self.vertices, tuple(edges), self.curves)

    def with_weights(self, weights: dict) -> "ToricGraph":
        """Replace weights; plain numbers are lifted into the graph's backend."""
        backend, tol = self.backend, self.tol
        lifted = {k: as_scalar(w, backend, tol) for k, w in weights.items()}
        return self.with_edges(replace(e, weight=lifted.get(e.id, e.weight)) for e in self.edges)

    def weights(self) -> dict:
        return {e.id: e.weight for e in self.edges}

    def half_edges_at(self, vid: str) -> list:
        """Outgoing half-edges ``(edge id, +1 if v is the tail else -1, direction)`` in CCW order."""
        out = []
        for e in self.edges:
            if e.tail == vid:
                out.append((e.id, 1, e.lift))
            if e.head == vid:
                out.append((e.id, -1, neg(e.lift)))
        return sorted(out, key=functools.cmp_to_key(lambda a, b: compare_angles(a[2], b[2])))


def half_edge_end(g: ToricGraph, eid: str, d: int) -> str:
    e = g.edge(eid)
    return e.head if d > 0 else e.tail


def half_edge_start(g: ToricGraph, eid: str, d: int) -> str:
    e = g.edge(eid)
    return e.tail if d > 0 else e.head


def _rotation(g: ToricGraph) -> dict:
    rot = {}
    for v in g.vertices:
        hs = g.half_edges_at(v.id)
        for a, b in zip(hs, hs[1:]):
            if same_direction(a[2], b[2]):
                raise DegenerateAnglesError(f"edges {a[0]} and {b[0]} leave {v.id} in the same direction")
        if len(hs) > 1 and same_direction(hs[0][2], hs[-1][2]):
            raise DegenerateAnglesError(f"edges {hs[0][0]} and {hs[-1][0]} leave {v.id} in the same direction")
        rot[v.id] = [(h[0], h[1]) for h in hs]
    return rot


def compute_faces(g: ToricGraph) -> list:
    """Trace faces of the rotation system given by the geometric angle order.

    Walking along a half-edge and arriving at ``v``, the walk continues with the
    half-edge immediately clockwise of the reversed arrival direction, which keeps
    the face on the left.
    """
    rot = _rotation(g)
    position = {}
    for vid, hs in rot.items():
        for k, h in enumerate(hs):
            position[h] = (vid, k)
    unused = set(position)
    faces = []
    order = sorted(position, key=lambda h: (natural_key(h[0]), -h[1]))
    for start in order:
        if start not in unused:
            continue
        walk = []
        h = start
        while h in unused:
            unused.discard(h)
            walk.append(h)
            twin = (h[0], -h[1])
            vid, k = position[twin]
            hs = rot[vid]
            h = hs[(k - 1) % len(hs)]
        faces.append(Face(_rotate_walk(walk)))
    faces.sort(key=lambda f: (natural_key(f.walk[0][0]), -f.walk[0][1]))
    return faces


def _rotate_walk(walk: list) -> tuple:
    k = min(range(len(walk)), key=lambda i: (natural_key(walk[i][0]), -walk[i][1]))
    return tuple(walk[k:] + walk[:k])


def face_vertices(g: ToricGraph, f: Face) -> list:
    return [half_edge_start(g, e, d) for e, d in f.walk]


def walk_displacement(g: ToricGraph, walk) -> tuple:
    total = (Fraction(0), Fraction(0))
    for eid, d in walk:
        lift = g.edge(eid).lift
        total = add(total, lift if d > 0 else neg(lift))
    return total


def walk_crossings(g: ToricGraph, walk) -> tuple:
    """Signed ``(sum cross_rim, sum cross_cut)`` along a walk of half-edges."""
    r = c = 0
    for eid, d in walk:
        e = g.edge(eid)
        r += d * (e.cross_rim or 0)
        c += d * (e.cross_cut or 0)
    return (r, c)


def validate_graph(g: ToricGraph, require_bipartite: bool = False) -> ValidationReport:
    report = ValidationReport()
    seen = set()
    for v in g.vertices:
        if v.id in seen:
            report.add("DUPLICATE_ID", f"vertex id {v.id} repeated")
        seen.add(v.id)
        if v.color not in (BLACK, WHITE):
            report.add("BAD_COLOR", f"vertex {v.id} has color {v.color!r}")
        if not (0 <= v.pos[0] < 1 and 0 <= v.pos[1] < 1):
            report.add("POSITION_OUT_OF_RANGE", f"vertex {v.id} lies outside [0,1)^2")
    eseen = set()
    structural = False
    for e in g.edges:
        if e.id in eseen:
            report.add("DUPLICATE_ID", f"edge id {e.id} repeated")
        eseen.add(e.id)
        if not (g.has_vertex(e.tail) and g.has_vertex(e.head)):
            report.add("UNKNOWN_VERTEX", f"edge {e.id} references a missing vertex")
            structural = True
            continue
        if e.tail == e.head:
            report.add("SELF_LOOP", f"edge {e.id} is a loop at {e.tail}")
            structural = True
        delta = sub(add(g.vertex(e.tail).pos, e.lift), g.vertex(e.head).pos)
        if delta[0].denominator != 1 or delta[1].denominator != 1:
            report.add("DISPLACEMENT_MISMATCH", f"edge {e.id}: lift is inconsistent with endpoint positions")
            structural = True
        if e.lift == (0, 0):
            report.add("DISPLACEMENT_MISMATCH", f"edge {e.id} has zero length")
            structural = True
        if require_bipartite and g.color(e.tail) == g.color(e.head):
            report.add("NOT_BIPARTITE", f"edge {e.id} joins two {g.color(e.tail)} vertices")
    for v in g.vertices:
        deg = g.degree(v.id)
        if deg <= 1:
            report.add("LEAFLESS_VIOLATION", f"vertex {v.id} has degree {deg}")
            structural = True
    if structural:
        return report
    try:
        faces = compute_faces(g)
    except DegenerateAnglesError as exc:
        report.add("DEGENERATE_ANGLES", str(exc))
        return report
    V, E, F = len(g.vertices), len(g.edges), len(faces)
    report.info.update({"vertices": V, "edges": E, "faces": F, "face_lengths": sorted(f.length for f in faces)})
    if V - E + F != 0:
        report.add("EULER_VIOLATION", f"V - E + F = {V - E + F}, faces are not all disks")
    for k, f in enumerate(faces):
        if walk_displacement(g, f.walk) != (0, 0):
            report.add("FACE_NOT_CONTRACTIBLE", f"face {k} has nonzero total displacement")
        if g.has_crossings() and walk_crossings(g, f.walk) != (0, 0):
            report.add("FACE_CROSSING_SUM", f"face {k} boundary has nonzero crossing sums")
    if g.curves is not None:
        report.merge(validate_curves(g))
    return report


def validate_curves(g: ToricGraph) -> ValidationReport:
    report = ValidationReport()
    c = g.curves
    for name, curve in (("rim", c.rim), ("cut", c.cut)):
        for problem in curve.simplicity_problems():
            report.add("CURVE_NOT_SIMPLE", f"{name}: {problem}")
        for v in g.vertices:
            if _point_on_curve(v.pos, curve):
                report.add("CURVE_HITS_VERTEX", f"{name} passes through vertex {v.id}")
    if c.pairing() != 1:
        report.add("BAD_CURVE_ORIENTATION", f"rim/cut intersection number is {c.pairing()}, expected +1")
    return report


def _point_on_curve(p, curve: Curve) -> bool:
    for a, b in curve.segments():
        for v in translates(bbox(a, b), (p[0], p[0], p[1], p[1])):
            if point_on_segment(add(p, v), a, b):
                return True
    return False


def edge_curve_crossing(g: ToricGraph, e: Edge, curve: Curve) -> list:
    """Crossings of edge ``e`` with ``curve`` as ``(sign, parameter on e, position on curve)``.

    The sign is ``<e, curve>`` in the torus intersection pairing. The curve
    position is ``segment index + local parameter``, which identifies the point
    on the closed curve.
    """
    p0 = g.vertex(e.tail).pos
    p1 = add(p0, e.lift)
    out = []
    for idx, (a, b) in enumerate(curve.segments()):
        for v in translates(bbox(p0, p1), bbox(a, b)):
            q0, q1 = add(a, v), add(b, v)
            hit = segment_hit(p0, p1, q0, q1)
            if hit is None:
                continue
            if not hit.proper:
                # touching at an edge endpoint or at a curve vertex is never accepted
                raise NonTransversalCrossing(
                    f"edge {e.id} meets the curve non-transversally at {tuple(map(str, hit.point))}",
                    edge=e.id,
                    segment=(tuple(map(str, q0)), tuple(map(str, q1))),
                )
            out.append((intersection_sign(e.lift, sub(q1, q0)), hit.t, idx + hit.u))
    out.sort(key=lambda x: x[1])
    return out


def compute_crossings(g: ToricGraph, c: CurvePair | None = None) -> ToricGraph:
    """Fill ``cross_rim = <rim, e>`` and ``cross_cut = <e, cut>`` from the geometry."""
    c = c or g.curves
    if c is None:
        raise ValueError("no rim/cut curves available")
    g = type(g)(g.vertices, g.edges, c)
    edges = []
    for e in g.edges:
        rim = -sum(h[0] for h in edge_curve_crossing(g, e, c.rim))
        cut = sum(h[0] for h in edge_curve_crossing(g, e, c.cut))
        edges.append(replace(e, cross_rim=rim, cross_cut=cut))
    return g.with_edges(edges)


def gauge_transform(g: ToricGraph, vid: str, t) -> ToricGraph:
    g.vertex(vid)
    t = as_scalar(t, g.backend, g.tol)
    if t.is_zero():
        raise ZeroScalarError("gauge factor must be nonzero")
    return g.with_edges(
        replace(e, weight=e.weight * t) if vid in (e.tail, e.head) else e for e in g.edges
    )


def curves_meet_once(c: CurvePair):
    """Number of distinct rim/cut meeting points on the torus (``None`` on overlap)."""
    pts = curve_meeting_points(c.rim, c.cut)
    return None if pts is None else len(pts)
