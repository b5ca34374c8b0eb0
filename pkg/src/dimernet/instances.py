"""Bundled instances and seeded generators for randomized suites."""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra.scalar import EXACT, FLOAT, ExactScalar, as_scalar
from .dimer import enumerate_covers
from .errors import NonTransversalCrossing
from .geometry import Curve
from .io import graph_from_json, load_path
from .measurement import CylEdge, CylinderNetwork
from .torus import BLACK, WHITE, CurvePair, Edge, ToricGraph, Vertex, compute_crossings

BUNDLED = ("example1", "example1_switched", "grid_sg", "grid_sg2", "broken")


def bundled_path(name: str):
    return resources.files("dimernet") / "data" / f"{name}.json"


def with_crossings(g: ToricGraph) -> ToricGraph:
    """Fill in missing rim/cut crossing counts from the curves when they are transversal."""
    if g.curves is None or g.has_crossings():
        return g
    try:
        return compute_crossings(g)
    except NonTransversalCrossing:
        return g  # left for validation to report


def load_bundled(name: str) -> ToricGraph:
    if name not in BUNDLED:
        raise KeyError(f"no bundled instance {name!r}; choose from {', '.join(BUNDLED)}")
    return with_crossings(load_path(bundled_path(name))[0])


def load_instance(spec: str) -> ToricGraph:
    """A bundled name (with or without ``.json``) or a path to a JSON file.

    An existing file always wins over a bundled instance of the same name.
    """
    if spec in BUNDLED:
        return load_bundled(spec)
    path = Path(spec)
    if not path.exists() and path.parent == Path(".") and path.suffix == ".json" and path.stem in BUNDLED:
        return load_bundled(path.stem)
    return with_crossings(load_path(spec)[0])


def example1(weights=(2, 3, 5, 7, 11, 13), switched: bool = False) -> ToricGraph:
    g = load_bundled("example1_switched" if switched else "example1")
    return g.with_weights({f"e{k + 1}": w for k, w in enumerate(weights)})


# -- square grids ------------------------------------------------------------


def grid_color(i: int, j: int) -> str:
    return WHITE if (i + j) % 2 == 0 else BLACK


def square_grid(cols: int = 4, rows: int = 2, pattern: str | None = "sg", weights=None,
                curves: bool = True) -> ToricGraph:
    """Square grid on the torus with vertex ``x{i}y{j}`` at ``(i/cols, j/rows)``.

    ``pattern`` picks a perfect orientation: ``"sg"`` runs every row to the right,
    ``"sg2"`` alternates rows right and left; vertical edges always go white to
    black. With ``pattern=None`` every edge is stored white to black. Edge
    ``h{i}.{j}`` joins column ``i`` to ``i+1``, edge ``u{i}.{j}`` row ``j`` to ``j+1``.
    """
    if cols % 2 or rows % 2:
        raise ValueError("grid dimensions must be even to stay bipartite")
    if pattern not in (None, "sg", "sg2"):
        raise ValueError(f"unknown orientation pattern {pattern!r}")
    weights = weights or {}
    one = Fraction(1)
    vid = lambda i, j: f"x{i % cols}y{j % rows}"  # noqa: E731
    vertices = [Vertex(vid(i, j), grid_color(i, j), (Fraction(i, cols), Fraction(j, rows)))
                for j in range(rows) for i in range(cols)]
    edges = []

    def add(eid, a, b, lift, forward):
        w = as_scalar(weights.get(eid, 1), EXACT)
        e = Edge(eid, vid(*a), vid(*b), w, lift)
        if pattern is None:
            forward = grid_color(*a) == WHITE
        edges.append(e if forward else e.reversed())

    for j in range(rows):
        for i in range(cols):
            right = pattern != "sg2" or j % 2 == 0
            add(f"h{i}.{j}", (i, j), (i + 1, j), (Fraction(1, cols), 0 * one), right)
            add(f"u{i}.{j}", (i, j), (i, j + 1), (0 * one, Fraction(1, rows)), grid_color(i, j) == WHITE)
    pair = None
    if curves:
        x, y = Fraction(1, 2 * cols), Fraction(1, 2 * rows)
        pair = CurvePair(Curve(((x, y), (x, y + 1))), Curve(((x, y), (x + 1, y))))
    g = ToricGraph(tuple(vertices), tuple(edges), pair)
    return compute_crossings(g) if curves else g


# -- randomization -----------------------------------------------------------


def random_rational(rng: random.Random, lo: int = 1, hi: int = 9, max_den: int = 5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_weights(g: ToricGraph, rng: random.Random) -> ToricGraph:
    return g.with_weights({e.id: random_rational(rng) for e in g.edges})


def random_perfect_orientation(g: ToricGraph, rng: random.Random) -> ToricGraph:
    """Orient a random dimer cover black to white and every other edge white to black."""
    covers = enumerate_covers(g)
    if not covers:
        raise ValueError("graph has no dimer cover")
    chosen = set(rng.choice(covers).edges)
    out = []
    for e in g.edges:
        tail_white = g.color(e.tail) == WHITE
        want_white_tail = e.id not in chosen
        out.append(e if tail_white == want_white_tail else e.reversed())
    return g.with_edges(out)


def perturb(g: ToricGraph, rng: random.Random, radius: Fraction = Fraction(1, 100),
            float_weights: bool = True) -> ToricGraph:
    """Move every vertex by a random rational offset of size at most ``radius`` per axis.

    Lifts follow the moved endpoints, so homology classes are unchanged. Curves
    are kept; callers should keep ``radius`` below their clearance from vertices.
    """
    den = 1000
    steps = int(radius * den)
    delta = {v.id: (Fraction(rng.randint(-steps, steps), den), Fraction(rng.randint(-steps, steps), den))
             for v in g.vertices}
    vertices = []
    for v in g.vertices:
        dx, dy = delta[v.id]
        vertices.append(replace(v, pos=((v.pos[0] + dx) % 1, (v.pos[1] + dy) % 1)))
    edges = []
    for e in g.edges:
        (tx, ty), (hx, hy) = delta[e.tail], delta[e.head]
        lift = (e.lift[0] + hx - tx, e.lift[1] + hy - ty)
        w = e.weight.to_float(g.tol) if float_weights and isinstance(e.weight, ExactScalar) else e.weight
        edges.append(replace(e, lift=lift, weight=w, cross_rim=None, cross_cut=None))
    out = ToricGraph(tuple(vertices), tuple(edges), g.curves)
    return compute_crossings(out) if g.curves is not None else out


def random_cylinder_network(rng: random.Random, max_sources: int = 4, max_internal: int = 6,
                            acyclic: bool = False, backend: str = EXACT,
                            scale: Fraction | None = None) -> CylinderNetwork:
    """Random directed network on a cylinder with lambda-graded edges.

    Sources feed internal vertices and internal vertices feed sinks; there are
    no direct source-to-sink edges. ``acyclic`` keeps internal edges increasing
    in vertex index. ``scale`` multiplies every weight (used to force
    convergence of path series in FLOAT mode).
    """
    n = rng.randint(1, max_sources)
    m = rng.randint(1, max_internal)
    internal = tuple(f"v{k}" for k in range(m))
    sources = tuple(f"s{k}" for k in range(n))
    sinks = tuple(f"t{k}" for k in range(n))

    def weight():
        w = random_rational(rng)
        if scale is not None:
            w = w * scale
        return as_scalar(w, backend) if backend == FLOAT else w

    edges = []
    for s in sources:
        for v in rng.sample(internal, rng.randint(1, min(2, m))):
            edges.append(CylEdge(s, v, weight(), rng.randint(-1, 1)))
    for t in sinks:
        for v in rng.sample(internal, rng.randint(1, min(2, m))):
            edges.append(CylEdge(v, t, weight(), rng.randint(-1, 1)))
    for a in range(m):
        for b in range(m):
            if a == b or (acyclic and b < a) or rng.random() > 0.35:
                continue
            edges.append(CylEdge(internal[a], internal[b], weight(), rng.randint(-1, 1)))
    return CylinderNetwork(internal, sources, sinks, tuple(edges), backend)


def instance_from_dict(data: dict) -> ToricGraph:
    return with_crossings(graph_from_json(data)[0])
