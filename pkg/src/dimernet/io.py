"""Reading and writing the JSON instance format."""

from __future__ import annotations

import json
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .algebra.scalar import DEFAULT_TOL, ExactScalar, FloatScalar, format_scalar, parse_scalar
from .errors import InstanceFormatError
from .geometry import Curve
from .torus import CurvePair, Edge, ToricGraph, Vertex


def _pair(raw, what: str) -> tuple:
    if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(x, int) and not isinstance(x, bool) for x in raw)):
        raise InstanceFormatError(f"{what}: expected [num, den, num, den], got {raw!r}")
    if raw[1] == 0 or raw[3] == 0:
        raise InstanceFormatError(f"{what}: zero denominator")
    return (Fraction(raw[0], raw[1]), Fraction(raw[2], raw[3]))


def _pair_json(p) -> list:
    x, y = Fraction(p[0]), Fraction(p[1])
    return [x.numerator, x.denominator, y.numerator, y.denominator]


def weight_json(w):
    if isinstance(w, FloatScalar):
        return {"re": w.z.real, "im": w.z.imag}
    return format_scalar(w)


def graph_from_json(data: dict, tol: float = DEFAULT_TOL) -> tuple:
    """Build a graph from parsed JSON.

    Returns ``(graph, orientation)`` where ``orientation`` is ``None`` for plain
    graphs. For networks every edge is re-stored so that tail -> head follows
    the listed orientation (a leading ``-`` means the stored edge is reversed).
    """
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object")
    try:
        vertices = [Vertex(str(v["id"]), str(v["color"]).lower(), _pair(v["pos"], f"vertex {v.get('id')}"))
                    for v in data["vertices"]]
        edges = []
        for e in data["edges"]:
            eid = str(e["id"])
            edges.append(Edge(
                eid,
                str(e["tail"]),
                str(e["head"]),
                parse_scalar(e.get("weight", "1"), tol),
                _pair(e["lift"], f"edge {eid}"),
                _opt_int(e.get("cross_rim"), eid),
                _opt_int(e.get("cross_cut"), eid),
            ))
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"malformed vertex or edge record: {exc}") from exc
    backends = {type(e.weight) for e in edges}
    if len(backends) > 1:
        raise InstanceFormatError("weights mix exact and float literals")
    curves = None
    if "rim" in data or "cut" in data:
        try:
            rim = Curve(tuple(_pair(p, "rim point") for p in data["rim"]))
            cut = Curve(tuple(_pair(p, "cut point") for p in data["cut"]))
        except KeyError as exc:
            raise InstanceFormatError("rim and cut must be given together") from exc
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from exc
        curves = CurvePair(rim, cut)
    orientation = None
    if "orientation" in data:
        orientation = [str(x) for x in data["orientation"]]
        flips = {}
        for item in orientation:
            key = item[1:] if item.startswith("-") else item
            flips[key] = item.startswith("-")
        known = {e.id for e in edges}
        if set(flips) != known:
            raise InstanceFormatError("orientation must list every edge exactly once")
        edges = [e.reversed() if flips[e.id] else e for e in edges]
    return ToricGraph(tuple(vertices), tuple(edges), curves), orientation


def _opt_int(x, eid):
    if x is None:
        return None
    if not isinstance(x, int) or isinstance(x, bool):
        raise InstanceFormatError(f"edge {eid}: crossing counts must be integers")
    return x


def graph_to_json(g: ToricGraph, network: bool = False, crossings: bool = True) -> dict:
    out = {
        "vertices": [{"id": v.id, "color": v.color, "pos": _pair_json(v.pos)} for v in g.vertices],
        "edges": [],
    }
    for e in g.edges:
        rec = {"id": e.id, "tail": e.tail, "head": e.head, "weight": weight_json(e.weight),
               "lift": _pair_json(e.lift)}
        if crossings and e.cross_rim is not None:
            rec["cross_rim"] = e.cross_rim
        if crossings and e.cross_cut is not None:
            rec["cross_cut"] = e.cross_cut
        out["edges"].append(rec)
    if g.curves is not None:
        out["rim"] = [_pair_json(p) for p in g.curves.rim.points]
        out["cut"] = [_pair_json(p) for p in g.curves.cut.points]
    if network:
        out["orientation"] = [e.id for e in g.edges]
    return out


def load_path(path, tol: float = DEFAULT_TOL) -> tuple:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: invalid JSON ({exc})") from exc
    return graph_from_json(data, tol)


def to_float_graph(g: ToricGraph, tol: float = DEFAULT_TOL) -> ToricGraph:
    """Same instance with every exact weight pushed to the FLOAT backend."""
    return g.with_edges(
        replace(e, weight=e.weight.to_float(tol) if isinstance(e.weight, ExactScalar) else e.weight)
        for e in g.edges
    )
