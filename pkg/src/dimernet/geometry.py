"""Exact planar predicates on rational points, plus periodic curve handling."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

Point = tuple  # (Fraction, Fraction)


def natural_key(s: str):
    """Sort key treating digit runs as integers, so ``e2 < e10``."""
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.findall(r"\d+|\D+", str(s)))


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def neg(p: Point) -> Point:
    return (-p[0], -p[1])


def cross(u: Point, v: Point):
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point):
    return u[0] * v[0] + u[1] * v[1]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def half(v: Point) -> int:
    """0 for directions in the half-open upper half plane [0, pi), else 1."""
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def compare_angles(u: Point, v: Point) -> int:
    """Counterclockwise angular order starting from the positive x-axis (for ``cmp_to_key``)."""
    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def same_direction(u: Point, v: Point) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


def is_integer_vector(v: Point) -> bool:
    return v[0].denominator == 1 and v[1].denominator == 1


def mod1(p: Point) -> Point:
    return (p[0] - math.floor(p[0]), p[1] - math.floor(p[1]))


@dataclass(frozen=True)
class Hit:
    """Intersection of two segments. ``proper`` means both interiors cross transversally."""

    point: Point
    proper: bool
    t: Fraction  # parameter on the first segment
    u: Fraction  # parameter on the second segment
    sign: int  # sign of cross(d1, d2); 0 for collinear contact
    overlap: bool = False  # collinear contact along a positive-length piece


def segment_hit(p0: Point, p1: Point, q0: Point, q1: Point) -> Hit | None:
    d1 = sub(p1, p0)
    d2 = sub(q1, q0)
    w = sub(q0, p0)
    den = cross(d1, d2)
    if den == 0:
        if cross(w, d1) != 0:
            return None
        # collinear: overlap of parameter intervals on the first segment
        ll = dot(d1, d1)
        a = dot(w, d1) / ll
        b = dot(sub(q1, p0), d1) / ll
        lo, hi = max(Fraction(0), min(a, b)), min(Fraction(1), max(a, b))
        if lo > hi:
            return None
        return Hit(add(p0, (d1[0] * lo, d1[1] * lo)), False, lo, Fraction(0), 0, lo < hi)
    t = cross(w, d2) / den
    u = cross(w, d1) / den
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return None
    point = add(p0, (d1[0] * t, d1[1] * t))
    return Hit(point, 0 < t < 1 and 0 < u < 1, t, u, sign(den))


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    if cross(sub(b, a), sub(p, a)) != 0:
        return False
    return dot(sub(p, a), sub(p, b)) <= 0


def translates(box_a, box_b):
    """Integer vectors v such that box_b + v can meet box_a (boxes as (xmin, xmax, ymin, ymax))."""
    ax0, ax1, ay0, ay1 = box_a
    bx0, bx1, by0, by1 = box_b
    for m in range(math.floor(ax0 - bx1), math.ceil(ax1 - bx0) + 1):
        for n in range(math.floor(ay0 - by1), math.ceil(ay1 - by0) + 1):
            yield (m, n)


def bbox(p: Point, q: Point):
    return (min(p[0], q[0]), max(p[0], q[0]), min(p[1], q[1]), max(p[1], q[1]))


@dataclass(frozen=True)
class Curve:
    """Closed curve on the torus given by a polyline in the plane.

    ``points[-1] - points[0]`` is the integer homology class of the curve.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple(pt(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a curve needs at least two points")
        if not is_integer_vector(sub(pts[-1], pts[0])):
            raise ValueError("curve endpoints must differ by an integer vector")

    @property
    def homology(self) -> tuple:
        d = sub(self.points[-1], self.points[0])
        return (int(d[0]), int(d[1]))

    def segments(self):
        return [(self.points[k], self.points[k + 1]) for k in range(len(self.points) - 1)]

    def simplicity_problems(self) -> list:
        """Reasons the curve fails to be a simple closed loop on the torus (empty if simple)."""
        a, b = self.homology
        if (a, b) == (0, 0):
            return ["curve is null-homologous"]
        if math.gcd(a, b) != 1:
            return ["homology class is not primitive"]
        segs = self.segments()
        k = len(segs)
        if any(s[0] == s[1] for s in segs):
            return ["zero-length segment"]
        T = (a, b)
        problems = []
        for i, (p0, p1) in enumerate(segs):
            for j, (q0, q1) in enumerate(segs):
                for v in translates(bbox(p0, p1), bbox(q0, q1)):
                    hit = segment_hit(p0, p1, add(q0, v), add(q1, v))
                    if hit is None:
                        continue
                    # v must be a multiple of T, then compare positions on the infinite chain
                    c = _multiple_of(v, T)
                    if c is None:
                        problems.append(f"segments {i} and {j} meet across translates {v}")
                        continue
                    gap = (j + c * k) - i
                    if gap == 0:
                        continue
                    if abs(gap) == 1 and not hit.proper and not hit.overlap:
                        continue
                    problems.append(f"segments {i} and {j} intersect")
        return problems


def _multiple_of(v, T):
    if cross(v, T) != 0:
        return None
    if T[0]:
        c = Fraction(v[0], T[0])
    else:
        c = Fraction(v[1], T[1])
    return int(c) if c.denominator == 1 else None


def intersection_sign(t_a: Point, t_b: Point) -> int:
    """Local intersection number of oriented curves a and b crossing with tangents ``t_a``, ``t_b``.

    Normalized so that a rim pointing up and a cut pointing right give +1.
    """
    return sign(cross(t_b, t_a))


def curve_meeting_points(c1: Curve, c2: Curve) -> set:
    """Distinct points of c1 meeting c2 on the torus, or ``None`` if they overlap along a segment."""
    out = set()
    for p0, p1 in c1.segments():
        for q0, q1 in c2.segments():
            for v in translates(bbox(p0, p1), bbox(q0, q1)):
                hit = segment_hit(p0, p1, add(q0, v), add(q1, v))
                if hit is None:
                    continue
                if hit.overlap:
                    return None
                out.add(mod1(hit.point))
    return out
