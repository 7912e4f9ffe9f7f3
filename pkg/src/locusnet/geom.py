"""Exact low-level geometric primitives.

Incidence predicates (orientation, point-on-segment, segment intersection
classification) are computed over exact rationals so that containment and
planarity decisions are never subject to rounding.  Metric quantities
(lengths, distances) are evaluated in 64-bit floats and compared with the
global tolerance ``TAU``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

#: Global comparison tolerance for metric (floating-point) quantities.
TAU = 1e-9

Scalar = Union[int, float, str, Fraction]


def close(a: float, b: float, tol: float = TAU) -> bool:
    """Tolerance comparison, relative once magnitudes exceed 1."""
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= tol * scale


def as_fraction(value: Scalar) -> Fraction:
    """Coerce a coordinate to an exact rational.

    Strings may be plain decimals ("1.25") or explicit rationals ("1/3");
    floats are converted via their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/")
            return Fraction(int(num), int(den))
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class Point:
    """A point of the plane with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not isinstance(self.x, Fraction) or not isinstance(self.y, Fraction):
            object.__setattr__(self, "x", as_fraction(self.x))
            object.__setattr__(self, "y", as_fraction(self.y))

    @staticmethod
    def of(x: Scalar, y: Scalar) -> "Point":
        return Point(as_fraction(x), as_fraction(y))

    def to_floats(self) -> Tuple[float, float]:
        return float(self.x), float(self.y)

    def dist(self, other: "Point") -> float:
        return math.hypot(float(self.x - other.x), float(self.y - other.y))


def pt(x: Scalar, y: Scalar) -> Point:
    return Point.of(x, y)


@dataclass(frozen=True)
class SegmentGeom:
    """A straight segment with distinct rational endpoints."""

    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("zero-length segment")

    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, t: Fraction) -> Point:
        return Point(self.a.x + t * (self.b.x - self.a.x),
                     self.a.y + t * (self.b.y - self.a.y))


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the signed area of triangle (p, q, r), computed exactly."""
    area2 = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if area2 > 0:
        return 1
    if area2 < 0:
        return -1
    return 0


def point_on_segment(p: Point, s: SegmentGeom) -> bool:
    """Exact inclusive incidence test."""
    if orient(s.a, s.b, p) != 0:
        return False
    lox, hix = min(s.a.x, s.b.x), max(s.a.x, s.b.x)
    loy, hiy = min(s.a.y, s.b.y), max(s.a.y, s.b.y)
    return lox <= p.x <= hix and loy <= p.y <= hiy


@dataclass(frozen=True)
class Intersection:
    """Classified intersection of two segments.

    kind is one of "empty", "point", "overlap"; exactly one of the payload
    fields is populated for the non-empty kinds.
    """

    kind: str
    point: Optional[Point] = None
    overlap: Optional[SegmentGeom] = None


EMPTY = Intersection("empty")


def _param_on_line(origin: Point, direction: Point, p: Point) -> Fraction:
    """Parameter of p along origin + t*direction (direction nonzero, p on line)."""
    if direction.x != 0:
        return (p.x - origin.x) / direction.x
    return (p.y - origin.y) / direction.y


def seg_intersect(s1: SegmentGeom, s2: SegmentGeom) -> Intersection:
    """Exact segment intersection with overlap classification."""
    p, r = s1.a, Point(s1.b.x - s1.a.x, s1.b.y - s1.a.y)
    q, s = s2.a, Point(s2.b.x - s2.a.x, s2.b.y - s2.a.y)
    rxs = r.x * s.y - r.y * s.x
    qpxr = (q.x - p.x) * r.y - (q.y - p.y) * r.x

    if rxs == 0 and qpxr == 0:
        # Collinear: compare parameter intervals along s1.
        t0 = _param_on_line(p, r, s2.a)
        t1 = _param_on_line(p, r, s2.b)
        lo, hi = min(t0, t1), max(t0, t1)
        lo = max(lo, Fraction(0))
        hi = min(hi, Fraction(1))
        if lo > hi:
            return EMPTY
        if lo == hi:
            return Intersection("point", point=s1.point_at(lo))
        return Intersection("overlap",
                            overlap=SegmentGeom(s1.point_at(lo), s1.point_at(hi)))
    if rxs == 0:
        return EMPTY  # parallel, non-collinear
    t = ((q.x - p.x) * s.y - (q.y - p.y) * s.x) / rxs
    u = qpxr / rxs
    if 0 <= t <= 1 and 0 <= u <= 1:
        return Intersection("point", point=s1.point_at(t))
    return EMPTY


@dataclass(frozen=True)
class HullPolygon:
    """Convex hull vertices in counter-clockwise order.

    Degenerate inputs yield a 1- or 2-point "hull".
    """

    vertices: Tuple[Point, ...]

    def edges(self) -> Sequence[SegmentGeom]:
        n = len(self.vertices)
        if n < 2:
            return []
        if n == 2:
            return [SegmentGeom(self.vertices[0], self.vertices[1])]
        return [SegmentGeom(self.vertices[i], self.vertices[(i + 1) % n])
                for i in range(n)]

    def contains(self, p: Point) -> bool:
        """Inclusive containment, exact."""
        n = len(self.vertices)
        if n == 1:
            return p == self.vertices[0]
        if n == 2:
            return point_on_segment(p, SegmentGeom(self.vertices[0], self.vertices[1]))
        return all(orient(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0
                   for i in range(n))


def convex_hull(points: Iterable[Point]) -> HullPolygon:
    """Monotone-chain hull; strictly convex (collinear boundary points dropped)."""
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if not pts:
        raise ValueError("convex_hull of empty point set")
    if len(pts) == 1:
        return HullPolygon((pts[0],))

    def build(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and orient(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        # All collinear: keep the extreme pair.
        return HullPolygon((pts[0], pts[-1]))
    return HullPolygon(tuple(hull))


def hull_diameter(points: Sequence[Point]) -> float:
    """Max pairwise Euclidean distance (equals the hull diameter)."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("hull_diameter needs at least 2 points")
    hull = convex_hull(pts).vertices
    best = 0.0
    for i in range(len(hull)):
        for j in range(i + 1, len(hull)):
            best = max(best, hull[i].dist(hull[j]))
    return best


def point_segment_dist(p: Point, s: SegmentGeom) -> float:
    """Euclidean distance from p to segment s (float)."""
    px, py = p.to_floats()
    ax, ay = s.a.to_floats()
    bx, by = s.b.to_floats()
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    t = 0.0 if denom == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / denom))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def segment_segment_dist(s1: SegmentGeom, s2: SegmentGeom) -> float:
    """Euclidean distance between two segments (float, 0 if they intersect)."""
    if seg_intersect(s1, s2).kind != "empty":
        return 0.0
    return min(point_segment_dist(s1.a, s2), point_segment_dist(s1.b, s2),
               point_segment_dist(s2.a, s1), point_segment_dist(s2.b, s1))
