"""Plane Euclidean network model: validation, locus addressing, insertion.

A network is an immutable value; inserting a segment returns a new network
in which every crossing with an existing edge has become a vertex and the
crossed edges (and the segment itself) are subdivided accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .geom import (TAU, Point, SegmentGeom, as_fraction, point_on_segment,
                   point_segment_dist, seg_intersect)

EdgeId = Tuple[int, int]  # canonical: (min_id, max_id)


class NetworkError(Exception):
    """Base error for network operations."""


class DegenerateOverlap(NetworkError):
    """Inserted segment overlaps an existing edge over positive length."""


class OffLocusEndpoint(NetworkError):
    """Segment endpoint does not lie on the locus (within tolerance)."""


class UnknownEdge(NetworkError):
    pass


def edge_id(u: int, v: int) -> EdgeId:
    return (u, v) if u < v else (v, u)


class Network:
    """Plane Euclidean network: vertices with exact coordinates plus edges.

    Edge lengths are cached as floats; all incidence reasoning is exact.
    """

    def __init__(self, vertices: Dict[int, Point], edges: FrozenSet[EdgeId]):
        self.vertices: Dict[int, Point] = dict(vertices)
        self.edges: FrozenSet[EdgeId] = frozenset(edge_id(*e) for e in edges)
        self.lengths: Dict[EdgeId, float] = {
            e: self.vertices[e[0]].dist(self.vertices[e[1]]) for e in self.edges
        }
        # Cached float geometry for cheap prefilters (exact tests still decide).
        self.float_coords: Dict[int, Tuple[float, float]] = {
            vid: p.to_floats() for vid, p in self.vertices.items()
        }
        self.sorted_edges: List[EdgeId] = sorted(self.edges)
        if self.sorted_edges:
            a = np.array([self.float_coords[e[0]] for e in self.sorted_edges])
            b = np.array([self.float_coords[e[1]] for e in self.sorted_edges])
            self._ea, self._eb = a, b
            self._bbox = np.stack([np.minimum(a, b) - 1e-7,
                                   np.maximum(a, b) + 1e-7])
        else:
            self._ea = self._eb = np.zeros((0, 2))
            self._bbox = np.zeros((2, 0, 2))

    @staticmethod
    def from_coords(coords: Sequence[Tuple], edges: Sequence[Tuple[int, int]]) -> "Network":
        """Build from a list of (x, y) pairs (vertex ids are list indices)."""
        verts = {i: Point.of(x, y) for i, (x, y) in enumerate(coords)}
        return Network(verts, frozenset(edge_id(u, v) for u, v in edges))

    def edge_segment(self, e: EdgeId) -> SegmentGeom:
        return SegmentGeom(self.vertices[e[0]], self.vertices[e[1]])

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> List[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def pendant_vertices(self) -> List[int]:
        return [v for v in self.vertices if self.degree(v) == 1]

    def total_length(self) -> float:
        return sum(self.lengths.values())

    def vertex_at(self, p: Point) -> Optional[int]:
        for vid, vp in self.vertices.items():
            if vp == p:
                return vid
        return None

    def __repr__(self):
        return f"Network(|V|={len(self.vertices)}, |E|={len(self.edges)})"


@dataclass(frozen=True)
class LocusPoint:
    """A point of the locus, addressed as (edge, parameter t in [0, 1]).

    The parameter runs from the smaller to the larger vertex id of the edge.
    """

    edge: EdgeId
    t: Fraction

    def __post_init__(self):
        if not isinstance(self.t, Fraction):
            object.__setattr__(self, "t", as_fraction(self.t))
        if not (0 <= self.t <= 1):
            raise NetworkError(f"locus parameter {self.t} outside [0, 1]")


def locus_coords(net: Network, p: LocusPoint) -> Point:
    if p.edge not in net.edges:
        raise UnknownEdge(str(p.edge))
    a = net.vertices[p.edge[0]]
    b = net.vertices[p.edge[1]]
    return Point(a.x + p.t * (b.x - a.x), a.y + p.t * (b.y - a.y))


def canonical_locus_point(net: Network, p: LocusPoint) -> LocusPoint:
    """Canonical form: vertex coincidences use the smallest incident edge id."""
    if p.t not in (Fraction(0), Fraction(1)):
        return p
    vid = p.edge[0] if p.t == 0 else p.edge[1]
    best = min(e for e in net.edges if vid in e)
    t = Fraction(0) if best[0] == vid else Fraction(1)
    return LocusPoint(best, t)


def vertex_locus_point(net: Network, vid: int) -> LocusPoint:
    e = min(e for e in net.edges if vid in e)
    return LocusPoint(e, Fraction(0) if e[0] == vid else Fraction(1))


def _candidate_edges(net: Network, p: Point) -> List[EdgeId]:
    """Edges whose float bbox and support line are near p (prefilter only)."""
    if not net.sorted_edges:
        return []
    px, py = p.to_floats()
    lo, hi = net._bbox
    mask = (px >= lo[:, 0]) & (px <= hi[:, 0]) & \
           (py >= lo[:, 1]) & (py <= hi[:, 1])
    if not mask.any():
        return []
    idxs = np.where(mask)[0]
    a, b = net._ea[idxs], net._eb[idxs]
    cross = np.abs((b[:, 0] - a[:, 0]) * (py - a[:, 1]) -
                   (b[:, 1] - a[:, 1]) * (px - a[:, 0]))
    scale = np.abs(b - a).sum(axis=1) + 1.0
    idxs = idxs[cross <= 1e-6 * scale]
    return [net.sorted_edges[i] for i in idxs]


def find_locus_point(net: Network, p: Point) -> Optional[LocusPoint]:
    """Exact search for a coordinate on the locus; None if off it."""
    for e in _candidate_edges(net, p):
        seg = net.edge_segment(e)
        if point_on_segment(p, seg):
            d = Point(seg.b.x - seg.a.x, seg.b.y - seg.a.y)
            t = (p.x - seg.a.x) / d.x if d.x != 0 else (p.y - seg.a.y) / d.y
            return canonical_locus_point(net, LocusPoint(e, t))
    return None


def _edge_projections(net: Network, q: Point):
    """Float distances and clamped parameters of q against every edge."""
    qx, qy = q.to_floats()
    a, b = net._ea, net._eb
    d = b - a
    denom = (d * d).sum(axis=1)
    t = ((qx - a[:, 0]) * d[:, 0] + (qy - a[:, 1]) * d[:, 1]) / np.where(
        denom == 0, 1.0, denom)
    t = np.clip(t, 0.0, 1.0)
    foot = a + t[:, None] * d
    dist = np.hypot(qx - foot[:, 0], qy - foot[:, 1])
    return dist, t


def project_to_locus(net: Network, q: Point, snap_radius: float) -> Optional[LocusPoint]:
    """Nearest locus point within snap_radius; ties broken by edge id then t."""
    if not net.sorted_edges:
        return None
    dist, t = _edge_projections(net, q)
    dmin = float(dist.min())
    if dmin > snap_radius:
        return None
    # ties within TAU resolve to the smallest edge id (then its parameter)
    i = int(np.where(dist <= dmin + TAU)[0][0])
    lp = LocusPoint(net.sorted_edges[i],
                    Fraction(float(t[i])).limit_denominator(1 << 40))
    return canonical_locus_point(net, lp)


def components(net: Network) -> List[set]:
    """Connected components as vertex-id sets (isolated vertices included)."""
    adj: Dict[int, List[int]] = {v: [] for v in net.vertices}
    for a, b in net.edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set = set()
    comps = []
    for v in net.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            cur = stack.pop()
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    stack.append(nb)
        comps.append(comp)
    return comps


def validate(net: Network) -> List[str]:
    """Structural violations; connectivity is reported elsewhere, not here."""
    violations = []
    seen_coords: Dict[Point, int] = {}
    for vid, p in net.vertices.items():
        if p in seen_coords:
            violations.append(f"duplicate coordinates: vertices {seen_coords[p]} and {vid}")
        else:
            seen_coords[p] = vid
    for e in net.edges:
        if e[0] not in net.vertices or e[1] not in net.vertices:
            violations.append(f"edge {e} references unknown vertex")
            continue
        if net.vertices[e[0]] == net.vertices[e[1]]:
            violations.append(f"zero-length edge {e}")
    edges = sorted(net.edges)
    boxes = []
    for e in edges:
        ax, ay = net.float_coords[e[0]]
        bx, by = net.float_coords[e[1]]
        boxes.append((min(ax, bx) - 1e-7, max(ax, bx) + 1e-7,
                      min(ay, by) - 1e-7, max(ay, by) + 1e-7))
    coords = [(net.float_coords[e[0]], net.float_coords[e[1]]) for e in edges]
    for i in range(len(edges)):
        (ax, ay), (bx, by) = coords[i]
        dx, dy = bx - ax, by - ay
        margin = 1e-9 * (abs(dx) + abs(dy) + 1.0)
        for j in range(i + 1, len(edges)):
            bi, bj = boxes[i], boxes[j]
            if bi[1] < bj[0] or bj[1] < bi[0] or bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            (cx, cy), (ex, ey) = coords[j]
            o1 = dx * (cy - ay) - dy * (cx - ax)
            o2 = dx * (ey - ay) - dy * (ex - ax)
            m = margin * (abs(cx) + abs(cy) + abs(ex) + abs(ey) + 1.0)
            if (o1 > m and o2 > m) or (o1 < -m and o2 < -m):
                continue
            e, f = edges[i], edges[j]
            shared = set(e) & set(f)
            inter = seg_intersect(net.edge_segment(e), net.edge_segment(f))
            if inter.kind == "overlap":
                violations.append(f"edges {e} and {f} overlap collinearly")
            elif inter.kind == "point":
                if not (shared and inter.point == net.vertices[next(iter(shared))]):
                    x, y = inter.point.to_floats()
                    violations.append(f"edges {e} and {f} cross at ({x}, {y})")
    return violations


@dataclass(frozen=True)
class Anchor:
    """Host record for a shortcut-segment endpoint.

    host is ("edge", edge_id) for the base locus or ("segment", index) for an
    earlier segment of the same set.
    """

    host: Tuple
    t: Fraction


@dataclass(frozen=True)
class ShortcutSet:
    """Ordered segments s1..sk with the chained endpoint constraint."""

    segments: Tuple[SegmentGeom, ...]
    anchors: Tuple[Tuple[Optional[Anchor], Optional[Anchor]], ...] = field(default=())

    def __len__(self):
        return len(self.segments)


def _snap_endpoint(net: Network, p: Point) -> Point:
    """Snap p exactly onto the locus if within TAU; raise otherwise."""
    if find_locus_point(net, p) is not None:
        return p
    if not net.sorted_edges:
        raise OffLocusEndpoint(f"endpoint {p.to_floats()} not on locus")
    dist, _t = _edge_projections(net, p)
    i = int(np.argmin(dist))
    if float(dist[i]) > TAU:
        raise OffLocusEndpoint(f"endpoint {p.to_floats()} not on locus")
    seg = net.edge_segment(net.sorted_edges[i])
    dx, dy = seg.b.x - seg.a.x, seg.b.y - seg.a.y
    denom = dx * dx + dy * dy
    t = ((p.x - seg.a.x) * dx + (p.y - seg.a.y) * dy) / denom
    t = max(Fraction(0), min(Fraction(1), t))
    return seg.point_at(t)


def insert_segment(net: Network, s: SegmentGeom,
                   validate_result: bool = True) -> Network:
    """Insert one segment, subdividing at every crossing (Problem-1 semantics)."""
    a = _snap_endpoint(net, s.a)
    b = _snap_endpoint(net, s.b)
    if a == b:
        raise NetworkError("segment endpoints coincide after snapping")
    s = SegmentGeom(a, b)

    sax, say = a.to_floats()
    sbx, sby = b.to_floats()
    sxlo, sxhi = min(sax, sbx) - 1e-7, max(sax, sbx) + 1e-7
    sylo, syhi = min(say, sby) - 1e-7, max(say, sby) + 1e-7

    # Classify against every edge first so overlaps are rejected up front.
    events: Dict[Point, Optional[EdgeId]] = {}  # point on s -> crossed edge (or None)
    sdx, sdy = sbx - sax, sby - say
    margin = 1e-9 * (abs(sdx) + abs(sdy) + 1.0)
    for e in net.sorted_edges:
        ax, ay = net.float_coords[e[0]]
        bx, by = net.float_coords[e[1]]
        if max(ax, bx) < sxlo or min(ax, bx) > sxhi or \
                max(ay, by) < sylo or min(ay, by) > syhi:
            continue
        # float orientation prefilter: skip edges strictly on one side of s
        o1 = sdx * (ay - say) - sdy * (ax - sax)
        o2 = sdx * (by - say) - sdy * (bx - sax)
        m = margin * (abs(ax) + abs(ay) + abs(bx) + abs(by) + 1.0)
        if (o1 > m and o2 > m) or (o1 < -m and o2 < -m):
            continue
        inter = seg_intersect(s, net.edge_segment(e))
        if inter.kind == "overlap":
            raise DegenerateOverlap(f"segment overlaps edge {e}")
        if inter.kind == "point":
            p = inter.point
            va, vb = net.vertices[e[0]], net.vertices[e[1]]
            if p == va or p == vb:
                events.setdefault(p, None)  # meets at an existing vertex
            else:
                events[p] = e  # true edge-interior incidence: subdivide e at p
    events.setdefault(a, events.get(a))
    events.setdefault(b, events.get(b))

    vertices = dict(net.vertices)
    coord_to_id = {p: vid for vid, p in vertices.items()}
    next_id = max(vertices) + 1 if vertices else 0

    def vid_for(p: Point) -> int:
        nonlocal next_id
        if p in coord_to_id:
            return coord_to_id[p]
        vid = next_id
        next_id += 1
        vertices[vid] = p
        coord_to_id[p] = vid
        return vid

    # Subdivide crossed edges.
    splits: Dict[EdgeId, List[Point]] = {}
    for p, host in events.items():
        if host is not None:
            splits.setdefault(host, []).append(p)

    edges = set(net.edges) - set(splits)
    for e, pts in splits.items():
        va, vb = net.vertices[e[0]], net.vertices[e[1]]
        chain = [va] + sorted(pts, key=lambda p: ((p.x - va.x) ** 2 + (p.y - va.y) ** 2)) + [vb]
        for p0, p1 in zip(chain, chain[1:]):
            edges.add(edge_id(vid_for(p0), vid_for(p1)))

    # Subdivide the segment itself at every event point.
    dx, dy = b.x - a.x, b.y - a.y
    denom = dx * dx + dy * dy

    def s_param(p: Point) -> Fraction:
        return ((p.x - a.x) * dx + (p.y - a.y) * dy) / denom

    chain = sorted(set(events) | {a, b}, key=s_param)
    for p0, p1 in zip(chain, chain[1:]):
        edges.add(edge_id(vid_for(p0), vid_for(p1)))

    result = Network(vertices, frozenset(edges))
    if validate_result:
        problems = validate(result)
        if problems:
            raise NetworkError(f"insertion produced invalid network: {problems}")
    return result


def check_chaining(net: Network, ss: ShortcutSet) -> None:
    """Raise unless every endpoint lies on the progressively augmented locus."""
    cur = net
    for i, seg in enumerate(ss.segments):
        for p in (seg.a, seg.b):
            if find_locus_point(cur, p) is None and point_segment_dist_to_any(cur, p) > TAU:
                raise OffLocusEndpoint(
                    f"segment {i} endpoint {p.to_floats()} violates chaining")
        cur = insert_segment(cur, seg)


def point_segment_dist_to_any(net: Network, p: Point) -> float:
    return min((point_segment_dist(p, net.edge_segment(e)) for e in net.edges),
               default=math.inf)


def insert_shortcut_set(net: Network, ss: ShortcutSet,
                        validate_each: bool = True) -> Network:
    """Fold of insert_segment in order s1..sk.

    With validate_each=False the intermediate validation passes are skipped;
    callers inserting many segments can validate the final result once.
    """
    cur = net
    for seg in ss.segments:
        cur = insert_segment(cur, seg, validate_result=validate_each)
    return cur
