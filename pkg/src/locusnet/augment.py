"""Shortcut-set existence and constructive builders.

The existence test compares the hull diameter against the continuous
diameter, falling back to an exact segment-containment decision in the
tie band.  The constructions (vertex fans, epsilon covers, polygon and K4
specials) all follow the same pattern: place segments "close enough" to
the relevant vertices, then verify by full recomputation and shrink the
standoff geometrically until verification succeeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .geom import (TAU, Point, SegmentGeom, convex_hull, hull_diameter,
                   orient, point_on_segment, point_segment_dist,
                   seg_intersect)
from .metrics import (apsp, batch_eccentricities, continuous_diameter,
                      locus_distance)
from .network import (DegenerateOverlap, LocusPoint, Network, NetworkError,
                      ShortcutSet, components, find_locus_point,
                      insert_segment, insert_shortcut_set, locus_coords,
                      validate)


class AugmentError(NetworkError):
    pass


class HypothesisViolated(AugmentError):
    pass


class NotNonConvex(AugmentError):
    pass


class NotACycle(AugmentError):
    pass


class NotK4(AugmentError):
    pass


class VerificationExhausted(AugmentError):
    """A shrink loop ran out of retries; not expected for valid inputs."""


@dataclass
class ExistenceVerdict:
    admits: bool
    witness: Optional[Tuple[int, int]]  # diametral vertex pair spanning a contained segment
    hull_diam: float
    locus_diam: float


@dataclass
class FanPlan:
    """Per-vertex fan: clockwise neighbor order and chosen index spans."""

    vertex: int
    neighbors_cw: List[int]
    spans: List[Tuple[int, int]]  # (i, j) neighbor indices, angle < pi
    standoff: float


@dataclass
class EpsilonCoverPlan:
    eps: float
    threshold: float  # M = diam(CH) + eps/4
    net_points: List[LocusPoint]
    far_sets: List[List[LocusPoint]]
    shortcut_set: Optional[ShortcutSet] = None


def _tol(net: Network) -> float:
    return TAU * max(1.0, net.total_length())


def _segment_contained_in_locus(net: Network, a: Point, b: Point) -> bool:
    """Exact test: is the straight segment ab covered by edges of the net?"""
    seg = SegmentGeom(a, b)
    dx, dy = b.x - a.x, b.y - a.y
    denom = dx * dx + dy * dy

    def param(p: Point) -> Fraction:
        return ((p.x - a.x) * dx + (p.y - a.y) * dy) / denom

    intervals = []
    for e in net.edges:
        inter = seg_intersect(seg, net.edge_segment(e))
        if inter.kind == "overlap":
            t0, t1 = param(inter.overlap.a), param(inter.overlap.b)
            intervals.append((min(t0, t1), max(t0, t1)))
    intervals.sort()
    covered = Fraction(0)
    for lo, hi in intervals:
        if lo > covered:
            return False
        covered = max(covered, hi)
    return covered >= 1


def admits_shortcut_set(net: Network) -> ExistenceVerdict:
    """Does the locus admit a shortcut set?  (hull diameter strictly smaller)"""
    rep = continuous_diameter(net)
    hd = hull_diameter(list(net.vertices.values()))
    tol = _tol(net)
    if hd < rep.d - tol:
        return ExistenceVerdict(True, None, hd, rep.d)
    # Tie band: decide by exact containment of diametral-vertex segments.
    oracle = apsp(net)
    ids = oracle.ids
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            u, v = ids[i], ids[j]
            duv = oracle.d(u, v)
            if abs(duv - rep.d) > tol:
                continue
            pu, pv = net.vertices[u], net.vertices[v]
            if abs(pu.dist(pv) - duv) > tol:
                continue
            if _segment_contained_in_locus(net, pu, pv):
                return ExistenceVerdict(False, (u, v), hd, rep.d)
    return ExistenceVerdict(True, None, hd, rep.d)


def _cw_neighbors(net: Network, u: int) -> List[int]:
    up = net.vertices[u]

    def angle(v: int) -> float:
        vp = net.vertices[v]
        return -math.atan2(float(vp.y - up.y), float(vp.x - up.x))

    return sorted(net.neighbors(u), key=angle)


def _fan_spans(net: Network, u: int) -> List[Tuple[int, int]]:
    """Index pairs (i, j): neighbors i..j (clockwise) span an angle < pi."""
    nbrs = _cw_neighbors(net, u)
    r = len(nbrs)
    up = net.vertices[u]
    spans = []
    for i in range(r):
        j = None
        for step in range(1, r):
            k = (i + step) % r
            # strictly right of the oriented line u -> nbrs[i]
            if orient(up, net.vertices[nbrs[i]], net.vertices[nbrs[k]]) == -1:
                j = k
            else:
                break
        if j is not None:
            spans.append((i, j))
    return spans


def _standoff_point(net: Network, u: int, v: int, dist: float) -> Point:
    """Point on edge uv at the given distance from u (rational parameter)."""
    t = Fraction(dist / net.lengths[(min(u, v), max(u, v))]).limit_denominator(1 << 40)
    t = max(Fraction(0), min(Fraction(1), t))
    up, vp = net.vertices[u], net.vertices[v]
    return Point(up.x + t * (vp.x - up.x), up.y + t * (vp.y - up.y))


def _build_fan_segments(net: Network, standoffs: Dict[int, float]
                        ) -> Tuple[List[SegmentGeom], List[FanPlan]]:
    segments = []
    plans = []
    for u in sorted(net.vertices):
        if net.degree(u) < 2:
            continue
        nbrs = _cw_neighbors(net, u)
        spans = _fan_spans(net, u)
        if not spans:
            continue
        delta = standoffs[u]
        plans.append(FanPlan(u, nbrs, spans, delta))
        for k, (i, j) in enumerate(spans):
            # jitter per segment so chords at one vertex never coincide
            d_k = delta * (1.0 - k / (8.0 * max(1, len(spans))))
            a = _standoff_point(net, u, nbrs[i], d_k)
            b = _standoff_point(net, u, nbrs[j], d_k)
            if a != b:
                segments.append(SegmentGeom(a, b))
    return segments, plans


def fan_shortcut_set(net: Network, max_halvings: int = 60) -> ShortcutSet:
    """Shortcut set of size at most 2|E| - n1 via per-vertex fans."""
    verdict = admits_shortcut_set(net)
    if not verdict.admits:
        raise AugmentError("network admits no shortcut set")
    old_d = verdict.locus_diam
    tol = _tol(net)
    standoffs = {}
    for u in net.vertices:
        if net.degree(u) >= 2:
            incident = [net.lengths[e] for e in net.edges if u in e]
            standoffs[u] = min(incident) / 4.0
    for _ in range(max_halvings):
        segments, _plans = _build_fan_segments(net, standoffs)
        ss = ShortcutSet(tuple(segments))
        try:
            new_d = continuous_diameter(insert_shortcut_set(net, ss)).d
        except NetworkError:
            new_d = math.inf
        if new_d < old_d - tol:
            n1 = len(net.pendant_vertices())
            assert len(ss) <= 2 * len(net.edges) - n1
            return ss
        standoffs = {u: d / 2.0 for u, d in standoffs.items()}
    raise VerificationExhausted(
        f"fan construction failed to reduce the diameter below {old_d}")


def verify_shortcut_set(net: Network, ss: ShortcutSet) -> dict:
    """Is S a shortcut set, i.e. does insertion strictly reduce the diameter?

    The augmented network is validated once at the end instead of after
    every insertion; large sets verify in one pass.
    """
    old_d = continuous_diameter(net).d
    aug = insert_shortcut_set(net, ss, validate_each=False)
    problems = validate(aug)
    if problems:
        raise NetworkError(f"insertion produced invalid network: {problems}")
    new_d = continuous_diameter(aug).d
    return {"is_shortcut_set": new_d < old_d - _tol(net),
            "old_d": old_d, "new_d": new_d}


def _edge_samples(net: Network, spacing: float) -> List[LocusPoint]:
    samples = []
    seen = set()
    for e in sorted(net.edges):
        n = max(1, math.ceil(net.lengths[e] / spacing))
        for i in range(n + 1):
            lp = LocusPoint(e, Fraction(i, n))
            coord = locus_coords(net, lp)
            if coord not in seen:
                seen.add(coord)
                samples.append(lp)
    return samples


def epsilon_cover_plan(net: Network, eps: float,
                       max_rounds: int = 12) -> EpsilonCoverPlan:
    """Cover-based shortcut set achieving diam < diam(CH) + eps.

    Explicit eps/8-spaced nets replace the compactness subcovers; pairs whose
    distance has already dropped below the threshold while inserting are
    skipped (the covering argument only needs d(p_i, q) < M at the end).
    Interior points of long inserted chords can themselves become eccentric,
    so the cover pass is repeated on the augmented network (later segments
    may anchor on earlier ones) until the diameter target holds.
    """
    if eps <= 0:
        raise HypothesisViolated("eps must be positive")
    rep = continuous_diameter(net)
    hd = hull_diameter(list(net.vertices.values()))
    tol = _tol(net)
    if hd + eps >= rep.d - tol:
        raise HypothesisViolated(
            f"diam(CH) + eps = {hd + eps} is not below diam = {rep.d}")
    threshold = hd + eps / 4.0

    cur = net
    cur_oracle = apsp(cur)
    inserted: List[SegmentGeom] = []
    first_net_points: List[LocusPoint] = []
    first_far_sets: List[List[LocusPoint]] = []

    last_round_segments: List[SegmentGeom] = []
    for round_no in range(max_rounds):
        samples = _edge_samples(cur, eps / 4.0)
        seeds = samples
        if round_no > 0:
            # Only points on the previous round's segments can be newly
            # eccentric; everything else was already covered.
            seeds = [p for p in samples
                     if any(point_segment_dist(locus_coords(cur, p), s) < 1e-7
                            and point_on_segment(locus_coords(cur, p), s)
                            for s in last_round_segments)]
        eccs = batch_eccentricities(cur, cur_oracle, seeds)
        hot = [(p, ecc) for p, ecc in zip(seeds, eccs)
               if ecc >= threshold - tol]
        hot.sort(key=lambda pe: -pe[1])
        hot = [p for p, _ in hot]

        def thin(points: List[LocusPoint]) -> List[LocusPoint]:
            chosen = []
            for p in points:
                if all(locus_distance(cur, cur_oracle, p, c) > eps / 4.0
                       for c in chosen):
                    chosen.append(p)
            return chosen

        net_points = thin(hot)
        far_sets = [thin([q for q in samples
                          if locus_distance(cur, cur_oracle, p, q)
                          >= threshold - tol])
                    for p in net_points]
        if round_no == 0:
            first_net_points, first_far_sets = net_points, far_sets

        base = cur
        seen_pairs = set()
        pairs = []
        for p, far in zip(net_points, far_sets):
            pc = locus_coords(base, p)
            for q in far:
                qc = locus_coords(base, q)
                pk, qk = (pc.x, pc.y), (qc.x, qc.y)
                key = (min(pk, qk), max(pk, qk))
                if key not in seen_pairs:
                    seen_pairs.add(key)
                    pairs.append((pc, qc))
        # Longest candidates first: their crossings serve the short pairs,
        # which then prune away instead of adding stranded chords.
        pairs.sort(key=lambda pq: -pq[0].dist(pq[1]))
        round_segments: List[SegmentGeom] = []
        # Distances are checked against a recent snapshot; stale distances
        # only overestimate (insertion never increases them), so at worst a
        # redundant segment goes in.
        snap, snap_oracle = cur, cur_oracle
        pending = 0
        for pc, qc in pairs:
            lp = find_locus_point(snap, pc)
            lq = find_locus_point(snap, qc)
            if lp is None or lq is None:
                continue
            if locus_distance(snap, snap_oracle, lp, lq) < threshold:
                continue
            try:
                cur = insert_segment(cur, SegmentGeom(pc, qc),
                                     validate_result=False)
            except (DegenerateOverlap, NetworkError):
                continue
            inserted.append(SegmentGeom(pc, qc))
            round_segments.append(SegmentGeom(pc, qc))
            pending += 1
            if pending >= 8:
                snap, snap_oracle = cur, apsp(cur)
                pending = 0
        cur_oracle = apsp(cur) if pending else snap_oracle
        last_round_segments = round_segments

        new_d = continuous_diameter(cur, cur_oracle).d
        if hd - tol <= new_d < hd + eps:
            return EpsilonCoverPlan(eps, threshold, first_net_points,
                                    first_far_sets, ShortcutSet(tuple(inserted)))
    raise VerificationExhausted(
        f"epsilon cover missed its target after {max_rounds} rounds: "
        f"diam {continuous_diameter(cur).d}, hull diam {hd}, eps {eps}")


def epsilon_shortcut_set(net: Network, eps: float) -> ShortcutSet:
    return epsilon_cover_plan(net, eps).shortcut_set


# --- special families -------------------------------------------------------

def _cycle_order(net: Network) -> List[int]:
    """Vertex ring of a simple cycle; raises NotACycle otherwise."""
    if len(components(net)) != 1 or len(net.edges) != len(net.vertices) or \
            any(net.degree(v) != 2 for v in net.vertices):
        raise NotACycle("network is not a simple cycle")
    start = min(net.vertices)
    ring = [start]
    prev = None
    while True:
        nbrs = net.neighbors(ring[-1])
        nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
        if nxt == start:
            break
        prev = ring[-1]
        ring.append(nxt)
    return ring


def _is_convex_ring(net: Network, ring: List[int]) -> bool:
    signs = set()
    n = len(ring)
    for i in range(n):
        o = orient(net.vertices[ring[i]], net.vertices[ring[(i + 1) % n]],
                   net.vertices[ring[(i + 2) % n]])
        if o != 0:
            signs.add(o)
    return len(signs) <= 1


def polygon_shortcut(net: Network, max_halvings: int = 40) -> SegmentGeom:
    """A single shortcut for a non-convex polygon, anchored at a hull vertex.

    Runs through the pocket of a missing hull edge to a point just short of
    the far hull vertex, shrinking that clearance until verified.
    """
    ring = _cycle_order(net)
    if _is_convex_ring(net, ring):
        raise NotNonConvex("polygon is convex")
    hull = convex_hull(list(net.vertices.values()))
    coord_to_id = {p: vid for vid, p in net.vertices.items()}
    hull_ids = [coord_to_id[p] for p in hull.vertices]
    old_d = continuous_diameter(net).d
    tol = _tol(net)
    n = len(hull_ids)
    for i in range(n):
        hu, hv = hull_ids[i], hull_ids[(i + 1) % n]
        if (min(hu, hv), max(hu, hv)) in net.edges:
            continue  # not a pocket
        for u, v in ((hu, hv), (hv, hu)):
            # pocket edge incident with v, not towards the hull side
            for w in net.neighbors(v):
                eps_len = net.vertices[v].dist(net.vertices[w]) / 4.0
                for _ in range(max_halvings):
                    r = _standoff_point(net, v, w, eps_len)
                    if r == net.vertices[u]:
                        break
                    seg = SegmentGeom(net.vertices[u], r)
                    try:
                        new_d = continuous_diameter(insert_segment(net, seg)).d
                    except NetworkError:
                        break
                    if new_d < old_d - tol:
                        return seg
                    eps_len /= 2.0
    raise VerificationExhausted("no verified pocket shortcut found")


def polygon_scn(net: Network, max_halvings: int = 60) -> dict:
    """Shortcut number of a polygon: 2 if convex, else 1 (with witnesses)."""
    ring = _cycle_order(net)
    old_d = continuous_diameter(net).d
    tol = _tol(net)
    if not _is_convex_ring(net, ring):
        return {"scn": 1, "set": ShortcutSet((polygon_shortcut(net),))}
    # Convex: corner cuts at the two vertices adjacent to a longest edge.
    n = len(ring)
    longest = max(range(n), key=lambda i: net.lengths[
        (min(ring[i], ring[(i + 1) % n]), max(ring[i], ring[(i + 1) % n]))])
    cut_vertices = [ring[longest], ring[(longest + 1) % n]]
    delta = min(net.lengths[e] for v in cut_vertices for e in net.edges if v in e) / 4.0
    for _ in range(max_halvings):
        segments = []
        for v in cut_vertices:
            a_nb, b_nb = net.neighbors(v)
            a = _standoff_point(net, v, a_nb, delta)
            b = _standoff_point(net, v, b_nb, delta)
            segments.append(SegmentGeom(a, b))
        ss = ShortcutSet(tuple(segments))
        try:
            new_d = continuous_diameter(insert_shortcut_set(net, ss)).d
        except NetworkError:
            new_d = math.inf
        if new_d < old_d - tol:
            return {"scn": 2, "set": ss}
        delta /= 2.0
    raise VerificationExhausted("convex two-cut construction failed to verify")


def k4_shortcut(net: Network, max_halvings: int = 60) -> SegmentGeom:
    """A single shortcut for a plane K4, crossing all edges at an outer vertex."""
    if len(net.vertices) != 4 or len(net.edges) != 6:
        raise NotK4("network is not a K4")
    hull = convex_hull(list(net.vertices.values()))
    if len(hull.vertices) != 3:
        raise NotK4("no vertex lies strictly inside the others' triangle")
    coord_to_id = {p: vid for vid, p in net.vertices.items()}
    outer = [coord_to_id[p] for p in hull.vertices]
    old_d = continuous_diameter(net).d
    tol = _tol(net)
    for u in outer:
        others = [v for v in outer if v != u]
        delta = min(net.lengths[e] for e in net.edges if u in e) / 4.0
        for _ in range(max_halvings):
            a = _standoff_point(net, u, others[0], delta)
            b = _standoff_point(net, u, others[1], delta)
            seg = SegmentGeom(a, b)
            try:
                new_d = continuous_diameter(insert_segment(net, seg)).d
            except NetworkError:
                new_d = math.inf
            if new_d < old_d - tol:
                return seg
            delta /= 2.0
    raise VerificationExhausted("K4 fan segment failed to verify")
