"""Single-shortcut search and the disconnected-network scn=1 decision.

The search over candidate segments runs a certified branch-and-prune on the
(t, t') parameter boxes of every edge pair.  Pruning rests on one fact: a
shortest path in the augmented network can be assumed to run along the new
segment in a single contiguous arc between its first and last contact with
the old network, so the new distance of a point pair is exactly

    min(d_old(p,q), min over contacts (a, b) of  d(p,a) + |ab| + d(b,q)).

Lower-bounding the contact terms over a whole box gives a sound prune; at
leaf cells the formula is evaluated exactly for the center candidate before
paying for a full insertion + diameter recomputation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .geom import SegmentGeom, TAU, convex_hull, HullPolygon, orient, Point
from .metrics import (DisconnectedNetwork, DistanceOracle, apsp,
                      continuous_diameter, locus_distance, _locus_at)
from .network import (DegenerateOverlap, EdgeId, LocusPoint, Network,
                      NetworkError, components, insert_segment, locus_coords,
                      vertex_locus_point)

INF = math.inf


@dataclass(frozen=True)
class ParamPoint:
    """Candidate segment coordinates: p on edge e at t, p' on e' at t'."""

    e: EdgeId
    e2: EdgeId
    t: float
    t2: float


@dataclass
class SearchCell:
    e: EdgeId
    e2: EdgeId
    box: Tuple[float, float, float, float]  # t0, t1, t'0, t'1 (arclength)
    status: str = "Open"  # Open | PrunedInfeasible | Feasible
    bounds: List["PruneBound"] = field(default_factory=list)


@dataclass
class PruneBound:
    """Certified lower bound on the new distance of one diametral pair,
    valid for every candidate segment of a cell."""

    p: LocusPoint
    q: LocusPoint
    value: float


@dataclass
class SearchResult:
    status: str  # FOUND | NONE
    segment: Optional[SegmentGeom] = None
    new_d: Optional[float] = None
    certified_gap: Optional[float] = None
    cells_processed: int = 0


class _PairData:
    """Per diametral pair: distances from p to every vertex, plus host info."""

    def __init__(self, net: Network, oracle: DistanceOracle, lp: LocusPoint,
                 d_old: float):
        self.lp = lp
        self.d_old = d_old
        u, v = lp.edge
        L = net.lengths[lp.edge]
        self.edge = lp.edge
        self.xp = float(lp.t) * L
        iu, iv = oracle.index[u], oracle.index[v]
        self.dw = np.minimum(self.xp + oracle.dist[iu],
                             (L - self.xp) + oracle.dist[iv])

    def dist_to_point(self, oracle, f: EdgeId, Lf: float, y: float) -> float:
        """Exact network distance from the pair point to edge f at arclen y."""
        i0, i1 = oracle.index[f[0]], oracle.index[f[1]]
        d = min(self.dw[i0] + y, self.dw[i1] + (Lf - y))
        if f == self.edge:
            d = min(d, abs(self.xp - y))
        return float(d)

    def arc_anchors(self, net: Network, oracle, f: EdgeId,
                    y1: float, y2: float):
        """Linear branches of the distance to arc [y1,y2] of edge f.

        Each anchor (X, c) certifies d(pair point, alpha) >= c + |X - alpha|
        for every alpha on the arc, and is tight at X.
        """
        Lf = net.lengths[f]
        i0, i1 = oracle.index[f[0]], oracle.index[f[1]]
        a = _float_pt(net, f, y1)
        b = _float_pt(net, f, y2)
        out = [(a, float(self.dw[i0]) + y1),
               (b, float(self.dw[i1]) + (Lf - y2))]
        if f == self.edge:
            yc = min(max(self.xp, y1), y2)
            out.append((_float_pt(net, f, yc), abs(self.xp - yc)))
        return out


def _float_pt(net: Network, e: EdgeId, arclen: float) -> Tuple[float, float]:
    ax, ay = net.float_coords[e[0]]
    bx, by = net.float_coords[e[1]]
    t = arclen / net.lengths[e]
    return ax + t * (bx - ax), ay + t * (by - ay)


def _float_hull(pts: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """CCW convex hull of a few float points (monotone chain)."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and \
                    ((out[-1][0] - out[-2][0]) * (p[1] - out[-2][1]) -
                     (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])) <= 0:
                out.pop()
            out.append(p)
        return out

    lo = half(pts)
    hi = half(reversed(pts))
    return lo[:-1] + hi[:-1]


def _cell_contacts(net: Network, cell: SearchCell) -> List[Tuple[EdgeId, float, float]]:
    """Possible contact arcs (edge, y1, y2) for candidates in the cell.

    Host edges contribute exactly their parameter arcs (a straight candidate
    cannot re-cross its own host's line); other edges are clipped against the
    convex hull of the candidate region, expanded by a small margin so the
    float computation stays conservative.
    """
    t0, t1, s0, s1 = cell.box
    out = [(cell.e, t0, t1), (cell.e2, s0, s1)]
    corners = [_float_pt(net, cell.e, t0), _float_pt(net, cell.e, t1),
               _float_pt(net, cell.e2, s0), _float_pt(net, cell.e2, s1)]
    m = 1e-9 * (1.0 + max(abs(v) for c in corners for v in c))
    hull = _float_hull(corners)
    xs = [c[0] for c in hull]
    ys = [c[1] for c in hull]
    xlo, xhi = min(xs) - m, max(xs) + m
    ylo, yhi = min(ys) - m, max(ys) + m
    # half-plane constraints of the hull region (outward-shifted by margin)
    planes = []
    if len(hull) >= 3:
        for i in range(len(hull)):
            hx, hy = hull[i]
            gx, gy = hull[(i + 1) % len(hull)]
            nx, ny = hy - gy, gx - hx  # inward normal for CCW
            nn = math.hypot(nx, ny)
            if nn == 0:
                continue
            planes.append((nx, ny, nx * hx + ny * hy - m * nn))
    for f in net.sorted_edges:
        if f == cell.e or f == cell.e2:
            continue
        ax, ay = net.float_coords[f[0]]
        bx, by = net.float_coords[f[1]]
        if max(ax, bx) < xlo or min(ax, bx) > xhi or \
                max(ay, by) < ylo or min(ay, by) > yhi:
            continue
        dx, dy = bx - ax, by - ay
        u0, u1 = 0.0, 1.0
        ok = True
        constraints = [(-dx, ax - xlo), (dx, xhi - ax),
                       (-dy, ay - ylo), (dy, yhi - ay)]
        for nx, ny, rhs in planes:
            # need nx*(ax+u*dx) + ny*(ay+u*dy) >= rhs
            constraints.append((-(nx * dx + ny * dy),
                                nx * ax + ny * ay - rhs))
        for p_, q_ in constraints:
            if p_ == 0:
                if q_ < 0:
                    ok = False
                    break
            else:
                r = q_ / p_
                if p_ < 0:
                    u0 = max(u0, r)
                else:
                    u1 = min(u1, r)
        if not ok or u0 > u1:
            continue
        Lf = net.lengths[f]
        out.append((f, max(0.0, u0 * Lf - m), min(Lf, u1 * Lf + m)))
    return out


def _cell_lower_bounds(net: Network, oracle: DistanceOracle,
                       pairs: List[Tuple[_PairData, _PairData]],
                       cell: SearchCell, simple: bool) -> List[PruneBound]:
    if simple:
        t0, t1, s0, s1 = cell.box
        contacts = [(cell.e, t0, t1), (cell.e2, s0, s1)]
    else:
        contacts = _cell_contacts(net, cell)
    bounds = []
    for pd, qd in pairs:
        pa, qa = [], []
        for f, y1, y2 in contacts:
            pa.extend(pd.arc_anchors(net, oracle, f, y1, y2))
            qa.extend(qd.arc_anchors(net, oracle, f, y1, y2))
        P = np.array([x for x, _ in pa])
        cp = np.array([c for _, c in pa])
        Q = np.array([x for x, _ in qa])
        cq = np.array([c for _, c in qa])
        dxy = P[:, None, :] - Q[None, :, :]
        dist = np.sqrt((dxy * dxy).sum(axis=2))
        via = float((cp[:, None] + dist + cq[None, :]).min()) - 1e-9
        bounds.append(PruneBound(pd.lp, qd.lp, min(pd.d_old, via)))
    return bounds


def _candidate_contacts(net: Network, e: EdgeId, e2: EdgeId,
                        x: float, y: float) -> List[Tuple[EdgeId, float, float]]:
    """Contacts (edge, arclen-on-edge, arclen-along-s) of the candidate.

    Float detection with generous margins: extra contacts only make the pair
    bound smaller (more exact evaluations, never a wrong skip).
    """
    wx, wy = _float_pt(net, e, x)
    zx, zy = _float_pt(net, e2, y)
    slen = math.hypot(zx - wx, zy - wy)
    out = [(e, x, 0.0), (e2, y, slen)]
    if slen == 0:
        return out
    dx, dy = zx - wx, zy - wy
    m = 1e-9 * (abs(dx) + abs(dy) + 1.0)
    for f in net.sorted_edges:
        if f == e or f == e2:
            continue
        ax, ay = net.float_coords[f[0]]
        bx, by = net.float_coords[f[1]]
        o1 = dx * (ay - wy) - dy * (ax - wx)
        o2 = dx * (by - wy) - dy * (bx - wx)
        mm = m * (abs(ax) + abs(ay) + abs(bx) + abs(by) + 1.0)
        if (o1 > mm and o2 > mm) or (o1 < -mm and o2 < -mm):
            continue
        fdx, fdy = bx - ax, by - ay
        den = fdx * dy - fdy * dx
        if den == 0:
            continue
        u = ((wx - ax) * dy - (wy - ay) * dx) / den   # along f
        v = ((wx - ax) * fdy - (wy - ay) * fdx) / den  # along s? (solve)
        if -1e-9 <= u <= 1 + 1e-9:
            Lf = net.lengths[f]
            cxp = ax + u * fdx
            cyp = ay + u * fdy
            spos = ((cxp - wx) * dx + (cyp - wy) * dy) / slen
            if -1e-9 <= spos <= slen + 1e-9:
                out.append((f, min(max(u, 0.0), 1.0) * Lf,
                            min(max(spos, 0.0), slen)))
    return out


def _candidate_pair_value(net: Network, oracle: DistanceOracle,
                          pd: _PairData, qd: _PairData,
                          contacts) -> float:
    """Exact new distance of the pair after inserting the candidate."""
    dp = [pd.dist_to_point(oracle, f, net.lengths[f], yc) for f, yc, _ in contacts]
    dq = [qd.dist_to_point(oracle, f, net.lengths[f], yc) for f, yc, _ in contacts]
    best = pd.d_old if pd.d_old == qd.d_old else locus_distance(net, oracle, pd.lp, qd.lp)
    for i, (_, _, si) in enumerate(contacts):
        for j, (_, _, sj) in enumerate(contacts):
            best = min(best, dp[i] + abs(si - sj) + dq[j])
    return best


def _candidate_ecc(net: Network, oracle: DistanceOracle,
                   contacts, mid: float) -> float:
    """Eccentricity over the original locus of the candidate's midpoint.

    Every path from a point of the inserted segment enters the network at
    one of the segment's contacts, so with the exact contact list this is
    the true restricted eccentricity; a superset of contacts only lowers
    the value.  Either way it is a sound lower bound on the diameter of
    the augmented network.
    """
    D = oracle.dist
    idx = oracle.index
    dv = np.full(D.shape[0], np.inf)
    per_edge: Dict[EdgeId, List[Tuple[float, float]]] = {}
    for f, xf, sf in contacts:
        c = abs(mid - sf)
        Lf = net.lengths[f]
        dv = np.minimum(dv, c + np.minimum(xf + D[idx[f[0]]],
                                           (Lf - xf) + D[idx[f[1]]]))
        per_edge.setdefault(f, []).append((xf, c))
    best = 0.0
    for g in net.sorted_edges:
        Lg = net.lengths[g]
        pts = [(0.0, float(dv[idx[g[0]]])), (Lg, float(dv[idx[g[1]]]))]
        pts.extend(per_edge.get(g, ()))
        pts.sort()
        # envelope of slope +-1 tents anchored at the entry points of g
        vals = [min(c2 + abs(p1 - p2) for p2, c2 in pts) for p1, _ in pts]
        local = max(vals[0], vals[-1])
        for a in range(len(pts) - 1):
            local = max(local, (vals[a] + vals[a + 1]
                                + (pts[a + 1][0] - pts[a][0])) / 2.0)
        best = max(best, local)
    return best


def _tracked_pairs(net: Network, oracle: DistanceOracle, rep,
                   cap: int = 12) -> List[Tuple[_PairData, _PairData]]:
    out = []
    for pair in rep.pairs[:cap]:
        d_old = locus_distance(net, oracle, pair.p, pair.q)
        out.append((_PairData(net, oracle, pair.p, d_old),
                    _PairData(net, oracle, pair.q, d_old)))
    out.extend(_vertex_eccentric_pairs(net, oracle))
    return out


def _vertex_eccentric_pairs(net: Network, oracle: DistanceOracle
                            ) -> List[Tuple[_PairData, _PairData]]:
    """One (vertex, farthest locus point) pair per vertex.

    A shortcut near a vertex leaves the vertex itself (and hence this pair's
    distance) essentially unimproved, so these pairs are what prunes
    corner-cut candidate regions on cycles.
    """
    out = []
    for v in sorted(net.vertices):
        row = oracle.dist[oracle.index[v]]
        best_val, best_at = -1.0, None
        for g in net.sorted_edges:
            Lg = net.lengths[g]
            A = float(row[oracle.index[g[0]]])
            B = float(row[oracle.index[g[1]]])
            y = min(max((B - A + Lg) / 2.0, 0.0), Lg)
            val = min(A + y, B + (Lg - y))
            if val > best_val:
                best_val, best_at = val, (g, y)
        if best_at is None:
            continue
        g, y = best_at
        lp = vertex_locus_point(net, v)
        lq = _locus_at(net, g, y)
        d_old = locus_distance(net, oracle, lp, lq)
        out.append((_PairData(net, oracle, lp, d_old),
                    _PairData(net, oracle, lq, d_old)))
    return out


def _cell_all_cross(net: Network, cell: SearchCell) -> bool:
    """True if provably every candidate segment of the cell crosses an edge.

    Sufficient condition, checked per non-host edge f: the two parameter
    arcs lie strictly on opposite sides of line(f), and the hull of the
    candidate region meets line(f) only within the span of f itself.  Then
    no candidate can be simple and the cell is infeasible for the simple
    search.
    """
    t0, t1, s0, s1 = cell.box
    a0 = _float_pt(net, cell.e, t0)
    a1 = _float_pt(net, cell.e, t1)
    b0 = _float_pt(net, cell.e2, s0)
    b1 = _float_pt(net, cell.e2, s1)
    corners = [a0, a1, b0, b1]
    scale = 1.0 + max(abs(v) for c in corners for v in c)
    m = 1e-9 * scale
    hull = _float_hull(corners)
    for f in net.sorted_edges:
        if f == cell.e or f == cell.e2:
            continue
        fax, fay = net.float_coords[f[0]]
        fbx, fby = net.float_coords[f[1]]
        dx, dy = fbx - fax, fby - fay
        Lf = net.lengths[f]

        def side(p):
            return (dx * (p[1] - fay) - dy * (p[0] - fax)) / Lf

        sa0, sa1, sb0, sb1 = side(a0), side(a1), side(b0), side(b1)
        if not ((sa0 > m and sa1 > m and sb0 < -m and sb1 < -m) or
                (sa0 < -m and sa1 < -m and sb0 > m and sb1 > m)):
            continue
        # hull boundary crossings of line(f), as arclength along f
        params = []
        n = len(hull)
        bad = False
        for i in range(n):
            c = hull[i]
            d_ = hull[(i + 1) % n] if n > 1 else hull[i]
            sc, sd = side(c), side(d_)
            if abs(sc) <= m:
                params.append(((c[0] - fax) * dx + (c[1] - fay) * dy) / Lf)
                continue
            if sc * sd < 0:
                w = sc / (sc - sd)
                px = c[0] + w * (d_[0] - c[0])
                py = c[1] + w * (d_[1] - c[1])
                params.append(((px - fax) * dx + (py - fay) * dy) / Lf)
        if not params:
            continue
        if min(params) - m >= 0.0 and max(params) + m <= Lf:
            return True
    return False


def _is_simple_candidate(net: Network, seg: SegmentGeom,
                         e: EdgeId, e2: EdgeId) -> bool:
    """Exact: the open segment meets the locus only at its endpoints."""
    from .geom import seg_intersect
    for f in net.sorted_edges:
        inter = seg_intersect(seg, net.edge_segment(f))
        if inter.kind == "overlap":
            return False
        if inter.kind == "point" and inter.point not in (seg.a, seg.b):
            return False
    return True


def _search(net: Network, gap: Optional[float], resolution: Optional[float],
            simple: bool, progress=None) -> SearchResult:
    if len(components(net)) != 1:
        raise DisconnectedNetwork("search requires a connected network; "
                                  "use scn_is_one_disconnected")
    oracle = apsp(net)
    rep = continuous_diameter(net, oracle)
    d = rep.d
    lmax = max(net.lengths.values())
    if gap is None:
        gap = 1e-6 * d
    if resolution is None:
        resolution = 1e-3 * lmax
    if gap <= TAU * max(1.0, net.total_length()):
        raise ValueError("gap must exceed the global tolerance")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    target = d - gap
    pairs = _tracked_pairs(net, oracle, rep)
    scale_tol = TAU * max(1.0, net.total_length())

    cells_processed = 0
    edges = net.sorted_edges
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e, e2 = edges[i], edges[j]
            stack = [SearchCell(e, e2, (0.0, net.lengths[e],
                                        0.0, net.lengths[e2]))]
            while stack:
                cell = stack.pop()
                cells_processed += 1
                if progress is not None and cells_processed % 64 == 0:
                    progress({"cells_processed": cells_processed,
                              "edge_pair": [list(e), list(e2)]})
                cell.bounds = _cell_lower_bounds(net, oracle, pairs, cell, simple)
                if any(b.value > target + scale_tol for b in cell.bounds):
                    cell.status = "PrunedInfeasible"
                    continue
                if simple and _cell_all_cross(net, cell):
                    cell.status = "PrunedInfeasible"
                    continue
                t0, t1, s0, s1 = cell.box
                w1, w2 = t1 - t0, s1 - s0
                if simple:
                    # midpoint-eccentricity prune: a simple candidate meets
                    # the locus at its endpoints only, so the eccentricity
                    # of its midpoint is exact there and 1.5-Lipschitz in
                    # the endpoint parameters across the cell
                    cx, cy = (t0 + t1) / 2.0, (s0 + s1) / 2.0
                    ax, ay = _float_pt(net, e, cx)
                    bx, by = _float_pt(net, e2, cy)
                    slen = math.hypot(bx - ax, by - ay)
                    ends = [(e, cx, 0.0), (e2, cy, slen)]
                    ecc = _candidate_ecc(net, oracle, ends, slen / 2.0)
                    if ecc - 2.0 * (w1 + w2) > target + scale_tol:
                        cell.status = "PrunedInfeasible"
                        continue
                if w1 > resolution or w2 > resolution:
                    if w1 >= w2:
                        mid = (t0 + t1) / 2.0
                        hi = SearchCell(e, e2, (mid, t1, s0, s1))
                        lo = SearchCell(e, e2, (t0, mid, s0, s1))
                    else:
                        mid = (s0 + s1) / 2.0
                        hi = SearchCell(e, e2, (t0, t1, mid, s1))
                        lo = SearchCell(e, e2, (t0, t1, s0, mid))
                    stack.append(hi)
                    stack.append(lo)  # deterministic: lower half first
                    continue
                # Leaf: evaluate the center candidate.
                x, y = (t0 + t1) / 2.0, (s0 + s1) / 2.0
                contacts = _candidate_contacts(net, e, e2, x, y)
                if simple:
                    # a simple candidate touches the locus at its endpoints
                    # only, so the host contacts make the bound exact
                    contacts = contacts[:2]
                skip = False
                for pd, qd in pairs:
                    val = _candidate_pair_value(net, oracle, pd, qd, contacts)
                    if val > target + scale_tol:
                        skip = True
                        break
                if skip:
                    continue
                slen = contacts[1][2]
                if slen > 0 and (_candidate_ecc(net, oracle, contacts,
                                                slen / 2.0)
                                 > target + scale_tol):
                    continue
                lp = _locus_at(net, e, x)
                lq = _locus_at(net, e2, y)
                pw = locus_coords(net, lp)
                pz = locus_coords(net, lq)
                if pw == pz:
                    continue
                seg = SegmentGeom(pw, pz)
                if simple and not _is_simple_candidate(net, seg, e, e2):
                    continue
                try:
                    aug = insert_segment(net, seg, validate_result=False)
                except (DegenerateOverlap, NetworkError):
                    continue
                new_d = continuous_diameter(aug).d
                if new_d <= target + scale_tol:
                    verified = continuous_diameter(insert_segment(net, seg)).d
                    if verified <= target + scale_tol:
                        return SearchResult("FOUND", segment=seg,
                                            new_d=verified,
                                            cells_processed=cells_processed)
    return SearchResult("NONE", certified_gap=gap,
                        cells_processed=cells_processed)


def find_shortcut(net: Network, gap: Optional[float] = None,
                  resolution: Optional[float] = None,
                  progress=None) -> SearchResult:
    """Is there a single segment reducing the diameter by more than gap?

    Deterministic: edge pairs and cells are visited in lexicographic order
    and the first verified candidate wins.
    """
    return _search(net, gap, resolution, simple=False, progress=progress)


def find_simple_shortcut(net: Network, gap: Optional[float] = None,
                         resolution: Optional[float] = None,
                         progress=None) -> SearchResult:
    """Same decision restricted to candidates whose interior avoids the locus."""
    return _search(net, gap, resolution, simple=True, progress=progress)


def grid_shortcut_oracle(net: Network, k: int) -> dict:
    """Exhaustive best candidate over all edge pairs and a (k+1)^2 grid.

    Independent oracle for the search: every candidate is evaluated by a
    full insertion and diameter recomputation.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(components(net)) != 1:
        raise DisconnectedNetwork("grid_shortcut_oracle requires connectivity")
    oracle = apsp(net)
    rep = continuous_diameter(net, oracle)
    pairs = _tracked_pairs(net, oracle, rep)
    best = {"segment": None, "new_d": rep.d}
    edges = net.sorted_edges
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e, e2 = edges[i], edges[j]
            for a in range(k + 1):
                for b in range(k + 1):
                    x = net.lengths[e] * a / k
                    y = net.lengths[e2] * b / k
                    # the augmented diameter is at least the exact new
                    # distance of any tracked pair, so candidates that
                    # cannot beat the incumbent are skipped cheaply
                    contacts = _candidate_contacts(net, e, e2, x, y)
                    if any(_candidate_pair_value(net, oracle, pd, qd, contacts)
                           >= best["new_d"] - 1e-12
                           for pd, qd in pairs):
                        continue
                    pw = locus_coords(net, _locus_at(net, e, x))
                    pz = locus_coords(net, _locus_at(net, e2, y))
                    if pw == pz:
                        continue
                    try:
                        aug = insert_segment(net, SegmentGeom(pw, pz),
                                             validate_result=False)
                    except (DegenerateOverlap, NetworkError):
                        continue
                    new_d = continuous_diameter(aug).d
                    if new_d < best["new_d"]:
                        best = {"segment": SegmentGeom(pw, pz), "new_d": new_d}
    return best


# --- stabbing lines and the disconnected case -------------------------------

@dataclass(frozen=True)
class StabbingLine:
    point: Point
    direction: Point  # nonzero vector


def _line_meets_hull(a: Point, b: Point, hull: HullPolygon) -> bool:
    signs = {orient(a, b, v) for v in hull.vertices}
    return not (signs == {1} or signs == {-1})


def stabbing_line(hulls: List[HullPolygon]) -> Optional[StabbingLine]:
    """A straight line meeting every hull, or None.

    Candidates: lines through two vertices of distinct hulls, plus every
    hull's edge support lines.  A stabbable family always admits a stabbing
    line touching two hull vertices (or along an edge), so the enumeration
    is complete; tests cross-check against a rotating brute force.
    """
    if not hulls:
        raise ValueError("at least one hull is required")
    if len(hulls) == 1:
        vs = hulls[0].vertices
        if len(vs) >= 2:
            return StabbingLine(vs[0], Point(vs[1].x - vs[0].x,
                                             vs[1].y - vs[0].y))
        return StabbingLine(vs[0], Point.of(1, 0))

    candidates: List[Tuple[Point, Point]] = []
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            for a in hulls[i].vertices:
                for b in hulls[j].vertices:
                    if a != b:
                        candidates.append((a, b))
    for h in hulls:
        vs = h.vertices
        if len(vs) >= 2:
            for t in range(len(vs)):
                a, b = vs[t], vs[(t + 1) % len(vs)]
                if a != b:
                    candidates.append((a, b))

    for a, b in candidates:
        if all(_line_meets_hull(a, b, h) for h in hulls):
            return StabbingLine(a, Point(b.x - a.x, b.y - a.y))
    return None


def _line_edge_params(a: Point, dirv: Point, net: Network, e: EdgeId) -> List:
    """Exact parameters (along the line) where the line meets edge e."""
    p0, p1 = net.vertices[e[0]], net.vertices[e[1]]
    b = Point(a.x + dirv.x, a.y + dirv.y)
    o0, o1 = orient(a, b, p0), orient(a, b, p1)
    den2 = dirv.x * dirv.x + dirv.y * dirv.y

    def param(p: Point):
        return ((p.x - a.x) * dirv.x + (p.y - a.y) * dirv.y) / den2

    if o0 == 0 and o1 == 0:
        return [param(p0), param(p1)]
    if o0 == o1:
        return []
    if o0 == 0:
        return [param(p0)]
    if o1 == 0:
        return [param(p1)]
    # proper crossing: solve for the point on the edge
    ex, ey = p1.x - p0.x, p1.y - p0.y
    den = ex * dirv.y - ey * dirv.x
    u = ((a.x - p0.x) * dirv.y - (a.y - p0.y) * dirv.x) / den
    cx = p0.x + u * ex
    cy = p0.y + u * ey
    return [param(Point(cx, cy))]


def scn_is_one_disconnected(net: Network) -> dict:
    """Can a single segment make this disconnected network a shortcut target?

    True iff the component hulls admit a stabbing line whose clipped segment
    touches every component's locus; the witness bridges all components.
    """
    comps = components(net)
    if len(comps) < 2:
        raise NetworkError("network is connected; use find_shortcut instead")
    hulls = [convex_hull([net.vertices[v] for v in comp]) for comp in comps]

    # Try every stabbing candidate until one's clipped segment verifies.
    if len(hulls) == 1:
        raise AssertionError("unreachable")
    candidates: List[Tuple[Point, Point]] = []
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            for a in hulls[i].vertices:
                for b in hulls[j].vertices:
                    if a != b:
                        candidates.append((a, b))
    for h in hulls:
        vs = h.vertices
        if len(vs) >= 2:
            for t in range(len(vs)):
                a, b = vs[t], vs[(t + 1) % len(vs)]
                if a != b:
                    candidates.append((a, b))

    comp_edges = []
    for comp in comps:
        comp_edges.append([e for e in net.sorted_edges
                           if e[0] in comp and e[1] in comp])

    for a, b in candidates:
        if not all(_line_meets_hull(a, b, h) for h in hulls):
            continue
        dirv = Point(b.x - a.x, b.y - a.y)
        per_comp = []
        ok = True
        for ce in comp_edges:
            params = []
            for e in ce:
                params.extend(_line_edge_params(a, dirv, net, e))
            if not params:
                ok = False  # line stabs the hull but misses the locus
                break
            per_comp.append((min(params), max(params)))
        if not ok:
            continue
        # minimal interval touching every component's parameter range
        lo = max(p for p, _ in per_comp)
        hi = min(q for _, q in per_comp)
        lo, hi = min(lo, hi), max(lo, hi)
        if lo == hi:
            continue

        def at(t):
            return Point(a.x + t * dirv.x, a.y + t * dirv.y)

        seg = SegmentGeom(at(lo), at(hi))
        # pieces of the segment not already covered by collinear edges
        covered = []
        b2 = Point(a.x + dirv.x, a.y + dirv.y)
        for e in net.sorted_edges:
            p0, p1 = net.vertices[e[0]], net.vertices[e[1]]
            if orient(a, b2, p0) == 0 and orient(a, b2, p1) == 0:
                den2 = dirv.x * dirv.x + dirv.y * dirv.y
                t0 = ((p0.x - a.x) * dirv.x + (p0.y - a.y) * dirv.y) / den2
                t1 = ((p1.x - a.x) * dirv.x + (p1.y - a.y) * dirv.y) / den2
                covered.append((min(t0, t1), max(t0, t1)))
        covered.sort()
        pieces = []
        cur = lo
        for c0, c1 in covered:
            if c1 <= cur or c0 >= hi:
                continue
            if c0 > cur:
                pieces.append((cur, c0))
            cur = max(cur, c1)
        if cur < hi:
            pieces.append((cur, hi))
        try:
            aug = net
            for p0, p1 in pieces:
                aug = insert_segment(aug, SegmentGeom(at(p0), at(p1)))
        except NetworkError:
            continue
        if len(components(aug)) == 1:
            return {"yes": True, "witness_segment": seg,
                    "witness_pieces": [SegmentGeom(at(p0), at(p1))
                                       for p0, p1 in pieces]}
    return {"yes": False, "witness_segment": None, "witness_pieces": []}
