"""Distance machinery for the locus of a plane Euclidean network.

Vertex all-pairs shortest paths back every metric query.  The continuous
(locus) diameter is found from three candidate families: vertex pairs,
pairs of points on two non-pendant edges (balanced two-route positions),
and pendant-vertex-to-edge pairs.  Every non-vertex candidate is re-verified
with an exact locus-distance query before it is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .geom import TAU, close
from .network import (EdgeId, LocusPoint, Network, NetworkError,
                      canonical_locus_point, components, vertex_locus_point)

INF = math.inf


class DisconnectedNetwork(NetworkError):
    pass


@dataclass
class DistanceOracle:
    """Vertex-distance matrix plus predecessors for path extraction."""

    ids: List[int]
    index: Dict[int, int]
    dist: np.ndarray        # (n, n) float matrix, +inf where disconnected
    pred: np.ndarray        # scipy predecessor matrix (-9999 for none)
    net: Network

    def d(self, u: int, v: int) -> float:
        return float(self.dist[self.index[u], self.index[v]])

    def vertex_path(self, u: int, v: int) -> List[int]:
        """Shortest vertex path u..v (empty if disconnected)."""
        iu, iv = self.index[u], self.index[v]
        if not np.isfinite(self.dist[iu, iv]):
            return []
        path = [iv]
        while path[-1] != iu:
            path.append(int(self.pred[iu, path[-1]]))
        return [self.ids[i] for i in reversed(path)]


def apsp(net: Network) -> DistanceOracle:
    """Shortest paths from every vertex (disconnected pairs get +inf)."""
    ids = sorted(net.vertices)
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    rows, cols, data = [], [], []
    for e in net.edges:
        i, j = index[e[0]], index[e[1]]
        w = net.lengths[e]
        rows += [i, j]
        cols += [j, i]
        data += [w, w]
    graph = csr_matrix((data, (rows, cols)), shape=(n, n))
    dist, pred = _sp_dijkstra(graph, directed=False, return_predecessors=True)
    return DistanceOracle(ids, index, dist, pred, net)


def _fragments(net: Network, p: LocusPoint) -> Tuple[int, float, int, float]:
    """(u, |pu|, v, |pv|) along p's edge."""
    u, v = p.edge
    length = net.lengths[p.edge]
    t = float(p.t)
    return u, t * length, v, (1.0 - t) * length


def locus_distance(net: Network, oracle: DistanceOracle,
                   p: LocusPoint, q: LocusPoint) -> float:
    """Shortest-path distance between two locus points."""
    pu, dpu, pv, dpv = _fragments(net, p)
    qu, dqu, qv, dqv = _fragments(net, q)
    best = INF
    for a, da in ((pu, dpu), (pv, dpv)):
        for b, db in ((qu, dqu), (qv, dqv)):
            best = min(best, da + oracle.d(a, b) + db)
    if p.edge == q.edge:
        best = min(best, abs(dpu - dqu))
    return best


def eccentricity(net: Network, oracle: DistanceOracle, p: LocusPoint) -> float:
    """Exact max distance from p over the whole locus (per-edge closed form)."""
    pu, dpu, pv, dpv = _fragments(net, p)

    def dist_to_vertex(w: int) -> float:
        d = min(dpu + oracle.d(pu, w), dpv + oracle.d(pv, w))
        if w in p.edge:
            d = min(d, dpu if w == p.edge[0] else dpv)
        return d

    best = 0.0
    for e in net.edges:
        a, b = e
        length = net.lengths[e]
        da, db = dist_to_vertex(a), dist_to_vertex(b)
        if da == INF or db == INF:
            return INF
        if e == p.edge:
            # d(p, q) = min(da + x, db + L - x, |xp - x|) with x = |aq|;
            # maximize over the breakpoints of this piecewise-linear min.
            xp = dpu if a == p.edge[0] else dpv
            xs = [0.0, length, (db + length - da) / 2.0,
                  (xp - da) / 2.0, (db + length + xp) / 2.0]
            val = 0.0
            for x in xs:
                x = min(max(x, 0.0), length)
                val = max(val, min(da + x, db + length - x, abs(xp - x)))
        else:
            # max over q in ab of min(da + |aq|, db + |qb|)
            if abs(db - da) <= length:
                val = (da + db + length) / 2.0
            else:
                val = max(da, db)
        best = max(best, val)
    return best


def batch_eccentricities(net: Network, oracle: DistanceOracle,
                         points: List[LocusPoint]) -> np.ndarray:
    """Eccentricities of many locus points at once (numpy per host edge)."""
    idx = oracle.index
    D = oracle.dist
    edges = sorted(net.edges)
    F0 = np.array([idx[e[0]] for e in edges], dtype=int)
    F1 = np.array([idx[e[1]] for e in edges], dtype=int)
    EL = np.array([net.lengths[e] for e in edges])
    edge_pos = {e: i for i, e in enumerate(edges)}

    out = np.zeros(len(points))
    by_edge: Dict[EdgeId, List[int]] = {}
    for i, p in enumerate(points):
        by_edge.setdefault(p.edge, []).append(i)

    for e, rows in by_edge.items():
        u, v = idx[e[0]], idx[e[1]]
        L = net.lengths[e]
        xp = np.array([float(points[i].t) * L for i in rows])
        dw = np.minimum(xp[:, None] + D[u][None, :],
                        (L - xp)[:, None] + D[v][None, :])
        da, db = dw[:, F0], dw[:, F1]
        vals = np.where(np.abs(da - db) <= EL[None, :],
                        (da + db + EL[None, :]) / 2.0,
                        np.maximum(da, db))
        # own edge: d(p, q) = min(da + x, db + L - x, |xp - x|)
        j = edge_pos[e]
        da0, db0 = dw[:, F0[j]], dw[:, F1[j]]
        own = np.zeros(len(rows))
        for x in (np.zeros_like(xp), np.full_like(xp, L),
                  (db0 + L - da0) / 2.0, (xp - da0) / 2.0,
                  (db0 + L + xp) / 2.0):
            x = np.clip(x, 0.0, L)
            own = np.maximum(own, np.minimum.reduce(
                [da0 + x, db0 + L - x, np.abs(xp - x)]))
        vals[:, j] = own
        out[rows] = vals.max(axis=1)
    return out


@dataclass(frozen=True)
class DiametralPair:
    p: LocusPoint
    q: LocusPoint
    kind: str  # VertexVertex | EdgeEdge | PendantVertexEdge


@dataclass
class DiameterReport:
    d: float
    pairs: List[DiametralPair] = field(default_factory=list)


def _pendant_set(net: Network) -> set:
    return set(net.pendant_vertices())


def _locus_at(net: Network, e: EdgeId, arclen_from_u: float) -> LocusPoint:
    length = net.lengths[e]
    t = Fraction(min(max(arclen_from_u / length, 0.0), 1.0)).limit_denominator(1 << 48)
    return canonical_locus_point(net, LocusPoint(e, t))


def continuous_diameter(net: Network, oracle: Optional[DistanceOracle] = None
                        ) -> DiameterReport:
    """Continuous diameter with all (near-)maximizing pairs."""
    if len(components(net)) != 1:
        raise DisconnectedNetwork("continuous_diameter requires a connected network")
    if oracle is None:
        oracle = apsp(net)

    scale = max(1.0, net.total_length())
    tol = TAU * scale
    pend = _pendant_set(net)
    non_pendant = [e for e in sorted(net.edges)
                   if e[0] not in pend and e[1] not in pend]

    ids = oracle.ids
    idx = oracle.index
    D = oracle.dist
    m = len(non_pendant)
    U = np.array([idx[e[0]] for e in non_pendant], dtype=int)
    V = np.array([idx[e[1]] for e in non_pendant], dtype=int)
    L = np.array([net.lengths[e] for e in non_pendant])

    # Step 1: vertex pairs.
    best = float(np.max(D)) if len(ids) > 1 else 0.0

    def _edge_pair_vals(i: int, w1: np.ndarray, w2: np.ndarray):
        """Best value and realizing x for edge i against all edges, with the
        matching (u~w1, v~w2) of far endpoints.

        Balanced two-route positions give 2c = L1 + L2 + d(u,w1) + d(v,w2)
        and x + y1 = c - d(u,w1) (x = |pu| on e1, y1 = |q w1| on e2).  The
        two cross routes are linear in x, so the max of the route minimum is
        attained where they meet or at the feasible box corners.
        """
        u, v, L1 = U[i], V[i], L[i]
        duw1, dvw2 = D[u, w1], D[v, w2]
        duw2, dvw1 = D[u, w2], D[v, w1]
        c = (L1 + L + duw1 + dvw2) / 2.0
        s = c - duw1
        lo = np.maximum(0.0, s - L)
        hi = np.minimum(L1, s)
        with np.errstate(invalid="ignore"):
            xstar = (L1 + dvw1 + 2.0 * s - duw2 - L) / 4.0
        vals = np.full(m, -INF)
        xbest = np.zeros(m)
        for x in (lo, hi, np.clip(np.nan_to_num(xstar, nan=0.0, posinf=0.0,
                                                 neginf=0.0), lo, hi)):
            r3 = 2.0 * x + duw2 + L - s
            r4 = L1 + dvw1 + s - 2.0 * x
            val = np.minimum(c, np.minimum(r3, r4))
            better = val > vals
            vals = np.where(better, val, vals)
            xbest = np.where(better, x, xbest)
        feasible = (lo <= hi + tol) & np.isfinite(c)
        vals = np.where(feasible, vals, -INF)
        return vals, xbest, s

    # Step 2: pairs on two different non-pendant edges (vectorized per row).
    for i in range(m):
        row_mask = np.arange(m) > i
        for w1, w2 in ((U, V), (V, U)):
            vals, xb, s = _edge_pair_vals(i, w1, w2)
            vals = np.where(row_mask, vals, -INF)
            rowbest = float(vals.max()) if m else -INF
            if rowbest > best:
                best = rowbest

    # Step 3: vertex against a non-pendant edge (covers pendant vertices and
    # the boundary maxima of the edge-pair boxes).  Balanced position:
    # y = (d(a,f1) + L - d(a,f0)) / 2 measured from f0.
    ve_vals = np.zeros((0, 0))
    if m:
        DA, DB = D[:, U], D[:, V]
        ve_vals = np.where(np.abs(DA - DB) <= L[None, :],
                           (DA + DB + L[None, :]) / 2.0,
                           np.maximum(DA, DB))
        vb = float(ve_vals.max())
        if vb > best:
            best = vb

    # Collect near-maximizing pairs (re-verified exactly).
    pairs: List[DiametralPair] = []
    seen = set()
    cap = 400

    def _push(p: LocusPoint, q: LocusPoint, kind: str) -> None:
        if len(pairs) >= cap:
            return
        if locus_distance(net, oracle, p, q) < best - tol:
            return
        key = tuple(sorted([(p.edge, p.t), (q.edge, q.t)]))
        if key not in seen:
            seen.add(key)
            pairs.append(DiametralPair(p, q, kind))

    iu, iv = np.where(D >= best - tol)
    for a, b in zip(iu, iv):
        if len(pairs) >= cap:
            break
        if a < b:
            _push(vertex_locus_point(net, ids[a]),
                  vertex_locus_point(net, ids[b]), "VertexVertex")

    for i in range(m):
        if len(pairs) >= cap:
            break
        row_mask = np.arange(m) > i
        for w1, w2, flip in ((U, V, False), (V, U, True)):
            vals, xb, s = _edge_pair_vals(i, w1, w2)
            vals = np.where(row_mask, vals, -INF)
            for j in np.where(vals >= best - tol)[0]:
                x = float(xb[j])
                y1 = float(s[j]) - x
                if y1 < -tol or y1 > L[j] + tol:
                    continue
                p = _locus_at(net, non_pendant[i], x)
                q = _locus_at(net, non_pendant[j],
                              L[j] - y1 if flip else y1)
                _push(p, q, "EdgeEdge")

    if m:
        for a, j in zip(*np.where(ve_vals >= best - tol)):
            if len(pairs) >= cap:
                break
            vid = ids[a]
            f = non_pendant[j]
            y = (float(D[a, V[j]]) + float(L[j]) - float(D[a, U[j]])) / 2.0
            y = min(max(y, 0.0), float(L[j]))
            kind = "PendantVertexEdge" if vid in pend else "EdgeEdge"
            _push(vertex_locus_point(net, vid), _locus_at(net, f, y), kind)

    return DiameterReport(best, pairs)


def sampled_diameter(net: Network, k: int) -> float:
    """Brute-force diameter over a grid of k+1 uniform points per edge.

    Independent oracle: within 2*Lmax/k of the true continuous diameter.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(components(net)) != 1:
        raise DisconnectedNetwork("sampled_diameter requires a connected network")
    oracle = apsp(net)
    edges = sorted(net.edges)
    m = len(edges)
    D = oracle.dist
    idx = oracle.index
    ts = np.linspace(0.0, 1.0, k + 1)
    best = 0.0
    frags = []
    for e in edges:
        L = net.lengths[e]
        frags.append((idx[e[0]], idx[e[1]], ts * L, (1.0 - ts) * L))
    for i in range(m):
        ui, vi, xu, xv = frags[i]
        for j in range(i, m):
            uj, vj, yu, yv = frags[j]
            combo = np.minimum.reduce([
                xu[:, None] + D[ui, uj] + yu[None, :],
                xu[:, None] + D[ui, vj] + yv[None, :],
                xv[:, None] + D[vi, uj] + yu[None, :],
                xv[:, None] + D[vi, vj] + yv[None, :],
            ])
            if i == j:
                combo = np.minimum(combo, np.abs(xu[:, None] - xu[None, :]))
            best = max(best, float(combo.max()))
    return best
