"""Shared fixture networks and random generators used across the suite."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import List, Tuple

from locusnet.geom import Point, SegmentGeom, orient, seg_intersect
from locusnet.network import Network, components, edge_id, validate


def path1() -> Network:
    return Network.from_coords([(0, 0), (1, 0)], [(0, 1)])


def square1() -> Network:
    return Network.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)],
                               [(0, 1), (1, 2), (2, 3), (3, 0)])


def tri1() -> Network:
    h = Fraction(math.sqrt(3) / 2).limit_denominator(10**12)
    return Network.from_coords([(0, 0), (1, 0), (Fraction(1, 2), h)],
                               [(0, 1), (1, 2), (2, 0)])


def star5() -> Network:
    coords: List[Tuple] = [(0, 0)]
    for k in range(5):
        ang = 2 * math.pi * k / 5
        coords.append((Fraction(math.cos(ang)).limit_denominator(10**12),
                       Fraction(math.sin(ang)).limit_denominator(10**12)))
    return Network.from_coords(coords, [(0, i) for i in range(1, 6)])


def k4a() -> Network:
    return Network.from_coords([(0, 0), (4, 0), (2, 3), (2, 1)],
                               [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def pocket1() -> Network:
    return Network.from_coords([(0, 0), (4, 0), (1, 1), (0, 4)],
                               [(0, 1), (1, 2), (2, 3), (3, 0)])


def straight_path3() -> Network:
    return Network.from_coords([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)])


def _crosses_any(net_edges, verts, u, v) -> bool:
    cand = SegmentGeom(verts[u], verts[v])
    for a, b in net_edges:
        if {a, b} & {u, v}:
            inter = seg_intersect(cand, SegmentGeom(verts[a], verts[b]))
            if inter.kind == "overlap":
                return True
            shared = ({a, b} & {u, v}).pop()
            if inter.kind == "point" and inter.point != verts[shared]:
                return True
            continue
        if seg_intersect(cand, SegmentGeom(verts[a], verts[b])).kind != "empty":
            return True
    return False


def random_network(rng: random.Random, n_min: int = 4, n_max: int = 10,
                   extra_edges: int = 3) -> Network:
    """Random valid connected plane network with integer coordinates."""
    while True:
        n = rng.randint(n_min, n_max)
        coords = set()
        while len(coords) < n:
            coords.add((rng.randint(0, 12), rng.randint(0, 12)))
        verts = {i: Point.of(x, y) for i, (x, y) in enumerate(sorted(coords))}
        ids = list(verts)
        pairs = [(u, v) for i, u in enumerate(ids) for v in ids[i + 1:]]
        rng.shuffle(pairs)
        edges = []

        def comp_count():
            return len(components(Network(verts, frozenset(edges)))) if edges else n

        for u, v in pairs:
            if verts[u] == verts[v]:
                continue
            if _crosses_any(edges, verts, u, v):
                continue
            before = comp_count()
            edges.append(edge_id(u, v))
            after = comp_count()
            if after == 1 and len(edges) >= n - 1:
                break
        net = Network(verts, frozenset(edges))
        if len(components(net)) != 1:
            continue
        # Sprinkle a few more non-crossing edges for cycles.
        added = 0
        for u, v in pairs:
            if added >= extra_edges:
                break
            if edge_id(u, v) in net.edges or _crosses_any(net.edges, verts, u, v):
                continue
            net = Network(verts, net.edges | {edge_id(u, v)})
            added += 1
        if not validate(net):
            return net


def random_simple_polygon(rng: random.Random, n_min: int = 4, n_max: int = 8,
                          convex: bool | None = None) -> Network:
    """Random star-shaped (hence simple) polygon; optionally (non-)convex."""
    while True:
        n = rng.randint(n_min, n_max)
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(-10, 10), rng.randint(-10, 10)))
        pts = [Point.of(x, y) for x, y in pts]
        cx = sum(p.x for p in pts) / len(pts)
        cy = sum(p.y for p in pts) / len(pts)
        pts.sort(key=lambda p: math.atan2(float(p.y - cy), float(p.x - cx)))
        # Reject degenerate rings (repeated angles create collinear spokes).
        ring = pts
        edges = [(i, (i + 1) % n) for i in range(n)]
        net = Network({i: p for i, p in enumerate(ring)},
                      frozenset(edge_id(u, v) for u, v in edges))
        if validate(net):
            continue
        orients = [orient(ring[i], ring[(i + 1) % n], ring[(i + 2) % n])
                   for i in range(n)]
        if any(o == 0 for o in orients):
            continue
        is_convex = all(o > 0 for o in orients) or all(o < 0 for o in orients)
        if convex is None or convex == is_convex:
            return net
