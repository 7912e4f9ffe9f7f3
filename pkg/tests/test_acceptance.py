"""End-to-end acceptance gate: one test (and one printed verdict line) per
top-level guarantee of the toolkit."""

import math
import random

import pytest

from locusnet.augment import (AugmentError, admits_shortcut_set,
                              epsilon_shortcut_set, fan_shortcut_set,
                              polygon_scn, verify_shortcut_set)
from locusnet.gadgets import (CnfFormula, MalformedCnf,
                              build_point_cover_instance, scn_reduction_check,
                              verify_gadget)
from locusnet.geom import (TAU, Point, SegmentGeom, convex_hull,
                           hull_diameter, orient)
from locusnet.metrics import continuous_diameter, sampled_diameter, _locus_at
from locusnet.network import (DegenerateOverlap, Network, NetworkError,
                              components, insert_segment, insert_shortcut_set,
                              locus_coords, validate)
from locusnet.search import (find_shortcut, find_simple_shortcut,
                             grid_shortcut_oracle, scn_is_one_disconnected,
                             stabbing_line)
from fixtures import (k4a, random_network, random_simple_polygon, square1,
                      star5, straight_path3, tri1)


@pytest.fixture(name="verdict")
def _verdict_fixture(capsys):
    def _verdict(name: str, ok: bool) -> None:
        # bypass output capture so the verdict line always reaches the log
        with capsys.disabled():
            print(f"\n[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}")
        assert ok, name

    return _verdict


def _tol(net: Network) -> float:
    return TAU * max(1.0, net.total_length())


def test_diameter_oracle_equivalence(verdict):
    rng = random.Random(2024)
    ok = True
    for _ in range(50):
        net = random_network(rng, 4, 10)
        lmax = max(net.lengths.values())
        exact = continuous_diameter(net).d
        approx = sampled_diameter(net, 128)
        ok = ok and abs(exact - approx) <= 2 * lmax / 128 + 1e-9
    verdict("diameter-oracle-equivalence", ok)


def test_cycle_law(verdict):
    rng = random.Random(2025)
    ok = abs(continuous_diameter(square1()).d - 2.0) <= _tol(square1())
    ok = ok and abs(continuous_diameter(tri1()).d - 1.5) <= _tol(tri1())
    for _ in range(20):
        net = random_simple_polygon(rng)
        d = continuous_diameter(net).d
        ok = ok and abs(d - net.total_length() / 2.0) <= _tol(net)
    verdict("cycle-law", ok)


def test_hull_inequality(verdict):
    rng = random.Random(2026)
    ok = True
    nets = [random_network(rng, 4, 10) for _ in range(25)]
    nets += [random_simple_polygon(rng) for _ in range(15)]
    nets += [square1(), tri1(), star5(), k4a(), straight_path3()]
    for net in nets:
        hd = hull_diameter(list(net.vertices.values()))
        ok = ok and hd <= continuous_diameter(net).d + _tol(net)
    verdict("hull-inequality", ok)


def test_characterization_and_fan_bound(verdict):
    rng = random.Random(2027)
    ok = True
    # straight paths never admit a shortcut set
    for k in (1, 2, 4):
        coords = [(2 * i, 3 * i) for i in range(k + 1)]
        path = Network.from_coords(coords, [(i, i + 1) for i in range(k)])
        v = admits_shortcut_set(path)
        ok = ok and not v.admits and v.witness is not None
        with pytest.raises(AugmentError):
            fan_shortcut_set(path)
    # everything whose diametral vertices do not span a contained segment does
    admit_nets = [square1(), tri1(), star5(), k4a()]
    admit_nets += [random_simple_polygon(rng) for _ in range(3)]
    for net in admit_nets:
        v = admits_shortcut_set(net)
        ok = ok and v.admits
        ss = fan_shortcut_set(net)
        n1 = len(net.pendant_vertices())
        ok = ok and len(ss) <= 2 * len(net.edges) - n1
        ok = ok and verify_shortcut_set(net, ss)["is_shortcut_set"]
    verdict("characterization-and-fan-bound", ok)


def test_epsilon_theorem(verdict):
    ok = True
    cases = [(square1(), (0.2, 0.35, 0.5)), (star5(), (0.07, 0.08, 0.09))]
    for net, eps_values in cases:
        hd = hull_diameter(list(net.vertices.values()))
        for eps in eps_values:
            ss = epsilon_shortcut_set(net, eps)
            aug = insert_shortcut_set(net, ss, validate_each=False)
            ok = ok and validate(aug) == []
            new_d = continuous_diameter(aug).d
            ok = ok and hd - _tol(net) <= new_d < hd + eps
    verdict("epsilon-theorem", ok)


def test_family_results(verdict):
    rng = random.Random(2028)
    ok = True
    # no polygon has a simple shortcut
    for _ in range(10):
        poly = random_simple_polygon(rng, 4, 6)
        ok = ok and find_simple_shortcut(poly).status == "NONE"
    # convex polygons: no single shortcut, but a verified 2-set exists
    convex = random_simple_polygon(rng, 4, 6, convex=True)
    ok = ok and find_shortcut(convex).status == "NONE"
    out = polygon_scn(convex)
    ok = ok and out["scn"] == 2
    ok = ok and verify_shortcut_set(convex, out["set"])["is_shortcut_set"]
    # non-convex polygons: a single pocket shortcut, found and verified
    nonconvex = random_simple_polygon(rng, 5, 7, convex=False)
    r = find_shortcut(nonconvex)
    ok = ok and r.status == "FOUND"
    ok = ok and (continuous_diameter(insert_segment(nonconvex, r.segment)).d
                 < continuous_diameter(nonconvex).d)
    out = polygon_scn(nonconvex)
    ok = ok and out["scn"] == 1
    ok = ok and verify_shortcut_set(nonconvex, out["set"])["is_shortcut_set"]
    # K4 with an interior vertex: one segment suffices
    rk4 = find_shortcut(k4a())
    ok = ok and rk4.status == "FOUND"
    # 5-spoke star: no single shortcut at default certification, 5-fan works
    ok = ok and find_shortcut(star5()).status == "NONE"
    fan = fan_shortcut_set(star5())
    ok = ok and len(fan) == 5
    ok = ok and verify_shortcut_set(star5(), fan)["is_shortcut_set"]
    verdict("family-results", ok)


def test_search_vs_grid_oracle(verdict):
    rng = random.Random(2029)
    ok = True
    triggered = 0
    for _ in range(20):
        net = random_network(rng, 4, 6)
        d = continuous_diameter(net).d
        gap = 1e-6 * d
        cell = max(net.lengths.values()) / 16
        best = grid_shortcut_oracle(net, 16)
        if best["new_d"] < d - (gap + 4 * cell):
            triggered += 1
            r = find_shortcut(net, gap=gap, resolution=cell)
            ok = ok and r.status == "FOUND"
        else:
            r = find_shortcut(net, gap=gap, resolution=cell)
        if r.status == "FOUND":
            again = continuous_diameter(insert_segment(net, r.segment)).d
            ok = ok and again <= d - gap + _tol(net)
    ok = ok and triggered >= 1  # the comparison must actually exercise FOUND
    verdict("search-vs-grid-oracle", ok)


def _brute_force_stab_margin(hulls, directions=3600):
    best = -math.inf
    for k in range(directions):
        th = math.pi * k / directions
        nx, ny = -math.sin(th), math.cos(th)
        lo, hi = -math.inf, math.inf
        for h in hulls:
            vals = [float(v.x) * nx + float(v.y) * ny for v in h.vertices]
            lo = max(lo, min(vals))
            hi = min(hi, max(vals))
        best = max(best, hi - lo)
    return best


def test_stabbing_and_reconnection(verdict):
    rng = random.Random(2030)
    ok = True
    for _ in range(100):
        k = rng.randrange(2, 5)
        hulls = []
        for _h in range(k):
            cx, cy = rng.randrange(-20, 21), rng.randrange(-20, 21)
            pts = [Point.of(cx + rng.randrange(-3, 4),
                            cy + rng.randrange(-3, 4))
                   for _ in range(rng.randrange(1, 6))]
            hulls.append(convex_hull(pts))
        margin = _brute_force_stab_margin(hulls)
        line = stabbing_line(hulls)
        if margin > 1e-6:
            ok = ok and line is not None
        elif margin < -0.05:
            # below the angular sampling resolution of the brute force a
            # narrow transversal window can be missed, so only clearly
            # negative margins certify non-existence
            ok = ok and line is None
        if line is not None:
            # exact witness check: the line must touch every hull
            a = line.point
            b = Point(a.x + line.direction.x, a.y + line.direction.y)
            for h in hulls:
                signs = {orient(a, b, v) for v in h.vertices}
                ok = ok and signs != {1} and signs != {-1}
    # disconnected networks: yes-cases come back with verified bridges
    yes_seen = 0
    for _ in range(15):
        k = rng.randrange(2, 4)
        coords, edges = [], []
        for i in range(k):
            a, b = rng.randint(1, 5), rng.randint(1, 5)
            y1, y2 = 10 * i + rng.randint(-2, 2), 10 * i + rng.randint(-2, 2)
            coords += [(-a, y1), (b, y2)]
            edges.append((2 * i, 2 * i + 1))
        net = Network.from_coords(coords, edges)
        if len(components(net)) != k:
            continue
        out = scn_is_one_disconnected(net)
        ok = ok and out["yes"]  # all pieces meet the vertical axis
        if out["yes"]:
            yes_seen += 1
            aug = net
            for piece in out["witness_pieces"]:
                aug = insert_segment(aug, piece)
            ok = ok and len(components(aug)) == 1
    ok = ok and yes_seen >= 5
    verdict("stabbing-and-reconnection", ok)


def test_reduction_fidelity(verdict):
    rng = random.Random(2031)
    formulas = [
        CnfFormula(1, ((1, 1, 1), (-1, -1, -1))),
        CnfFormula(1, ((1, 1, 1), (-1, -1, -1), (1, 1, 1))),
        CnfFormula(1, ((1, 1, 1), (-1, -1, -1), (-1, -1, -1))),
    ]
    unsat = sum(1 for phi in formulas if not phi.satisfiable())
    shapes = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]
    while len(formulas) < 20:
        n, m = shapes[rng.randrange(len(shapes))]
        clauses = tuple(
            tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3))
            for _ in range(m))
        phi = CnfFormula(n, clauses)
        try:
            phi.validate()
        except MalformedCnf:
            continue
        formulas.append(phi)
        if not phi.satisfiable():
            unsat += 1
    ok = unsat >= 3
    for i, phi in enumerate(formulas):
        ok = ok and scn_reduction_check(phi, seed=i)
        ok = ok and verify_gadget(build_point_cover_instance(phi, seed=i)) == []
    verdict("reduction-fidelity", ok)


def test_lipschitz_bound(verdict):
    rng = random.Random(2032)
    nets = [square1(), k4a()]
    ok = True
    done = 0
    while done < 1000:
        net = nets[done % len(nets)]
        edges = net.sorted_edges
        e = edges[rng.randrange(len(edges))]
        e2 = edges[rng.randrange(len(edges))]
        if e == e2:
            continue
        x = rng.uniform(0.1, 0.9) * net.lengths[e]
        y = rng.uniform(0.1, 0.9) * net.lengths[e2]
        eta_p = rng.uniform(0.0, 0.05)
        eta_q = rng.uniform(0.0, 0.05)
        try:
            s1 = SegmentGeom(locus_coords(net, _locus_at(net, e, x)),
                             locus_coords(net, _locus_at(net, e2, y)))
            s2 = SegmentGeom(locus_coords(net, _locus_at(net, e, x + eta_p)),
                             locus_coords(net, _locus_at(net, e2, y + eta_q)))
            d1 = continuous_diameter(insert_segment(net, s1)).d
            d2 = continuous_diameter(insert_segment(net, s2)).d
        except (DegenerateOverlap, NetworkError):
            continue
        ok = ok and abs(d1 - d2) <= 4 * (eta_p + eta_q) + _tol(net)
        done += 1
    verdict("lipschitz-bound", ok)
