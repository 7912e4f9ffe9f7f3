"""Point-cover instances encoding 3-CNF formulas.

Each variable becomes an m x m grid of points whose rows and columns lie on
declared lines; each clause becomes a single point placed on the row line
(positive literal) or column line (negative literal) of its variables.
Covering everything with n*m lines is then possible exactly when the formula
is satisfiable: a grid can only be covered by m lines by taking all of its
row lines or all of its column lines, which acts as a truth assignment.

Coordinates are exact rationals; all incidence checks are exact.  Placement
is randomized and re-drawn until the genericity requirement (no undeclared
line through three points) verifies.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .geom import Point

Literal = int  # +-(1-based variable index)
LineKey = Tuple[str, int, int]  # ("L"|"R", variable i, index j) -- 1-based


class GadgetError(Exception):
    pass


class MalformedCnf(GadgetError):
    pass


class TooLarge(GadgetError):
    pass


class RetriesExhausted(GadgetError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF with exactly three (possibly repeated) literals per clause."""

    n: int
    clauses: Tuple[Tuple[Literal, Literal, Literal], ...]

    @property
    def m(self) -> int:
        return len(self.clauses)

    def validate(self) -> None:
        if self.n < 1 or self.m < 1:
            raise MalformedCnf("need at least one variable and one clause")
        for c in self.clauses:
            if len(c) != 3:
                raise MalformedCnf("every clause must have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise MalformedCnf(f"literal {lit} out of range")
            if any(-lit in c for lit in c):
                raise MalformedCnf(
                    "tautological clause (a variable appears in both signs); "
                    "the point encoding cannot represent it")
        # variable-clause incidence graph must be connected
        adj: Dict[str, set] = {}
        for j, c in enumerate(self.clauses):
            cj = f"c{j}"
            adj.setdefault(cj, set())
            for lit in c:
                vi = f"v{abs(lit)}"
                adj.setdefault(vi, set())
                adj[cj].add(vi)
                adj[vi].add(cj)
        for i in range(1, self.n + 1):
            if f"v{i}" not in adj:
                raise MalformedCnf(f"variable {i} appears in no clause")
        seen = set()
        stack = [next(iter(adj))]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u] - seen)
        if len(seen) != len(adj):
            raise MalformedCnf("variable-clause incidence graph is disconnected")

    def satisfiable(self) -> bool:
        if self.n > 16:
            raise TooLarge("exhaustive satisfiability limited to 16 variables")
        for bits in itertools.product((False, True), repeat=self.n):
            ok = True
            for c in self.clauses:
                if not any(bits[abs(l) - 1] == (l > 0) for l in c):
                    ok = False
                    break
            if ok:
                return True
        return False


Line = Tuple[Fraction, Fraction, Fraction]  # a*x + b*y = c, canonical


def _line_through(p: Point, q: Point) -> Line:
    a = q.y - p.y
    b = p.x - q.x
    c = a * p.x + b * p.y
    return _canonical(a, b, c)


def _canonical(a, b, c) -> Line:
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a != 0:
        return (Fraction(1), b / a, c / a)
    if b == 0:
        raise ValueError("degenerate line")
    return (Fraction(0), Fraction(1), c / b)


def _on_line(p: Point, line: Line) -> bool:
    a, b, c = line
    return a * p.x + b * p.y == c


def _slope_line(slope: Fraction, through: Point) -> Line:
    # y = slope*x + t  ->  -slope*x + y = t
    return _canonical(-Fraction(slope), 1, through.y - Fraction(slope) * through.x)


def _intersect(l1: Line, l2: Line) -> Point:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    den = a1 * b2 - a2 * b1
    if den == 0:
        raise ValueError("parallel lines do not intersect")
    x = (c1 * b2 - c2 * b1) / den
    y = (a1 * c2 - a2 * c1) / den
    return Point(x, y)


@dataclass
class GadgetInstance:
    formula: CnfFormula
    points: List[Point]
    provenance: List[tuple]  # ("clause", j) | ("grid", i, k, l), 1-based
    lines: Dict[LineKey, Line]
    line_points: Dict[LineKey, List[int]]  # declared member point indices
    seed: int = 0


def build_point_cover_instance(phi: CnfFormula, seed: int = 0,
                               max_retries: int = 200) -> GadgetInstance:
    """Random rational realization of the point-cover encoding of phi.

    Re-drawn (deterministically from the seed) until verify_gadget reports
    no violations.
    """
    phi.validate()
    n, m = phi.n, phi.m
    for attempt in range(max_retries):
        rng = random.Random(1000003 * seed + attempt)
        inst = _try_build(phi, rng, seed)
        if inst is not None and not verify_gadget(inst):
            return inst
    raise RetriesExhausted(
        f"no generic realization after {max_retries} draws (seed={seed})")


def _try_build(phi: CnfFormula, rng: random.Random,
               seed: int) -> Optional[GadgetInstance]:
    n, m = phi.n, phi.m
    R = 1000 * (n * m + 3)

    clause_pts = []
    for _ in range(m):
        clause_pts.append(Point(Fraction(rng.randint(-R, R)),
                                Fraction(rng.randint(-R, R))))
    if len(set(clause_pts)) != m:
        return None

    # positive occurrences ride row lines, negative ones column lines
    pos = [[False] * (m + 1) for _ in range(n + 1)]
    neg = [[False] * (m + 1) for _ in range(n + 1)]
    for j, c in enumerate(phi.clauses, start=1):
        for lit in c:
            if lit > 0:
                pos[lit][j] = True
            else:
                neg[-lit][j] = True

    lines: Dict[LineKey, Line] = {}
    try:
        for i in range(1, n + 1):
            # row (L) slopes positive, column (R) slopes negative: any row
            # line always meets any column line
            ls = rng.sample(range(1, 40 * m + 1), m)
            rs = rng.sample(range(-40 * m, 0), m)
            for j in range(1, m + 1):
                if pos[i][j]:
                    lines[("L", i, j)] = _slope_line(Fraction(ls[j - 1]),
                                                     clause_pts[j - 1])
                else:
                    t = Point(Fraction(rng.randint(-R, R)),
                              Fraction(rng.randint(-R, R)))
                    lines[("L", i, j)] = _slope_line(Fraction(ls[j - 1]), t)
                if neg[i][j]:
                    lines[("R", i, j)] = _slope_line(Fraction(rs[j - 1]),
                                                     clause_pts[j - 1])
                else:
                    t = Point(Fraction(rng.randint(-R, R)),
                              Fraction(rng.randint(-R, R)))
                    lines[("R", i, j)] = _slope_line(Fraction(rs[j - 1]), t)
    except ValueError:
        return None

    points: List[Point] = list(clause_pts)
    provenance: List[tuple] = [("clause", j) for j in range(1, m + 1)]
    for i in range(1, n + 1):
        for k in range(1, m + 1):
            for l in range(1, m + 1):
                points.append(_intersect(lines[("R", i, k)],
                                         lines[("L", i, l)]))
                provenance.append(("grid", i, k, l))
    if len(set(points)) != len(points):
        return None

    index = {prov: idx for idx, prov in enumerate(provenance)}
    line_points: Dict[LineKey, List[int]] = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            lp = [index[("grid", i, k, j)] for k in range(1, m + 1)]
            if pos[i][j]:
                lp.append(j - 1)
            line_points[("L", i, j)] = lp
            rp = [index[("grid", i, j, l)] for l in range(1, m + 1)]
            if neg[i][j]:
                rp.append(j - 1)
            line_points[("R", i, j)] = rp

    return GadgetInstance(phi, points, provenance, lines, line_points, seed)


def verify_gadget(g: GadgetInstance) -> List[str]:
    """Exact check of the construction requirements; returns violations."""
    out = []
    pts = g.points
    if len(set(pts)) != len(pts):
        out.append("duplicate points")
        return out

    # declared collinearity, and no stowaway points on declared lines
    declared = {}
    for key, line in g.lines.items():
        members = set(g.line_points[key])
        for idx in members:
            if not _on_line(pts[idx], line):
                out.append(f"point {idx} missing from declared line {key}")
        for idx in range(len(pts)):
            if idx not in members and _on_line(pts[idx], line):
                out.append(f"undeclared incidence of point {idx} on {key}")
        declared[line] = key

    # clause incidence pattern: P_j on L_ij / R_ij exactly per its literals
    n, m = g.formula.n, g.formula.m
    for j, c in enumerate(g.formula.clauses, start=1):
        pj = pts[j - 1]
        for i in range(1, n + 1):
            for k in range(1, m + 1):
                want_l = (k == j) and (i in [l for l in c if l > 0])
                want_r = (k == j) and (-i in [l for l in c if l < 0])
                if _on_line(pj, g.lines[("L", i, k)]) != want_l:
                    out.append(f"clause {j} vs line L[{i},{k}] mismatch")
                if _on_line(pj, g.lines[("R", i, k)]) != want_r:
                    out.append(f"clause {j} vs line R[{i},{k}] mismatch")

    # genericity: any line through 3+ points must be a declared line
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            line = _line_through(pts[a], pts[b])
            if line in declared:
                continue
            extra = sum(1 for c2 in range(len(pts)) if _on_line(pts[c2], line))
            if extra > 2:
                out.append(f"undeclared line through {extra} points "
                           f"(e.g. {a},{b})")
    return sorted(set(out))


def min_line_cover_bruteforce(points: Sequence[Point],
                              budget: int) -> Optional[List[Line]]:
    """Smallest cover by straight lines (singletons allowed), or None.

    Exhaustive; capped at 14 points.
    """
    pts = list(points)
    if len(pts) > 14:
        raise TooLarge("brute-force line cover capped at 14 points")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    if budget < 0:
        raise ValueError("budget must be nonnegative")

    # candidate lines through at least two points, with their coverage sets
    cand: Dict[Line, set] = {}
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            line = _line_through(pts[a], pts[b])
            if line not in cand:
                cand[line] = {i for i in range(len(pts))
                              if _on_line(pts[i], line)}
    candidates = sorted(cand.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    best: Optional[List[Line]] = None

    def rec(uncovered: frozenset, chosen: List[Line]):
        nonlocal best
        if not uncovered:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        limit = (budget if best is None else min(budget, len(best) - 1))
        if len(chosen) >= limit:
            return
        target = min(uncovered)
        for line, cov in candidates:
            if target in cov:
                chosen.append(line)
                rec(uncovered - cov, chosen)
                chosen.pop()
        # singleton line: cover the target point alone
        p = pts[target]
        chosen.append(_canonical(1, 0, p.x))
        rec(uncovered - {target}, chosen)
        chosen.pop()

    rec(frozenset(range(len(pts))), [])
    return best


def scn_reduction_check(phi: CnfFormula, seed: int = 0) -> bool:
    """Does [phi satisfiable] equal [gadget coverable by n*m lines]?"""
    phi.validate()
    n, m = phi.n, phi.m
    if n * m * m + m > 14:
        raise TooLarge("reduction check capped at 14 gadget points")
    g = build_point_cover_instance(phi, seed=seed)
    cover = min_line_cover_bruteforce(g.points, n * m)
    return phi.satisfiable() == (cover is not None)
