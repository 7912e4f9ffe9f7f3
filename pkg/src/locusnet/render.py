"""SVG rendering of networks, diametral pairs and overlay segments."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import List, Optional, Sequence, Tuple

from .geom import SegmentGeom
from .metrics import DiameterReport, DistanceOracle
from .network import LocusPoint, Network, locus_coords

_STYLE = """
.edge { stroke: #555; stroke-width: 1.5; stroke-linecap: round; }
.vertex { fill: #222; }
.diam { stroke: #d62728; stroke-width: 3; fill: none; opacity: 0.75;
        stroke-linecap: round; }
.overlay { stroke: #1f77b4; stroke-width: 2.5; stroke-dasharray: 6 4;
           stroke-linecap: round; }
"""


def pair_polyline(net: Network, oracle: DistanceOracle, p: LocusPoint,
                  q: LocusPoint) -> List[Tuple[float, float]]:
    """Vertex coordinates of a shortest p-q path through the network."""
    cp = locus_coords(net, p).to_floats()
    cq = locus_coords(net, q).to_floats()
    le, lf = net.lengths[p.edge], net.lengths[q.edge]
    xp, yq = float(p.t) * le, float(q.t) * lf
    best = None
    if p.edge == q.edge:
        best = (abs(xp - yq), [cp, cq])
    for u, du in ((p.edge[0], xp), (p.edge[1], le - xp)):
        for w, dw in ((q.edge[0], yq), (q.edge[1], lf - yq)):
            total = du + oracle.d(u, w) + dw
            if best is None or total < best[0] - 1e-12:
                mids = [net.float_coords[v]
                        for v in oracle.vertex_path(u, w)]
                best = (total, [cp] + mids + [cq])
    return best[1]


def _viewport(points: Sequence[Tuple[float, float]], width: float = 640.0):
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    margin = 0.08 * span
    x0, y0 = x0 - margin, y0 - margin
    span += 2 * margin
    scale = width / span

    def tf(p: Tuple[float, float]) -> Tuple[float, float]:
        # flip y so the picture is oriented the usual way up
        return ((p[0] - x0) * scale, width - (p[1] - y0) * scale)

    return tf, width


def render_svg(net: Network, report: Optional[DiameterReport] = None,
               oracle: Optional[DistanceOracle] = None,
               overlay: Sequence[SegmentGeom] = ()) -> str:
    """SVG 1.1 document: edges/vertices, highlighted diametral pair paths,
    and overlay segments in a distinct style class."""
    pts = list(net.float_coords.values())
    for s in overlay:
        pts.extend([s.a.to_floats(), s.b.to_floats()])
    tf, width = _viewport(pts)

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": str(int(width)), "height": str(int(width)),
        "viewBox": f"0 0 {int(width)} {int(width)}",
    })
    style = ET.SubElement(svg, "style")
    style.text = _STYLE

    def fmt(v: float) -> str:
        return f"{v:.3f}"

    for e in net.sorted_edges:
        (x1, y1), (x2, y2) = tf(net.float_coords[e[0]]), tf(net.float_coords[e[1]])
        ET.SubElement(svg, "line", {"class": "edge", "x1": fmt(x1),
                                    "y1": fmt(y1), "x2": fmt(x2), "y2": fmt(y2)})

    if report is not None and oracle is not None:
        for pr in report.pairs:
            poly = [tf(c) for c in pair_polyline(net, oracle, pr.p, pr.q)]
            ET.SubElement(svg, "polyline", {
                "class": "diam",
                "points": " ".join(f"{fmt(x)},{fmt(y)}" for x, y in poly)})

    for s in overlay:
        (x1, y1), (x2, y2) = tf(s.a.to_floats()), tf(s.b.to_floats())
        ET.SubElement(svg, "line", {"class": "overlay", "x1": fmt(x1),
                                    "y1": fmt(y1), "x2": fmt(x2), "y2": fmt(y2)})

    for vid in sorted(net.vertices):
        x, y = tf(net.float_coords[vid])
        ET.SubElement(svg, "circle", {"class": "vertex", "cx": fmt(x),
                                      "cy": fmt(y), "r": "3.5"})

    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(svg, encoding="unicode") + "\n")
