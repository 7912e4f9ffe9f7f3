"""JSON serialization for networks, diameter reports and shortcut sets.

Coordinates travel as strings so exact rational values round-trip: a
fraction whose denominator divides a power of ten is written as a plain
decimal ("0.125"), anything else falls back to "p/q".  Derived numeric
output (diameters, gaps) is formatted with 12 significant digits.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .geom import Point, SegmentGeom
from .metrics import DiameterReport
from .network import (Anchor, LocusPoint, Network, NetworkError, ShortcutSet,
                      edge_id)


class FormatError(NetworkError):
    """Raised when a JSON document does not match the expected schema."""


def fmt_number(x: float) -> float:
    """Round a derived float to 12 significant digits."""
    return float(f"{x:.12g}")


def fraction_to_string(v: Fraction) -> str:
    """Exact decimal string when the denominator allows it, else "p/q"."""
    den = v.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{v.numerator}/{v.denominator}"
    shift = max(twos, fives)
    scaled = v.numerator * 10 ** shift // v.denominator
    if shift == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    whole, frac = digits[:-shift], digits[-shift:]
    return f"{sign}{whole}.{frac}"


def string_to_fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad coordinate string {s!r}: {exc}") from None


def point_to_json(p: Point) -> Dict[str, str]:
    return {"x": fraction_to_string(p.x), "y": fraction_to_string(p.y)}


def point_from_json(obj: Any) -> Point:
    if not isinstance(obj, dict) or "x" not in obj or "y" not in obj:
        raise FormatError(f"point must be an object with x and y, got {obj!r}")
    return Point(string_to_fraction(str(obj["x"])),
                 string_to_fraction(str(obj["y"])))


def network_to_json(net: Network) -> Dict[str, Any]:
    verts = [{"id": vid, **point_to_json(p)}
             for vid, p in sorted(net.vertices.items())]
    return {"vertices": verts, "edges": [list(e) for e in net.sorted_edges]}


def network_from_json(obj: Any) -> Network:
    if not isinstance(obj, dict):
        raise FormatError("network document must be a JSON object")
    for key in ("vertices", "edges"):
        if not isinstance(obj.get(key), list):
            raise FormatError(f"missing or non-list {key!r} field")
    vertices: Dict[int, Point] = {}
    for item in obj["vertices"]:
        if not isinstance(item, dict) or not isinstance(item.get("id"), int):
            raise FormatError(f"bad vertex entry {item!r}")
        vid = item["id"]
        if vid in vertices:
            raise FormatError(f"duplicate vertex id {vid}")
        vertices[vid] = point_from_json(item)
    edges = set()
    for item in obj["edges"]:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, int) for v in item)):
            raise FormatError(f"bad edge entry {item!r}")
        u, v = item
        if u == v:
            raise FormatError(f"self-loop edge [{u}, {v}]")
        for w in (u, v):
            if w not in vertices:
                raise FormatError(f"edge [{u}, {v}] references unknown vertex {w}")
        edges.add(edge_id(u, v))
    return Network(vertices, frozenset(edges))


def load_network(path_or_text: str, *, is_text: bool = False) -> Network:
    """Read a network from a JSON file path (or raw text)."""
    if is_text:
        text = path_or_text
    else:
        with open(path_or_text) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return network_from_json(obj)


def save_network(net: Network, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(network_to_json(net), fh, indent=2)
        fh.write("\n")


def locus_point_to_json(net: Network, p: LocusPoint) -> Dict[str, Any]:
    from .network import locus_coords
    c = locus_coords(net, p)
    return {"edge": list(p.edge), "t": fraction_to_string(Fraction(p.t)),
            "x": fmt_number(float(c.x)), "y": fmt_number(float(c.y))}


def report_to_json(net: Network, rep: DiameterReport) -> Dict[str, Any]:
    return {
        "d": fmt_number(rep.d),
        "pairs": [{"p": locus_point_to_json(net, pr.p),
                   "q": locus_point_to_json(net, pr.q),
                   "kind": pr.kind} for pr in rep.pairs],
    }


def segment_to_json(s: SegmentGeom) -> Dict[str, Any]:
    return {"a": point_to_json(s.a), "b": point_to_json(s.b)}


def segment_from_json(obj: Any) -> SegmentGeom:
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise FormatError(f"segment must have endpoints a and b, got {obj!r}")
    return SegmentGeom(point_from_json(obj["a"]), point_from_json(obj["b"]))


def _anchor_to_json(a: Optional[Anchor]) -> Optional[Dict[str, Any]]:
    if a is None:
        return None
    kind = a.host[0]
    host = list(a.host[1]) if kind == "edge" else a.host[1]
    return {"kind": kind, "host": host, "t": fraction_to_string(Fraction(a.t))}


def _anchor_from_json(obj: Any) -> Optional[Anchor]:
    if obj is None:
        return None
    if not isinstance(obj, dict) or obj.get("kind") not in ("edge", "segment"):
        raise FormatError(f"bad anchor entry {obj!r}")
    t = string_to_fraction(str(obj.get("t", "0")))
    if obj["kind"] == "edge":
        host = obj.get("host")
        if not isinstance(host, list) or len(host) != 2:
            raise FormatError(f"bad anchor host {obj!r}")
        return Anchor(("edge", edge_id(*host)), t)
    if not isinstance(obj.get("host"), int):
        raise FormatError(f"bad anchor host {obj!r}")
    return Anchor(("segment", obj["host"]), t)


def shortcut_set_to_json(ss: ShortcutSet) -> Dict[str, Any]:
    anchors = list(ss.anchors) + [(None, None)] * (len(ss.segments)
                                                   - len(ss.anchors))
    return {"segments": [
        {**segment_to_json(s),
         "anchors": [_anchor_to_json(anchors[i][0]),
                     _anchor_to_json(anchors[i][1])]}
        for i, s in enumerate(ss.segments)]}


def shortcut_set_from_json(obj: Any) -> ShortcutSet:
    if not isinstance(obj, dict) or not isinstance(obj.get("segments"), list):
        raise FormatError("shortcut set document needs a 'segments' list")
    segments: List[SegmentGeom] = []
    anchors = []
    for item in obj["segments"]:
        segments.append(segment_from_json(item))
        pair = item.get("anchors", [None, None]) if isinstance(item, dict) else [None, None]
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"bad anchors entry {item!r}")
        anchors.append((_anchor_from_json(pair[0]), _anchor_from_json(pair[1])))
    return ShortcutSet(tuple(segments), tuple(anchors))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"
