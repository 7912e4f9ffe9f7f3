"""Command-line front door: diameter reports, shortcut construction and
search, SVG rendering, and the local HTTP service.

Every command reads Network JSON from a file path (or "-" for stdin) and
writes a JSON document to stdout.  Errors become machine-readable objects;
exit codes: 0 ok, 1 user error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import jsonio
from .augment import (AugmentError, admits_shortcut_set, epsilon_shortcut_set,
                      fan_shortcut_set, k4_shortcut, polygon_scn,
                      verify_shortcut_set)
from .gadgets import CnfFormula, GadgetError, build_point_cover_instance
from .metrics import apsp, continuous_diameter
from .network import Network, NetworkError, ShortcutSet, components
from .render import render_svg
from .search import (find_shortcut, find_simple_shortcut,
                     scn_is_one_disconnected)


class UserError(Exception):
    pass


def _read_network(path: str) -> Network:
    if path == "-":
        return jsonio.load_network(sys.stdin.read(), is_text=True)
    try:
        return jsonio.load_network(path)
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc}") from None


def _emit(obj: Any) -> None:
    sys.stdout.write(jsonio.dumps(obj))


def cmd_diameter(args) -> None:
    net = _read_network(args.file)
    rep = continuous_diameter(net)
    _emit(jsonio.report_to_json(net, rep))


def cmd_check(args) -> None:
    net = _read_network(args.file)
    v = admits_shortcut_set(net)
    _emit({"admits": v.admits,
           "witness": list(v.witness) if v.witness else None,
           "hull_diam": jsonio.fmt_number(v.hull_diam),
           "locus_diam": jsonio.fmt_number(v.locus_diam)})


def _emit_shortcut_set(net: Network, ss: ShortcutSet) -> None:
    summary = verify_shortcut_set(net, ss)
    _emit({**jsonio.shortcut_set_to_json(ss),
           "verified": bool(summary["is_shortcut_set"]),
           "old_d": jsonio.fmt_number(summary["old_d"]),
           "new_d": jsonio.fmt_number(summary["new_d"])})


def cmd_fan(args) -> None:
    net = _read_network(args.file)
    _emit_shortcut_set(net, fan_shortcut_set(net))


def cmd_epsilon(args) -> None:
    net = _read_network(args.file)
    _emit_shortcut_set(net, epsilon_shortcut_set(net, args.eps))


def cmd_shortcut(args) -> None:
    net = _read_network(args.file)
    fn = find_simple_shortcut if args.simple else find_shortcut
    r = fn(net, gap=args.gap, resolution=args.res)
    out = {"status": r.status, "cells_processed": r.cells_processed}
    if r.status == "FOUND":
        out["segment"] = jsonio.segment_to_json(r.segment)
        out["new_d"] = jsonio.fmt_number(r.new_d)
    else:
        out["certified_gap"] = jsonio.fmt_number(r.certified_gap)
    _emit(out)


def cmd_scn1(args) -> None:
    net = _read_network(args.file)
    out = scn_is_one_disconnected(net)
    _emit({"yes": out["yes"],
           "witness_segment": (jsonio.segment_to_json(out["witness_segment"])
                               if out["witness_segment"] else None),
           "witness_pieces": [jsonio.segment_to_json(s)
                              for s in out.get("witness_pieces", [])]})


def cmd_polygon(args) -> None:
    net = _read_network(args.file)
    out = polygon_scn(net)
    summary = verify_shortcut_set(net, out["set"])
    _emit({"scn": out["scn"], **jsonio.shortcut_set_to_json(out["set"]),
           "verified": bool(summary["is_shortcut_set"]),
           "old_d": jsonio.fmt_number(summary["old_d"]),
           "new_d": jsonio.fmt_number(summary["new_d"])})


def cmd_k4(args) -> None:
    net = _read_network(args.file)
    seg = k4_shortcut(net)
    _emit_shortcut_set(net, ShortcutSet((seg,)))


def _parse_dimacs(text: str) -> CnfFormula:
    n = None
    clauses = []
    current = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise UserError(f"bad DIMACS header: {line!r}")
            n = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if n is None:
        raise UserError("missing 'p cnf' header")
    return CnfFormula(n, tuple(clauses))


def cmd_gen3sat(args) -> None:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UserError(f"cannot read {args.file}: {exc}") from None
    phi = _parse_dimacs(text)
    g = build_point_cover_instance(phi, seed=args.seed)
    # the point set travels as a vertices-only Network document; the
    # declared cover lines and line budget ride along as extra fields
    net = Network({i: p for i, p in enumerate(g.points)}, frozenset())
    doc = jsonio.network_to_json(net)
    doc["budget"] = phi.n * phi.m
    doc["lines"] = [{"key": list(key),
                     "points": sorted(g.line_points[key])}
                    for key in sorted(g.lines)]
    _emit(doc)


def cmd_render(args) -> None:
    net = _read_network(args.file)
    overlay = []
    if args.overlay:
        with open(args.overlay) as fh:
            ss = jsonio.shortcut_set_from_json(json.load(fh))
        overlay = list(ss.segments)
    if len(components(net)) == 1:
        oracle = apsp(net)
        rep = continuous_diameter(net, oracle)
        svg = render_svg(net, rep, oracle, overlay)
    else:
        svg = render_svg(net, overlay=overlay)
    with open(args.out, "w") as fh:
        fh.write(svg)
    _emit({"written": args.out})


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host="127.0.0.1", port=args.port,
                log_level="warning")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="locusnet",
        description="Continuous-diameter analysis and shortcut search for "
                    "plane Euclidean networks")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    add("diameter", cmd_diameter,
        help="continuous diameter report").add_argument("file")
    add("check", cmd_check,
        help="does the network admit a shortcut set?").add_argument("file")
    add("fan", cmd_fan,
        help="fan-construction shortcut set").add_argument("file")
    p = add("epsilon", cmd_epsilon, help="cover-based shortcut set reaching "
                                         "within eps of the hull diameter")
    p.add_argument("file")
    p.add_argument("--eps", type=float, required=True)
    p = add("shortcut", cmd_shortcut, help="certified single-shortcut search")
    p.add_argument("file")
    p.add_argument("--gap", type=float, default=None)
    p.add_argument("--res", type=float, default=None)
    p.add_argument("--simple", action="store_true")
    add("scn1", cmd_scn1, help="one-segment reconnection of a disconnected "
                               "network").add_argument("file")
    add("polygon", cmd_polygon,
        help="shortcut number of a polygon cycle").add_argument("file")
    add("k4", cmd_k4, help="single shortcut for a plane K4").add_argument("file")
    p = add("gen3sat", cmd_gen3sat,
            help="point-cover instance from a DIMACS 3-CNF file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p = add("render", cmd_render, help="render the network to SVG")
    p.add_argument("file")
    p.add_argument("--overlay", default=None)
    p.add_argument("-o", "--out", required=True)
    p = add("serve", cmd_serve, help="start the local HTTP service")
    p.add_argument("--port", type=int, default=8787)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
        return 0
    except (UserError, NetworkError, AugmentError, GadgetError,
            ValueError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    except Exception as exc:  # noqa: BLE001 - internal failure boundary
        _emit({"error": {"type": "InternalError",
                         "detail": f"{type(exc).__name__}: {exc}"}})
        return 2


if __name__ == "__main__":
    sys.exit(main())
