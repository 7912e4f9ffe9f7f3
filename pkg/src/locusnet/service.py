"""Local HTTP/JSON service backing the interactive explorer.

Sessions are in-memory.  Commit/undo are serialized per session; previews
are read-only and may run concurrently.  Reported diameters are cached per
state and returned bit-for-bit on undo.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse

from . import jsonio
from .geom import SegmentGeom
from .metrics import DistanceOracle, apsp, continuous_diameter
from .network import (LocusPoint, Network, NetworkError, components,
                      edge_id, insert_segment, locus_coords)
from .render import pair_polyline
from .search import find_shortcut, find_simple_shortcut


@dataclass
class _State:
    net: Network
    oracle: DistanceOracle
    report: Dict[str, Any]  # serialized DiameterReport, returned verbatim
    pairs: list


@dataclass
class SessionState:
    states: List[_State]
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> _State:
        return self.states[-1]


def _make_state(net: Network) -> _State:
    oracle = apsp(net)
    rep = continuous_diameter(net, oracle)
    return _State(net, oracle, jsonio.report_to_json(net, rep), rep.pairs)


def _bad_request(msg: str):
    return HTTPException(status_code=400, detail=msg)


async def _json_body(request: Request) -> Any:
    try:
        return await request.json()
    except Exception:
        raise _bad_request("request body is not valid JSON") from None


def _locus_point(net: Network, obj: Any, label: str) -> LocusPoint:
    if not isinstance(obj, dict) or "edge" not in obj or "t" not in obj:
        raise _bad_request(f"{label} must be an object with 'edge' and 't'")
    e = obj["edge"]
    if (not isinstance(e, list) or len(e) != 2
            or not all(isinstance(v, int) for v in e)):
        raise _bad_request(f"{label}.edge must be a pair of vertex ids")
    eid = edge_id(*e)
    if eid not in net.edges:
        raise HTTPException(status_code=422, detail=f"unknown edge {e}")
    try:
        t = Fraction(str(obj["t"]))
    except (ValueError, ZeroDivisionError):
        raise _bad_request(f"{label}.t is not a number") from None
    if not (0 <= t <= 1):
        raise HTTPException(status_code=422,
                            detail=f"{label}.t={float(t)} outside [0, 1]")
    return LocusPoint(eid, t)


def _candidate_segment(net: Network, body: Any) -> SegmentGeom:
    p = _locus_point(net, body.get("p") if isinstance(body, dict) else None, "p")
    q = _locus_point(net, body.get("q") if isinstance(body, dict) else None, "q")
    a, b = locus_coords(net, p), locus_coords(net, q)
    if a == b:
        raise HTTPException(status_code=422, detail="candidate has zero length")
    return SegmentGeom(a, b)


def create_app() -> FastAPI:
    app = FastAPI(title="locusnet service")
    sessions: Dict[str, SessionState] = {}

    def get_session(sid: str) -> SessionState:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return s

    @app.post("/session")
    async def create_session(request: Request):
        body = await _json_body(request)
        try:
            net = jsonio.network_from_json(body)
        except NetworkError as exc:
            raise _bad_request(str(exc)) from None
        if len(components(net)) != 1:
            raise HTTPException(status_code=422,
                                detail="network must be connected")
        sid = uuid.uuid4().hex
        sessions[sid] = SessionState([_make_state(net)])
        return {"id": sid, "report": sessions[sid].current.report}

    @app.post("/session/{sid}/preview")
    async def preview(sid: str, request: Request):
        state = get_session(sid).current
        seg = _candidate_segment(state.net, await _json_body(request))
        try:
            aug = insert_segment(state.net, seg)
        except NetworkError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        rep = continuous_diameter(aug)
        return {"report": jsonio.report_to_json(aug, rep)}

    @app.post("/session/{sid}/commit")
    async def commit(sid: str, request: Request):
        session = get_session(sid)
        body = await _json_body(request)
        with session.lock:
            seg = _candidate_segment(session.current.net, body)
            try:
                aug = insert_segment(session.current.net, seg)
            except NetworkError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            session.states.append(_make_state(aug))
            return {"depth": len(session.states) - 1,
                    "report": session.current.report}

    @app.post("/session/{sid}/undo")
    async def undo(sid: str):
        session = get_session(sid)
        with session.lock:
            if len(session.states) == 1:
                raise HTTPException(status_code=422, detail="nothing to undo")
            session.states.pop()
            return {"depth": len(session.states) - 1,
                    "report": session.current.report}

    @app.post("/session/{sid}/search")
    async def search(sid: str, request: Request):
        state = get_session(sid).current
        body = await _json_body(request)
        if not isinstance(body, dict):
            raise _bad_request("search options must be a JSON object")
        gap = body.get("gap")
        res = body.get("res")
        simple = bool(body.get("simple", False))
        for name, v in (("gap", gap), ("res", res)):
            if v is not None and not isinstance(v, (int, float)):
                raise _bad_request(f"{name} must be a number")

        events: "queue.Queue" = queue.Queue()

        def run():
            fn = find_simple_shortcut if simple else find_shortcut
            try:
                r = fn(state.net, gap=gap, resolution=res,
                       progress=lambda ev: events.put({"progress": ev}))
                final = {"status": r.status,
                         "cells_processed": r.cells_processed}
                if r.status == "FOUND":
                    final["segment"] = jsonio.segment_to_json(r.segment)
                    final["new_d"] = jsonio.fmt_number(r.new_d)
                else:
                    final["certified_gap"] = jsonio.fmt_number(r.certified_gap)
                events.put({"verdict": final})
            except (NetworkError, ValueError) as exc:
                events.put({"error": str(exc)})
            events.put(None)

        threading.Thread(target=run, daemon=True).start()

        def stream():
            while True:
                item = events.get()
                if item is None:
                    break
                yield json.dumps(item) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.get("/session/{sid}/geometry")
    async def geometry(sid: str):
        state = get_session(sid).current
        net = state.net
        verts = [{"id": vid, **jsonio.point_to_json(p)}
                 for vid, p in sorted(net.vertices.items())]
        polys = []
        for pr in state.pairs:
            pts = pair_polyline(net, state.oracle, pr.p, pr.q)
            polys.append([[jsonio.fmt_number(x), jsonio.fmt_number(y)]
                          for x, y in pts])
        return {"vertices": verts,
                "edges": [list(e) for e in net.sorted_edges],
                "diametral_polylines": polys,
                "report": state.report}

    return app
