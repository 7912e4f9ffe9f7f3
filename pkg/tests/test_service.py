import json

import pytest
from fastapi.testclient import TestClient

from locusnet import jsonio
from locusnet.metrics import continuous_diameter
from locusnet.service import create_app
from fixtures import k4a, pocket1, square1

DIAGONAL = {"p": {"edge": [0, 1], "t": "0"}, "q": {"edge": [1, 2], "t": "1"}}


@pytest.fixture
def client():
    return TestClient(create_app())


def open_session(client, net):
    r = client.post("/session", json=jsonio.network_to_json(net))
    assert r.status_code == 200
    body = r.json()
    return body["id"], body["report"]


class TestSessionLifecycle:
    def test_create_reports_diameter(self, client):
        _, report = open_session(client, square1())
        assert report["d"] == 2.0
        assert report["pairs"]

    def test_malformed_network_400(self, client):
        r = client.post("/session", json={"vertices": "nope"})
        assert r.status_code == 400

    def test_disconnected_network_422(self, client):
        doc = {"vertices": [{"id": 0, "x": "0", "y": "0"},
                            {"id": 1, "x": "1", "y": "0"},
                            {"id": 2, "x": "3", "y": "0"},
                            {"id": 3, "x": "4", "y": "0"}],
               "edges": [[0, 1], [2, 3]]}
        assert client.post("/session", json=doc).status_code == 422

    def test_unknown_session_404(self, client):
        assert client.post("/session/nope/undo").status_code == 404
        assert client.get("/session/nope/geometry").status_code == 404


class TestPreview:
    def test_preview_does_not_commit(self, client):
        sid, report = open_session(client, square1())
        r = client.post(f"/session/{sid}/preview", json=DIAGONAL)
        assert r.status_code == 200
        r2 = client.get(f"/session/{sid}/geometry")
        assert r2.json()["report"] == report

    def test_preview_matches_library(self, client):
        net = pocket1()
        sid, _ = open_session(client, net)
        body = {"p": {"edge": [0, 1], "t": "0.5"},
                "q": {"edge": [0, 3], "t": "0.5"}}
        r = client.post(f"/session/{sid}/preview", json=body)
        assert r.status_code == 200
        from locusnet.geom import SegmentGeom
        from locusnet.network import insert_segment, locus_coords, LocusPoint
        from fractions import Fraction
        seg = SegmentGeom(
            locus_coords(net, LocusPoint((0, 1), Fraction(1, 2))),
            locus_coords(net, LocusPoint((0, 3), Fraction(1, 2))))
        want = continuous_diameter(insert_segment(net, seg)).d
        assert r.json()["report"]["d"] == jsonio.fmt_number(want)

    def test_overlapping_candidate_422(self, client):
        sid, _ = open_session(client, square1())
        body = {"p": {"edge": [0, 1], "t": "0"}, "q": {"edge": [2, 3], "t": "1"}}
        assert client.post(f"/session/{sid}/preview", json=body).status_code == 422

    def test_unknown_edge_422(self, client):
        sid, _ = open_session(client, square1())
        body = {"p": {"edge": [0, 2], "t": "0.5"}, "q": DIAGONAL["q"]}
        assert client.post(f"/session/{sid}/preview", json=body).status_code == 422

    def test_zero_length_candidate_422(self, client):
        sid, _ = open_session(client, square1())
        body = {"p": {"edge": [0, 1], "t": "1"}, "q": {"edge": [1, 2], "t": "0"}}
        assert client.post(f"/session/{sid}/preview", json=body).status_code == 422

    def test_bad_parameter_400(self, client):
        sid, _ = open_session(client, square1())
        body = {"p": {"edge": [0, 1], "t": "zz"}, "q": DIAGONAL["q"]}
        assert client.post(f"/session/{sid}/preview", json=body).status_code == 400

    def test_preview_then_commit_same_value(self, client):
        sid, _ = open_session(client, pocket1())
        body = {"p": {"edge": [0, 1], "t": "0.5"},
                "q": {"edge": [0, 3], "t": "0.5"}}
        prev = client.post(f"/session/{sid}/preview", json=body).json()
        comm = client.post(f"/session/{sid}/commit", json=body).json()
        assert comm["report"]["d"] == prev["report"]["d"]


class TestCommitUndo:
    def test_undo_restores_report_bit_for_bit(self, client):
        sid, report0 = open_session(client, square1())
        client.post(f"/session/{sid}/commit", json=DIAGONAL)
        r = client.post(f"/session/{sid}/undo")
        assert r.status_code == 200
        assert r.json()["report"] == report0

    def test_depth_tracks_commits(self, client):
        sid, _ = open_session(client, square1())
        r1 = client.post(f"/session/{sid}/commit", json=DIAGONAL)
        assert r1.json()["depth"] == 1
        other = {"p": {"edge": [0, 3], "t": "0.5"},
                 "q": {"edge": [1, 2], "t": "0.5"}}
        r2 = client.post(f"/session/{sid}/commit", json=other)
        assert r2.json()["depth"] == 2
        assert client.post(f"/session/{sid}/undo").json()["depth"] == 1

    def test_undo_at_base_422(self, client):
        sid, _ = open_session(client, square1())
        assert client.post(f"/session/{sid}/undo").status_code == 422

    def test_committed_report_matches_recomputation(self, client):
        net = square1()
        sid, _ = open_session(client, net)
        r = client.post(f"/session/{sid}/commit", json=DIAGONAL)
        from locusnet.geom import SegmentGeom, Point
        from locusnet.network import insert_segment
        aug = insert_segment(net, SegmentGeom(Point.of(0, 0), Point.of(1, 1)))
        assert r.json()["report"]["d"] == jsonio.fmt_number(
            continuous_diameter(aug).d)


class TestSearchEndpoint:
    def _run(self, client, net, body):
        sid, _ = open_session(client, net)
        r = client.post(f"/session/{sid}/search", json=body)
        assert r.status_code == 200
        return [json.loads(line) for line in r.text.strip().splitlines()]

    def test_square_streams_and_ends_none(self, client):
        events = self._run(client, square1(), {"res": 0.01})
        assert any("progress" in e for e in events)
        assert events[-1]["verdict"]["status"] == "NONE"

    def test_k4_found(self, client):
        events = self._run(client, k4a(), {})
        verdict = events[-1]["verdict"]
        assert verdict["status"] == "FOUND"
        assert "segment" in verdict

    def test_bad_options_400(self, client):
        sid, _ = open_session(client, square1())
        r = client.post(f"/session/{sid}/search", json={"gap": "big"})
        assert r.status_code == 400

    def test_invalid_gap_reported(self, client):
        sid, _ = open_session(client, square1())
        r = client.post(f"/session/{sid}/search", json={"gap": -1.0})
        events = [json.loads(line) for line in r.text.strip().splitlines()]
        assert "error" in events[-1]


class TestGeometry:
    def test_geometry_shape(self, client):
        net = square1()
        sid, _ = open_session(client, net)
        g = client.get(f"/session/{sid}/geometry").json()
        assert len(g["vertices"]) == 4
        assert len(g["edges"]) == 4
        assert len(g["diametral_polylines"]) == len(
            continuous_diameter(net).pairs)
        for poly in g["diametral_polylines"]:
            assert all(len(pt) == 2 for pt in poly)

    def test_geometry_follows_commit(self, client):
        sid, _ = open_session(client, square1())
        client.post(f"/session/{sid}/commit", json=DIAGONAL)
        g = client.get(f"/session/{sid}/geometry").json()
        assert len(g["edges"]) == 5
