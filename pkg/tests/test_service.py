"""Explorer-service endpoints: library parity, guardrails, headers."""

import math

import pytest
from fastapi.testclient import TestClient

from camring.experiments import mse_monte_carlo
from camring.geometry import CameraArray, Projection, snapshot
from camring.partition import build_partition, partition_to_dict
from camring.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestPartitionEndpoint:
    def test_matches_library(self, client):
        resp = client.get("/api/partition", params={"m": 12, "n": 5, "kind": "orth", "r": 1})
        assert resp.status_code == 200
        doc = resp.json()
        part = build_partition(CameraArray(m=12, r=1.0, n=5))
        assert len(doc["cells"]) == len(part.cells)
        assert doc == partition_to_dict(part)

    def test_single_cell(self, client):
        resp = client.get("/api/partition", params={"m": 2, "n": 1})
        assert resp.status_code == 200
        assert len(resp.json()["cells"]) == 1

    def test_guardrails(self, client):
        resp = client.get("/api/partition", params={"m": 100, "n": 3})
        assert resp.status_code == 400
        body = resp.json()
        assert body["error"][0]["field"] == "m"

    def test_perspective_requires_focal(self, client):
        resp = client.get("/api/partition", params={"m": 8, "n": 3, "kind": "persp"})
        assert resp.status_code == 400

    def test_cache_header(self, client):
        resp = client.get("/api/partition", params={"m": 4, "n": 2})
        assert resp.headers["cache-control"] == "public, max-age=3600"


class TestEstimateEndpoint:
    def test_centroid_probe_zero_error(self, client):
        part = build_partition(CameraArray(m=6, r=1.0, n=3))
        cell = max(part.cells, key=lambda c: c.area)
        resp = client.get(
            "/api/estimate",
            params={"m": 6, "n": 3, "x": cell.centroid.x, "y": cell.centroid.y},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["error"] == 0.0
        assert body["estimate"] == [cell.centroid.x, cell.centroid.y]

    def test_snapshot_matches_library(self, client):
        arr = CameraArray(m=7, r=1.0, n=4, projection=Projection.perspective(1.0))
        p = (0.3, -0.2)
        resp = client.get(
            "/api/estimate",
            params={"m": 7, "n": 4, "kind": "persp", "f": 1.0, "x": p[0], "y": p[1]},
        )
        body = resp.json()
        snap = snapshot(arr, p)
        assert body["snapshot"]["indices"] == list(snap.indices)
        assert body["snapshot"]["centers"] == list(snap.centers)

    def test_bounds_fields(self, client):
        resp = client.get("/api/estimate", params={"m": 10, "n": 3, "x": 0.5, "y": 0.2})
        body = resp.json()
        assert math.isclose(body["bound"]["worst_case"], 8 * math.pi**2 / 100)
        assert math.isclose(body["bound"]["point"], 4 * math.pi**2 * 0.49 / 100)

    def test_central_circle_flag(self, client):
        # n = 3 orthogonal: central radius w/2 = 1/3
        resp = client.get("/api/estimate", params={"m": 8, "n": 3, "x": 0.05, "y": 0.0})
        assert resp.json()["inside_central_circle"] is True
        resp = client.get("/api/estimate", params={"m": 8, "n": 3, "x": 0.6, "y": 0.0})
        assert resp.json()["inside_central_circle"] is False

    def test_probe_outside_disc_rejected(self, client):
        resp = client.get("/api/estimate", params={"m": 8, "n": 3, "x": 1.5, "y": 0.0})
        assert resp.status_code == 400

    def test_lsq_estimator(self, client):
        resp = client.get(
            "/api/estimate",
            params={"m": 8, "n": 3, "x": 0.4, "y": 0.1, "estimator": "lsq"},
        )
        assert resp.status_code == 200
        assert resp.json()["error"] >= 0.0


class TestMseEndpoint:
    def test_matches_library_bitwise(self, client):
        resp = client.get(
            "/api/mse",
            params={"m": 8, "n": 3, "samples": 500, "seed": 7},
        )
        body = resp.json()
        res = mse_monte_carlo(CameraArray(m=8, r=1.0, n=3), samples=500, seed=7)
        assert body["mse"] == res.mse
        assert body["stderr"] == res.stderr

    def test_sample_guardrail(self, client):
        resp = client.get("/api/mse", params={"m": 8, "n": 3, "samples": 1_000_000})
        assert resp.status_code == 400

    def test_seed_changes_result(self, client):
        a = client.get("/api/mse", params={"m": 8, "n": 3, "samples": 500, "seed": 1}).json()
        b = client.get("/api/mse", params={"m": 8, "n": 3, "samples": 500, "seed": 2}).json()
        assert a["mse"] != b["mse"]
        assert math.isclose(a["stderr"], b["stderr"], rel_tol=0.5)


class TestStatelessness:
    def test_identical_requests_identical_bodies(self, client):
        q = {"m": 6, "n": 4, "kind": "persp", "f": 2.0}
        a = client.get("/api/partition", params=q)
        b = client.get("/api/partition", params=q)
        assert a.content == b.content
