import json

import pytest
from fastapi.testclient import TestClient

from celldrill import report
from celldrill.ingest import IngestCounters, preselect
from celldrill.ndd import CbsBounds, net_data_drilling
from celldrill.service import create_app

from conftest import S1_ROWS, TEST_MNO

BOUNDS = CbsBounds(100, 1000)


@pytest.fixture
def out_dir(tmp_path):
    counters = IngestCounters()
    matrix = preselect(S1_ROWS, 214, [TEST_MNO], counters)
    results = net_data_drilling(matrix, [TEST_MNO], BOUNDS, n_c=2)
    report.write_reports(tmp_path, 214, BOUNDS, 2, counters, [TEST_MNO],
                         results)
    return tmp_path


@pytest.fixture
def client(out_dir):
    return TestClient(create_app(out_dir))


class TestStaticUi:
    def test_ui_served_when_built(self, out_dir, tmp_path):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<!doctype html><title>celldrill</title>")
        client = TestClient(create_app(out_dir, ui_dir=ui))
        resp = client.get("/")
        assert resp.status_code == 200
        assert "celldrill" in resp.text
        # API still reachable alongside the mount
        assert client.get("/api/mnos").status_code == 200

    def test_incomplete_run_dir_rejected(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            create_app(tmp_path / "nothing")


class TestReadEndpoints:
    def test_list_mnos(self, client):
        doc = client.get("/api/mnos").json()
        assert doc["mcc"] == 214
        assert doc["n_c"] == 2
        [block] = doc["mnos"]
        assert block["httac"] == 10

    def test_cells_feature_collection(self, client):
        doc = client.get("/api/mnos/1/cells").json()
        assert doc["type"] == "FeatureCollection"
        assert len(doc["features"]) == 2
        assert doc["features"][0]["properties"]["samples"] == 650

    def test_unknown_mnc_404(self, client):
        assert client.get("/api/mnos/99/cells").status_code == 404
        assert client.get("/api/mnos/99/grid").status_code == 404
        assert client.get("/api/mnos/99/demarcation").status_code == 404

    def test_grid(self, client):
        doc = client.get("/api/mnos/1/grid?rows=2&cols=2").json()
        assert doc["rows"] == 2 and doc["cols"] == 2
        total = sum(sum(row) for row in doc["cell_samples"])
        assert total + doc["overflow_samples"] == 950

    def test_suggest(self, client):
        doc = client.get("/api/mnos/1/suggest?fraction=1.0").json()
        assert doc["source"] == "suggested"
        assert doc["contained_samples"] == 950


class TestDemarcation:
    RECT = {"lat_min": 39.9, "lat_max": 40.2,
            "lon_min": -3.8, "lon_max": -3.5}

    def test_invalid_rect_rejected(self, client):
        bad = dict(self.RECT, lat_min=41.0)  # lat_min > lat_max
        resp = client.post("/api/mnos/1/demarcation",
                           json={"rect": bad, "final": False})
        assert resp.status_code == 422
        assert "latitude" in resp.json()["detail"]

    def test_probe_not_persisted(self, client, out_dir):
        resp = client.post("/api/mnos/1/demarcation",
                           json={"rect": self.RECT, "final": False})
        assert resp.status_code == 200
        d = resp.json()["demarcation"]
        assert d["contained_cells"] == 2
        assert d["contained_samples"] == 950
        assert not (out_dir / "demarcations.json").exists()
        assert client.get("/api/mnos/1/demarcation").json()["demarcation"] \
            is None

    def test_area_matches_library_math(self, client):
        from celldrill.geo import GeoRect, rect_area_km2
        resp = client.post("/api/mnos/1/demarcation",
                           json={"rect": self.RECT, "final": False})
        want = rect_area_km2(GeoRect(**self.RECT))
        assert resp.json()["demarcation"]["area_km2"] == pytest.approx(want)

    def test_final_persists_and_survives_restart(self, client, out_dir):
        resp = client.post(
            "/api/mnos/1/demarcation",
            json={"rect": self.RECT, "final": True, "note": "chosen"})
        assert resp.status_code == 200
        assert resp.json()["persisted"] is True
        stored = json.loads((out_dir / "demarcations.json").read_text())
        assert stored["1"]["contained_samples"] == 950
        assert stored["1"]["note"] == "chosen"
        # a fresh app over the same directory still sees it
        client2 = TestClient(create_app(out_dir))
        doc = client2.get("/api/mnos/1/demarcation").json()["demarcation"]
        assert doc["contained_samples"] == 950
        assert doc["rect"] == self.RECT

    def test_last_writer_wins(self, client):
        # encloses only the merged rank-1 cell at (40.023, -3.677)
        small = {"lat_min": 40.02, "lat_max": 40.03,
                 "lon_min": -3.68, "lon_max": -3.67}
        client.post("/api/mnos/1/demarcation",
                    json={"rect": self.RECT, "final": True})
        client.post("/api/mnos/1/demarcation",
                    json={"rect": small, "final": True})
        doc = client.get("/api/mnos/1/demarcation").json()["demarcation"]
        assert doc["rect"] == small
        assert doc["contained_cells"] == 1
