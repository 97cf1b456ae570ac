"""HTTP service over a completed drill output directory.

Serves the drill results read-only and hosts the demarcation workflow:
the browser posts candidate rectangles, the server answers with the
area / contained-traffic numbers (the server is the single source of
truth for geometry math), and flagged-final rectangles are persisted to
a JSON store that survives restarts.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import geo, report
from .ndd import CellKey, UniqueCell


class RectPayload(BaseModel):
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float


class DemarcationRequest(BaseModel):
    rect: RectPayload
    final: bool = False
    note: str = ""


class DemarcationStore:
    """One active demarcation per operator, persisted as a single JSON
    file; writes are serialized and atomic (write temp + rename)."""

    def __init__(self, path: Path):
        self.path = path
        self._lock = threading.Lock()

    def load(self) -> dict[str, dict]:
        if not self.path.exists():
            return {}
        return json.loads(self.path.read_text(encoding="utf-8"))

    def get(self, mnc: int) -> dict | None:
        return self.load().get(str(mnc))

    def put(self, mnc: int, entry: dict) -> None:
        with self._lock:
            data = self.load()
            data[str(mnc)] = entry
            fd, tmp = tempfile.mkstemp(dir=self.path.parent,
                                       prefix=".demarcations-")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(data, f, indent=2, sort_keys=True)
                    f.write("\n")
                os.replace(tmp, self.path)
            except OSError:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


class DrillOutputs:
    """Immutable view of one drill run's result files."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        result_path = out_dir / "ndd_result.json"
        summary_path = out_dir / "summary.json"
        if not result_path.exists() or not summary_path.exists():
            raise FileNotFoundError(
                f"{out_dir} does not contain a completed drill run")
        self.result = json.loads(result_path.read_text(encoding="utf-8"))
        self.summary = json.loads(summary_path.read_text(encoding="utf-8"))
        self.cells: dict[int, list[UniqueCell]] = {}
        for block in self.result["results"]:
            self.cells[block["mnc"]] = [
                UniqueCell(key=CellKey(c["tac"], c["cid"]),
                           samples=c["samples"], lat=c["lat"], lon=c["lon"],
                           row_count=c["row_count"])
                for c in block["top_cells"]
            ]

    def cells_for(self, mnc: int) -> list[UniqueCell]:
        if mnc not in self.cells:
            raise HTTPException(status_code=404, detail=f"unknown MNC {mnc}")
        return self.cells[mnc]


def create_app(out_dir: Path, ui_dir: Path | None = None) -> FastAPI:
    outputs = DrillOutputs(out_dir)
    store = DemarcationStore(out_dir / "demarcations.json")
    app = FastAPI(title="celldrill")

    @app.get("/api/mnos")
    def list_mnos() -> dict:
        return {"mnos": outputs.summary["mnos"],
                "bounds": outputs.result["bounds"],
                "n_c": outputs.result["n_c"],
                "mcc": outputs.result["mcc"]}

    @app.get("/api/mnos/{mnc}/cells")
    def mno_cells(mnc: int) -> dict:
        cells = outputs.cells_for(mnc)
        for block in outputs.result["results"]:
            if block["mnc"] == mnc:
                result = block
                break
        # rebuild the FeatureCollection from the result document
        features = [{
            "type": "Feature",
            "geometry": {"type": "Point",
                         "coordinates": [c["lon"], c["lat"]]},
            "properties": {"tac": c["tac"], "cid": c["cid"],
                           "samples": c["samples"], "rank": c["rank"]},
        } for c in result["top_cells"]]
        return {"type": "FeatureCollection", "features": features}

    @app.get("/api/mnos/{mnc}/grid")
    def mno_grid(mnc: int, rows: int = Query(20, ge=1, le=500),
                 cols: int = Query(20, ge=1, le=500)) -> dict:
        cells = outputs.cells_for(mnc)
        if not cells:
            raise HTTPException(status_code=404,
                                detail=f"MNC {mnc} has no cells")
        rect = geo.bounding_box(cells)
        grid = geo.density_grid(cells, rect, rows, cols)
        return {
            "rect": report.rect_dict(rect),
            "rows": grid.rows,
            "cols": grid.cols,
            "cell_samples": grid.cell_samples,
            "overflow_samples": grid.overflow_samples,
            "binned_cells": grid.binned_cells,
        }

    @app.get("/api/mnos/{mnc}/suggest")
    def mno_suggest(mnc: int,
                    fraction: float = Query(0.8, gt=0.0, le=1.0)) -> dict:
        cells = outputs.cells_for(mnc)
        if not cells:
            raise HTTPException(status_code=404,
                                detail=f"MNC {mnc} has no cells")
        return report.demarcation_dict(
            geo.suggest_5gda(cells, fraction, mnc=mnc))

    @app.get("/api/mnos/{mnc}/demarcation")
    def get_demarcation(mnc: int) -> dict:
        outputs.cells_for(mnc)  # 404 on unknown operator
        return {"demarcation": store.get(mnc)}

    @app.post("/api/mnos/{mnc}/demarcation")
    def post_demarcation(mnc: int, body: DemarcationRequest) -> dict:
        cells = outputs.cells_for(mnc)
        try:
            rect = geo.GeoRect(lat_min=body.rect.lat_min,
                               lat_max=body.rect.lat_max,
                               lon_min=body.rect.lon_min,
                               lon_max=body.rect.lon_max)
        except geo.GeoError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        demarcation = geo.demarcate(mnc, rect, cells, source="manual")
        entry = report.demarcation_dict(demarcation)
        if body.final:
            stored = dict(entry)
            stored["note"] = body.note
            stored["timestamp"] = time.strftime(
                "%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            store.put(mnc, stored)
        return {"demarcation": entry, "persisted": body.final}

    if ui_dir is not None and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
