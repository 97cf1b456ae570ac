"""Serialization of pipeline outputs: versioned JSON results, GeoJSON
maps, per-operator CSVs, and the human-readable summary.

Everything written here is deterministic: keys sorted, features ordered
by rank, LF line endings. Rerunning on the same inputs rewrites
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .geo import DemarcationRect, GeoRect
from .ingest import IngestCounters, MnoConfig
from .ndd import CbsBounds, MnoError, NddResult, UniqueCell

RESULT_SCHEMA_VERSION = 1


class ReportError(Exception):
    pass


def _cell_dict(cell: UniqueCell, rank: int) -> dict:
    return {
        "rank": rank,
        "tac": cell.key.tac,
        "cid": cell.key.cid,
        "lat": cell.lat,
        "lon": cell.lon,
        "samples": cell.samples,
        "row_count": cell.row_count,
    }


def rect_dict(rect: GeoRect) -> dict:
    return {
        "lat_min": rect.lat_min,
        "lat_max": rect.lat_max,
        "lon_min": rect.lon_min,
        "lon_max": rect.lon_max,
    }


def demarcation_dict(d: DemarcationRect) -> dict:
    return {
        "mnc": d.mnc,
        "rect": rect_dict(d.rect),
        "area_km2": d.area_km2,
        "source": d.source,
        "contained_cells": d.contained_cells,
        "contained_samples": d.contained_samples,
    }


def result_document(
    mcc: int,
    bounds: CbsBounds,
    n_c: int,
    results: list[NddResult | MnoError],
) -> dict:
    """The versioned machine-readable drill result consumed by the
    report files, the HTTP service, and the tests."""
    out: dict = {
        "version": RESULT_SCHEMA_VERSION,
        "mcc": mcc,
        "bounds": {"a": bounds.a, "b": bounds.b},
        "n_c": n_c,
        "results": [],
        "errors": [],
    }
    for r in results:
        if isinstance(r, MnoError):
            out["errors"].append({"mnc": r.mnc, "error": r.error})
            continue
        out["results"].append({
            "mnc": r.mnc,
            "httac": r.httac,
            "httac_total_samples": r.httac_total_samples,
            "unique_cell_count": r.unique_cell_count,
            "counters": {
                "rows_in": r.counters.rows_in,
                "cbs_removed": r.counters.cbs_removed,
                "duplicates_merged": r.counters.duplicates_merged,
            },
            "top_cells": [_cell_dict(c, i + 1)
                          for i, c in enumerate(r.top_cells)],
            "tacs": [{"tac": t.tac, "total_samples": t.total_samples,
                      "cell_count": t.cell_count} for t in r.all_tacs],
        })
    return out


def to_geojson(
    result: NddResult, demarcation: DemarcationRect | None = None
) -> dict:
    """FeatureCollection of one Point per top cell plus, if present, the
    demarcation Polygon. GeoJSON wants lon,lat coordinate order."""
    features = []
    for i, cell in enumerate(result.top_cells):
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point",
                         "coordinates": [cell.lon, cell.lat]},
            "properties": {"tac": cell.key.tac, "cid": cell.key.cid,
                           "samples": cell.samples, "rank": i + 1},
        })
    if demarcation is not None:
        r = demarcation.rect
        ring = [[r.lon_min, r.lat_min], [r.lon_max, r.lat_min],
                [r.lon_max, r.lat_max], [r.lon_min, r.lat_max],
                [r.lon_min, r.lat_min]]
        features.append({
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": [ring]},
            "properties": {"area_km2": demarcation.area_km2,
                           "source": demarcation.source},
        })
    return {"type": "FeatureCollection", "features": features}


def summarize(
    counters: IngestCounters,
    mnos: list[MnoConfig],
    results: list[NddResult | MnoError],
    demarcations: dict[int, DemarcationRect] | None = None,
) -> dict:
    """One block per operator, in config order, cross-checking that
    counter and result operator sets line up."""
    if not results:
        raise ReportError("no drill results to summarize")
    by_mnc: dict[int, NddResult | MnoError] = {r.mnc: r for r in results}
    if set(by_mnc) != {m.mnc for m in mnos}:
        raise ReportError(
            f"operator sets differ: results {sorted(by_mnc)} vs "
            f"config {sorted(m.mnc for m in mnos)}")
    demarcations = demarcations or {}
    blocks = []
    for cfg in mnos:
        r = by_mnc[cfg.mnc]
        block: dict = {
            "label": cfg.label,
            "mnc": cfg.mnc,
            "market_share": cfg.market_share,
            "samples_by_rat": dict(sorted(
                counters.samples_by_mno_rat.get(cfg.mnc, {}).items())),
            "rows_retained": counters.retained_by_mno.get(cfg.mnc, 0),
        }
        if isinstance(r, MnoError):
            block["error"] = r.error
        else:
            block.update({
                "rows_post_cbs":
                    r.counters.rows_in - r.counters.cbs_removed,
                "unique_cell_count": r.unique_cell_count,
                "httac": r.httac,
                "httac_total_samples": r.httac_total_samples,
                "top_cell_count": len(r.top_cells),
            })
        d = demarcations.get(cfg.mnc)
        block["demarcation"] = demarcation_dict(d) if d else None
        blocks.append(block)
    return {"mnos": blocks}


def summary_text(summary: dict) -> str:
    """Human-readable rendering of the summary blocks; areas at two
    decimals, counts verbatim."""
    lines = []
    for b in summary["mnos"]:
        lines.append(f"{b['label']} (MNC {b['mnc']}, "
                     f"market share {b['market_share'] * 100:.2f}%)")
        rats = b["samples_by_rat"]
        if rats:
            acc = ", ".join(f"{rat}: {n}" for rat, n in rats.items())
            lines.append(f"  accumulative samples  {acc}")
        if "error" in b:
            lines.append(f"  drill failed: {b['error']}")
        else:
            lines.append(f"  rows within sample bounds  {b['rows_post_cbs']}")
            lines.append(f"  unique cells               {b['unique_cell_count']}")
            lines.append(f"  highest-traffic TAC        {b['httac']} "
                         f"({b['httac_total_samples']} samples)")
            lines.append(f"  top cells selected         {b['top_cell_count']}")
        d = b["demarcation"]
        if d:
            lines.append(f"  demarcated area            {d['area_km2']:.2f} km2 "
                         f"({d['source']}, {d['contained_cells']} cells, "
                         f"{d['contained_samples']} samples)")
        lines.append("")
    return "\n".join(lines)


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def write_reports(
    out_dir: Path,
    mcc: int,
    bounds: CbsBounds,
    n_c: int,
    counters: IngestCounters,
    mnos: list[MnoConfig],
    results: list[NddResult | MnoError],
    demarcations: dict[int, DemarcationRect] | None = None,
) -> None:
    """Write the full report set under `out_dir`."""
    out_dir.mkdir(parents=True, exist_ok=True)
    demarcations = demarcations or {}
    _write_json(out_dir / "ndd_result.json",
                result_document(mcc, bounds, n_c, results))
    _write_json(out_dir / "ingest_counters.json", counters.as_dict())
    summary = summarize(counters, mnos, results, demarcations)
    _write_json(out_dir / "summary.json", summary)
    (out_dir / "summary.txt").write_text(summary_text(summary),
                                         encoding="utf-8")
    for r in results:
        if isinstance(r, MnoError):
            continue
        _write_json(out_dir / f"mno_{r.mnc}.geojson",
                    to_geojson(r, demarcations.get(r.mnc)))
        csv_lines = ["rank,tac,cid,lat,lon,samples"]
        for i, c in enumerate(r.top_cells):
            csv_lines.append(f"{i + 1},{c.key.tac},{c.key.cid},"
                             f"{c.lat!r},{c.lon!r},{c.samples}")
        (out_dir / f"mno_{r.mnc}_top_cells.csv").write_text(
            "\n".join(csv_lines) + "\n", encoding="utf-8")
