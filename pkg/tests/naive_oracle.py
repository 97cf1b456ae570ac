"""Brute-force reference for the drill pipeline: list scans and
selection sort only, no hashing or sorting shortcuts, exact rational
arithmetic for merged positions."""

from __future__ import annotations

from fractions import Fraction


def oracle_drill_one(records, mnc, a, b, n_c):
    """Returns a dict mirroring NddResult, or None when nothing survives
    the bounds. `records` are CellRecords (any operator mix)."""
    mine = [r for r in records if r.mnc == mnc]
    kept = [r for r in mine if a <= r.samples <= b]
    removed = len(mine) - len(kept)
    if not kept:
        return None

    # unique (tac, cid) keys by linear scan, first-seen order
    keys = []
    for r in kept:
        if (r.tac, r.cid) not in keys:
            keys.append((r.tac, r.cid))

    cells = {}
    for tac, cid in keys:
        group = [r for r in kept if r.tac == tac and r.cid == cid]
        total = sum(r.samples for r in group)
        if total > 0:
            lat = sum(Fraction(r.samples) * Fraction(r.lat) for r in group) / total
            lon = sum(Fraction(r.samples) * Fraction(r.lon) for r in group) / total
        else:
            lat = sum(Fraction(r.lat) for r in group) / len(group)
            lon = sum(Fraction(r.lon) for r in group) / len(group)
        cells[(tac, cid)] = {
            "samples": total, "lat": float(lat), "lon": float(lon),
            "row_count": len(group),
        }

    tacs = []
    for tac, _ in keys:
        if tac not in [t["tac"] for t in tacs]:
            members = [k for k in keys if k[0] == tac]
            tacs.append({
                "tac": tac,
                "total_samples": sum(cells[k]["samples"] for k in members),
                "cell_count": len(members),
            })
    tacs.sort(key=lambda t: t["tac"])

    httac = None
    best = -1
    for t in tacs:
        if t["total_samples"] > best or (
                t["total_samples"] == best and t["tac"] < httac):
            httac, best = t["tac"], t["total_samples"]

    members = [k for k in keys if k[0] == httac]
    # selection sort by samples desc, cid asc
    ordered = []
    pool = list(members)
    while pool:
        pick = pool[0]
        for k in pool[1:]:
            if (cells[k]["samples"], -k[1]) > (cells[pick]["samples"], -pick[1]):
                pick = k
        ordered.append(pick)
        pool.remove(pick)

    return {
        "mnc": mnc,
        "httac": httac,
        "httac_total_samples": best,
        "top_cells": [
            {"tac": k[0], "cid": k[1], **cells[k]} for k in ordered[:n_c]
        ],
        "tacs": tacs,
        "unique_cell_count": len(keys),
        "rows_in": len(mine),
        "cbs_removed": removed,
        "duplicates_merged": len(kept) - len(keys),
    }


def assert_matches(result, oracle, loc_tol=1e-6):
    """Compare an NddResult against the oracle dict: identifiers and
    counts exactly, merged positions within loc_tol degrees."""
    assert oracle is not None
    assert result.mnc == oracle["mnc"]
    assert result.httac == oracle["httac"]
    assert result.httac_total_samples == oracle["httac_total_samples"]
    assert result.unique_cell_count == oracle["unique_cell_count"]
    assert result.counters.rows_in == oracle["rows_in"]
    assert result.counters.cbs_removed == oracle["cbs_removed"]
    assert result.counters.duplicates_merged == oracle["duplicates_merged"]
    assert [(t.tac, t.total_samples, t.cell_count) for t in result.all_tacs] \
        == [(t["tac"], t["total_samples"], t["cell_count"])
            for t in oracle["tacs"]]
    assert len(result.top_cells) == len(oracle["top_cells"])
    for got, want in zip(result.top_cells, oracle["top_cells"]):
        assert (got.key.tac, got.key.cid) == (want["tac"], want["cid"])
        assert got.samples == want["samples"]
        assert got.row_count == want["row_count"]
        assert abs(got.lat - want["lat"]) < loc_tol
        assert abs(got.lon - want["lon"]) < loc_tol
