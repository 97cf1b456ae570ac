"""The drill-down pipeline: per-operator sample filtering, unique-cell
resolution, tracking-area aggregation, highest-traffic-area selection,
and top-cell ranking.

Every stage is exposed on its own so the composition can be checked
against a brute-force oracle; `net_data_drilling` chains them per
operator, and `StreamDrill` runs the same arithmetic as a single-pass
fold with memory proportional to the number of distinct (TAC, CID) keys.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .ingest import CellRecord, DatabaseMatrix, MnoConfig

# Coordinates are folded in fixed-point (1e-7 degree, the dump's native
# precision) so merged-cell centroids are exact integer sums: identical
# for any row arrival order or parallel split.
_COORD_SCALE = 10**7


class DrillError(Exception):
    pass


@dataclass(slots=True, frozen=True)
class CbsBounds:
    """Inclusive sample-count interval [a, b]; rows outside are dropped
    as under-observed cells or outliers."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < self.a:
            raise ValueError(f"invalid bounds [{self.a}, {self.b}]")


DEFAULT_BOUNDS = CbsBounds(a=100, b=1000)


@dataclass(slots=True, frozen=True)
class CellKey:
    """Joint (TAC, CID) identity; CIDs repeat across tracking areas, the
    pair is what's unique."""

    tac: int
    cid: int


@dataclass(slots=True)
class UniqueCell:
    key: CellKey
    samples: int
    lat: float
    lon: float
    row_count: int


@dataclass(slots=True)
class TacAggregate:
    tac: int
    total_samples: int
    cell_count: int


@dataclass(slots=True)
class DrillCounters:
    rows_in: int = 0
    cbs_removed: int = 0
    duplicates_merged: int = 0


@dataclass(slots=True)
class NddResult:
    mnc: int
    httac: int
    httac_total_samples: int
    top_cells: list[UniqueCell]
    all_tacs: list[TacAggregate]
    unique_cell_count: int
    counters: DrillCounters


@dataclass(slots=True)
class MnoError:
    """Per-operator failure (e.g. nothing left after filtering); other
    operators still produce results."""

    mnc: int
    error: str


def cbs_filter(
    records: Iterable[CellRecord], bounds: CbsBounds
) -> tuple[list[CellRecord], int]:
    """Partition into (kept, removed_count); a row is removed when its
    sample count is strictly below a or strictly above b."""
    kept = []
    removed = 0
    for r in records:
        if r.samples < bounds.a or r.samples > bounds.b:
            removed += 1
        else:
            kept.append(r)
    return kept, removed


class _CellAccum:
    """Fold state for one (TAC, CID) key: integer sums only, so merges
    commute exactly."""

    __slots__ = ("samples", "wlat_fp", "wlon_fp", "lat_fp", "lon_fp", "rows")

    def __init__(self) -> None:
        self.samples = 0
        self.wlat_fp = 0
        self.wlon_fp = 0
        self.lat_fp = 0
        self.lon_fp = 0
        self.rows = 0

    def add(self, samples: int, lat: float, lon: float) -> None:
        lat_fp = round(lat * _COORD_SCALE)
        lon_fp = round(lon * _COORD_SCALE)
        self.samples += samples
        self.wlat_fp += samples * lat_fp
        self.wlon_fp += samples * lon_fp
        self.lat_fp += lat_fp
        self.lon_fp += lon_fp
        self.rows += 1

    def finalize(self, key: CellKey) -> UniqueCell:
        if self.samples > 0:
            lat = self.wlat_fp / (_COORD_SCALE * self.samples)
            lon = self.wlon_fp / (_COORD_SCALE * self.samples)
        else:
            # all duplicate rows carried zero samples: plain mean of fixes
            lat = self.lat_fp / (_COORD_SCALE * self.rows)
            lon = self.lon_fp / (_COORD_SCALE * self.rows)
        return UniqueCell(key=key, samples=self.samples, lat=lat, lon=lon,
                          row_count=self.rows)


def unique_cells(records: Iterable[CellRecord]) -> dict[CellKey, UniqueCell]:
    """Merge duplicate rows of the same (TAC, CID): samples are summed,
    the resolved position is the sample-weighted centroid of the
    duplicate GPS fixes."""
    acc: dict[CellKey, _CellAccum] = {}
    for r in records:
        key = CellKey(r.tac, r.cid)
        slot = acc.get(key)
        if slot is None:
            slot = acc[key] = _CellAccum()
        slot.add(r.samples, r.lat, r.lon)
    return {key: slot.finalize(key) for key, slot in acc.items()}


def aggregate_tacs(cells: dict[CellKey, UniqueCell]) -> list[TacAggregate]:
    """One aggregate per tracking area: total samples and cell count."""
    totals: dict[int, TacAggregate] = {}
    for cell in cells.values():
        agg = totals.get(cell.key.tac)
        if agg is None:
            agg = totals[cell.key.tac] = TacAggregate(cell.key.tac, 0, 0)
        agg.total_samples += cell.samples
        agg.cell_count += 1
    return [totals[t] for t in sorted(totals)]


def select_httac(aggs: list[TacAggregate]) -> tuple[int, int]:
    """Tracking area with the maximum aggregated sample count; ties go
    to the smallest TAC id so reruns are reproducible."""
    if not aggs:
        raise DrillError("no tracking areas after filtering")
    best = max(aggs, key=lambda a: (a.total_samples, -a.tac))
    return best.tac, best.total_samples


def top_cells(
    cells: dict[CellKey, UniqueCell], httac: int, n_c: int
) -> list[UniqueCell]:
    """The n_c highest-sample unique cells inside the chosen tracking
    area, sorted by samples descending (ties: CID ascending)."""
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    members = [c for c in cells.values() if c.key.tac == httac]
    if not members:
        raise DrillError(f"HTTAC {httac} has no cells")
    members.sort(key=lambda c: (-c.samples, c.key.cid))
    return members[:n_c]


def drill_one(
    records: Iterable[CellRecord], mnc: int, bounds: CbsBounds, n_c: int
) -> NddResult | MnoError:
    """Run the full per-operator chain over one record partition."""
    records = list(records)
    counters = DrillCounters(rows_in=len(records))
    kept, counters.cbs_removed = cbs_filter(records, bounds)
    if not kept:
        return MnoError(mnc, "no records within the sample bounds")
    cells = unique_cells(kept)
    counters.duplicates_merged = len(kept) - len(cells)
    aggs = aggregate_tacs(cells)
    httac, total = select_httac(aggs)
    top = top_cells(cells, httac, n_c)
    return NddResult(
        mnc=mnc,
        httac=httac,
        httac_total_samples=total,
        top_cells=top,
        all_tacs=aggs,
        unique_cell_count=len(cells),
        counters=counters,
    )


def net_data_drilling(
    matrix: DatabaseMatrix,
    mnos: list[MnoConfig],
    bounds: CbsBounds = DEFAULT_BOUNDS,
    n_c: int = 100,
    jobs: int = 1,
) -> list[NddResult | MnoError]:
    """Drill every configured operator; partitions are independent, so
    with jobs > 1 they run on a thread pool. Output order always follows
    the config order."""
    if not matrix.records:
        raise DrillError("empty database matrix")
    parts = [(m.mnc, matrix.by_mnc.get(m.mnc, [])) for m in mnos]
    if jobs <= 1:
        return [drill_one(rows, mnc, bounds, n_c) for mnc, rows in parts]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(drill_one, rows, mnc, bounds, n_c)
                   for mnc, rows in parts]
        return [f.result() for f in futures]


class StreamDrill:
    """Single-pass fold over a record stream for dump-scale inputs.

    Holds one integer accumulator per distinct (TAC, CID) per operator;
    rows are never materialized. Produces the same results as
    `net_data_drilling` on the same rows (both use exact integer sums).
    """

    def __init__(self, mnos: list[MnoConfig], bounds: CbsBounds, n_c: int):
        self.mnos = mnos
        self.bounds = bounds
        self.n_c = n_c
        self._cells: dict[int, dict[CellKey, _CellAccum]] = {
            m.mnc: {} for m in mnos}
        self._counters: dict[int, DrillCounters] = {
            m.mnc: DrillCounters() for m in mnos}

    def add(self, rec: CellRecord) -> None:
        counters = self._counters.get(rec.mnc)
        if counters is None:
            return
        counters.rows_in += 1
        if rec.samples < self.bounds.a or rec.samples > self.bounds.b:
            counters.cbs_removed += 1
            return
        cells = self._cells[rec.mnc]
        key = CellKey(rec.tac, rec.cid)
        slot = cells.get(key)
        if slot is None:
            slot = cells[key] = _CellAccum()
        slot.add(rec.samples, rec.lat, rec.lon)

    def consume(self, records: Iterable[CellRecord]) -> None:
        for rec in records:
            self.add(rec)

    def results(self, jobs: int = 1) -> list[NddResult | MnoError]:
        def finalize(mnc: int) -> NddResult | MnoError:
            cells = {k: s.finalize(k) for k, s in self._cells[mnc].items()}
            counters = self._counters[mnc]
            if not cells:
                return MnoError(mnc, "no records within the sample bounds")
            counters.duplicates_merged = (
                counters.rows_in - counters.cbs_removed - len(cells))
            aggs = aggregate_tacs(cells)
            httac, total = select_httac(aggs)
            return NddResult(
                mnc=mnc,
                httac=httac,
                httac_total_samples=total,
                top_cells=top_cells(cells, httac, self.n_c),
                all_tacs=aggs,
                unique_cell_count=len(cells),
                counters=counters,
            )

        order = [m.mnc for m in self.mnos]
        if jobs <= 1:
            return [finalize(mnc) for mnc in order]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(finalize, order))
