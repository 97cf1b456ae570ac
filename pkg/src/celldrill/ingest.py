"""OpenCellID CSV ingestion and operator pre-selection.

Reads cell-tower dump files in the public OpenCellID column layout
(radio,mcc,net,area,cell,unit,lon,lat,range,samples,changeable,created,
updated,averageSignal), validates rows into cell records, and keeps only
the configured country / operators / radio technologies.
"""

from __future__ import annotations

import csv
import gzip
import io
import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

# Radio technologies tracked by name; anything else is carried verbatim
# and only ever matches an allowlist that names it explicitly.
KNOWN_RATS = ("GSM", "UMTS", "LTE")


class IngestError(Exception):
    """Fatal ingest failure (unreadable stream, empty selection)."""


class EmptySelectionError(IngestError):
    """Pre-selection retained zero records; the drill stage is undefined."""


@dataclass(slots=True, frozen=True)
class CsvSchema:
    """Column positions of the input dump. Defaults to the public
    OpenCellID order; override positions for non-standard files."""

    radio: int = 0
    mcc: int = 1
    net: int = 2
    area: int = 3
    cell: int = 4
    lon: int = 6
    lat: int = 7
    range: int = 8
    samples: int = 9
    n_columns: int = 14
    has_header: bool = True


@dataclass(slots=True)
class RawRow:
    radio: str
    mcc: int
    net: int
    area: int
    cell: int
    lon: float
    lat: float
    range: int
    samples: int


@dataclass(slots=True)
class RowError:
    line_number: int
    reason: str
    detail: str


@dataclass(slots=True, frozen=True)
class CellRecord:
    """One validated data point: (rat, mnc, tac, cid, location, samples)."""

    rat: str
    mnc: int
    tac: int
    cid: int
    lat: float
    lon: float
    samples: int


@dataclass(slots=True, frozen=True)
class MnoConfig:
    mnc: int
    label: str
    market_share: float
    allowed_rats: frozenset[str]

    def __post_init__(self) -> None:
        if not 0.0 <= self.market_share <= 1.0:
            raise ValueError(f"market_share out of [0,1]: {self.market_share}")


@dataclass(slots=True)
class DatabaseMatrix:
    """Validated, pre-selected records for one country, indexed by operator."""

    mcc: int
    records: list[CellRecord]
    by_mnc: dict[int, list[CellRecord]]

    def __len__(self) -> int:
        return len(self.records)


@dataclass(slots=True)
class IngestCounters:
    """Machine-readable ingest report: row accounting plus the
    accumulative per-operator per-RAT sample totals."""

    rows_read: int = 0
    rows_parsed: int = 0
    rows_valid: int = 0
    rows_retained: int = 0
    mcc_skipped: int = 0
    rejected: Counter = field(default_factory=Counter)
    # mnc -> rat -> total samples, over every valid row of that operator
    # regardless of the RAT allowlist (feeds the accumulative summary).
    samples_by_mno_rat: dict[int, dict[str, int]] = field(default_factory=dict)
    retained_by_mno: dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_parsed": self.rows_parsed,
            "rows_valid": self.rows_valid,
            "rows_retained": self.rows_retained,
            "mcc_skipped": self.mcc_skipped,
            "rejected": dict(sorted(self.rejected.items())),
            "samples_by_mno_rat": {
                str(mnc): dict(sorted(rats.items()))
                for mnc, rats in sorted(self.samples_by_mno_rat.items())
            },
            "retained_by_mno": {
                str(mnc): n for mnc, n in sorted(self.retained_by_mno.items())
            },
        }


def normalize_rat(radio: str) -> str:
    """Case-insensitive match against the known RAT names; unknown
    strings are kept as-is (crowdsourced data is noisy)."""
    up = radio.strip().upper()
    return up if up in KNOWN_RATS else radio.strip()


def open_input(path: str) -> IO[str]:
    """Open a plain or gzip CSV file for text reading; '-' means stdin."""
    if path == "-":
        return sys.stdin
    try:
        f = open(path, "rb")
        magic = f.read(2)
        f.seek(0)
        if magic == b"\x1f\x8b":
            return io.TextIOWrapper(gzip.GzipFile(fileobj=f), encoding="utf-8")
        return io.TextIOWrapper(f, encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot open input {path!r}: {exc}") from exc


def parse_csv(
    stream: IO[str], schema: CsvSchema = CsvSchema()
) -> Iterator[tuple[int, RawRow | RowError]]:
    """Stream the dump line by line, yielding (line_number, RawRow) for
    well-formed rows and (line_number, RowError) otherwise.

    Never aborts on a bad line; order is preserved; memory is bounded.
    """
    reader = csv.reader(stream)
    first = schema.has_header
    try:
        for fields in reader:
            line_number = reader.line_num
            if first:
                first = False
                continue
            if not fields:
                continue
            if len(fields) != schema.n_columns:
                yield line_number, RowError(
                    line_number, "field_count",
                    f"expected {schema.n_columns} fields, got {len(fields)}")
                continue
            try:
                row = RawRow(
                    radio=fields[schema.radio],
                    mcc=int(fields[schema.mcc]),
                    net=int(fields[schema.net]),
                    area=int(fields[schema.area]),
                    cell=int(fields[schema.cell]),
                    lon=float(fields[schema.lon]),
                    lat=float(fields[schema.lat]),
                    range=int(fields[schema.range]),
                    samples=int(fields[schema.samples]),
                )
            except ValueError as exc:
                yield line_number, RowError(line_number, "non_numeric", str(exc))
                continue
            yield line_number, row
    except csv.Error as exc:
        raise IngestError(f"unreadable CSV stream: {exc}") from exc


class ValidationError(ValueError):
    def __init__(self, reason: str, detail: str):
        super().__init__(f"{reason}: {detail}")
        self.reason = reason
        self.detail = detail


def validate(row: RawRow) -> CellRecord:
    """Check coordinate and count invariants; raises ValidationError
    naming the violated invariant."""
    if not -90.0 <= row.lat <= 90.0:
        raise ValidationError("lat_out_of_range", f"lat={row.lat}")
    if not -180.0 <= row.lon <= 180.0:
        raise ValidationError("lon_out_of_range", f"lon={row.lon}")
    if row.samples < 0:
        raise ValidationError("negative_samples", f"samples={row.samples}")
    if row.area < 0:
        raise ValidationError("negative_tac", f"tac={row.area}")
    if row.cell < 0:
        raise ValidationError("negative_cid", f"cid={row.cell}")
    return CellRecord(
        rat=normalize_rat(row.radio),
        mnc=row.net,
        tac=row.area,
        cid=row.cell,
        lat=row.lat,
        lon=row.lon,
        samples=row.samples,
    )


def stream_records(
    stream: IO[str],
    mcc: int,
    schema: CsvSchema = CsvSchema(),
    counters: IngestCounters | None = None,
) -> Iterator[CellRecord]:
    """parse -> country gate -> validate, as one bounded-memory pass.

    The MCC gate runs on the raw row (the validated record drops the
    country code, constant after this point). Bad rows are counted in
    `counters` and skipped.
    """
    c = counters if counters is not None else IngestCounters()
    for _, item in parse_csv(stream, schema):
        c.rows_read += 1
        if isinstance(item, RowError):
            c.rejected[item.reason] += 1
            continue
        c.rows_parsed += 1
        if item.mcc != mcc:
            c.mcc_skipped += 1
            continue
        try:
            rec = validate(item)
        except ValidationError as exc:
            c.rejected[exc.reason] += 1
            continue
        c.rows_valid += 1
        yield rec


def preselect_stream(
    records: Iterable[CellRecord],
    mnos: list[MnoConfig],
    counters: IngestCounters,
) -> Iterator[CellRecord]:
    """Yield the records of configured operators whose RAT is on that
    operator's allowlist, tallying counters along the way.

    Sample totals per operator and RAT are tallied for *every* record of
    a configured operator, allowlisted or not, so the accumulative
    summary still sees legacy GSM/UMTS traffic.
    """
    if not mnos:
        raise ValueError("mnos must be non-empty")
    for m in mnos:
        if not m.allowed_rats:
            raise ValueError(f"MNO {m.mnc} has an empty RAT allowlist")
    by_cfg = {m.mnc: m for m in mnos}
    for m in mnos:
        counters.samples_by_mno_rat.setdefault(m.mnc, {})
        counters.retained_by_mno.setdefault(m.mnc, 0)
    for rec in records:
        cfg = by_cfg.get(rec.mnc)
        if cfg is None:
            continue
        rats = counters.samples_by_mno_rat[rec.mnc]
        rats[rec.rat] = rats.get(rec.rat, 0) + rec.samples
        if rec.rat not in cfg.allowed_rats:
            continue
        counters.retained_by_mno[rec.mnc] += 1
        counters.rows_retained += 1
        yield rec


def preselect(
    records: Iterable[CellRecord],
    mcc: int,
    mnos: list[MnoConfig],
    counters: IngestCounters | None = None,
) -> DatabaseMatrix:
    """Materialized pre-selection: the per-operator indexed matrix of
    retained records. Errors out if nothing survives, because the drill
    stage is undefined on an empty matrix."""
    c = counters if counters is not None else IngestCounters()
    kept: list[CellRecord] = []
    by_mnc: dict[int, list[CellRecord]] = {m.mnc: [] for m in mnos}
    for rec in preselect_stream(records, mnos, c):
        kept.append(rec)
        by_mnc[rec.mnc].append(rec)
    if not kept:
        raise EmptySelectionError(
            f"no records retained for mcc={mcc} and the configured operators")
    return DatabaseMatrix(mcc=mcc, records=kept, by_mnc=by_mnc)


def ingest_file(
    path: str,
    mcc: int,
    mnos: list[MnoConfig],
    schema: CsvSchema = CsvSchema(),
) -> tuple[DatabaseMatrix, IngestCounters]:
    """Full ingest of one dump file: parse, validate, pre-select."""
    counters = IngestCounters()
    stream = open_input(path)
    try:
        matrix = preselect(
            stream_records(stream, mcc, schema, counters), mcc, mnos, counters)
    finally:
        if stream is not sys.stdin:
            stream.close()
    return matrix, counters


def records_to_csv(matrix: DatabaseMatrix, out: IO[str]) -> None:
    """Write the matrix back out in the standard dump layout (round-trip
    support; unknown columns are zero-filled)."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["radio", "mcc", "net", "area", "cell", "unit", "lon", "lat",
                "range", "samples", "changeable", "created", "updated",
                "averageSignal"])
    for r in matrix.records:
        w.writerow([r.rat, matrix.mcc, r.mnc, r.tac, r.cid, 0,
                    repr(r.lon), repr(r.lat), 0, r.samples, 1, 0, 0, 0])
