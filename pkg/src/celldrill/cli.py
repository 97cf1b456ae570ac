"""celldrill command line: `ingest` for a parse/selection report,
`drill` for the full pipeline, `serve` for the demarcation service."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import geo, ingest, ndd, report
from .config import ConfigError, load_profile

log = logging.getLogger("celldrill")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="celldrill",
        description="Locate each operator's highest-traffic tracking area "
                    "in an OpenCellID dump and demarcate a 5G deployment "
                    "area.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", "-i", required=True,
                       help="CSV dump path (.csv or .csv.gz), '-' for stdin")
        p.add_argument("--config", "-c", default="spain",
                       help="profile TOML path or built-in name "
                            "(default: spain)")
        p.add_argument("--out", "-o", default="out",
                       help="output directory (default: ./out)")

    p_ingest = sub.add_parser("ingest", help="parse and pre-select only; "
                              "write the ingest counter report")
    common(p_ingest)

    p_drill = sub.add_parser("drill", help="run the full pipeline and "
                             "write all report files")
    common(p_drill)
    p_drill.add_argument("--a", type=int, default=None,
                         help="override lower sample bound")
    p_drill.add_argument("--b", type=int, default=None,
                         help="override upper sample bound")
    p_drill.add_argument("--n-c", type=int, default=None, dest="n_c",
                         help="override top-cell budget")
    p_drill.add_argument("--grid", default=None, metavar="ROWSxCOLS",
                         help="also write per-operator density grids")
    p_drill.add_argument("--jobs", type=int, default=1,
                         help="operator partitions finalized in parallel")

    p_serve = sub.add_parser("serve", help="serve drill outputs and the "
                             "demarcation API/UI")
    p_serve.add_argument("--out", "-o", default="out",
                         help="directory of a completed drill run")
    p_serve.add_argument("--listen", default="127.0.0.1:8000",
                         metavar="HOST:PORT",
                         help="listen address (env CELLDRILL_LISTEN "
                              "overrides)")
    p_serve.add_argument("--ui-dir", default=None,
                         help="static UI asset directory "
                              "(default: ./frontend/dist if present)")
    return parser


def _parse_grid(spec: str) -> tuple[int, int]:
    try:
        rows_s, cols_s = spec.lower().split("x")
        rows, cols = int(rows_s), int(cols_s)
    except ValueError:
        print(f"celldrill: bad --grid {spec!r}, expected ROWSxCOLS",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if rows < 1 or cols < 1:
        print(f"celldrill: bad --grid {spec!r}, needs >= 1x1",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return rows, cols


def _load(args: argparse.Namespace):
    try:
        return load_profile(args.config)
    except ConfigError as exc:
        print(f"celldrill: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _check_input(path: str) -> None:
    if path != "-" and not Path(path).exists():
        print(f"celldrill: input not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_ingest(args: argparse.Namespace) -> int:
    profile = _load(args)
    _check_input(args.input)
    counters = ingest.IngestCounters()
    stream = ingest.open_input(args.input)
    try:
        for _ in ingest.preselect_stream(
                ingest.stream_records(stream, profile.mcc, counters=counters),
                list(profile.mnos), counters):
            pass
    finally:
        if stream is not sys.stdin:
            stream.close()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "ingest_counters.json").write_text(
        json.dumps(counters.as_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    log.info("rows read: %d, retained: %d, rejected: %d",
             counters.rows_read, counters.rows_retained,
             sum(counters.rejected.values()))
    for mnc, n in sorted(counters.retained_by_mno.items()):
        print(f"mnc {mnc}: retained {n}")
    if counters.rows_retained == 0:
        print("celldrill: empty selection (no rows retained)",
              file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def cmd_drill(args: argparse.Namespace) -> int:
    profile = _load(args)
    _check_input(args.input)
    bounds = profile.bounds
    if args.a is not None or args.b is not None:
        try:
            bounds = ndd.CbsBounds(
                a=args.a if args.a is not None else bounds.a,
                b=args.b if args.b is not None else bounds.b)
        except ValueError as exc:
            print(f"celldrill: {exc}", file=sys.stderr)
            return EXIT_USAGE
    n_c = args.n_c if args.n_c is not None else profile.n_c
    if n_c < 1:
        print(f"celldrill: --n-c must be >= 1, got {n_c}", file=sys.stderr)
        return EXIT_USAGE
    grid_shape = _parse_grid(args.grid) if args.grid else None

    mnos = list(profile.mnos)
    counters = ingest.IngestCounters()
    drill = ndd.StreamDrill(mnos, bounds, n_c)
    stream = ingest.open_input(args.input)
    try:
        drill.consume(ingest.preselect_stream(
            ingest.stream_records(stream, profile.mcc, counters=counters),
            mnos, counters))
    finally:
        if stream is not sys.stdin:
            stream.close()
    if counters.rows_retained == 0:
        print("celldrill: empty selection (no rows retained)",
              file=sys.stderr)
        return EXIT_DATA

    results = drill.results(jobs=args.jobs)
    out_dir = Path(args.out)
    report.write_reports(out_dir, profile.mcc, bounds, n_c, counters,
                         mnos, results)
    if grid_shape:
        rows, cols = grid_shape
        for r in results:
            if isinstance(r, ndd.MnoError) or not r.top_cells:
                continue
            rect = geo.bounding_box(r.top_cells)
            grid = geo.density_grid(r.top_cells, rect, rows, cols)
            doc = {"rect": report.rect_dict(rect), "rows": grid.rows,
                   "cols": grid.cols, "cell_samples": grid.cell_samples,
                   "overflow_samples": grid.overflow_samples,
                   "binned_cells": grid.binned_cells}
            (out_dir / f"mno_{r.mnc}_grid.json").write_text(
                json.dumps(doc, indent=2, sort_keys=True) + "\n",
                encoding="utf-8")

    label_by_mnc = {m.mnc: m.label for m in mnos}
    for r in results:
        label = label_by_mnc[r.mnc]
        if isinstance(r, ndd.MnoError):
            print(f"{label} (mnc {r.mnc}): {r.error}")
        else:
            print(f"{label} (mnc {r.mnc}): HTTAC {r.httac} with "
                  f"{r.httac_total_samples} samples over "
                  f"{r.unique_cell_count} unique cells, "
                  f"top {len(r.top_cells)} selected")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    out_dir = Path(args.out)
    ui_dir = Path(args.ui_dir) if args.ui_dir else Path("frontend/dist")
    listen = os.environ.get("CELLDRILL_LISTEN", args.listen)
    try:
        host, port_s = listen.rsplit(":", 1)
        port = int(port_s)
    except ValueError:
        print(f"celldrill: bad listen address {listen!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        app = create_app(out_dir, ui_dir if ui_dir.is_dir() else None)
    except FileNotFoundError as exc:
        print(f"celldrill: {exc}", file=sys.stderr)
        return EXIT_DATA
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return cmd_ingest(args)
        if args.command == "drill":
            return cmd_drill(args)
        return cmd_serve(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ingest.EmptySelectionError as exc:
        print(f"celldrill: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ingest.IngestError, ndd.DrillError) as exc:
        print(f"celldrill: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
