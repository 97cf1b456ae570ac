import gzip
import io

import pytest
from hypothesis import given, strategies as st

from celldrill.ingest import (
    CellRecord, CsvSchema, EmptySelectionError, IngestCounters, MnoConfig,
    RawRow, RowError, ValidationError, normalize_rat, open_input, parse_csv,
    preselect, records_to_csv, stream_records, validate,
)

from conftest import OPENCELLID_HEADER, csv_line, make_csv, rec


def parse_all(text, schema=CsvSchema()):
    return list(parse_csv(io.StringIO(text), schema))


class TestParseCsv:
    def test_standard_line(self):
        text = make_csv(["LTE,214,1,10,100,0,-3.70,40.00,1000,500,1,0,0,0"])
        [(line, row)] = parse_all(text)
        assert isinstance(row, RawRow)
        assert (row.radio, row.mcc, row.net, row.area, row.cell) == \
            ("LTE", 214, 1, 10, 100)
        assert (row.lon, row.lat, row.range, row.samples) == \
            (-3.70, 40.00, 1000, 500)
        assert line == 2

    def test_header_only(self):
        assert parse_all(OPENCELLID_HEADER + "\n") == []

    def test_no_header_schema(self):
        schema = CsvSchema(has_header=False)
        out = parse_all(csv_line() + "\n", schema)
        assert len(out) == 1 and isinstance(out[0][1], RawRow)

    def test_non_numeric_cid(self):
        text = make_csv(["LTE,214,1,10,abc,0,-3.70,40.00,1000,500,1,0,0,0"])
        [(line, err)] = parse_all(text)
        assert isinstance(err, RowError)
        assert err.reason == "non_numeric"
        assert line == 2

    def test_wrong_field_count(self):
        text = make_csv(["LTE,214,1,10"])
        [(_, err)] = parse_all(text)
        assert isinstance(err, RowError) and err.reason == "field_count"

    def test_bad_line_does_not_abort(self):
        text = make_csv(["garbage", csv_line(), "a,b", csv_line(cell=101)])
        out = parse_all(text)
        assert len(out) == 4
        assert [isinstance(item, RawRow) for _, item in out] == \
            [False, True, False, True]

    @given(st.lists(st.sampled_from([
        csv_line(), csv_line(cell=7, samples=3), "junk,line",
        "LTE,214,x,10,100,0,-3.7,40.0,10,5,1,0,0,0", ",,,,,,,,,,,,,",
    ]), max_size=30))
    def test_row_plus_error_count_equals_line_count(self, lines):
        out = parse_all(make_csv(lines))
        assert len(out) == len(lines)


class TestValidate:
    def test_identity_on_valid(self):
        row = RawRow("LTE", 214, 1, 10, 100, -3.7, 40.0, 1000, 500)
        got = validate(row)
        assert got == CellRecord("LTE", 1, 10, 100, 40.0, -3.7, 500)

    @pytest.mark.parametrize("field,value,reason", [
        ("lat", 95.0, "lat_out_of_range"),
        ("lat", -90.5, "lat_out_of_range"),
        ("lon", 181.0, "lon_out_of_range"),
        ("samples", -3, "negative_samples"),
        ("area", -1, "negative_tac"),
        ("cell", -2, "negative_cid"),
    ])
    def test_invariant_violations(self, field, value, reason):
        row = RawRow("LTE", 214, 1, 10, 100, -3.7, 40.0, 1000, 500)
        setattr(row, field, value)
        with pytest.raises(ValidationError) as exc:
            validate(row)
        assert exc.value.reason == reason

    def test_zero_samples_is_valid(self):
        row = RawRow("LTE", 214, 1, 10, 100, -3.7, 40.0, 1000, 0)
        assert validate(row).samples == 0

    def test_rat_normalized_case_insensitively(self):
        assert normalize_rat("lte") == "LTE"
        assert normalize_rat(" Umts ") == "UMTS"
        assert normalize_rat("NR") == "NR"  # unknown kept verbatim


class TestPreselect:
    def test_allowlist_and_side_channel(self):
        # 5 LTE + 3 UMTS records of mnc 1, LTE-only allowlist
        rows = [rec(cid=100 + i, samples=100) for i in range(5)]
        rows += [rec(rat="UMTS", cid=200 + i, samples=10) for i in range(3)]
        mno = MnoConfig(1, "op", 0.3, frozenset({"LTE"}))
        counters = IngestCounters()
        matrix = preselect(rows, 214, [mno], counters)
        assert len(matrix) == 5
        assert all(r.rat == "LTE" for r in matrix.records)
        assert counters.samples_by_mno_rat[1] == {"LTE": 500, "UMTS": 30}
        assert counters.retained_by_mno[1] == 5

    def test_unconfigured_mnc_dropped(self):
        rows = [rec(mnc=9)]
        mno = MnoConfig(1, "op", 0.3, frozenset({"LTE"}))
        with pytest.raises(EmptySelectionError):
            preselect(rows, 214, [mno])

    def test_mcc_gate_happens_at_raw_stage(self):
        text = make_csv([csv_line(mcc=214), csv_line(mcc=310, cell=101)])
        counters = IngestCounters()
        recs = list(stream_records(io.StringIO(text), 214, counters=counters))
        assert len(recs) == 1
        assert counters.mcc_skipped == 1

    def test_retained_counts_sum(self):
        rows = [rec(mnc=1, cid=i) for i in range(4)] + \
               [rec(mnc=2, cid=i) for i in range(3)]
        mnos = [MnoConfig(1, "a", 0.2, frozenset({"LTE"})),
                MnoConfig(2, "b", 0.2, frozenset({"LTE"}))]
        counters = IngestCounters()
        preselect(rows, 214, mnos, counters)
        assert sum(counters.retained_by_mno.values()) == \
            counters.rows_retained == 7

    def test_empty_allowlist_rejected(self):
        with pytest.raises(ValueError):
            preselect([rec()], 214, [MnoConfig(1, "x", 0.1, frozenset())])


class TestRoundTrip:
    def test_serialize_reingest_same_multiset(self, s1_rows, test_mno):
        matrix = preselect(s1_rows, 214, [test_mno])
        buf = io.StringIO()
        records_to_csv(matrix, buf)
        counters = IngestCounters()
        again = preselect(
            stream_records(io.StringIO(buf.getvalue()), 214,
                           counters=counters),
            214, [test_mno])
        assert sorted(map(repr, again.records)) == \
            sorted(map(repr, matrix.records))


class TestOpenInput:
    def test_gzip_autodetect(self, tmp_path, s1_csv):
        path = tmp_path / "dump.csv.gz"
        path.write_bytes(gzip.compress(s1_csv.encode()))
        with open_input(str(path)) as f:
            assert len(list(parse_csv(f))) == 5

    def test_plain(self, tmp_path, s1_csv):
        path = tmp_path / "dump.csv"
        path.write_text(s1_csv)
        with open_input(str(path)) as f:
            assert len(list(parse_csv(f))) == 5
