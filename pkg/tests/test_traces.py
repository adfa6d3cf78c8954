import json

import numpy as np
import pandas as pd
import pytest

from quantum_search.errors import DomainError
from quantum_search.search import SearchConfig, SearchTrace, run_search
from quantum_search.trace_exporter import TraceExporter
from quantum_search.traces import TraceCollector


class _Collector(TraceCollector):
    COLUMNS = ("step", "value")
    DEFAULTS = {"step": 0, "value": 0.0}


class TestTraceCollector:
    def test_defaults_fill_missing_fields(self):
        trace = _Collector()
        record = trace.save_record({"step": 3})
        assert record == {"step": 3, "value": 0.0}
        assert len(trace) == 1

    def test_extra_columns_follow_schema(self):
        trace = _Collector()
        trace.save_record({"step": 1, "extra": "x", "value": 2.0})
        assert list(trace.to_frame().columns) == ["step", "value", "extra"]

    def test_empty_frame_keeps_header(self):
        df = SearchTrace().to_frame()
        assert df.empty
        assert list(df.columns) == list(SearchTrace.COLUMNS)


class TestTraceExporter:
    def test_timestamped_folder(self, tmp_path):
        exporter = TraceExporter(str(tmp_path / "runs"))
        path = exporter.resolve(None, "search_n3", "csv")
        assert path.startswith(str(tmp_path / "runs"))
        assert path.endswith("search_n3.csv")
        exporter.export(pd.DataFrame({"a": [1]}), path)
        assert (tmp_path / "runs").is_dir()

    def test_explicit_path_wins(self, tmp_path):
        exporter = TraceExporter(str(tmp_path))
        assert exporter.resolve("given.csv", "ignored", "csv") == "given.csv"

    def test_csv_keeps_full_precision(self, tmp_path):
        path = str(tmp_path / "trace.csv")
        df = run_search(SearchConfig(n=5, target=7)).trace.to_frame()
        TraceExporter().export(df, path)
        back = pd.read_csv(path, float_precision="round_trip")
        np.testing.assert_array_equal(back["marked_re"].to_numpy(), df["marked_re"].to_numpy())

    def test_json_matches_csv_exactly(self, tmp_path):
        df = run_search(SearchConfig(n=5, target=7)).trace.to_frame()
        df["gain"] = [np.nan] + np.diff(df["marked_prob"]).tolist()
        csv_path, json_path = str(tmp_path / "t.csv"), str(tmp_path / "t.json")
        TraceExporter().export(df, csv_path, "csv")
        TraceExporter().export(df, json_path, "json")
        from_csv = pd.read_csv(csv_path, float_precision="round_trip")
        with open(json_path, encoding="utf-8") as fh:
            records = json.load(fh)
        assert records[0]["gain"] is None
        assert [r["iteration"] for r in records] == df["iteration"].tolist()
        for column in ("marked_re", "marked_im", "marked_prob", "norm"):
            from_json = np.array([r[column] for r in records])
            np.testing.assert_array_equal(from_json, df[column].to_numpy())
            np.testing.assert_array_equal(from_json, from_csv[column].to_numpy())

    def test_unknown_format(self, tmp_path):
        with pytest.raises(DomainError):
            TraceExporter().export(pd.DataFrame(), str(tmp_path / "x.xml"), "xml")
