import json
import os
from fractions import Fraction

import pytest

from fairdist.cli import run
from fairdist.core import MeasureId, Stratum
from fairdist.distribution import bin_histogram, stratum_pmf_fast
from fairdist.exports import read_pmf_payload


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_paper_value(self, capsys):
        code, out, _ = invoke(capsys, "count", "--n", "56")
        assert code == 0
        assert out == "553270671\n"

    def test_negative_usage_error(self, capsys):
        code, _, err = invoke(capsys, "count", "--n", "-3")
        assert code == 2
        assert "error" in err


class TestPmf:
    def test_json_output(self, capsys):
        code, out, _ = invoke(
            capsys, "pmf", "--n", "4", "--ir", "1/2", "--gr", "1/2",
            "--measure", "equal-opportunity", "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["total"] == 34
        assert data["undefined_count"] == 18
        values = [Fraction(e["num"], e["den"]) for e in data["entries"]]
        assert values == sorted(values)

    def test_csv_output(self, capsys):
        code, out, _ = invoke(
            capsys, "pmf", "--n", "2", "--ir", "1/2", "--gr", "1/2",
            "--measure", "accuracy-equality", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "value_num,value_den,count"
        assert lines[1:] == ["-1,1,2", "0,1,4", "1,1,2", "UNDEFINED,,0"]

    def test_inexact_ratio_exit_code(self, capsys):
        code, _, err = invoke(
            capsys, "pmf", "--n", "10", "--ir", "1/3", "--gr", "1/2",
            "--measure", "equal-opportunity",
        )
        assert code == 3
        assert "IR 1/3" in err

    def test_unknown_measure_usage_error(self, capsys):
        code, _, err = invoke(
            capsys, "pmf", "--n", "4", "--ir", "1/2", "--gr", "1/2", "--measure", "nope",
        )
        assert code == 2

    def test_atomic_write(self, capsys, tmp_path):
        out_file = tmp_path / "pmf.json"
        code, _, _ = invoke(
            capsys, "pmf", "--n", "4", "--ir", "1/2", "--gr", "1/2",
            "--measure", "equal-opportunity", "--out", str(out_file),
        )
        assert code == 0
        assert json.loads(out_file.read_text())["total"] == 34
        assert [p for p in os.listdir(tmp_path) if p.startswith(".fairdist-")] == []

    def test_unwritable_output_is_io_error(self, capsys, tmp_path):
        code, _, err = invoke(
            capsys, "pmf", "--n", "4", "--ir", "1/2", "--gr", "1/2",
            "--measure", "equal-opportunity", "--out", str(tmp_path / "missing" / "x.json"),
        )
        assert code == 5
        assert "i/o error" in err

    def test_byte_identical_reruns(self, capsys, tmp_path):
        args = (
            "pmf", "--n", "6", "--ir", "1/2", "--gr", "1/3",
            "--measure", "statistical-parity",
        )
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        assert invoke(capsys, *args, "--out", str(first))[0] == 0
        assert invoke(capsys, *args, "--out", str(second))[0] == 0
        assert first.read_bytes() == second.read_bytes()


class TestSweepAndHeatmap:
    def test_sweep_json(self, capsys):
        code, out, _ = invoke(
            capsys, "sweep", "--n", "8", "--measure", "equal-opportunity",
            "--vary", "ir", "--grid", "1/4,1/2", "--gr", "1/2", "--threads", "1",
        )
        assert code == 0
        data = json.loads(out)
        assert data["vary"] == "ir"
        assert [pt["ratio"] for pt in data["points"]] == ["1/4", "1/2"]

    def test_sweep_requires_fixed_ratio(self, capsys):
        code, _, err = invoke(
            capsys, "sweep", "--n", "8", "--measure", "equal-opportunity",
            "--vary", "ir", "--grid", "1/4,1/2", "--threads", "1",
        )
        assert code == 2
        assert "--gr" in err

    def test_heatmap_csv_schema(self, capsys):
        code, out, _ = invoke(
            capsys, "heatmap", "--n", "2", "--measure", "accuracy-equality",
            "--perf", "accuracy", "--bins", "3", "--perf-bins", "3",
            "--format", "csv", "--threads", "1",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "fairness_bin,perf_bin,count"
        assert len([l for l in lines if l.startswith("UNDEFINED,")]) == 1
        assert len([l for l in lines if l.startswith(",UNDEFINED")]) == 1
        assert len(lines) == 1 + 9 + 2

    def test_heatmap_limit_exit_code(self, capsys):
        code, _, err = invoke(
            capsys, "heatmap", "--n", "500", "--measure", "accuracy-equality", "--threads", "1",
        )
        assert code == 4
        assert "limit" in err

    def test_stratified_heatmap_needs_both_ratios(self, capsys):
        code, _, err = invoke(
            capsys, "heatmap", "--n", "4", "--measure", "accuracy-equality",
            "--ir", "1/2", "--threads", "1",
        )
        assert code == 2
        assert "--gr" in err


class TestProperties:
    def test_json_report(self, capsys):
        code, out, _ = invoke(
            capsys, "properties", "--n", "8", "--grid", "1/4,1/2,3/4", "--threads", "1",
        )
        assert code == 0
        data = json.loads(out)
        assert len(data["cells"]) == 48
        assert data["config"]["immunity_tv"] == "1/100"

    def test_table_rendering(self, capsys):
        code, out, _ = invoke(
            capsys, "properties", "--n", "8", "--grid", "1/4,1/2,3/4",
            "--format", "table", "--threads", "1",
        )
        assert code == 0
        assert "resolution-stability" in out
        assert "n_p=0 or n_up=0" in out

    def test_requires_grid(self, capsys):
        code, _, err = invoke(capsys, "properties", "--n", "8", "--threads", "1")
        assert code == 2
        assert "--grid" in err


class TestMeasureBatch:
    def test_examples(self, capsys, tmp_path, monkeypatch):
        records = [
            {"id": 1, "tp_p": 2, "fn_p": 0, "fp_p": 0, "tn_p": 2,
             "tp_up": 1, "fn_up": 1, "fp_up": 1, "tn_up": 1},
            {"id": 2, "tp_p": 2, "fn_p": 1, "fp_p": 1, "tn_p": 2,
             "tp_up": 2, "fn_up": 1, "fp_up": 1, "tn_up": 2},
            {"id": 3, "tp_p": 1, "fn_p": 0, "fp_p": 0, "tn_p": 0,
             "tp_up": 0, "fn_up": 0, "fp_up": 0, "tn_up": 1},
        ]
        batch = tmp_path / "batch.jsonl"
        batch.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        code, out, _ = invoke(capsys, "measure", "--input", str(batch))
        assert code == 0
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert [r["id"] for r in rows] == [1, 2, 3]
        assert rows[0]["statistical-parity"] == "0/1"
        assert rows[0]["predictive-equality"] == "-1/2"
        assert all(v == "0/1" for k, v in rows[1].items() if k != "id")
        assert rows[2]["equal-opportunity"] == "undefined"

    def test_malformed_record_names_index(self, capsys, tmp_path):
        batch = tmp_path / "batch.jsonl"
        batch.write_text('{"tp_p": 1}\n')
        code, _, err = invoke(capsys, "measure", "--input", str(batch))
        assert code == 2
        assert "record 1" in err

    def test_negative_count_rejected(self, capsys, tmp_path):
        record = dict.fromkeys(
            ("tp_p", "fn_p", "fp_p", "tn_p", "tp_up", "fn_up", "fp_up", "tn_up"), 0
        )
        record["tp_p"] = -1
        batch = tmp_path / "batch.jsonl"
        batch.write_text(json.dumps(record) + "\n")
        code, _, err = invoke(capsys, "measure", "--input", str(batch))
        assert code == 2
        assert "record 1" in err


class TestPlot:
    def _export_pmf(self, capsys, tmp_path):
        out_file = tmp_path / "pmf.json"
        code, _, _ = invoke(
            capsys, "pmf", "--n", "4", "--ir", "1/2", "--gr", "1/2",
            "--measure", "equal-opportunity", "--out", str(out_file),
        )
        assert code == 0
        return out_file

    def test_round_trip_reproduces_bin_counts(self, capsys, tmp_path):
        out_file = self._export_pmf(capsys, tmp_path)
        pmf, _ = read_pmf_payload(json.loads(out_file.read_text()))
        direct = stratum_pmf_fast(MeasureId.EQUAL_OPPORTUNITY, Stratum(4, 2, 2))
        assert pmf.entries == direct.entries
        assert bin_histogram(pmf, 41).counts == bin_histogram(direct, 41).counts

    def test_histogram_svg(self, capsys, tmp_path):
        out_file = self._export_pmf(capsys, tmp_path)
        svg_file = tmp_path / "pmf.svg"
        code, _, _ = invoke(
            capsys, "plot", "--kind", "histogram", "--input", str(out_file),
            "--bins", "5", "--out", str(svg_file),
        )
        assert code == 0
        text = svg_file.read_text()
        assert text.count('class="bar"') == 5
        assert text.count('class="undefined-bar"') == 1

    def test_single_value_pmf_single_bar(self, capsys, tmp_path):
        artifact = tmp_path / "single.json"
        artifact.write_text(json.dumps({
            "n": 8, "p": 4, "n_p": 4, "measure": "accuracy-equality",
            "total": 8, "undefined_count": 0,
            "entries": [{"num": 0, "den": 1, "count": 8}],
        }))
        svg_file = tmp_path / "single.svg"
        code, _, _ = invoke(
            capsys, "plot", "--kind", "histogram", "--input", str(artifact),
            "--bins", "3", "--out", str(svg_file),
        )
        assert code == 0
        text = svg_file.read_text()
        bars = [line for line in text.splitlines() if 'class="bar"' in line]
        visible = [b for b in bars if 'height="0"' not in b]
        assert len(visible) == 1

    def test_empty_pmf_errors_without_output(self, capsys, tmp_path):
        artifact = tmp_path / "empty.json"
        artifact.write_text(json.dumps({
            "n": 4, "p": 2, "n_p": 2, "measure": "equal-opportunity",
            "total": 0, "undefined_count": 0, "entries": [],
        }))
        svg_file = tmp_path / "empty.svg"
        code, _, err = invoke(
            capsys, "plot", "--kind", "histogram", "--input", str(artifact),
            "--out", str(svg_file),
        )
        assert code == 2
        assert not svg_file.exists()

    def test_schema_mismatch_names_field(self, capsys, tmp_path):
        artifact = tmp_path / "bad.json"
        artifact.write_text(json.dumps({"n": 4, "p": 2, "n_p": 2, "measure": "x", "total": 1}))
        code, _, err = invoke(capsys, "plot", "--kind", "histogram", "--input", str(artifact))
        assert code == 2
        assert "undefined_count" in err

    def test_heatmap_svg_cell_grid(self, capsys, tmp_path):
        heat_file = tmp_path / "heat.csv"
        code, _, _ = invoke(
            capsys, "heatmap", "--n", "2", "--measure", "accuracy-equality",
            "--bins", "3", "--perf-bins", "3", "--format", "csv",
            "--threads", "1", "--out", str(heat_file),
        )
        assert code == 0
        svg_file = tmp_path / "heat.svg"
        code, _, _ = invoke(
            capsys, "plot", "--kind", "heatmap", "--input", str(heat_file),
            "--out", str(svg_file),
        )
        assert code == 0
        assert svg_file.read_text().count('class="cell"') == 9

    def test_curve_svg(self, capsys, tmp_path):
        sweep_file = tmp_path / "sweep.json"
        code, _, _ = invoke(
            capsys, "sweep", "--n", "8", "--measure", "equal-opportunity",
            "--vary", "ir", "--grid", "1/4,1/2,3/4", "--gr", "1/2",
            "--threads", "1", "--out", str(sweep_file),
        )
        assert code == 0
        svg_file = tmp_path / "sweep.svg"
        code, _, _ = invoke(
            capsys, "plot", "--kind", "curve", "--input", str(sweep_file),
            "--out", str(svg_file),
        )
        assert code == 0
        text = svg_file.read_text()
        assert text.count('class="point"') == 3
        assert "<polyline" in text

    def test_svg_runs_are_byte_identical(self, capsys, tmp_path):
        out_file = self._export_pmf(capsys, tmp_path)
        first = tmp_path / "one.svg"
        second = tmp_path / "two.svg"
        for target in (first, second):
            assert invoke(
                capsys, "plot", "--kind", "histogram", "--input", str(out_file),
                "--out", str(target),
            )[0] == 0
        assert first.read_bytes() == second.read_bytes()


class TestThreadsEnv:
    def test_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("FAIRDIST_THREADS", "2")
        code, out, _ = invoke(
            capsys, "sweep", "--n", "6", "--measure", "accuracy-equality",
            "--vary", "gr", "--grid", "1/2,1/3", "--ir", "1/2",
        )
        assert code == 0
        assert json.loads(out)["points"]

    def test_invalid_env_rejected(self, capsys, monkeypatch):
        monkeypatch.setenv("FAIRDIST_THREADS", "banana")
        code, _, err = invoke(
            capsys, "sweep", "--n", "6", "--measure", "accuracy-equality",
            "--vary", "gr", "--grid", "1/2", "--ir", "1/2",
        )
        assert code == 2
        assert "FAIRDIST_THREADS" in err
