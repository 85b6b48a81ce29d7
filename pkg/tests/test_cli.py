import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from rounddist.cli import main

SUM_SPEC = {
    "term": "x + y",
    "inputs": {
        "x": {"kind": "uniform", "params": {"a": 1.0, "b": 2.0}},
        "y": {"kind": "uniform", "params": {"a": 1.0, "b": 2.0}},
    },
    "format": {"exponent_bits": 5, "mantissa_bits": 10},
    "error_mode": "typical",
    "op_options": {"rel_tol": 1e-07, "piece_cap": 256},
}


@pytest.fixture()
def runner():
    return CliRunner()


def write_spec(tmp_path, payload, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


class TestAnalyze:
    def test_success(self, runner, tmp_path):
        spec = write_spec(tmp_path, SUM_SPEC)
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path / "out")])
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        lo, hi = report["analysis"]["support"]
        assert 1.9 < lo < 2.1 and 3.9 < hi < 4.1
        assert (tmp_path / "out" / "output_density.csv").exists()

    def test_deterministic_output(self, runner, tmp_path):
        spec = write_spec(tmp_path, SUM_SPEC)
        for d in ("a", "b"):
            result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path / d)])
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a" / "report.json").read_bytes() == (
            tmp_path / "b" / "report.json"
        ).read_bytes()
        assert (tmp_path / "a" / "output_density.csv").read_bytes() == (
            tmp_path / "b" / "output_density.csv"
        ).read_bytes()

    def test_unbound_variable_exits_2(self, runner, tmp_path):
        bad = dict(SUM_SPEC, term="x + z")
        spec = write_spec(tmp_path, bad)
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "z" in result.output

    def test_parse_error_exits_2(self, runner, tmp_path):
        spec = write_spec(tmp_path, dict(SUM_SPEC, term="x + * y"))
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_missing_key_exits_2(self, runner, tmp_path):
        spec = write_spec(tmp_path, {"term": "x"})
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "inputs" in result.output or "format" in result.output

    def test_malformed_json_exits_2(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        result = runner.invoke(main, ["analyze", str(path), "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_singular_division_exits_3(self, runner, tmp_path):
        bad = dict(
            SUM_SPEC,
            term="x / y",
            inputs={
                "x": {"kind": "uniform", "params": {"a": 1.0, "b": 2.0}},
                "y": {"kind": "uniform", "params": {"a": -1.0, "b": 1.0}},
            },
        )
        spec = write_spec(tmp_path, bad)
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 3

    def test_infeasible_precision_exits_3(self, runner, tmp_path):
        bad = dict(SUM_SPEC, format={"precision": 30, "e_min": -10, "e_max": 10})
        spec = write_spec(tmp_path, bad)
        result = runner.invoke(main, ["analyze", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 3


class TestErrorDist:
    def test_exact_small_format(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "error-dist", "--dist", "uniform,1,2", "--format", "3,3",
                "--mode", "exact", "--out", str(tmp_path),
            ],
        )
        assert result.exit_code == 0, result.output
        header = json.loads((tmp_path / "error_density.json").read_text())
        assert header["mode"] == "exact"
        assert header["excluded_mass"] == 0.0
        csv = (tmp_path / "error_density.csv").read_text().splitlines()
        assert csv[0] == "x,pdf,cdf"

    def test_typical_needs_no_format(self, runner, tmp_path):
        result = runner.invoke(
            main, ["error-dist", "--dist", "uniform,0,1", "--mode", "typical", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output

    def test_compare_typical(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "error-dist", "--dist", "uniform,0,1", "--format", "5,10",
                "--mode", "typical_finite_p", "--compare-typical", "--out", str(tmp_path),
            ],
        )
        assert result.exit_code == 0, result.output
        header = json.loads((tmp_path / "error_density.json").read_text())
        assert 0.0 < header["sup_distance_to_typical"] < 0.01

    def test_unknown_kind_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["error-dist", "--dist", "cauchy,0,1", "--format", "5,10", "--out", str(tmp_path)]
        )
        assert result.exit_code == 2

    def test_exact_without_format_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["error-dist", "--dist", "uniform,0,1", "--mode", "exact", "--out", str(tmp_path)]
        )
        assert result.exit_code == 2


class TestMc:
    def test_writes_histogram(self, runner, tmp_path):
        spec = write_spec(tmp_path, SUM_SPEC)
        result = runner.invoke(
            main,
            ["mc", str(spec), "--mc-n", "5000", "--seed", "7", "--out", str(tmp_path / "out")],
        )
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "out" / "mc.json").read_text())
        assert report["n"] == 5000
        lines = (tmp_path / "out" / "histogram.csv").read_text().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count"
        counts = sum(int(l.split(",")[2]) for l in lines[1:])
        assert counts + report["overflow_count"] == 5000

    def test_seed_determinism(self, runner, tmp_path):
        spec = write_spec(tmp_path, SUM_SPEC)
        for d in ("a", "b"):
            result = runner.invoke(
                main, ["mc", str(spec), "--mc-n", "2000", "--seed", "3", "--out", str(tmp_path / d)]
            )
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a" / "mc.json").read_bytes() == (tmp_path / "b" / "mc.json").read_bytes()


class TestBench:
    def test_unknown_name_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["bench", "nonesuch", "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "div_overflow" in result.output

    def test_fixtures_resolve(self):
        from rounddist.cli import fixture_path, load_spec

        for name in ("div_overflow", "sum8less", "mul8less"):
            spec = load_spec(fixture_path(name))
            assert spec["term"]
