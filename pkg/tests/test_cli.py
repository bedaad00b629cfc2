import json
from dataclasses import replace
from pathlib import Path

import pytest
from typer.testing import CliRunner

from depth_subconvexity import cli
from depth_subconvexity.cli import app

runner = CliRunner()


@pytest.fixture(autouse=True)
def _ledger(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    ledger = tmp_path / "ledger.jsonl"
    monkeypatch.setattr(
        cli, "settings", replace(cli.settings, ledger=str(ledger), artifacts_dir=str(tmp_path))
    )
    return ledger


def test_list_shows_verifiers():
    res = runner.invoke(app, ["list"])
    assert res.exit_code == 0, res.output
    assert "charsum" in res.output and "exponent" in res.output


def test_verify_writes_report_and_ledger(tmp_path: Path, _ledger: Path):
    out = tmp_path / "exponent.jsonl"
    res = runner.invoke(app, ["--quiet", "verify", "exponent", "--out", str(out)])
    assert res.exit_code == 0, res.output
    record = json.loads(out.read_text(encoding="utf-8").splitlines()[0])
    assert record["verifier"] == "exponent" and record["passed"] is True
    entry = json.loads(_ledger.read_text(encoding="utf-8").splitlines()[-1])
    assert entry["step"] == "verify" and entry["outputs"] == [str(out)]


def test_verify_csv_from_suffix(tmp_path: Path):
    out = tmp_path / "charsum.csv"
    res = runner.invoke(
        app,
        ["--quiet", "verify", "charsum", "--grid", "p=3;q=1;m=1;n2=1;sign=1;chi=1", "-o", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert out.read_text(encoding="utf-8").startswith("verifier,params,passed")


def test_unknown_verifier_is_a_config_error(tmp_path: Path):
    res = runner.invoke(app, ["verify", "bogus-check", "--out", str(tmp_path / "x.jsonl")])
    assert res.exit_code == 2, res.output


def test_invalid_grid_is_a_config_error(tmp_path: Path):
    res = runner.invoke(
        app, ["verify", "charsum", "--grid", "p=3;ell=4;chi=1", "--out", str(tmp_path / "x.jsonl")]
    )
    assert res.exit_code == 2, res.output
    assert not (tmp_path / "x.jsonl").exists()


def test_failing_tuple_exits_one(tmp_path: Path):
    out = tmp_path / "exponent.jsonl"
    res = runner.invoke(
        app,
        ["--quiet", "verify", "exponent", "--option", 'expected=["1/2", "1"]', "-o", str(out)],
    )
    assert res.exit_code == 1, res.output
    assert out.exists()


def test_dry_run_skips_writes(tmp_path: Path, _ledger: Path):
    out = tmp_path / "exponent.jsonl"
    res = runner.invoke(app, ["--dry-run", "verify", "exponent", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert not out.exists()
    assert not _ledger.exists()


def test_report_summarises_and_plots(tmp_path: Path):
    out = tmp_path / "exponent.jsonl"
    assert runner.invoke(app, ["--quiet", "verify", "exponent", "-o", str(out)]).exit_code == 0
    res = runner.invoke(app, ["report", str(out), "--plot", str(tmp_path / "plots")])
    assert res.exit_code == 0, res.output
    assert "Reports: 1" in res.output


def test_report_missing_file_exit_code(tmp_path: Path):
    res = runner.invoke(app, ["report", str(tmp_path / "missing.jsonl")])
    assert res.exit_code == 3, res.output


def test_report_malformed_file_exit_code(tmp_path: Path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{oops\n", encoding="utf-8")
    res = runner.invoke(app, ["report", str(bad)])
    assert res.exit_code == 4, res.output


def test_report_with_failures_exits_one(tmp_path: Path):
    path = tmp_path / "failed.jsonl"
    path.write_text(
        json.dumps({"verifier": "delta", "params": {"n": 1}, "passed": False}) + "\n",
        encoding="utf-8",
    )
    res = runner.invoke(app, ["--quiet", "report", str(path)])
    assert res.exit_code == 1, res.output


def test_bench_empty_ladder(tmp_path: Path):
    out = tmp_path / "bench.json"
    res = runner.invoke(app, ["--quiet", "bench", "--sizes", "", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["rows"] == [] and payload["passed"] is True
