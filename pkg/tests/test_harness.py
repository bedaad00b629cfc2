from pathlib import Path

import pytest

from depth_subconvexity.errors import ConfigError, InvalidGrid, ReportIOError, UnknownVerifier
from depth_subconvexity.harness.bench import bench_kernels, charsum_for_size
from depth_subconvexity.harness.grid import (
    RunConfig,
    canonical_key,
    expand_grid,
    parse_inline_grid,
    parse_values,
)
from depth_subconvexity.harness.plots import plot_reports
from depth_subconvexity.harness.reports import (
    VerificationReport,
    emit_report,
    encode,
    parse_report,
    summarize,
)
from depth_subconvexity.harness.runner import plan, run_verifier
from depth_subconvexity.harness.verifiers import REGISTRY, get_verifier, run_tuple


def _reports() -> list[VerificationReport]:
    return [
        VerificationReport(
            "charsum", {"p": 3, "q": 1}, True, lhs=1.5 - 0.25j, rhs=1.5 - 0.25j + 1e-12,
            abs_error=1e-12, rel_error=6.6e-13, threshold=2.7e-5, metric="abs_error",
            details={"modulus": 81},
        ),
        VerificationReport(
            "charsum", {"p": 3, "q": 2}, False, lhs=0.1 + 0.0j, rhs=-0.3 + 2.0j,
            abs_error=2.04, rel_error=1.0, threshold=5.4e-5, metric="abs_error",
        ),
        VerificationReport(
            "second-moment", {}, True, ratio=0.012,
            details={"points": [{"x": 1000.0, "ratio": 0.01}, {"x": 2000.0, "ratio": 0.012}]},
        ),
    ]


def test_parse_values_and_inline_grid():
    assert parse_values("1..3,7") == [1, 2, 3, 7]
    assert parse_inline_grid("p=3,5; r=4; q=1..2") == {"p": [3, 5], "r": [4], "q": [1, 2]}
    with pytest.raises(ConfigError):
        parse_values("3..1")
    with pytest.raises(ConfigError):
        parse_inline_grid("p3")
    with pytest.raises(ConfigError):
        parse_values("x")


def test_expand_grid_takes_defaults_for_missing_keys():
    tuples = expand_grid({"q": [1, 2]}, {"p": [3], "q": [9]})
    assert tuples == [{"p": 3, "q": 1}, {"p": 3, "q": 2}]
    assert expand_grid({"q": []}, {"p": [3]}) == []
    assert expand_grid({}, {}) == [{}]


def test_canonical_key_orders_tuples():
    rows = [{"q": 2, "p": 3}, {"p": 3, "q": 1}, {"p": 2, "q": 5}]
    ordered = sorted(rows, key=canonical_key)
    assert ordered == [{"p": 2, "q": 5}, {"p": 3, "q": 1}, {"q": 2, "p": 3}]


def test_run_config_from_toml(tmp_path: Path):
    path = tmp_path / "run.toml"
    path.write_text(
        'verifier = "charsum"\ntolerance = 1e-8\n\n[grid]\np = [3]\nq = "1..2"\nm = 1\n',
        encoding="utf-8",
    )
    cfg = RunConfig.from_toml(path)
    assert cfg.grid == {"p": [3], "q": [1, 2], "m": [1]}
    assert cfg.tolerance == 1e-8
    merged = cfg.with_inline_grid("q=4")
    assert merged.grid["q"] == [4] and merged.grid["p"] == [3]
    with pytest.raises(FileNotFoundError):
        RunConfig.from_toml(tmp_path / "missing.toml")


def test_run_config_rejects_bad_toml(tmp_path: Path):
    path = tmp_path / "bad.toml"
    path.write_text("verifier = \n", encoding="utf-8")
    with pytest.raises(ConfigError):
        RunConfig.from_toml(path)


def test_plan_rejects_unknown_keys_and_bad_tuples():
    with pytest.raises(UnknownVerifier):
        plan(RunConfig(verifier="bogus-check"))
    with pytest.raises(ConfigError):
        plan(RunConfig(verifier="charsum", grid={"zeta": [1]}))
    with pytest.raises(InvalidGrid) as info:
        plan(RunConfig(verifier="charsum", grid="p=3;ell=4;chi=1;q=1;m=1;n2=1;sign=1"))
    assert len(info.value.rejects) == 1


def test_plan_expands_all_primitive_characters():
    tuples = plan(RunConfig(verifier="charsum", grid="p=3;q=1;m=1;n2=1;sign=1"))
    assert len(tuples) == 36
    assert all(t["chi"] % 3 for t in tuples)
    assert tuples == sorted(tuples, key=canonical_key)


def test_registry_covers_every_check():
    expected = {
        "charsum", "cbeta", "partition", "post-poisson", "bound-zero", "counting", "delta",
        "g-properties", "voronoi-gl2", "voronoi-divisor", "gl3-decay", "d3-voronoi",
        "stationary-phase", "nonstationary-decay", "second-moment", "exponent", "vanishing",
        "x-window", "n2-truncation",
    }
    assert set(REGISTRY) == expected
    assert get_verifier("exponent").defaults == {}


def test_run_exponent_and_small_charsum_grid():
    result = run_verifier(RunConfig(verifier="exponent"))
    assert len(result.reports) == 1 and result.passed
    assert result.reports[0].details["ratio"] == "4/5"

    cfg = RunConfig(verifier="charsum", grid="p=3;q=1,2;m=1;n2=1;sign=1;chi=1")
    result = run_verifier(cfg)
    assert [r.params["q"] for r in result.reports] == [1, 2]
    assert result.passed, [r.details for r in result.failures]


def test_domain_errors_become_failing_reports():
    report = run_tuple("delta", {"L": 50, "n": 101}, RunConfig(verifier="delta"))
    assert not report.passed
    assert report.details["error"] == "OutOfRange"
    assert report.wall_time >= 0


@pytest.mark.parametrize("suffix", [".jsonl", ".csv"])
def test_report_files_round_trip(tmp_path: Path, suffix: str):
    path = emit_report(_reports(), tmp_path / f"run{suffix}")
    back = parse_report(path)
    assert [r.params for r in back] == [r.params for r in _reports()]
    assert back[0].lhs == pytest.approx(1.5 - 0.25j)
    assert back[1].rhs == pytest.approx(-0.3 + 2.0j)
    assert [r.passed for r in back] == [True, False, True]
    assert [r.recheck() for r in back] == [True, False, True]
    again = emit_report(back, tmp_path / f"again{suffix}")
    assert again.read_bytes() == path.read_bytes()


def test_wall_time_only_on_request(tmp_path: Path):
    reports = _reports()
    reports[0].wall_time = 0.5
    plain_text = emit_report(reports, tmp_path / "a.jsonl").read_text(encoding="utf-8")
    timed = emit_report(reports, tmp_path / "b.jsonl", timings=True).read_text(encoding="utf-8")
    assert "wall_time" not in plain_text
    assert '"wall_time":0.5' in timed


def test_float_encoding_is_stable():
    assert encode(0.1) == "0.10000000000000001"
    assert encode(2.0) == "2.0"
    assert encode({"b": 1, "a": 1j}) == '{"a":{"im":1.0,"re":0.0},"b":1}'
    with pytest.raises(ReportIOError):
        encode(object())


def test_malformed_report_lines(tmp_path: Path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"verifier": "x"}\n', encoding="utf-8")
    with pytest.raises(ReportIOError):
        parse_report(path)
    path.write_text("{not json\n", encoding="utf-8")
    with pytest.raises(ReportIOError):
        parse_report(path)


def test_summary_counts():
    df = summarize(_reports())
    row = df[df.verifier == "charsum"].iloc[0]
    assert row.total == 2 and row.passed == 1 and row.failed == 1
    assert summarize([]).empty


def test_empty_bench_ladder_passes():
    table = bench_kernels([])
    assert table.rows == [] and table.passed
    assert table.to_frame().empty


def test_small_bench_rows():
    table = bench_kernels([1000], repeat=1)
    kernels = {row.kernel for row in table.rows}
    assert {"inverse-batched", "inverse-naive", "kloosterman"} <= kernels
    assert 1000 in table.speedups
    params = charsum_for_size(1000)
    assert params is not None and params.term_count >= 1000 and params.q % 3


def test_plots_are_written(tmp_path: Path):
    written = plot_reports(_reports(), tmp_path / "plots")
    names = sorted(p.name for p in written)
    assert "charsum-errors.svg" in names
    assert any(name.startswith("second-moment-ladder") for name in names)
    assert all(p.read_text(encoding="utf-8").lstrip().startswith("<?xml") for p in written)


def test_vanishing_default_grid_covers_both_branches():
    result = run_verifier(RunConfig(verifier="vanishing"))
    assert result.passed, [r.details for r in result.failures]
    branches = [r.details["branch"] for r in result.reports]
    assert branches.count("deep-modulus") == 16
    assert branches.count("p-divides-n1") == 32
    flagged = [r for r in result.reports if r.details["discrepancy"]]
    assert flagged and all(r.details["branch"] == "deep-modulus" for r in flagged)
    assert all(
        r.details["vanishes"] for r in result.reports if r.details["branch"] == "p-divides-n1"
    )
