from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, List, Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .config import settings
from .errors import ConfigError, map_exception
from .harness.bench import DEFAULT_SIZES, MIN_SPEEDUP, bench_kernels
from .harness.grid import RunConfig, parse_values
from .harness.plots import plot_reports
from .harness.reports import emit_report, parse_report, summarize
from .harness.runner import RunResult, run_verifier
from .harness.verifiers import REGISTRY
from .io import ensure_dir, write_json
from .logging import (
    get_logger,
    set_correlation_id,
    setup_development_logging,
    setup_production_logging,
)
from .provenance import ProvenanceStore, payload_digest, sha256_file

console = Console()
app = typer.Typer(
    add_completion=False,
    help="Depth-aspect subconvexity toolkit - exact and desk-scale checks with report emission",
)
log = get_logger("depthsub")


def _log_event(event: str, **fields: Any) -> None:
    try:
        log.info(event, extra={"event": event, "fields": fields})
    except Exception:
        pass


DRY_RUN = False
QUIET = False


def _handle_error(operation: str, error: Exception) -> None:
    """Standardized error handling."""
    info = map_exception(error)
    console.print(f"[red][ERROR] Error during {operation}: {info.message}[/red]")
    log.error(f"Operation '{operation}' failed: {info.message}", exc_info=True)
    raise typer.Exit(int(info.code))


def _parse_option(text: str) -> tuple[str, Any]:
    """'key=value' with the value read as JSON when it parses, else kept as text."""
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"option {text!r} must look like key=value")
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _build_config(
    name: str,
    config_file: Optional[str],
    grid: Optional[str],
    overrides: dict[str, Any],
    options: List[str],
) -> RunConfig:
    """File values, then the inline grid, then explicit flags."""
    if config_file:
        cfg = RunConfig.from_toml(config_file, verifier=name)
    else:
        cfg = RunConfig(verifier=name)
    cfg = cfg.with_inline_grid(grid)
    data = cfg.model_dump()
    data.update({k: v for k, v in overrides.items() if v is not None})
    data["options"] = {**data.get("options", {}), **dict(_parse_option(o) for o in options)}
    return RunConfig(**data)


def _default_out(name: str, fmt: str) -> str:
    return str(Path(settings.artifacts_dir) / f"{name}.{'csv' if fmt == 'csv' else 'jsonl'}")


def _summary_table(title: str, reports: list) -> Table:
    table = Table(title=title)
    for column in ("Verifier", "Total", "Passed", "Failed", "Max rel error", "Max ratio"):
        table.add_column(column, justify="left" if column == "Verifier" else "right")
    for row in summarize(reports).itertuples(index=False):
        table.add_row(
            row.verifier,
            str(row.total),
            str(row.passed),
            f"[red]{row.failed}[/red]" if row.failed else "0",
            "-" if row.max_rel_error != row.max_rel_error else f"{row.max_rel_error:.3e}",
            "-" if row.max_ratio != row.max_ratio else f"{row.max_ratio:.4g}",
        )
    return table


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose logging"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Suppress non-error console output"),
    log_format: str = typer.Option(
        "text", "--log-format", help="Log format: text or json", metavar="{text|json}"
    ),
    dry_run: bool = typer.Option(
        False, "--dry-run", help="Run checks but write no reports, plots or ledger entries"
    ),
) -> None:
    """Depth-aspect subconvexity toolkit - exact and desk-scale checks with report emission."""
    load_dotenv()
    global DRY_RUN, QUIET
    DRY_RUN = dry_run
    QUIET = quiet

    from uuid import uuid4
    corr_id = uuid4().hex[:8]
    set_correlation_id(corr_id)
    json_fmt = log_format.lower() == "json"
    os.environ["LOG_FORMAT"] = "json" if json_fmt else "text"
    if verbose and not quiet:
        setup_development_logging(json_format=json_fmt)
        log.setLevel("DEBUG")
        console.print(
            f"[blue][CONFIG] Verbose logging enabled | corr_id={corr_id} "
            f"| format={log_format}[/blue]"
        )
    else:
        setup_production_logging(json_format=json_fmt)
        if quiet:
            log.setLevel("ERROR")
        else:
            console.print(
                f"[blue][CONFIG] corr_id={corr_id} | format={log_format} "
                f"| quiet={quiet} | dry_run={dry_run}[/blue]"
            )


@app.command(name="verify")
def verify(
    name: str = typer.Argument(..., help="Verifier name; see `depthsub list`"),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="TOML run configuration"
    ),
    grid: Optional[str] = typer.Option(
        None, "--grid", "-g", help='Inline grid, e.g. "p=3,5;r=4;q=1..4"'
    ),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Report path"),
    fmt: Optional[str] = typer.Option(None, "--format", "-f", help="Report format: json or csv"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker processes"),
    tolerance: Optional[float] = typer.Option(None, "--tolerance", help="Error tolerance"),
    ratio_ceiling: Optional[float] = typer.Option(
        None, "--ratio-ceiling", help="Ceiling for measured ratios"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled checks"),
    option: List[str] = typer.Option([], "--option", help="Verifier option key=value (repeatable)"),
    timings: bool = typer.Option(False, "--timings", help="Include wall time in the report file"),
):
    """Run one verifier over its grid; exits 1 when any tuple fails."""
    result: Optional[RunResult] = None
    try:
        if fmt is None and out and out.lower().endswith(".csv"):
            fmt = "csv"
        overrides = {
            "out": out, "format": fmt, "jobs": jobs, "tolerance": tolerance,
            "ratio_ceiling": ratio_ceiling, "seed": seed, "timings": timings or None,
        }
        cfg = _build_config(name, config_file, grid, overrides, option)
        target = cfg.out or _default_out(cfg.verifier, cfg.format)
        _log_event("verify_start", verifier=cfg.verifier, out=target, jobs=cfg.jobs)
        if not QUIET:
            console.print(f"[blue][VERIFY] Running {cfg.verifier} with {cfg.jobs} job(s)...[/blue]")

        result = run_verifier(cfg, progress=not QUIET)

        if DRY_RUN:
            if not QUIET:
                console.print(
                    f"[yellow][DRY-RUN] Would write {len(result.reports)} report(s) "
                    f"to: {target}[/yellow]"
                )
        else:
            ensure_dir(Path(target).parent)
            emit_report(result.reports, Path(target), cfg.format, timings=cfg.timings)
        _log_event(
            "verify_end", verifier=cfg.verifier, failed=len(result.failures), dry_run=DRY_RUN
        )

        if not QUIET:
            status = "[green][SUCCESS] All checks passed[/green]" if result.passed else (
                f"[red][FAILED] {len(result.failures)} of {len(result.reports)} "
                "check(s) failed[/red]"
            )
            console.print(Panel.fit(
                f"{status}\n\n"
                f"Verifier: [bold]{cfg.verifier}[/bold]\n"
                f"Tuples: [bold]{len(result.reports)}[/bold]\n"
                f"Seconds: [bold]{result.seconds:.2f}[/bold]\n"
                f"Output: [bold]{target}[/bold]",
                title="[DATA] Verification Results",
            ))
            if result.reports:
                console.print(_summary_table("[DATA] Verification Summary", result.reports))

        if not DRY_RUN:
            ProvenanceStore(settings.ledger).log(
                "verify",
                {
                    "verifier": cfg.verifier,
                    "config_digest": payload_digest(cfg.model_dump()),
                    "report_sha256": sha256_file(target),
                    "passed": result.passed,
                },
                [config_file] if config_file else [],
                [target],
            )
    except Exception as e:
        _handle_error("verification", e)
    if result is not None and not result.passed:
        raise typer.Exit(1)


@app.command(name="bench")
def bench(
    sizes: str = typer.Option(
        ",".join(str(s) for s in DEFAULT_SIZES),
        "--sizes",
        "-s",
        help="Modulus ladder, e.g. 1000,10000",
    ),
    repeat: int = typer.Option(3, "--repeat", "-r", help="Timing repeats, best is kept"),
    min_speedup: float = typer.Option(
        MIN_SPEEDUP, "--min-speedup", help="Batched/naive inverse floor"
    ),
    out: str = typer.Option(
        str(Path(settings.artifacts_dir) / "bench.json"), "--out", "-o", help="Output JSON path"
    ),
):
    """Measure kernel throughput; exits 1 if batched inverses miss the speedup floor."""
    passed = True
    try:
        ladder = parse_values(sizes)
        _log_event("bench_start", sizes=ladder, repeat=repeat)
        if not QUIET:
            console.print(f"[blue][BENCH] Timing kernels on ladder {ladder}...[/blue]")
        table = bench_kernels(ladder, repeat=repeat, min_speedup=min_speedup)
        passed = table.passed
        payload = {
            "rows": [r.to_dict() for r in table.rows],
            "speedups": {str(k): v for k, v in table.speedups.items()},
            "min_speedup": min_speedup,
            "passed": passed,
        }
        if DRY_RUN:
            if not QUIET:
                console.print(f"[yellow][DRY-RUN] Would write benchmark to: {out}[/yellow]")
        else:
            write_json(Path(out), payload)
        _log_event("bench_end", rows=len(table.rows), passed=passed)

        if not QUIET:
            t = Table(title="[DATA] Kernel Throughput")
            for column in ("Kernel", "Size", "Terms", "Seconds", "Terms/s"):
                t.add_column(column, justify="left" if column == "Kernel" else "right")
            for row in table.rows:
                t.add_row(
                    row.kernel,
                    str(row.size),
                    str(row.terms),
                    f"{row.seconds:.4f}",
                    f"{row.rate:.3e}",
                )
            console.print(t)
            for size, speedup in table.speedups.items():
                console.print(
                    f"[blue][BENCH] batched/naive inverses at q={size}: {speedup:.1f}x[/blue]"
                )
            for row in table.slow_rows:
                console.print(
                    f"[yellow][WARN] {row.kernel} at size {row.size}: "
                    f"{row.rate:.3e} terms/s[/yellow]"
                )

        if not DRY_RUN:
            ProvenanceStore(settings.ledger).log(
                "bench", {"sizes": ladder, "repeat": repeat, "min_speedup": min_speedup}, [], [out]
            )
    except Exception as e:
        _handle_error("benchmark", e)
    if not passed:
        raise typer.Exit(1)


@app.command(name="report")
def report(
    path: str = typer.Argument(..., help="Report file written by `verify`"),
    fmt: Optional[str] = typer.Option(
        None, "--format", "-f", help="json or csv; default from suffix"
    ),
    plot: Optional[str] = typer.Option(None, "--plot", help="Directory for SVG plots"),
):
    """Summarise a report file; exits 1 if it holds failures."""
    failed = 0
    try:
        _log_event("report_start", path=path, plot=plot)
        reports = parse_report(Path(path), fmt)
        failed = sum(1 for r in reports if not r.passed)
        inconsistent = [r for r in reports if r.recheck() != r.passed]
        if not QUIET:
            console.print(Panel.fit(
                f"File: [bold]{path}[/bold]\n"
                f"Reports: [bold]{len(reports)}[/bold]\n"
                f"Failed: [bold]{failed}[/bold]",
                title="[DATA] Report Summary",
            ))
            if reports:
                console.print(_summary_table("[DATA] Per-Verifier Results", reports))
            for r in inconsistent:
                console.print(
                    f"[yellow][WARN] pass flag does not match stored values: {r.params}[/yellow]"
                )
        if plot:
            if DRY_RUN:
                if not QUIET:
                    console.print(f"[yellow][DRY-RUN] Would write plots to: {plot}[/yellow]")
            else:
                written = plot_reports(reports, Path(plot))
                if not QUIET:
                    console.print(
                        f"[green][PLOT] Wrote {len(written)} SVG file(s) to {plot}[/green]"
                    )
        _log_event("report_end", reports=len(reports), failed=failed)
    except Exception as e:
        _handle_error("report", e)
    if failed:
        raise typer.Exit(1)


@app.command(name="list")
def list_verifiers():
    """List registered verifiers."""
    table = Table(title="[DATA] Verifiers")
    table.add_column("Name")
    table.add_column("Grid keys")
    table.add_column("Description")
    for name in sorted(REGISTRY):
        v = REGISTRY[name]
        table.add_row(name, ",".join(sorted(v.defaults)) or "-", v.description)
    console.print(table)


if __name__ == "__main__":
    app()
