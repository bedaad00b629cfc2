"""Standalone SVG figures from emitted reports."""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib as mpl  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

from ..logging import get_logger  # noqa: E402
from ..io import ensure_dir  # noqa: E402
from .reports import VerificationReport  # noqa: E402

log = get_logger(__name__)

FLOOR = 1e-300


def _style() -> None:
    mpl.rcParams["svg.hashsalt"] = "depthsub"
    mpl.rcParams["svg.fonttype"] = "path"
    mpl.rcParams["font.size"] = 10
    mpl.rcParams["axes.grid"] = True
    mpl.rcParams["grid.alpha"] = 0.3
    mpl.rcParams["savefig.bbox"] = "tight"


def _save(fig: plt.Figure, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    log.debug("wrote %s", path)
    return path


def _measure(report: VerificationReport) -> Optional[float]:
    for value in (report.rel_error, report.ratio, report.abs_error):
        if value is not None:
            return max(abs(value), FLOOR)
    return None


def plot_errors(reports: Iterable[VerificationReport], outdir: Path) -> list[Path]:
    """Error (or measured ratio) against parameter index, one file per verifier."""
    grouped: dict[str, list[VerificationReport]] = defaultdict(list)
    for report in reports:
        grouped[report.verifier].append(report)
    written = []
    for name in sorted(grouped):
        points = [(i, _measure(r), r.passed, r.threshold) for i, r in enumerate(grouped[name])]
        points = [p for p in points if p[1] is not None]
        if not points:
            continue
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ok = [p for p in points if p[2]]
        bad = [p for p in points if not p[2]]
        if ok:
            ax.scatter([p[0] for p in ok], [p[1] for p in ok], s=10, label="pass")
        if bad:
            ax.scatter(
                [p[0] for p in bad], [p[1] for p in bad],
                s=14, marker="x", color="red", label="fail",
            )
        thresholds = {p[3] for p in points if p[3] is not None}
        if len(thresholds) == 1:
            ax.axhline(
                thresholds.pop(), linestyle="--", color="gray", linewidth=0.8, label="threshold"
            )
        ax.set_yscale("log")
        ax.set_xlabel("parameter index")
        ax.set_ylabel("error / ratio")
        ax.set_title(name)
        ax.legend(loc="best", fontsize=8)
        written.append(_save(fig, outdir / f"{name}-errors.svg"))
    return written


def plot_ladders(reports: Iterable[VerificationReport], outdir: Path) -> list[Path]:
    """Log-log ladders from stationary-phase, nonstationary-decay and second-moment reports."""
    written = []
    for i, report in enumerate(reports):
        d = report.details
        if "ladder" in d and ("errors" in d or "values" in d):
            xs, ys = d["ladder"], d.get("errors", d.get("values"))
            ylabel = "relative error" if "errors" in d else "|I(B)|"
        elif "points" in d:
            xs = [pt["x"] for pt in d["points"]]
            ys = [pt["ratio"] for pt in d["points"]]
            ylabel = "ratio"
        else:
            continue
        if not xs:
            continue
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.loglog(xs, [max(abs(y), FLOOR) for y in ys], marker="o", markersize=3)
        ax.set_xlabel("x" if "points" in d else "scale")
        ax.set_ylabel(ylabel)
        label = ",".join(f"{k}={v}" for k, v in sorted(report.params.items()))
        ax.set_title(f"{report.verifier} {label}".strip())
        written.append(_save(fig, outdir / f"{report.verifier}-ladder-{i}.svg"))
    return written


def plot_reports(reports: Iterable[VerificationReport], outdir: Path) -> list[Path]:
    _style()
    outdir = Path(outdir)
    ensure_dir(outdir)
    reports = list(reports)
    return plot_errors(reports, outdir) + plot_ladders(reports, outdir)
