"""Verification reports and their bit-stable JSON-lines / CSV encodings.

Field order is fixed, floats carry 17 significant digits and lines end in LF, so two runs
over the same grid write byte-identical files. Wall time is only written on request.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Literal, Optional

import numpy as np
import pandas as pd

from ..errors import ReportIOError
from ..io import read_jsonl, read_report_csv, write_lines

Format = Literal["json", "csv"]
SUMMARY_COLUMNS = ["verifier", "total", "passed", "failed", "max_rel_error", "max_ratio"]

JSON_FIELDS = (
    "verifier", "params", "passed", "lhs", "rhs", "abs_error", "rel_error", "ratio", "threshold",
    "metric", "details",
)
CSV_FIELDS = (
    "verifier", "params", "passed", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error",
    "rel_error", "ratio", "threshold", "metric", "details",
)


def plain(value: Any) -> Any:
    """Normalise to what a report file can hold: tuples become lists, numpy becomes Python."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(v) for v in value]
    if isinstance(value, np.generic):
        return plain(value.item())
    return value


@dataclass
class VerificationReport:
    """One verified tuple; ``metric`` names the field compared against ``threshold``."""

    verifier: str
    params: dict[str, Any]
    passed: bool
    lhs: Optional[complex] = None
    rhs: Optional[complex] = None
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None
    ratio: Optional[float] = None
    threshold: Optional[float] = None
    metric: Optional[str] = None
    wall_time: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.details = plain(self.details)

    def recheck(self) -> bool:
        """Recompute the pass flag from the stored values."""
        if self.metric is None or self.threshold is None:
            return self.passed
        if self.metric == "abs_error" and self.lhs is not None and self.rhs is not None:
            return abs(self.lhs - self.rhs) <= self.threshold
        value = getattr(self, self.metric)
        return value is not None and value <= self.threshold


# -- scalar encoding -------------------------------------------------------------------------
def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def encode(value: Any) -> str:
    """JSON text with sorted object keys and 17-digit floats; complex becomes {re, im}."""
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, complex):
        return encode({"im": value.imag, "re": value.real})
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted((str(k), v) for k, v in value.items())
        return "{" + ",".join(f"{json.dumps(k)}:{encode(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ",".join(encode(v) for v in value) + "]"
    raise ReportIOError(f"cannot encode {type(value).__name__} in a report")


def _complex_hook(obj: dict[str, Any]) -> Any:
    if set(obj) == {"re", "im"}:
        return complex(obj["re"], obj["im"])
    return obj


def _decode(text: str) -> Any:
    return json.loads(text, object_hook=_complex_hook)


def _opt_float(value: Any) -> Optional[float]:
    if value is None or value == "":
        return None
    return float(value)


# -- records ---------------------------------------------------------------------------------
def to_json_line(report: VerificationReport, timings: bool = False) -> str:
    values = {
        "verifier": report.verifier,
        "params": report.params,
        "passed": bool(report.passed),
        "lhs": report.lhs,
        "rhs": report.rhs,
        "abs_error": report.abs_error,
        "rel_error": report.rel_error,
        "ratio": report.ratio,
        "threshold": report.threshold,
        "metric": report.metric,
        "details": report.details,
    }
    keys = JSON_FIELDS[:-1] + (("wall_time",) if timings else ()) + JSON_FIELDS[-1:]
    if timings:
        values["wall_time"] = report.wall_time
    # fixed field order; only nested objects are key-sorted
    return "{" + ",".join(f'"{k}":{encode(values[k])}' for k in keys) + "}"


def from_record(data: dict[str, Any]) -> VerificationReport:
    try:
        return VerificationReport(
            verifier=str(data["verifier"]),
            params=dict(data["params"]),
            passed=bool(data["passed"]),
            lhs=None if data.get("lhs") is None else complex(data["lhs"]),
            rhs=None if data.get("rhs") is None else complex(data["rhs"]),
            abs_error=_opt_float(data.get("abs_error")),
            rel_error=_opt_float(data.get("rel_error")),
            ratio=_opt_float(data.get("ratio")),
            threshold=_opt_float(data.get("threshold")),
            metric=data.get("metric"),
            wall_time=float(data.get("wall_time") or 0.0),
            details=dict(data.get("details") or {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportIOError(f"malformed report record: {exc}") from exc


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return value
    return encode(value)


def to_csv_row(report: VerificationReport, timings: bool = False) -> list[str]:
    lhs, rhs = report.lhs, report.rhs
    row = [
        report.verifier,
        encode(report.params),
        _cell(bool(report.passed)),
        _cell(None if lhs is None else lhs.real),
        _cell(None if lhs is None else lhs.imag),
        _cell(None if rhs is None else rhs.real),
        _cell(None if rhs is None else rhs.imag),
        _cell(report.abs_error),
        _cell(report.rel_error),
        _cell(report.ratio),
        _cell(report.threshold),
        _cell(report.metric),
        encode(report.details),
    ]
    if timings:
        row.insert(-1, _cell(float(report.wall_time)))
    return row


def csv_header(timings: bool = False) -> list[str]:
    return list(CSV_FIELDS[:-1] + (("wall_time",) if timings else ()) + CSV_FIELDS[-1:])


def _csv_lines(reports: Iterable[VerificationReport], timings: bool) -> list[str]:
    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(csv_header(timings))
    for report in reports:
        writer.writerow(to_csv_row(report, timings))
    return buffer.getvalue().splitlines()


def _from_csv_row(row: dict[str, str]) -> VerificationReport:
    def pair(prefix: str) -> Optional[complex]:
        re_, im_ = row[f"{prefix}_re"], row[f"{prefix}_im"]
        return None if re_ == "" else complex(float(re_), float(im_ or 0.0))

    try:
        return VerificationReport(
            verifier=row["verifier"],
            params=_decode(row["params"]),
            passed=row["passed"] == "true",
            lhs=pair("lhs"),
            rhs=pair("rhs"),
            abs_error=_opt_float(row["abs_error"]),
            rel_error=_opt_float(row["rel_error"]),
            ratio=_opt_float(row["ratio"]),
            threshold=_opt_float(row["threshold"]),
            metric=row["metric"] or None,
            wall_time=float(row.get("wall_time") or 0.0),
            details=_decode(row["details"]) if row["details"] else {},
        )
    except (KeyError, ValueError) as exc:
        raise ReportIOError(f"malformed report row: {exc}") from exc


# -- files -----------------------------------------------------------------------------------
def infer_format(path: Path, fmt: Optional[str] = None) -> Format:
    if fmt in ("json", "csv"):
        return fmt  # type: ignore[return-value]
    if fmt is not None:
        raise ReportIOError(f"unknown report format {fmt!r}")
    return "csv" if path.suffix.lower() == ".csv" else "json"


def emit_report(
    reports: Iterable[VerificationReport],
    path: Path,
    fmt: Optional[str] = None,
    timings: bool = False,
) -> Path:
    """Write reports in the given order; ``fmt`` defaults from the file suffix."""
    path = Path(path)
    kind = infer_format(path, fmt)
    reports = list(reports)
    if kind == "csv":
        lines = _csv_lines(reports, timings)
    else:
        lines = [to_json_line(r, timings) for r in reports]
    try:
        write_lines(path, lines)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return path


def parse_report(path: Path, fmt: Optional[str] = None) -> list[VerificationReport]:
    path = Path(path)
    kind = infer_format(path, fmt)
    if kind == "csv":
        df = read_report_csv(path, required=CSV_FIELDS)
        return [_from_csv_row(row) for row in df.to_dict(orient="records")]
    return [from_record(rec) for rec in read_jsonl(path, object_hook=_complex_hook)]


def summarize(reports: Iterable[VerificationReport]) -> pd.DataFrame:
    """Per-verifier counts and worst errors, one row per verifier."""
    rows = [
        {
            "verifier": r.verifier,
            "passed": bool(r.passed),
            "rel_error": r.rel_error if r.rel_error is not None else np.nan,
            "ratio": r.ratio if r.ratio is not None else np.nan,
        }
        for r in reports
    ]
    if not rows:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    df = pd.DataFrame(rows)
    grouped = df.groupby("verifier", sort=True)
    out = pd.DataFrame(
        {
            "total": grouped.size(),
            "passed": grouped["passed"].sum(),
            "max_rel_error": grouped["rel_error"].max(),
            "max_ratio": grouped["ratio"].max(),
        }
    )
    out["failed"] = out["total"] - out["passed"]
    return out.reset_index()[SUMMARY_COLUMNS]
