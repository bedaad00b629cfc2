from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Callable, Iterable, Optional

import pandas as pd

from .errors import ReportIOError


def ensure_dir(path: str | Path) -> None:
    Path(path).mkdir(parents=True, exist_ok=True)


def write_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(data, indent=2, sort_keys=True, default=str)
    path.write_text(text + "\n", encoding="utf-8")


def read_json(path: Path) -> dict:
    if not path.exists():
        raise FileNotFoundError(str(path))
    return json.loads(path.read_text(encoding="utf-8"))


def write_lines(path: Path, lines: Iterable[str]) -> None:
    """Write pre-encoded lines with LF endings regardless of platform."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line + "\n")


def read_jsonl(path: Path, object_hook: Optional[Callable[[dict], Any]] = None) -> list[dict]:
    if not path.exists():
        raise FileNotFoundError(str(path))
    out: list[dict] = []
    with path.open("r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line, object_hook=object_hook))
            except json.JSONDecodeError as exc:
                raise ReportIOError(f"{path}:{number}: {exc.msg}") from exc
    return out


def read_report_csv(path: Path, required: Iterable[str]) -> pd.DataFrame:
    """Read a report CSV as strings with size limits.

    Env overrides:
      - DS_MAX_CSV_BYTES (default: 104_857_600 bytes)
      - DS_MAX_CSV_ROWS (default: 1_000_000 rows)
    """
    if not path.exists():
        raise FileNotFoundError(str(path))

    max_bytes = int(os.getenv("DS_MAX_CSV_BYTES", "104857600"))
    max_rows = int(os.getenv("DS_MAX_CSV_ROWS", "1000000"))

    size = path.stat().st_size
    if size > max_bytes:
        raise ReportIOError(f"CSV file too large: {size} bytes > limit {max_bytes}")

    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ReportIOError(f"{path}: {exc}") from exc

    missing = set(required) - set(df.columns)
    if missing:
        raise ReportIOError(f"CSV missing required columns: {sorted(missing)}")

    if len(df) > max_rows:
        raise ReportIOError(f"CSV has too many rows: {len(df)} > limit {max_rows}")

    return df


def write_jsonl(path: Path, records: list[dict]) -> None:
    write_lines(path, (json.dumps(r, sort_keys=True, default=str) for r in records))
