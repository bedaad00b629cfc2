"""Run configuration: TOML files, inline grid strings and the cartesian grid expansion."""
from __future__ import annotations

import itertools
import re
import sys
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..config import settings
from ..errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

Grid = dict[str, list[int]]

_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def parse_values(text: str) -> list[int]:
    """'1..3,7' -> [1, 2, 3, 7]; ranges are inclusive."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        match = _RANGE.match(part)
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if hi < lo:
                raise ConfigError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            try:
                values.append(int(part))
            except ValueError as exc:
                raise ConfigError(f"grid value {part!r} is not an integer or a..b range") from exc
    return values


def parse_inline_grid(spec: str) -> Grid:
    """'p=3,5;r=4;q=1..4' -> {'p': [3, 5], 'r': [4], 'q': [1, 2, 3, 4]}."""
    grid: Grid = {}
    for clause in spec.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        key, sep, rhs = clause.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"grid clause {clause!r} must look like key=values")
        grid[key.strip()] = parse_values(rhs)
    return grid


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    verifier: str
    grid: Grid = Field(default_factory=dict)
    tolerance: float = Field(default=settings.default_tolerance, gt=0)
    ratio_ceiling: float = Field(default=settings.ratio_ceiling, gt=0)
    jobs: int = Field(default=settings.jobs, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    timings: bool = False
    options: dict[str, Any] = Field(default_factory=dict)

    @field_validator("grid", mode="before")
    @classmethod
    def _coerce_grid(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_inline_grid(value)
        if isinstance(value, dict):
            out = {}
            for key, vals in value.items():
                if isinstance(vals, str):
                    out[key] = parse_values(vals)
                elif isinstance(vals, int):
                    out[key] = [vals]
                else:
                    out[key] = list(vals)
            return out
        return value

    @classmethod
    def from_toml(cls, path: str | Path, **overrides: Any) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(str(path))
        with path.open("rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def with_inline_grid(self, spec: Optional[str]) -> "RunConfig":
        """Inline clauses replace the matching keys of the file grid."""
        if not spec:
            return self
        return self.model_copy(update={"grid": {**self.grid, **parse_inline_grid(spec)}})


def expand_grid(grid: Grid, defaults: Grid) -> list[dict[str, int]]:
    """Cartesian product over sorted keys; keys missing from ``grid`` take their defaults."""
    merged = {**defaults, **grid}
    if any(len(values) == 0 for values in merged.values()):
        return []
    keys = sorted(merged)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(merged[k] for k in keys))]


def canonical_key(params: dict[str, Any]) -> tuple:
    """Sort key for deterministic report order."""
    def rank(v: Any) -> tuple:
        return (0, v) if isinstance(v, (int, float)) else (1, str(v))

    return tuple(sorted((k, rank(v)) for k, v in params.items()))
