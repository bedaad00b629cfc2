from __future__ import annotations

import os
from dataclasses import dataclass


def _env(key: str, default: str | None = None) -> str | None:
    v = os.getenv(key)
    return v if v is not None else default


@dataclass(frozen=True)
class Settings:
    artifacts_dir: str = _env("DS_ARTIFACTS_DIR", "./artifacts") or "./artifacts"
    ledger: str = _env("DS_LEDGER", "./artifacts/ledger.jsonl") or "./artifacts/ledger.jsonl"
    default_tolerance: float = float(_env("DS_DEFAULT_TOLERANCE", "1e-6") or "1e-6")
    ratio_ceiling: float = float(_env("DS_RATIO_CEILING", "16") or "16")
    max_terms: int = int(_env("DS_MAX_TERMS", "100000000") or "100000000")
    jobs: int = int(_env("DS_JOBS", "1") or "1")
    sieve_limit: int = int(_env("DS_SIEVE_LIMIT", "10000000") or "10000000")


settings = Settings()
