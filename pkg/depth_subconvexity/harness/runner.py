"""Grid planning and execution: validate every tuple first, then run serially or on a pool."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from tqdm import tqdm

from ..errors import ConfigError, InvalidGrid
from ..logging import get_logger
from .grid import RunConfig, canonical_key, expand_grid
from .reports import VerificationReport
from .verifiers import get_verifier, run_tuple

log = get_logger(__name__)


def _log_event(event: str, **fields: Any) -> None:
    try:
        log.info(event, extra={"event": event, "fields": fields})
    except Exception:
        pass


@dataclass
class RunResult:
    verifier: str
    reports: list[VerificationReport] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failures(self) -> list[VerificationReport]:
        return [r for r in self.reports if not r.passed]

    @property
    def passed(self) -> bool:
        """An empty run passes."""
        return not self.failures


def plan(cfg: RunConfig) -> list[dict[str, int]]:
    """Expanded, validated, canonically sorted tuples; InvalidGrid lists every reject."""
    verifier = get_verifier(cfg.verifier)
    unknown = sorted(set(cfg.grid) - set(verifier.defaults))
    if unknown:
        known = ", ".join(sorted(verifier.defaults)) or "none"
        raise ConfigError(f"{cfg.verifier} has no grid key(s) {unknown}; known: {known}")
    tuples = expand_grid(cfg.grid, verifier.defaults)
    if verifier.expand is not None:
        tuples = [x for t in tuples for x in verifier.expand(t)]
    if verifier.reject is not None:
        rejects = [(t, reason) for t in tuples if (reason := verifier.reject(t))]
        if rejects:
            _log_event(
                "grid_rejected", verifier=cfg.verifier, rejected=len(rejects), total=len(tuples)
            )
            raise InvalidGrid(rejects)
    unique = {canonical_key(t): t for t in tuples}
    return [unique[k] for k in sorted(unique)]


def run_verifier(cfg: RunConfig, progress: bool = False) -> RunResult:
    """Run the whole grid; report order is the plan order whatever the pool does."""
    tuples = plan(cfg)
    _log_event("verifier_start", verifier=cfg.verifier, tuples=len(tuples), jobs=cfg.jobs)
    start = time.perf_counter()
    bar = tqdm(total=len(tuples), desc=cfg.verifier, unit="tuple", disable=not progress)
    reports: list[VerificationReport] = []
    if cfg.jobs > 1 and len(tuples) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(run_tuple, cfg.verifier, t, cfg) for t in tuples]
            for future in futures:
                reports.append(future.result())
                bar.update(1)
    else:
        for t in tuples:
            reports.append(run_tuple(cfg.verifier, t, cfg))
            bar.update(1)
    bar.close()
    result = RunResult(cfg.verifier, reports, time.perf_counter() - start)
    _log_event(
        "verifier_end",
        verifier=cfg.verifier,
        total=len(reports),
        failed=len(result.failures),
        seconds=round(result.seconds, 3),
    )
    return result
