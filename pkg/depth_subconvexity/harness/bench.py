"""Throughput of the sum kernels: inverse tables, Kloosterman sums and the brute-force charsum."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional, Sequence

import pandas as pd

from ..charsum import sums
from ..charsum.params import CharsumParams
from ..config import settings
from ..errors import MathDomainError
from ..logging import get_logger
from ..numtheory.expsums import (
    KLOOSTERMAN_LIMIT,
    KloostermanSpec,
    batch_inverse,
    kloosterman,
    naive_inverses,
)
from ..numtheory.residue import units

log = get_logger(__name__)

DEFAULT_SIZES = (1_000, 10_000, 100_000)
SPEEDUP_FROM = 10_000
MIN_SPEEDUP = 2.0
KLOOSTERMAN_RATE_FLOOR = 1e6
_CHARSUM_BASE = CharsumParams(p=3, r=4, ell=2)
_CHARSUM_Q_CAP = 400


@dataclass(frozen=True)
class BenchRow:
    kernel: str
    size: int
    terms: int
    seconds: float

    @property
    def rate(self) -> float:
        return self.terms / self.seconds if self.seconds > 0 else float("inf")

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "rate": self.rate}


@dataclass
class BenchTable:
    rows: list[BenchRow] = field(default_factory=list)
    min_speedup: float = MIN_SPEEDUP

    def rate(self, kernel: str, size: int) -> Optional[float]:
        for row in self.rows:
            if row.kernel == kernel and row.size == size:
                return row.rate
        return None

    @property
    def speedups(self) -> dict[int, float]:
        """Batched over naive inverse throughput per size."""
        out = {}
        for size in sorted({r.size for r in self.rows if r.kernel == "inverse-batched"}):
            batched, naive = self.rate("inverse-batched", size), self.rate("inverse-naive", size)
            if batched is not None and naive:
                out[size] = batched / naive
        return out

    @property
    def passed(self) -> bool:
        checked = [s for size, s in self.speedups.items() if size >= SPEEDUP_FROM]
        return all(s >= self.min_speedup for s in checked)

    @property
    def slow_rows(self) -> list[BenchRow]:
        """Kloosterman-term kernels below the terms/second floor; reported, not failed."""
        kernels = ("kloosterman", "charsum")
        return [r for r in self.rows if r.kernel in kernels and r.rate < KLOOSTERMAN_RATE_FLOOR]

    def to_frame(self) -> pd.DataFrame:
        if not self.rows:
            return pd.DataFrame(columns=["kernel", "size", "terms", "seconds", "rate"])
        return pd.DataFrame([r.to_dict() for r in self.rows])


def _best_of(
    fn: Callable[[], Any], repeat: int, before: Optional[Callable[[], None]] = None
) -> float:
    best = float("inf")
    for _ in range(max(1, repeat)):
        if before is not None:
            before()
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def charsum_for_size(size: int) -> Optional[CharsumParams]:
    """Smallest coprime-to-p modulus q whose brute-force term count reaches ``size``."""
    for q in range(1, _CHARSUM_Q_CAP + 1):
        if q % _CHARSUM_BASE.p == 0:
            continue
        params = _CHARSUM_BASE.with_(q=q)
        if params.term_count > settings.max_terms:
            return None
        if params.term_count >= size:
            return params
    return None


def bench_kernels(
    sizes: Sequence[int] = DEFAULT_SIZES, repeat: int = 3, min_speedup: float = MIN_SPEEDUP
) -> BenchTable:
    """One row per kernel and size; an empty ladder gives an empty table."""
    table = BenchTable(min_speedup=min_speedup)
    for size in sorted(int(s) for s in sizes):
        if not 2 <= size <= KLOOSTERMAN_LIMIT:
            log.warning("skipping bench size %s outside [2, %s]", size, KLOOSTERMAN_LIMIT)
            continue
        xs = units(size)
        n = len(xs)
        spec = KloostermanSpec(1, 1, size)
        added = [
            BenchRow("inverse-batched", size, n, _best_of(lambda: batch_inverse(xs, size), repeat)),
            BenchRow("inverse-naive", size, n, _best_of(lambda: naive_inverses(xs, size), repeat)),
            BenchRow("kloosterman", size, n, _best_of(lambda: kloosterman(spec), repeat)),
        ]
        params = charsum_for_size(size)
        if params is not None:
            try:
                seconds = _best_of(
                    lambda: sums.charsum_bruteforce(params),
                    repeat,
                    before=sums._stratum_structure.cache_clear,
                )
            except MathDomainError as exc:
                log.warning("charsum bench at size %s skipped: %s", size, exc)
            else:
                added.append(BenchRow("charsum", size, params.term_count, seconds))
        for row in added:
            log.info("bench_row", extra={"event": "bench_row", "fields": row.to_dict()})
        table.rows.extend(added)
    return table
