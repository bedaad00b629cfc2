from .bench import BenchTable, bench_kernels
from .grid import RunConfig, expand_grid, parse_inline_grid
from .reports import VerificationReport, emit_report, parse_report, summarize
from .runner import RunResult, plan, run_verifier
from .verifiers import REGISTRY, Verifier, get_verifier

__all__ = [
    "REGISTRY",
    "BenchTable",
    "RunConfig",
    "RunResult",
    "VerificationReport",
    "Verifier",
    "bench_kernels",
    "emit_report",
    "expand_grid",
    "get_verifier",
    "parse_inline_grid",
    "parse_report",
    "plan",
    "run_verifier",
    "summarize",
]
