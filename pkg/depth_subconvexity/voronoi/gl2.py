"""Voronoi summation checks for a level-one weight-12 cusp form and for the divisor function."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import special

from ..analytic.quadrature import composite_gauss
from ..analytic.testfunctions import TestFunction
from ..errors import NotCoprime, TooLarge
from ..logging import get_logger
from ..numtheory.characters import TWO_PI, e_array
from ..numtheory.residue import inv
from .coefficients import divisor_table, hecke_lambda

log = get_logger(__name__)

WEIGHT = 12
DUAL_BLOCK = 256
DUAL_LIMIT = 50_000
NEGLIGIBLE = 1e-12
VORONOI_TOLERANCE = 1e-4


@dataclass
class VoronoiReport:
    check: str
    a: int
    q: int
    test_function: str
    lhs: complex
    rhs: complex
    scale: float
    dual_terms: int
    tolerance: float = VORONOI_TOLERANCE
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def abs_error(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_error(self) -> float:
        """Error relative to sum |a(n)| g(n), the size of the sum without cancellation."""
        return self.abs_error / self.scale if self.scale > 0 else self.abs_error

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        for key in ("lhs", "rhs"):
            out[key] = {"re": self.__dict__[key].real, "im": self.__dict__[key].imag}
        out.update(abs_error=self.abs_error, rel_error=self.rel_error, passed=self.passed)
        return out


def _check_coprime(a: int, q: int) -> int:
    if q < 1 or math.gcd(a, q) != 1:
        raise NotCoprime(f"Voronoi needs (a, q) = 1, got a={a}, q={q}")
    return inv(a, q) if q > 1 else 0


def _twisted_sum(
    coeffs: Callable[[np.ndarray], np.ndarray], g: TestFunction, a: int, q: int
) -> tuple[complex, float]:
    lo, hi = g.support
    n = np.arange(max(1, math.ceil(lo)), math.floor(hi) + 1, dtype=np.int64)
    if len(n) == 0:
        return 0j, 0.0
    weights = coeffs(n) * g(n.astype(float))
    return complex(np.sum(weights * e_array(a * n, q))), float(np.sum(np.abs(weights)))


def _hankel_block(
    kernel: Callable[[np.ndarray], np.ndarray], g: TestFunction, ys: np.ndarray, q: int
) -> np.ndarray:
    """int g(x) kernel(4 pi sqrt(x y) / q) dx for each y, on panels resolving the kernel phase."""
    lo, hi = g.support
    rate = TWO_PI * math.sqrt(float(ys.max()) / lo) / q
    panels = max(128, int(math.ceil((hi - lo) * rate / (0.5 * math.pi))))

    def integrand(x: np.ndarray) -> np.ndarray:
        arg = 2.0 * TWO_PI * np.sqrt(np.outer(ys, x)) / q
        return kernel(arg) * g(x)[None, :]

    return composite_gauss(integrand, lo, hi, panels)


def _dual_sum(
    terms: Callable[[np.ndarray], np.ndarray], scale: float, label: str
) -> tuple[complex, int]:
    """Sum terms(n) block by block until two consecutive blocks are negligible."""
    total, quiet, start = 0j, 0, 1
    while quiet < 2:
        if start > DUAL_LIMIT:
            raise TooLarge(f"{label} dual sum did not settle within {DUAL_LIMIT} terms")
        n = np.arange(start, start + DUAL_BLOCK, dtype=np.int64)
        block = terms(n)
        total += complex(np.sum(block))
        quiet = quiet + 1 if float(np.max(np.abs(block))) < NEGLIGIBLE * scale else 0
        start += DUAL_BLOCK
    log.debug("%s dual sum truncated at n=%d", label, start - 1)
    return total, start - 1


def gl2_voronoi_check(
    g: TestFunction, a: int, q: int, tolerance: float = VORONOI_TOLERANCE
) -> VoronoiReport:
    """sum lambda(n) e(an/q) g(n) against (2 pi i^k / q) sum lambda(n) e(-a'n/q) int g J_{k-1}."""
    abar = _check_coprime(a, q)
    lhs, scale = _twisted_sum(hecke_lambda, g, a, q)
    prefactor = TWO_PI * (1j**WEIGHT) / q

    def terms(n: np.ndarray) -> np.ndarray:
        h = _hankel_block(lambda z: special.jv(WEIGHT - 1, z), g, n.astype(float), q)
        return prefactor * hecke_lambda(n) * e_array(-abar * n, q) * h

    rhs, length = _dual_sum(terms, scale, "gl2")
    return VoronoiReport("voronoi-gl2", a, q, g.kind, lhs, rhs, scale, length, tolerance)


def divisor_main_term(g: TestFunction, q: int) -> complex:
    """(1/q) int (log x + 2 gamma - 2 log q) g(x) dx."""
    lo, hi = g.support
    shift = 2 * np.euler_gamma - 2 * math.log(q)
    return composite_gauss(lambda x: (np.log(x) + shift) * g(x), lo, hi, 256) / q


def divisor_voronoi_check(
    g: TestFunction,
    a: int,
    q: int,
    tolerance: float = VORONOI_TOLERANCE,
    include_main_term: bool = True,
) -> VoronoiReport:
    """sum d(n) e(an/q) g(n) against the main term plus the Y0 and K0 dual sums."""
    abar = _check_coprime(a, q)
    table = divisor_table(max(DUAL_LIMIT + DUAL_BLOCK, math.floor(g.support[1]) + 1))

    def d(n: np.ndarray) -> np.ndarray:
        return table[n].astype(float)

    lhs, scale = _twisted_sum(d, g, a, q)
    main = complex(divisor_main_term(g, q))

    def terms(n: np.ndarray) -> np.ndarray:
        ys = n.astype(float)
        y_part = -TWO_PI * _hankel_block(special.y0, g, ys, q)
        k_part = 4.0 * _hankel_block(special.k0, g, ys, q)
        return d(n) * (e_array(-abar * n, q) * y_part + e_array(abar * n, q) * k_part) / q

    dual, length = _dual_sum(terms, scale, "divisor")
    rhs = dual + main if include_main_term else dual
    return VoronoiReport(
        "voronoi-divisor",
        a,
        q,
        g.kind,
        lhs,
        rhs,
        scale,
        length,
        tolerance,
        details={
            "main_term": {"re": main.real, "im": main.imag},
            "main_term_included": include_main_term,
        },
    )
