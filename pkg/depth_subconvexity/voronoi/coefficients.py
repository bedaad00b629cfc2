"""Arithmetic coefficients: tau, d, d3, sigma_{0,0} and the GL(3) coefficients A(n1, n2)."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import divisors

from ..errors import TooLarge
from ..logging import get_logger

log = get_logger(__name__)

TAU_LIMIT = 10**5
DIVISOR_LIMIT = 10**7
DEFAULT_TAU_CACHE = 10**4


class QSeries:
    """Truncated q-series with exact integer coefficients (object dtype)."""

    def __init__(self, coeffs: np.ndarray | list[int], order: int | None = None) -> None:
        c = np.array(coeffs, dtype=object)
        self.order = len(c) - 1 if order is None else order
        if len(c) < self.order + 1:
            c = np.concatenate([c, np.zeros(self.order + 1 - len(c), dtype=object)])
        self.coeffs = c[: self.order + 1]

    def __repr__(self) -> str:
        return f"QSeries(order={self.order}, coeffs={list(self.coeffs[:5])}...)"

    def support(self) -> list[tuple[int, int]]:
        return [(i, int(c)) for i, c in enumerate(self.coeffs) if c != 0]

    def mul_sparse(self, other: "QSeries") -> "QSeries":
        """Product when ``other`` has few nonzero terms: one shifted add per term."""
        order = min(self.order, other.order)
        out = np.zeros(order + 1, dtype=object)
        for shift, c in other.support():
            if shift > order:
                break
            out[shift:] += c * self.coeffs[: order + 1 - shift]
        return QSeries(out, order)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return self.mul_sparse(other)

    def __pow__(self, power: int) -> "QSeries":
        result = QSeries([1], self.order)
        for _ in range(power):
            result = result.mul_sparse(self)
        return result


def euler_cubed(order: int) -> QSeries:
    """prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^(k(k+1)/2), a sparse series."""
    coeffs = np.zeros(order + 1, dtype=object)
    k = 0
    while k * (k + 1) // 2 <= order:
        coeffs[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return QSeries(coeffs, order)


class _TauCache:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._values: np.ndarray = np.array([0], dtype=object)

    def upto(self, n: int) -> np.ndarray:
        if n > TAU_LIMIT:
            raise TooLarge(f"tau({n}) exceeds the series bound {TAU_LIMIT}")
        with self._lock:
            if len(self._values) <= n:
                bound = min(TAU_LIMIT, max(n, DEFAULT_TAU_CACHE, 2 * (len(self._values) - 1)))
                # Delta = q * ((prod (1 - q^n))^3)^8
                eta_cubed = euler_cubed(bound)
                series = eta_cubed**8
                values = np.zeros(bound + 1, dtype=object)
                values[1:] = series.coeffs[:bound]
                self._values = values
                log.debug("tau cache extended to %d", bound)
            return self._values


_TAU = _TauCache()


def ramanujan_tau(n: int) -> int:
    if n < 1:
        raise ValueError("tau is defined for n >= 1")
    return int(_TAU.upto(n)[n])


def tau_table(n: int) -> np.ndarray:
    """tau(0..n) as Python integers; index 0 is 0."""
    return _TAU.upto(n)[: n + 1]


def hecke_lambda(n: int | np.ndarray) -> np.ndarray:
    """Normalised coefficients tau(n) / n^(11/2)."""
    ns = np.atleast_1d(np.asarray(n, dtype=np.int64))
    taus = tau_table(int(ns.max()))
    out = np.array([float(taus[k]) / float(k) ** 5.5 for k in ns])
    return out if np.ndim(n) else out[0]


@lru_cache(maxsize=8)
def divisor_table(n: int) -> np.ndarray:
    """d(0..n) with d(0) = 0."""
    if n > DIVISOR_LIMIT:
        raise TooLarge(f"divisor table beyond {DIVISOR_LIMIT}")
    d = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        d[i::i] += 1
    d.setflags(write=False)
    return d


@lru_cache(maxsize=8)
def d3_table(n: int) -> np.ndarray:
    """d3(0..n) as the Dirichlet convolution 1 * d."""
    d = divisor_table(n)
    d3 = np.zeros(n + 1, dtype=np.int64)
    for a in range(1, n + 1):
        d3[a::a] += d[1 : n // a + 1]
    d3.setflags(write=False)
    return d3


def divisor_count(n: int) -> int:
    return len(divisors(n))


def d3(n: int) -> int:
    return int(d3_table(max(n, 1))[n])


def d3_partial_sum_hyperbolic(x: int) -> int:
    """sum_{a <= x} sum_{b <= x/a} floor(x / (ab)), which equals sum_{n <= x} d3(n)."""
    total = 0
    for a in range(1, x + 1):
        m = x // a
        b = np.arange(1, m + 1, dtype=np.int64)
        total += int(np.sum(m // b))
    return total


@lru_cache(maxsize=256)
def _sigma00_column(k1: int, n: int) -> np.ndarray:
    """sigma_{0,0}(k1, k2) for k2 = 0..n, a Dirichlet convolution of 1_{(., k1) = 1} with d."""
    d = divisor_table(n)
    out = np.zeros(n + 1, dtype=np.int64)
    for d2 in range(1, n + 1):
        if math.gcd(d2, k1) == 1:
            out[d2::d2] += d[1 : n // d2 + 1]
    out.setflags(write=False)
    return out


def sigma00(k1: int, k2: int) -> int:
    """Number of (d1, d2) with d1 d2 | k2 and (d2, k1) = 1."""
    return sum(divisor_count(k2 // d2) for d2 in divisors(k2) if math.gcd(d2, k1) == 1)


def gl3_coefficients(n1: int, n: int) -> np.ndarray:
    """A(n1, n2) = sum_{n3 | n1} sum_{n4 | n1/n3} sigma_{0,0}(n1/(n3 n4), n2) for n2 = 0..n."""
    out = np.zeros(n + 1, dtype=np.int64)
    for n3 in divisors(n1):
        for n4 in divisors(n1 // n3):
            out += _sigma00_column(n1 // (n3 * n4), n)
    return out


@dataclass(frozen=True)
class SecondMomentPoint:
    x: float
    total: int
    ratio: float


def second_moment(x: float, log_power: int = 8) -> SecondMomentPoint:
    """sum over n1^2 n2 <= x of A(n1, n2)^2, normalised by x (log x)^log_power."""
    if x < 1:
        return SecondMomentPoint(x, 0, 0.0)
    X = int(x)
    if X > 10**6:
        raise TooLarge("second moment is limited to x <= 1e6")
    total = 0
    n1 = 1
    while n1 * n1 <= X:
        n = X // (n1 * n1)
        a = gl3_coefficients(n1, n)[1:]
        total += int(np.sum(a.astype(object) ** 2))
        n1 += 1
    scale = x * math.log(max(x, math.e)) ** log_power
    return SecondMomentPoint(x, total, total / scale)


DEFAULT_LADDER = tuple(1000 * 2**k for k in range(8))
MONOTONE_FROM = 10**4


@dataclass
class SecondMomentReport:
    log_power: int
    slack: float
    points: list[SecondMomentPoint]

    @property
    def passed(self) -> bool:
        tail = [pt.ratio for pt in self.points if pt.x >= MONOTONE_FROM]
        finite = all(math.isfinite(pt.ratio) for pt in self.points)
        return finite and all(b <= a * (1 + self.slack) for a, b in zip(tail, tail[1:]))

    def to_dict(self) -> dict[str, object]:
        return {
            "log_power": self.log_power,
            "slack": self.slack,
            "points": [{"x": pt.x, "total": pt.total, "ratio": pt.ratio} for pt in self.points],
            "passed": self.passed,
        }


def second_moment_check(
    ladder: tuple[float, ...] = DEFAULT_LADDER, log_power: int = 8, slack: float = 0.1
) -> SecondMomentReport:
    """Ratios along a ladder of x; past 1e4 each may exceed its predecessor by at most ``slack``."""
    points = [second_moment(x, log_power) for x in sorted(ladder)]
    report = SecondMomentReport(log_power, slack, points)
    log.info("second moment ratios: %s", [round(pt.ratio, 6) for pt in points])
    return report


SERIES_KINDS = ("lambda", "d", "d3")


@dataclass(frozen=True)
class CoefficientSeries:
    kind: str
    bound: int

    def __post_init__(self) -> None:
        if self.kind not in SERIES_KINDS:
            raise ValueError(f"unknown coefficient series {self.kind!r}; known: {SERIES_KINDS}")

    def values(self) -> np.ndarray:
        if self.kind == "lambda":
            return np.concatenate([[0.0], hecke_lambda(np.arange(1, self.bound + 1))])
        if self.kind == "d":
            return divisor_table(self.bound)
        return d3_table(self.bound)

    def violations(self) -> list[str]:
        """Exhaustive invariant scan up to the bound; an empty list means every check held."""
        problems: list[str] = []
        d = divisor_table(self.bound)
        if self.kind == "lambda":
            taus = tau_table(self.bound)
            for m in range(2, self.bound + 1):
                for n in range(m + 1, self.bound // m + 1):
                    if math.gcd(m, n) == 1 and taus[m * n] != taus[m] * taus[n]:
                        problems.append(f"tau({m * n}) != tau({m}) tau({n})")
            lam = self.values()
            bad = np.nonzero(np.abs(lam[1:]) > d[1:] * (1 + 1e-12))[0]
            problems.extend(f"|lambda({n + 1})| > d({n + 1})" for n in bad)
        elif self.kind == "d3":
            d3s = d3_table(self.bound)
            for x in sorted({1, 10, 100, min(self.bound, 1000)}):
                if x <= self.bound and int(np.sum(d3s[: x + 1])) != d3_partial_sum_hyperbolic(x):
                    problems.append(f"d3 partial sum up to {x} disagrees with the hyperbolic count")
        return problems
