"""Compactly supported smooth weights with closed-form derivatives up to order four."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial import hermite_e

from ..errors import InvalidParameters

ArrayLike = Union[float, np.ndarray]
MAX_ORDER = 4
LOG_CUTOFF = 32.0


def _bell(u: list[np.ndarray], n: int) -> np.ndarray:
    """Complete Bell polynomial B_n(u1, ..., un), so d^n exp(u) = exp(u) B_n."""
    if n == 0:
        return np.ones_like(u[0])
    if n == 1:
        return u[1]
    if n == 2:
        return u[1] ** 2 + u[2]
    if n == 3:
        return u[1] ** 3 + 3 * u[1] * u[2] + u[3]
    return u[1] ** 4 + 6 * u[1] ** 2 * u[2] + 4 * u[1] * u[3] + 3 * u[2] ** 2 + u[4]


def _check_order(order: int) -> None:
    if not 0 <= order <= MAX_ORDER:
        raise InvalidParameters(f"derivative order must be in 0..{MAX_ORDER}, got {order}")


@dataclass(frozen=True)
class TestFunction:
    """Base class: subclasses define ``support``, ``_eval`` and ``_derivative``."""

    __test__ = False  # keep pytest from collecting the class

    @property
    def kind(self) -> str:
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, x: ArrayLike, order: int = 1) -> np.ndarray:
        _check_order(order)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.support
        out = np.zeros_like(xs)
        inside = (xs > lo) & (xs < hi)
        if np.any(inside):
            out[inside] = self._derivative(xs[inside], order)
        return out if np.ndim(x) else out[0]

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return self.derivative(x, 0)

    def scaled(self, s: float) -> "TestFunction":
        """x -> g(x / s), whose Mellin transform is s^w times the original."""
        raise NotImplementedError

    def mellin(self, w: complex, nodes: int = 4001) -> complex:
        """Numerical Mellin transform over the support; requires support in (0, inf)."""
        lo, hi = self.support
        if lo <= 0:
            raise InvalidParameters("Mellin transform needs support in (0, inf)")
        t, wt = np.polynomial.legendre.leggauss(64)
        edges = np.linspace(lo, hi, max(2, nodes // 64) + 1)
        total = 0j
        for a, b in zip(edges[:-1], edges[1:]):
            x = 0.5 * (b - a) * t + 0.5 * (b + a)
            total += 0.5 * (b - a) * complex(np.sum(wt * self(x) * x ** (w - 1)))
        return total


@dataclass(frozen=True)
class Bump(TestFunction):
    """exp(1 - 1/(1 - t^2)) with t = (x - center) / half_width; equals ``height`` at center."""

    center: float = 1.5
    half_width: float = 0.5
    height: float = 1.0

    def __post_init__(self) -> None:
        if self.half_width <= 0:
            raise InvalidParameters("bump half-width must be positive")

    @property
    def kind(self) -> str:
        return "bump"

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.half_width, self.center + self.half_width

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        t = (x - self.center) / self.half_width
        # u = 1 - 1/(1 - t^2) = 1 + (1/2)(1/(t-1) - 1/(t+1))
        u = [1.0 - 1.0 / (1.0 - t * t)]
        for k in range(1, order + 1):
            poles = (t - 1) ** (-k - 1) - (t + 1) ** (-k - 1)
            u.append(0.5 * (-1) ** k * math.factorial(k) * poles)
        value = self.height * np.exp(u[0]) * _bell(u, order)
        return value / self.half_width**order

    def scaled(self, s: float) -> "Bump":
        return Bump(self.center * s, self.half_width * s, self.height)


@dataclass(frozen=True)
class GaussianBump(TestFunction):
    """A Gaussian of deviation width/16 cut off at +-width/2, where it is below e^-32."""

    center: float = 1.5
    width: float = 1.0

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise InvalidParameters("gaussian-bump width must be positive")

    @property
    def kind(self) -> str:
        return "gaussian-bump"

    @property
    def sigma(self) -> float:
        return self.width / 16.0

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.width / 2, self.center + self.width / 2

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        z = (x - self.center) / self.sigma
        coeffs = np.zeros(order + 1)
        coeffs[order] = 1.0
        poly = hermite_e.hermeval(z, coeffs)
        return (-1) ** order * poly * np.exp(-z * z / 2) / self.sigma**order

    def scaled(self, s: float) -> "GaussianBump":
        return GaussianBump(self.center * s, self.width * s)


@dataclass(frozen=True)
class LogGaussian(TestFunction):
    """exp(-(log(x/N))^2 / (2 s^2)) on [N e^-8s, N e^8s]; Gaussian decay of the Mellin transform."""

    N: float = 100.0
    s: float = 0.25

    def __post_init__(self) -> None:
        if self.N <= 0 or self.s <= 0:
            raise InvalidParameters("log-gaussian needs N > 0 and s > 0")

    @property
    def kind(self) -> str:
        return "log-gaussian"

    @property
    def support(self) -> tuple[float, float]:
        spread = math.sqrt(2 * LOG_CUTOFF) * self.s
        return self.N * math.exp(-spread), self.N * math.exp(spread)

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        y = np.log(x / self.N)
        s2 = self.s**2
        u = [
            -(y**2) / (2 * s2),
            -y / (s2 * x),
            -(1 - y) / (s2 * x**2),
            -(2 * y - 3) / (s2 * x**3),
            -(11 - 6 * y) / (s2 * x**4),
        ]
        return np.exp(u[0]) * _bell(u, order)

    def scaled(self, s: float) -> "LogGaussian":
        return LogGaussian(self.N * s, self.s)

    def mellin(self, w: complex, nodes: int = 0) -> complex:
        """N^w sqrt(2 pi) s exp(w^2 s^2 / 2), exact up to the e^-32 truncation."""
        return complex(self.N**w * math.sqrt(2 * math.pi) * self.s * np.exp(w * w * self.s**2 / 2))

    def mellin_derivatives(self) -> tuple[float, float, float]:
        """Values of the Mellin transform and its first two w-derivatives at w = 1."""
        g1 = self.N * math.sqrt(2 * math.pi) * self.s * math.exp(self.s**2 / 2)
        mu = math.log(self.N) + self.s**2
        return g1, g1 * mu, g1 * (mu**2 + self.s**2)


@dataclass(frozen=True)
class ProductFunction(TestFunction):
    left: TestFunction
    right: TestFunction

    @property
    def kind(self) -> str:
        return "product"

    @property
    def support(self) -> tuple[float, float]:
        lo = max(self.left.support[0], self.right.support[0])
        hi = min(self.left.support[1], self.right.support[1])
        return (lo, hi) if lo < hi else (lo, lo)

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        return sum(
            math.comb(order, i) * self.left.derivative(x, i) * self.right.derivative(x, order - i)
            for i in range(order + 1)
        )

    def scaled(self, s: float) -> "ProductFunction":
        return ProductFunction(self.left.scaled(s), self.right.scaled(s))


@dataclass(frozen=True)
class ZeroFunction(TestFunction):
    lo: float = 1.0
    hi: float = 2.0

    @property
    def kind(self) -> str:
        return "zero"

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    def _derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        return np.zeros_like(x)

    def scaled(self, s: float) -> "ZeroFunction":
        return ZeroFunction(self.lo * s, self.hi * s)


KINDS: dict[str, Callable[..., TestFunction]] = {
    "bump": Bump,
    "gaussian-bump": GaussianBump,
    "log-gaussian": LogGaussian,
    "zero": ZeroFunction,
}


def make_test_function(kind: str, **params: float) -> TestFunction:
    try:
        factory = KINDS[kind]
    except KeyError as exc:
        known = sorted(KINDS)
        raise InvalidParameters(f"unknown test function kind {kind!r}; known: {known}") from exc
    return factory(**params)


def product(left: TestFunction, right: TestFunction) -> ProductFunction:
    return ProductFunction(left, right)
