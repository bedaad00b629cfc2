"""Oscillatory integrals I = int g(t) e^{i f(t)} dt: stationary phase and first-derivative decay."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..errors import InvalidParameters, MultipleStationaryPoints, NoStationaryPoint
from ..logging import get_logger
from .quadrature import adaptive_oscillatory
from .testfunctions import Bump, GaussianBump, TestFunction

log = get_logger(__name__)

Phase = Callable[[np.ndarray], np.ndarray]
SCAN_POINTS = 4001


@dataclass(frozen=True)
class OscIntegral:
    amplitude: TestFunction
    phase: Phase
    phase_d1: Phase
    phase_d2: Phase
    a: float
    b: float
    scales: dict[str, float] = field(default_factory=dict)

    def integrand(self, t: np.ndarray) -> np.ndarray:
        return self.amplitude(t) * np.exp(1j * self.phase(t))

    def direct(self, tol: float = 1e-13) -> complex:
        result = adaptive_oscillatory(self.integrand, self.a, self.b, omega=self.phase_d1, tol=tol)
        return result.value

    def is_zero(self) -> bool:
        grid = np.linspace(self.a, self.b, SCAN_POINTS)
        return not np.any(self.amplitude(grid))


def quadratic_phase(
    Y: float, center: float = 1.5, amplitude: Optional[TestFunction] = None
) -> OscIntegral:
    """f(t) = Y (t - center)^2 against a bump on [1, 2]."""
    g = amplitude or Bump(center=1.5, half_width=0.5)
    lo, hi = g.support
    return OscIntegral(
        amplitude=g,
        phase=lambda t: Y * (t - center) ** 2,
        phase_d1=lambda t: 2.0 * Y * (t - center),
        phase_d2=lambda t: np.full_like(np.asarray(t, dtype=float), 2.0 * Y),
        a=lo,
        b=hi,
        scales={"Y": Y, "Q": 1.0},
    )


def linear_phase(B: float, amplitude: Optional[TestFunction] = None) -> OscIntegral:
    """f(t) = B t, so f' = B everywhere."""
    g = amplitude or Bump(center=1.5, half_width=0.5)
    lo, hi = g.support
    return OscIntegral(
        amplitude=g,
        phase=lambda t: B * t,
        phase_d1=lambda t: np.full_like(np.asarray(t, dtype=float), B),
        phase_d2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        a=lo,
        b=hi,
        scales={"B": B},
    )


@dataclass(frozen=True)
class StationaryPhaseResult:
    direct: complex
    leading: complex
    expansion: complex
    t0: float
    relative_error: float
    expansion_error: float

    def to_dict(self) -> dict[str, object]:
        return {
            "direct_abs": abs(self.direct),
            "leading_abs": abs(self.leading),
            "t0": self.t0,
            "relative_error": self.relative_error,
            "expansion_error": self.expansion_error,
        }


def stationary_point(integral: OscIntegral) -> float:
    grid = np.linspace(integral.a, integral.b, SCAN_POINTS)
    d1 = integral.phase_d1(grid)
    signs = np.sign(d1)
    exact = np.nonzero(signs == 0)[0]
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    found = len(exact) + len(changes)
    if found == 0:
        raise NoStationaryPoint("f' has no zero on the interval")
    if found > 1:
        raise MultipleStationaryPoints(f"f' changes sign {found} times on the interval")
    if len(exact):
        return float(grid[exact[0]])
    i = int(changes[0])

    def slope(t: float) -> float:
        return float(integral.phase_d1(np.array([t]))[0])

    return float(brentq(slope, grid[i], grid[i + 1], xtol=1e-15))


def stationary_phase_compare(integral: OscIntegral, order: int = 0) -> StationaryPhaseResult:
    """Compare direct quadrature with the stationary-phase leading term and expansion.

    The expansion keeps (i / (2 f''))^n g^(2n)(t0) / n! for n <= order, which is exact
    in the quadratic-phase case up to the endpoint contributions.
    """
    if integral.is_zero():
        return StationaryPhaseResult(0j, 0j, 0j, float("nan"), 0.0, 0.0)
    if not 0 <= order <= 2:
        raise InvalidParameters("expansion order must be 0, 1 or 2")
    t0 = stationary_point(integral)
    grid = np.linspace(integral.a, integral.b, SCAN_POINTS)
    Y, Q = integral.scales.get("Y"), integral.scales.get("Q", 1.0)
    d2_min = float(np.min(integral.phase_d2(grid)))
    floor = Y / Q**2 if Y is not None else 0.0
    if d2_min <= 0 or d2_min < floor:
        raise InvalidParameters(f"f'' = {d2_min:.3g} is below the required floor {floor:.3g}")

    f0 = float(integral.phase(np.array([t0]))[0])
    f2 = float(integral.phase_d2(np.array([t0]))[0])
    base = math.sqrt(2 * math.pi / f2) * cmath.exp(1j * (math.pi / 4 + f0))
    g = integral.amplitude
    leading = base * float(g(t0))
    expansion = leading
    for n in range(1, order + 1):
        term = (1j / (2 * f2)) ** n * float(g.derivative(t0, 2 * n)) / math.factorial(n)
        expansion += base * term

    direct = integral.direct()
    scale = max(abs(direct), 1e-300)
    return StationaryPhaseResult(
        direct=direct,
        leading=leading,
        expansion=expansion,
        t0=t0,
        relative_error=abs(leading - direct) / scale,
        expansion_error=abs(expansion - direct) / scale,
    )


@dataclass(frozen=True)
class DecayReport:
    B: tuple[float, ...]
    values: tuple[float, ...]
    variation_ratio: float
    slope: float

    def to_dict(self) -> dict[str, object]:
        return {
            "B_min": self.B[0],
            "B_max": self.B[-1],
            "variation_ratio": self.variation_ratio,
            "slope": self.slope,
        }


def total_variation(g: TestFunction) -> float:
    lo, hi = g.support
    result = adaptive_oscillatory(lambda t: np.abs(g.derivative(t, 1)), lo, hi, tol=1e-12)
    return float(result.value.real)


def nonstationary_decay_check(
    amplitude: Optional[TestFunction] = None,
    ladder: Sequence[float] = (10, 20, 40, 80, 160, 320),
) -> DecayReport:
    """|I(B)| for f(t) = B t along a doubling ladder, its ratio to Var(g)/B and the slope."""
    g = amplitude or GaussianBump(center=1.5, width=1.0)
    values = [abs(linear_phase(B, g).direct()) for B in ladder]
    variation = total_variation(g)
    if variation == 0:
        return DecayReport(tuple(ladder), tuple(values), 0.0, float("-inf"))
    ratio = max(v * B / variation for v, B in zip(values, ladder))
    logs = np.log(np.maximum(values, 1e-300))
    slope = float(np.polyfit(np.log(ladder), logs, 1)[0])
    log.debug("decay ladder %s -> slope %.3f", list(ladder), slope)
    return DecayReport(tuple(float(b) for b in ladder), tuple(values), ratio, slope)
