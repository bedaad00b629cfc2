"""A smooth delta-symbol expansion and its weight function g(q, x).

The construction fixes a normalised bump w0 on [1/2, 1] and sets
h(x, y) = sum_j (x j)^-1 (w0(x j) - w0(|y| / (x j))). Then
delta(n) = (1/Q) sum_q (1/q) c_q(n) int g(q, x) e(n x / (q Q)) dx with
g(q, x) = c_Q * int h(q/Q, y) V(y) e(-Q x y / q) dy, where V is a smooth cutoff equal to
one on |y| <= 1/2. The y-transform runs on an FFT grid over [-1, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
from scipy import integrate
from sympy.functions.combinatorial.numbers import stirling

from ..errors import OutOfRange, TooLarge
from ..logging import get_logger
from ..numtheory.characters import TWO_PI
from ..numtheory.expsums import ramanujan_sum_exact
from .quadrature import composite_gauss
from .testfunctions import Bump

log = get_logger(__name__)

FFT_POINTS = 1 << 15
TAIL_MASS = 1e-9
MAX_L = 10**4
MIN_POINTS_PER_BUMP = 32

_W0_SHAPE = Bump(center=0.75, half_width=0.25)


@lru_cache(maxsize=1)
def _w0_norm() -> float:
    value, _ = integrate.quad(lambda t: float(_W0_SHAPE(t)), 0.5, 1.0, epsabs=1e-14, epsrel=1e-13)
    return value


def w0(t: np.ndarray) -> np.ndarray:
    """Smooth bump on [1/2, 1] with unit integral."""
    return _W0_SHAPE(np.asarray(t, dtype=float)) / _w0_norm()


def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@lru_cache(maxsize=8)
def derivative_constant(j: int) -> float:
    """max |(u d/du)^j w0(u)| over max |w0(u)|, the j-dependent constant in the x^j g^(j) bound.

    (u d/du)^j expands into u^i d^i/du^i with Stirling numbers of the second kind.
    """
    u = np.linspace(0.5, 1.0, 20001)[1:-1]
    terms = np.zeros_like(u)
    for i in range(1, j + 1):
        terms += float(stirling(j, i)) * u**i * _W0_SHAPE.derivative(u, i)
    return max(1.0, float(np.max(np.abs(terms))) / _W0_SHAPE.height)


def smooth_step(y: np.ndarray) -> np.ndarray:
    """1 on |y| <= 1/2, 0 on |y| >= 1, smooth in between."""
    a = np.abs(np.asarray(y, dtype=float))
    up, down = _psi(1.0 - a), _psi(a - 0.5)
    return up / (up + down)


def window_w1(x: np.ndarray, radius: float) -> np.ndarray:
    """Smooth plateau equal to one on [-X, X] and supported in [-2X, 2X]."""
    return smooth_step(np.asarray(x, dtype=float) / (2.0 * radius))


def h_values(x: float, y: np.ndarray) -> np.ndarray:
    """h(x, y) for one x and an array of y; only j <= 2/x + 1 can contribute when |y| <= 1."""
    ay = np.abs(y)
    J = int(math.ceil(2.0 / x)) + 1
    out = np.zeros_like(ay)
    for j in range(1, J + 1):
        xj = x * j
        out += (float(w0(xj)) - w0(ay / xj)) / xj
    return out


@dataclass(frozen=True)
class GSamples:
    q: int
    x: np.ndarray
    g: np.ndarray
    dx: float


@dataclass
class DeltaExpansion:
    """Delta-symbol expansion with Q = 2 sqrt(L), detecting |n| <= 2L."""

    L: float
    fft_points: int = FFT_POINTS
    _samples: dict[int, GSamples] = field(default_factory=dict, repr=False)
    _tails: dict[int, float] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.L <= MAX_L:
            raise OutOfRange(f"L must lie in [1, {MAX_L}], got {self.L}")
        if self.points_per_bump < MIN_POINTS_PER_BUMP:
            raise OutOfRange(
                f"{self.fft_points} y points leave {self.points_per_bump:.1f} per bump of width "
                f"1/(2Q); need {MIN_POINTS_PER_BUMP}"
            )

    @property
    def Q(self) -> float:
        return 2.0 * math.sqrt(self.L)

    @property
    def q_max(self) -> int:
        return int(math.floor(self.Q))

    @property
    def points_per_bump(self) -> float:
        """Grid points across the narrowest bump of h, w0(|y| / (x j)) at x = 1/Q, j = 1."""
        return self.fft_points / (4.0 * self.Q)

    @cached_property
    def c_Q(self) -> float:
        r = np.arange(1, int(self.Q) + 2)
        return self.Q / float(np.sum(w0(r / self.Q)))

    @cached_property
    def y_grid(self) -> np.ndarray:
        M = self.fft_points
        return -1.0 + 2.0 * np.arange(M) / M

    def _H(self, q: int) -> np.ndarray:
        y = self.y_grid
        return h_values(q / self.Q, y) * smooth_step(y)

    def _transform(self, values: np.ndarray) -> np.ndarray:
        """int values(y) e(-j y / 2) dy on the grid, for j = -M/2 .. M/2 - 1."""
        M = self.fft_points
        j = np.arange(-M // 2, M // 2)
        spectrum = np.fft.fft(values)[j % M]
        return (2.0 / M) * np.where(j % 2, -1.0, 1.0) * spectrum

    def samples(self, q: int) -> GSamples:
        """g(q, x) at x_j = q j / (2Q), the nodes dual to the FFT grid."""
        if q not in self._samples:
            M = self.fft_points
            j = np.arange(-M // 2, M // 2)
            g = self.c_Q * self._transform(self._H(q)).real
            self._samples[q] = GSamples(q, q * j / (2.0 * self.Q), g, q / (2.0 * self.Q))
        return self._samples[q]

    def g(self, q: int, x: np.ndarray, derivative: int = 0) -> np.ndarray:
        """j-th x-derivative of g(q, x) at arbitrary x, by direct quadrature on the y grid."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        y = self.y_grid
        H = self._H(q) * (-1j * TWO_PI * y) ** derivative
        scale = (self.Q / q) ** derivative
        out = np.empty(xs.shape, dtype=complex)
        dy = 2.0 / self.fft_points
        for lo in range(0, xs.size, 64):
            t = self.Q * xs[lo : lo + 64] / q
            out[lo : lo + 64] = dy * (np.exp(-1j * TWO_PI * t[:, None] * y[None, :]) @ H)
        out *= self.c_Q * scale
        return out.real if derivative % 2 == 0 else out

    def tail_radius(self, q: int) -> float:
        """Smallest X with sum over |x| > X of |g(q, x)| dx below the tail mass."""
        if q not in self._tails:
            self._tails[q] = self._tail_radius(q)
        return self._tails[q]

    def _tail_radius(self, q: int) -> float:
        s = self.samples(q)
        order = np.argsort(-np.abs(s.x))
        mass = np.cumsum(np.abs(s.g[order]) * s.dx)
        outside = np.abs(s.x[order])
        beyond = mass < TAIL_MASS
        if not np.any(beyond):
            return float(np.max(np.abs(s.x)))
        last = int(np.nonzero(beyond)[0][-1])
        return float(outside[last])

    @cached_property
    def radius(self) -> float:
        return max(self.tail_radius(q) for q in range(1, self.q_max + 1))

    @property
    def epsilon_equivalent(self) -> float:
        """log X / log L for the common x-radius X."""
        return math.log(max(self.radius, 1.0)) / math.log(max(self.L, 2.0))

    def x_integral(self, q: int, n: int, window: bool = False) -> float:
        """int g(q, x) e(n x / (q Q)) dx on the dual nodes.

        The cut is |x| <= X for this q, or the smooth W1 window at the common radius.
        """
        s = self.samples(q)
        M = self.fft_points
        j = np.arange(-M // 2, M // 2)
        if window:
            weights = s.g * window_w1(s.x, self.radius)
        else:
            keep = np.abs(s.x) <= self.tail_radius(q)
            j, weights = j[keep], s.g[keep]
        Q2 = 2.0 * self.Q**2
        return float(np.sum(weights * np.cos(TWO_PI * ((n * j) % Q2) / Q2)) * s.dx)

    def delta(self, n: int, window: bool = False) -> float:
        if abs(n) > 2 * self.L:
            raise OutOfRange(f"|n| = {abs(n)} exceeds 2L = {2 * self.L}")
        total = 0.0
        for q in range(1, self.q_max + 1):
            total += ramanujan_sum_exact(n, q) * self.x_integral(q, n, window) / q
        return total / self.Q


@lru_cache(maxsize=8)
def expansion(L: float) -> DeltaExpansion:
    return DeltaExpansion(L)


def dfi_delta(n: int, L: float) -> float:
    """Approximate the indicator of n = 0 for |n| <= 2L through the smooth expansion."""
    return expansion(float(L)).delta(int(n))


@dataclass(frozen=True)
class GPropertiesReport:
    q: int
    ratios: dict[str, float]

    def to_dict(self) -> dict[str, object]:
        return {"q": self.q, **self.ratios}


def g_properties_check(q: int, x: np.ndarray, L: float = 50.0) -> GPropertiesReport:
    """Measure g against its four standard properties; each entry is a worst-case ratio.

    The derivative bound is x^j g^(j) << log Q min(Q/q, 1/|x|) with the implied constant
    taken as ``derivative_constant(j)``.
    """
    exp = expansion(float(L))
    Q = exp.Q
    xs = np.asarray(x, dtype=float)
    near = xs[np.abs(xs) <= 1.0]
    ratios: dict[str, float] = {}
    if near.size:
        g = exp.g(q, near)
        bound = (Q / q) * (q / Q + np.abs(near)) ** 2
        ratios["near_one"] = float(np.max(np.abs(g - 1.0) / bound))
    nz = xs[xs != 0]
    for j in (1, 2):
        d = exp.g(q, nz, derivative=j)
        bound = derivative_constant(j) * math.log(Q) * np.minimum(Q / q, 1.0 / np.abs(nz))
        ratios[f"derivative_{j}"] = float(np.max(np.abs(nz**j * d) / bound)) if nz.size else 0.0
    far = xs[np.abs(xs) >= 1.0]
    if far.size:
        ratios["decay_b3"] = float(np.max(np.abs(exp.g(q, far)) * np.abs(far) ** 3))
    else:
        ratios["decay_b3"] = 0.0
    s = exp.samples(q)
    ratios["l1_over_q_tenth"] = float(np.sum(np.abs(s.g)) * s.dx / Q**0.1)
    return GPropertiesReport(q, ratios)


@dataclass(frozen=True)
class TruncationReport:
    cutoff: int
    predicted: float
    ratio: float


def n2_truncation_check(
    length: float,
    modulus: int,
    q_over_c: float,
    weight: Optional[Bump] = None,
    threshold: float = 1e-8,
    nu_limit: int = 10**5,
) -> TruncationReport:
    """Dual frequency beyond which int U(y/N') e(2 (Q/C) sqrt(y/N') - nu y / Q) dy is negligible.

    The prediction is (Q/C) * Q / N'; the report carries the measured cutoff over it.
    """
    U = weight or Bump(center=1.5, half_width=0.5)
    per_nu = length / modulus
    nu_max = int(math.ceil((4.0 * q_over_c + 400.0) / per_nu))
    if nu_max > nu_limit:
        raise TooLarge(f"{nu_max} dual frequencies exceed {nu_limit}")
    nu = np.arange(nu_max + 1, dtype=float)
    cycles = 4.0 * q_over_c + nu_max * per_nu
    panels = max(8, int(4 * cycles))
    lo, hi = U.support

    values = np.empty(nu.shape)
    for start in range(0, nu.size, 32):
        chunk = nu[start : start + 32]

        def integrand(t: np.ndarray, chunk: np.ndarray = chunk) -> np.ndarray:
            phase = 2.0 * q_over_c * np.sqrt(t)[None, :] - per_nu * chunk[:, None] * t[None, :]
            return U(t)[None, :] * np.exp(1j * TWO_PI * phase)

        values[start : start + 32] = length * np.abs(composite_gauss(integrand, lo, hi, panels))
    big = np.nonzero(values >= threshold * length)[0]
    cutoff = int(big[-1]) + 1 if big.size else 0
    predicted = q_over_c * modulus / length
    return TruncationReport(cutoff, predicted, cutoff / predicted)


__all__ = [
    "DeltaExpansion",
    "derivative_constant",
    "dfi_delta",
    "g_properties_check",
    "n2_truncation_check",
    "smooth_step",
    "w0",
    "window_w1",
]
