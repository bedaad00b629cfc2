"""GL(3) Mellin-Barnes transforms for the d3 coefficients and the twisted d3 Voronoi residual."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Any, Callable, Optional

import numpy as np
from scipy import special
from sympy import divisors

from ..analytic.quadrature import composite_gauss, leggauss
from ..analytic.testfunctions import LogGaussian, TestFunction, ZeroFunction
from ..errors import ContourTruncationFailure, InvalidParameters, NotCoprime, RankDeficientBasket
from ..logging import get_logger
from ..numtheory.characters import TWO_PI, e_array
from ..numtheory.expsums import kloosterman_table, ramanujan_sum_exact
from ..numtheory.residue import inv
from .coefficients import d3_table, divisor_count, gl3_coefficients

log = get_logger(__name__)

LOG_PI = math.log(math.pi)
HEIGHT_STEP = 0.25
HEIGHT_CAP = 4000.0
TAIL = 1e-10
MELLIN_DROP = 1e-4
DUAL_SAFETY = 10.0
RESIDUAL_MODULUS_LIMIT = 6
COEFFICIENT_TOLERANCE = 1e-3
FIT_TOLERANCE = 1e-4
NORMALIZATIONS = ("residue", "as-stated")
SIGN_CONVENTION = "gamma_plus = gamma_0 - i gamma_1, gamma_minus = gamma_0 + i gamma_1"

DEFAULT_BASKET: tuple[LogGaussian, ...] = (
    LogGaussian(N=60.0, s=0.25),
    LogGaussian(N=150.0, s=0.2),
    LogGaussian(N=400.0, s=0.3),
    LogGaussian(N=1000.0, s=0.15),
)


def gamma_factor(s: np.ndarray | complex, ell: int) -> np.ndarray:
    """pi^(-3s-3/2)/2 (Gamma((1+s+ell)/2) / Gamma((-s+ell)/2))^3 with all Langlands parameters 0."""
    s = np.asarray(s, dtype=complex)
    logs = (
        (-3 * s - 1.5) * LOG_PI
        - math.log(2.0)
        + 3 * (special.loggamma((1 + s + ell) / 2) - special.loggamma((-s + ell) / 2))
    )
    return np.exp(logs)


def gamma_pm(s: np.ndarray | complex, sign: int) -> np.ndarray:
    """gamma_0 - sign * i gamma_1, so G_+ + G_- is real and G_+ - G_- imaginary."""
    if sign not in (1, -1):
        raise InvalidParameters(f"sign must be +1 or -1, got {sign}")
    return gamma_factor(s, 0) - sign * 1j * gamma_factor(s, 1)


def gamma_identity_check(samples: int = 64, seed: int = 0) -> float:
    """Largest relative defect of the log-gamma evaluation against reflection and duplication."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.1, 3.0, samples) + 1j * rng.uniform(-20, 20, samples)

    def gamma(w: np.ndarray) -> np.ndarray:
        return np.exp(special.loggamma(w))

    reflection = gamma(z) * gamma(1 - z) * np.sin(np.pi * z) / np.pi
    duplication = gamma(z) * gamma(z + 0.5) / (2 ** (1 - 2 * z) * math.sqrt(math.pi) * gamma(2 * z))
    small = z[np.abs(z.imag) < 5]
    direct = np.abs(gamma(small) / special.gamma(small) - 1)
    defects = np.concatenate([np.abs(reflection - 1), np.abs(duplication - 1), direct])
    return float(np.max(defects))


def _log_scale(g: TestFunction) -> float:
    lo, hi = g.support
    return max(abs(math.log(lo)), abs(math.log(hi)))


def _center(g: TestFunction) -> float:
    if isinstance(g, LogGaussian):
        return g.N
    lo, hi = g.support
    return math.sqrt(lo * hi)


def mellin_on_line(g: TestFunction, w: np.ndarray) -> np.ndarray:
    """Mellin transform of g at the complex points w."""
    w = np.asarray(w, dtype=complex)
    if isinstance(g, ZeroFunction):
        return np.zeros_like(w)
    if isinstance(g, LogGaussian):
        return g.N**w * math.sqrt(2 * math.pi) * g.s * np.exp(w * w * g.s**2 / 2)
    lo, hi = g.support
    u0, u1 = math.log(lo), math.log(hi)
    height = float(np.max(np.abs(w.imag))) if w.size else 0.0
    panels = max(64, int(math.ceil((u1 - u0) * (height + 1) / math.pi)))
    out = np.empty(w.shape, dtype=complex)
    flat, result = w.ravel(), out.ravel()
    for lo_i in range(0, flat.size, 512):
        chunk = flat[lo_i : lo_i + 512]
        result[lo_i : lo_i + 512] = composite_gauss(
            lambda u: g(np.exp(u))[None, :] * np.exp(np.outer(chunk, u)), u0, u1, panels
        )
    return out


@dataclass(frozen=True)
class GL3Transform:
    """G_pm(y) = (1/2 pi) int y^-s gamma_pm(s) g~(-s) dtau on Re s = sigma."""

    g: TestFunction
    sigma: float = -0.5
    tail: float = TAIL
    height_cap: float = HEIGHT_CAP

    def __post_init__(self) -> None:
        if self.sigma <= -1:
            raise InvalidParameters(f"the contour needs sigma > -1, got {self.sigma}")

    def _magnitude(self, tau: np.ndarray) -> np.ndarray:
        s = self.sigma + 1j * tau
        kernel = np.abs(gamma_factor(s, 0)) + np.abs(gamma_factor(s, 1))
        return kernel * np.abs(mellin_on_line(self.g, -s))

    def _settle(
        self, magnitude: Callable[[np.ndarray], np.ndarray], drop: float
    ) -> Optional[float]:
        """Smallest tau past which magnitude stays below drop * peak; None if not within the cap."""
        limit = 64.0
        while True:
            # offset grid: at tau = 0 an integer sigma can sit on a pole of the denominator gamma
            tau = np.arange(0.5 * HEIGHT_STEP, limit + HEIGHT_STEP, HEIGHT_STEP)
            mag = magnitude(tau)
            peak = float(np.max(mag))
            if peak == 0.0:
                return 0.0
            suffix = np.maximum.accumulate(mag[::-1])[::-1]
            below = np.nonzero(suffix < drop * peak)[0]
            if len(below) and tau[below[0]] < 0.75 * limit:
                return float(tau[below[0]])
            if limit >= self.height_cap:
                return None
            limit = min(2 * limit, self.height_cap)

    @cached_property
    def height(self) -> float:
        """Truncation height T with the integrand past T below tail * peak."""
        found = self._settle(self._magnitude, self.tail)
        if found is None:
            raise ContourTruncationFailure(
                f"tail above {self.tail:g} of the peak up to height {self.height_cap:g} "
                f"(sigma={self.sigma})"
            )
        return 1.05 * found + 1.0

    @cached_property
    def mellin_threshold(self) -> float:
        """Height past which |g~| on Re w = 1/2 stays below 1e-4 of its maximum."""

        def magnitude(tau: np.ndarray) -> np.ndarray:
            return np.abs(mellin_on_line(self.g, 0.5 + 1j * tau))

        found = self._settle(magnitude, MELLIN_DROP)
        return self.height_cap if found is None else found

    @property
    def decay_threshold(self) -> float:
        """y0 = (T_g / 2 pi)^3 / N; the stationary height 2 pi (yN)^(1/3) passes T_g there."""
        return (self.mellin_threshold / TWO_PI) ** 3 / _center(self.g)

    def _nodes(self, log_y_max: float) -> tuple[np.ndarray, np.ndarray]:
        T = self.height
        rate = log_y_max + _log_scale(self.g) + 3 * abs(math.log(T / TWO_PI + 1.0)) + 6.0
        panels = max(64, int(math.ceil(2 * T * rate / math.pi)))
        panels += panels % 2
        t, w = leggauss(15)
        edges = np.linspace(-T, T, panels + 1)
        half = 0.5 * np.diff(edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        tau = (mids[:, None] + half[:, None] * t[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return self.sigma + 1j * tau, weights

    def __call__(self, y: float | np.ndarray, sign: int) -> np.ndarray:
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        if np.any(ys <= 0):
            raise InvalidParameters("G_pm is defined for y > 0")
        if isinstance(self.g, ZeroFunction):
            out = np.zeros(ys.shape, dtype=complex)
            return out if np.ndim(y) else out[0]
        log_y = np.log(ys)
        s, weights = self._nodes(float(np.max(np.abs(log_y))))
        base = weights * gamma_pm(s, sign) * mellin_on_line(self.g, -s) / TWO_PI
        out = np.empty(ys.shape, dtype=complex)
        for lo in range(0, ys.size, 128):
            out[lo : lo + 128] = np.exp(-np.outer(log_y[lo : lo + 128], s)) @ base
        return out if np.ndim(y) else out[0]


def gl3_G_transform(y: float, g: TestFunction, sign: int, sigma: float = -0.5) -> complex:
    return complex(GL3Transform(g, sigma)(y, sign))


def contour_independence(
    g: TestFunction, y: float, sigmas: tuple[float, ...] = (0.5, 1.0, 2.0)
) -> float:
    """Largest relative spread of G_pm(y) across contours; no poles lie right of -1."""
    spread = 0.0
    for sign in (1, -1):
        values = np.array([GL3Transform(g, sigma)(y, sign) for sigma in sigmas])
        scale = max(float(np.max(np.abs(values))), 1e-300)
        spread = max(spread, float(np.max(np.abs(values - values[0]))) / scale)
    return spread


@dataclass
class GL3DecayReport:
    test_function: str
    threshold: float
    ratio: float
    slope: float
    height: float
    n0: Optional[float] = None
    ratio_limit: float = 1e-8
    slope_limit: float = -6.0

    @property
    def passed(self) -> bool:
        return self.ratio <= self.ratio_limit and self.slope <= self.slope_limit

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


def gl3_decay_check(g: TestFunction, n0: Optional[float] = None) -> GL3DecayReport:
    """Compare |G_pm| at 100 y0 with y0/100 and fit the log-log slope over [y0, 10 y0]."""
    transform = GL3Transform(g)
    y0 = transform.decay_threshold
    ladder = np.geomspace(y0, 10 * y0, 6)
    extremes = np.array([y0 / 100, 100 * y0])
    worst_ratio, worst_slope = 0.0, -math.inf
    for sign in (1, -1):
        far = np.abs(transform(extremes, sign))
        worst_ratio = max(worst_ratio, float(far[1] / max(far[0], 1e-300)))
        values = np.maximum(np.abs(transform(ladder, sign)), 1e-300)
        slope = float(np.polyfit(np.log(ladder), np.log(values), 1)[0])
        worst_slope = max(worst_slope, slope)
    return GL3DecayReport(g.kind, y0, worst_ratio, worst_slope, transform.height, n0)


def exact_main_coefficients(a: int, c: int) -> tuple[float, float]:
    """Coefficients of g~'(1) and g~''(1) in the residue at w = 1, from Hurwitz zeta data."""
    x = np.arange(1, c + 1, dtype=np.int64)
    xyz = x[:, None, None] * x[None, :, None] * x[None, None, :]
    phases = e_array(a * xyz, c)
    psi = -special.digamma(x / c) - math.log(c)
    logs = psi[:, None, None] + psi[None, :, None] + psi[None, None, :]
    second = float(np.sum(phases).real) / (2 * c**3)
    first = float(np.sum(phases * logs).real) / c**3
    return first, second


def printed_main_coefficients(a: int, c: int) -> tuple[float, float]:
    """The two coefficients as printed, reading tau(n1) as the divisor count."""
    abar = inv(a, c) if c > 1 else 0
    first = second = 0.0
    for n1 in divisors(c):
        tau = divisor_count(n1)
        ram = ramanujan_sum_exact(abar, c // n1)
        p1 = (
            5 / 3 * math.log(n1)
            - 3 * math.log(c)
            + 3 * np.euler_gamma
            - sum(math.log(d) for d in divisors(n1)) / (3 * tau)
        )
        first += n1 * tau * p1 * ram
        second += n1 * tau * ram
    return first / (2 * c**2), second / (4 * c**2)


def _twisted_d3_sum(g: TestFunction, a: int, c: int) -> complex:
    lo, hi = g.support
    n = np.arange(max(1, math.ceil(lo)), math.floor(hi) + 1, dtype=np.int64)
    table = d3_table(int(n[-1]))
    return complex(np.sum(table[n] * g(n.astype(float)) * e_array(a * n, c)))


def _dual_sums(g: TestFunction, abar: int, c: int) -> tuple[complex, complex, int]:
    """The dual side with S(a', +n) paired to G_+ and, second, to G_-."""
    transform = GL3Transform(g)
    y_cut = DUAL_SAFETY * transform.decay_threshold
    paired, swapped, terms = 0j, 0j, 0
    for n1 in divisors(c):
        m = c // n1
        n2_max = max(1, int(math.ceil(y_cut * c**3 / n1**2)))
        n2 = np.arange(1, n2_max + 1, dtype=np.int64)
        ys = n1**2 * n2 / c**3
        weights = gl3_coefficients(n1, n2_max)[1:] / (n1 * n2)
        table = kloosterman_table(abar, m)
        s_plus, s_minus = table[n2 % m], table[(-n2) % m]
        g_plus, g_minus = transform(ys, 1), transform(ys, -1)
        paired += complex(np.sum(weights * (s_plus * g_plus + s_minus * g_minus)))
        swapped += complex(np.sum(weights * (s_plus * g_minus + s_minus * g_plus)))
        terms += n2_max
    return c * paired, c * swapped, terms


@dataclass
class D3ResidualReport:
    a: int
    c: int
    normalization: str
    pairing: str
    fitted: tuple[float, float, float]
    exact: tuple[float, float]
    printed: tuple[float, float]
    fit_residual: float
    dual_terms: list[int] = field(default_factory=list)
    sign_convention: str = SIGN_CONVENTION
    fit_tolerance: float = FIT_TOLERANCE
    coefficient_tolerance: float = COEFFICIENT_TOLERANCE

    @property
    def target(self) -> tuple[float, float]:
        return self.exact if self.normalization == "residue" else self.printed

    @property
    def coefficient_error(self) -> float:
        errors = [abs(f - t) / max(1.0, abs(t)) for f, t in zip(self.fitted[1:], self.target)]
        return max(errors)

    @property
    def ratio_to_printed(self) -> tuple[Optional[float], Optional[float]]:
        return tuple(  # type: ignore[return-value]
            f / p if abs(p) > 1e-12 else None for f, p in zip(self.fitted[1:], self.printed)
        )

    @property
    def passed(self) -> bool:
        fit_ok = self.fit_residual <= self.fit_tolerance
        return fit_ok and self.coefficient_error <= self.coefficient_tolerance

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out.update(
            coefficient_error=self.coefficient_error,
            ratio_to_printed=list(self.ratio_to_printed),
            passed=self.passed,
        )
        return out


def _fit(design: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    residual = float(np.linalg.norm(design @ coeffs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    return coeffs, residual


def d3_voronoi_residual_check(
    a: int,
    c: int,
    basket: tuple[LogGaussian, ...] = DEFAULT_BASKET,
    normalization: str = "residue",
) -> D3ResidualReport:
    """Fit LHS minus the dual side against (g~(1), g~'(1), g~''(1)) across the basket."""
    if normalization not in NORMALIZATIONS:
        raise InvalidParameters(f"normalization must be one of {NORMALIZATIONS}")
    if c < 1 or math.gcd(a, c) != 1:
        raise NotCoprime(f"d3 Voronoi needs (a, c) = 1, got a={a}, c={c}")
    if c > RESIDUAL_MODULUS_LIMIT:
        raise InvalidParameters(f"the residual check is limited to c <= {RESIDUAL_MODULUS_LIMIT}")
    if len(basket) < 3:
        raise RankDeficientBasket("the basket needs at least three test functions")
    abar = inv(a, c) if c > 1 else 0

    values = np.array([g.mellin_derivatives() for g in basket])
    # rows divided by g~(1) so every test function carries equal weight
    design = values / values[:, :1]
    if np.linalg.matrix_rank(design, tol=1e-8) < 3:
        raise RankDeficientBasket("the basket does not separate g~(1), g~'(1), g~''(1)")

    paired, swapped, counts = [], [], []
    for g in basket:
        lhs = _twisted_d3_sum(g, a, c)
        dual_paired, dual_swapped, terms = _dual_sums(g, abar, c)
        paired.append(lhs - dual_paired)
        swapped.append(lhs - dual_swapped)
        counts.append(terms)
    scale = values[:, 0]
    fit_paired = _fit(design, np.array(paired) / scale)
    fit_swapped = _fit(design, np.array(swapped) / scale)
    (coeffs, residual), pairing = (
        (fit_paired, "S(a',+n2) G_+")
        if fit_paired[1] <= fit_swapped[1]
        else (fit_swapped, "S(a',+n2) G_-")
    )
    report = D3ResidualReport(
        a=a,
        c=c,
        normalization=normalization,
        pairing=pairing,
        fitted=tuple(float(v.real) for v in coeffs),  # type: ignore[arg-type]
        exact=exact_main_coefficients(a, c),
        printed=printed_main_coefficients(a, c),
        fit_residual=residual,
        dual_terms=counts,
    )
    log.info(
        "d3 residual a=%d c=%d pairing=%s fitted=%s exact=%s",
        a,
        c,
        pairing,
        report.fitted,
        report.exact,
    )
    return report
