"""Bessel functions for the Voronoi kernels and the oscillatory split of J."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..errors import AsymptoticRegimeRequired, OutOfRange
from ..numtheory.characters import TWO_PI

MAX_ORDER = 30
ASYMPTOTIC_START = 2.0


def _check(order: int, x: np.ndarray) -> None:
    if not 0 <= order <= MAX_ORDER or int(order) != order:
        raise OutOfRange(f"Bessel order must be an integer in 0..{MAX_ORDER}, got {order}")
    if np.any(np.asarray(x) < 0):
        raise OutOfRange("Bessel argument must be nonnegative")


def bessel_J(order: int, x: float | np.ndarray) -> np.ndarray:
    _check(order, x)
    return special.jv(order, x)


def bessel_Y0(x: float | np.ndarray) -> np.ndarray:
    _check(0, x)
    return special.y0(x)


def bessel_K0(x: float | np.ndarray) -> np.ndarray:
    _check(0, x)
    return special.k0(x)


def wronskian_j0_y0(x: float | np.ndarray) -> np.ndarray:
    """J0 Y0' - J0' Y0, which equals 2 / (pi x)."""
    return special.j0(x) * special.yvp(0, x, 1) - special.jvp(0, x, 1) * special.y0(x)


def z_plus(order: int, x: float | np.ndarray, derivative: int = 0) -> np.ndarray:
    """j-th derivative of Z+(x) = e(-x) H1(2 pi x) / 2, so J(2 pi x) = e(x) Z+ + e(-x) Z-."""
    xs = np.asarray(x, dtype=float)
    _check(order, xs)
    if np.any(xs < ASYMPTOTIC_START):
        raise AsymptoticRegimeRequired(f"the oscillatory split needs x >= {ASYMPTOTIC_START}")
    phase = np.exp(-1j * TWO_PI * xs)
    total = np.zeros(xs.shape, dtype=complex)
    for i in range(derivative + 1):
        total += (
            math.comb(derivative, i)
            * (-1j * TWO_PI) ** (derivative - i)
            * TWO_PI**i
            * special.h1vp(order, TWO_PI * xs, i)
        )
    return 0.5 * phase * total


def z_minus(order: int, x: float | np.ndarray, derivative: int = 0) -> np.ndarray:
    return np.conj(z_plus(order, x, derivative))


@dataclass(frozen=True)
class OscillatorySplit:
    order: int
    x: np.ndarray
    z_plus: np.ndarray
    derivative_ratios: dict[int, float]
    reconstruction_error: float

    def to_dict(self) -> dict[str, object]:
        return {
            "order": self.order,
            "x_min": float(self.x.min()),
            "x_max": float(self.x.max()),
            **{f"ratio_j{j}": v for j, v in self.derivative_ratios.items()},
            "reconstruction_error": self.reconstruction_error,
        }


def bessel_oscillatory_split(
    order: int, x: np.ndarray, reconstruct_from: float = 10.0
) -> OscillatorySplit:
    """Sample Z+ and measure x^j |Z+^(j)(x)| sqrt(x) for j = 0, 1, 2."""
    xs = np.asarray(x, dtype=float)
    zp = z_plus(order, xs)
    ratios = {
        j: float(np.max(xs**j * np.abs(z_plus(order, xs, j)) * np.sqrt(xs))) for j in range(3)
    }
    far = xs[xs >= reconstruct_from]
    err = 0.0
    if far.size:
        rebuilt = np.exp(1j * TWO_PI * far) * z_plus(order, far)
        rebuilt = rebuilt + np.conj(rebuilt)
        err = float(np.max(np.abs(bessel_J(order, TWO_PI * far) - rebuilt.real)))
    return OscillatorySplit(order, xs, zp, ratios, err)
