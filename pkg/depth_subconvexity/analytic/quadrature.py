"""Gauss-Legendre panels and an adaptive bisection engine for oscillatory integrands."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from ..errors import InvalidParameters
from ..logging import get_logger

log = get_logger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

PANEL_NODES = 15
MAX_DEPTH = 24


@lru_cache(maxsize=32)
def leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_panel(f: Integrand, a: float, b: float, n: int = PANEL_NODES) -> complex:
    t, w = leggauss(n)
    half = 0.5 * (b - a)
    return complex(half * np.sum(w * f(half * t + 0.5 * (a + b))))


def composite_gauss(
    f: Integrand, a: float, b: float, panels: int, n: int = PANEL_NODES
) -> np.ndarray:
    """Composite rule for integrands vectorised over a trailing node axis.

    ``f`` receives a 1-D node array and may return shape (..., nodes); the node axis is summed.
    """
    if panels < 1:
        raise InvalidParameters("need at least one panel")
    t, w = leggauss(n)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    x = (mids[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return np.sum(f(x) * weights, axis=-1)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int


def _initial_edges(
    a: float, b: float, omega: Optional[Callable[[np.ndarray], np.ndarray]]
) -> np.ndarray:
    """Panel edges no wider than a quarter of the local period 2 pi / |f'|."""
    if omega is None:
        return np.array([a, b])
    samples = np.linspace(a, b, 257)
    rate = float(np.max(np.abs(omega(samples))))
    if rate <= 0:
        return np.array([a, b])
    width = 0.5 * math.pi / rate
    count = max(1, int(math.ceil((b - a) / width)))
    return np.linspace(a, b, count + 1)


def adaptive_oscillatory(
    f: Integrand,
    a: float,
    b: float,
    omega: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    tol: float = 1e-12,
    max_depth: int = MAX_DEPTH,
) -> QuadResult:
    """Integrate f over [a, b] by 15-point panels, bisecting until halves agree.

    ``omega`` is the derivative of the phase in radians; when given, the starting panels
    resolve a quarter period each. Panels are processed depth first and summed in
    left-to-right order.
    """
    if b < a:
        res = adaptive_oscillatory(f, b, a, omega, tol, max_depth)
        return QuadResult(-res.value, res.error, res.panels)
    if b == a:
        return QuadResult(0j, 0.0, 0)
    edges = _initial_edges(a, b, omega)
    total, error, panels = 0j, 0.0, 0
    local_tol = tol / max(1, len(edges) - 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        stack = [(float(lo), float(hi), gauss_panel(f, lo, hi), 0)]
        while stack:
            x0, x1, whole, depth = stack.pop()
            mid = 0.5 * (x0 + x1)
            left, right = gauss_panel(f, x0, mid), gauss_panel(f, mid, x1)
            diff = abs(left + right - whole)
            floor = max(local_tol, 1e-14 * abs(whole), 1e-15 * (x1 - x0))
            if diff <= floor or depth >= max_depth:
                if depth >= max_depth and diff > local_tol:
                    log.warning("quadrature depth limit on [%g, %g], diff=%.3g", x0, x1, diff)
                total += left + right
                error += diff
                panels += 2
            else:
                # right pushed first so the left half is summed first
                stack.append((mid, x1, right, depth + 1))
                stack.append((x0, mid, left, depth + 1))
    return QuadResult(total, error, panels)
