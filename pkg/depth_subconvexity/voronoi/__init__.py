from .coefficients import (
    CoefficientSeries,
    d3,
    divisor_count,
    gl3_coefficients,
    hecke_lambda,
    ramanujan_tau,
    second_moment_check,
    sigma00,
)
from .gl2 import VoronoiReport, divisor_voronoi_check, gl2_voronoi_check
from .gl3 import GL3Transform, d3_voronoi_residual_check, gl3_decay_check, gl3_G_transform

__all__ = [
    "CoefficientSeries",
    "GL3Transform",
    "VoronoiReport",
    "d3",
    "d3_voronoi_residual_check",
    "divisor_count",
    "divisor_voronoi_check",
    "gl2_voronoi_check",
    "gl3_G_transform",
    "gl3_coefficients",
    "gl3_decay_check",
    "hecke_lambda",
    "ramanujan_tau",
    "second_moment_check",
    "sigma00",
]
