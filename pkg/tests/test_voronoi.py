import numpy as np
import pytest

from depth_subconvexity.analytic.testfunctions import GaussianBump, LogGaussian
from depth_subconvexity.errors import InvalidParameters, NotCoprime, RankDeficientBasket
from depth_subconvexity.voronoi.coefficients import (
    CoefficientSeries,
    d3,
    d3_partial_sum_hyperbolic,
    d3_table,
    divisor_count,
    gl3_coefficients,
    hecke_lambda,
    ramanujan_tau,
    second_moment,
    second_moment_check,
    sigma00,
)
from depth_subconvexity.voronoi.gl2 import (
    divisor_main_term,
    divisor_voronoi_check,
    gl2_voronoi_check,
)
from depth_subconvexity.voronoi.gl3 import (
    DEFAULT_BASKET,
    GL3Transform,
    contour_independence,
    d3_voronoi_residual_check,
    SIGN_CONVENTION,
    exact_main_coefficients,
    gamma_factor,
    gamma_identity_check,
    gamma_pm,
    gl3_G_transform,
    printed_main_coefficients,
)


@pytest.mark.parametrize("n,value", [(1, 1), (2, -24), (3, 252), (5, 4830), (6, -6048)])
def test_tau_values(n, value):
    assert ramanujan_tau(n) == value


def test_deligne_bound_on_normalised_coefficients():
    lam = hecke_lambda(np.arange(1, 501))
    d = np.array([divisor_count(n) for n in range(1, 501)])
    assert np.all(np.abs(lam) <= d + 1e-12)


@pytest.mark.parametrize("kind", ["lambda", "d", "d3"])
def test_coefficient_series_invariants(kind):
    assert CoefficientSeries(kind, 300).violations() == []


def test_unknown_series_kind():
    with pytest.raises(ValueError):
        CoefficientSeries("sigma", 10)


def test_divisor_functions():
    assert d3_table(10)[1:].tolist() == [1, 3, 3, 6, 3, 9, 3, 10, 6, 9]
    assert d3(12) == 18
    assert d3_partial_sum_hyperbolic(10) == 53
    assert sigma00(1, 4) == 6
    assert sigma00(2, 4) == 3


def test_gl3_coefficients_with_trivial_first_index_are_d3():
    assert gl3_coefficients(1, 50).tolist() == d3_table(50).tolist()


def test_second_moment_is_normalised():
    pt = second_moment(1000.0)
    assert pt.total > 0
    assert pt.ratio == pytest.approx(pt.total / (1000.0 * np.log(1000.0) ** 8))
    assert second_moment(0.5).total == 0


def test_gamma_evaluation_identities():
    assert gamma_identity_check() <= 1e-9


def test_gamma_pm_sign_guard():
    with pytest.raises(InvalidParameters):
        gamma_pm(0.5 + 1j, 0)


def test_odd_gamma_part_enters_with_a_factor_of_i():
    s = np.array([-0.5, -0.25, 0.5])
    even = gamma_pm(s, 1) + gamma_pm(s, -1)
    odd = gamma_pm(s, 1) - gamma_pm(s, -1)
    assert np.allclose(even, 2 * gamma_factor(s, 0))
    assert np.allclose(odd, -2j * gamma_factor(s, 1))
    assert np.all(np.abs(odd.real) <= 1e-12 * np.abs(odd))


def test_odd_transform_is_imaginary():
    g = DEFAULT_BASKET[1]
    transform = GL3Transform(g)
    ys = np.geomspace(0.01, 1.0, 5)
    plus, minus = transform(ys, 1), transform(ys, -1)
    scale = np.max(np.abs(plus)) + np.max(np.abs(minus))
    assert np.all(np.abs((plus + minus).imag) <= 1e-9 * scale)
    assert np.all(np.abs((plus - minus).real) <= 1e-9 * scale)


def test_transform_rejects_contours_left_of_the_poles():
    with pytest.raises(InvalidParameters):
        GL3Transform(LogGaussian(N=100.0), sigma=-1.0)
    with pytest.raises(InvalidParameters):
        GL3Transform(LogGaussian(N=100.0))(0.0, 1)


def test_main_coefficients_at_unit_modulus():
    first, second = exact_main_coefficients(1, 1)
    assert first == pytest.approx(3 * np.euler_gamma)
    assert second == pytest.approx(0.5)
    printed = printed_main_coefficients(1, 1)
    assert printed == pytest.approx((1.5 * np.euler_gamma, 0.25))


@pytest.mark.parametrize("a,c", [(1, 2), (1, 3), (2, 5)])
def test_printed_constants_are_half_the_residue(a, c):
    exact = exact_main_coefficients(a, c)
    printed = printed_main_coefficients(a, c)
    assert exact[1] == pytest.approx(2 * printed[1], abs=1e-12)


def test_residual_check_argument_guards():
    with pytest.raises(NotCoprime):
        d3_voronoi_residual_check(2, 4)
    with pytest.raises(InvalidParameters):
        d3_voronoi_residual_check(1, 7)
    with pytest.raises(RankDeficientBasket):
        d3_voronoi_residual_check(1, 1, basket=(LogGaussian(N=60.0), LogGaussian(N=150.0)))
    with pytest.raises(InvalidParameters):
        d3_voronoi_residual_check(1, 1, normalization="halved")


def test_divisor_main_term_of_a_narrow_gaussian():
    g = LogGaussian(N=100.0, s=0.1)
    main = divisor_main_term(g, 1)
    lo, hi = g.support
    x = np.linspace(lo, hi, 200001)
    expected = np.trapz((np.log(x) + 2 * np.euler_gamma) * g(x), x)
    assert main.real == pytest.approx(expected, rel=1e-6)


def test_second_moment_ladder_flags_growth():
    flat = second_moment_check((1000.0, 2000.0))
    assert flat.passed
    assert [pt.x for pt in flat.points] == [1000.0, 2000.0]
    # without the log normalisation the ratio grows by roughly (log 2e4 / log 1e4)^8
    growing = second_moment_check((10_000.0, 20_000.0), log_power=0)
    assert not growing.passed
    assert growing.to_dict()["passed"] is False


def test_gl2_voronoi_on_a_smooth_bump():
    report = gl2_voronoi_check(GaussianBump(center=1000.0, width=200.0), 1, 1)
    assert report.passed, report.to_dict()
    assert report.dual_terms >= 512
    with pytest.raises(NotCoprime):
        gl2_voronoi_check(GaussianBump(center=1000.0, width=200.0), 2, 4)


def test_divisor_voronoi_needs_its_main_term():
    g = GaussianBump(center=1000.0, width=200.0)
    assert divisor_voronoi_check(g, 1, 1).passed
    bare = divisor_voronoi_check(g, 1, 1, include_main_term=False)
    assert not bare.passed
    assert bare.details["main_term_included"] is False


def test_gl3_transform_does_not_depend_on_the_contour():
    g = DEFAULT_BASKET[0]
    y0 = GL3Transform(g).decay_threshold
    value = gl3_G_transform(y0, g, 1)
    assert np.isfinite(value)
    assert value == pytest.approx(complex(GL3Transform(g, -0.5)(y0, 1)))
    assert contour_independence(g, y0) <= 1e-6


@pytest.mark.parametrize("c", [1, 2, 3])
def test_d3_residual_closes_on_the_default_moduli(c):
    report = d3_voronoi_residual_check(1, c)
    assert report.fit_residual <= report.fit_tolerance, report.to_dict()
    assert report.coefficient_error <= report.coefficient_tolerance, report.to_dict()
    assert report.passed
    assert report.sign_convention == SIGN_CONVENTION


def test_d3_residual_at_three_uses_both_kloosterman_signs():
    # S(2, n; 3) != S(2, -n; 3)
    report = d3_voronoi_residual_check(2, 3)
    assert report.passed, report.to_dict()
    assert report.fitted[2] == pytest.approx(report.exact[1], abs=1e-3)
