import math

import numpy as np
import pytest

from depth_subconvexity.analytic.testfunctions import (
    Bump,
    GaussianBump,
    LogGaussian,
    TestFunction,
    ZeroFunction,
    make_test_function,
    product,
)
from depth_subconvexity.errors import InvalidParameters


def test_bump_peak_and_support():
    g = Bump(center=1.5, half_width=0.5, height=2.0)
    assert g(1.5) == pytest.approx(2.0)
    assert g(1.0) == 0.0 and g(2.0) == 0.0 and g(0.3) == 0.0
    assert g.support == (1.0, 2.0)


@pytest.mark.parametrize(
    "g,x",
    [
        (Bump(), 1.3),
        (Bump(center=10.0, half_width=3.0), 11.7),
        (GaussianBump(center=1.5, width=1.0), 1.52),
        (LogGaussian(N=100.0, s=0.25), 120.0),
    ],
)
def test_derivatives_match_finite_differences(g: TestFunction, x: float):
    for order in range(1, 5):
        h = 1e-4 * max(1.0, x)
        fd = (g.derivative(x + h, order - 1) - g.derivative(x - h, order - 1)) / (2 * h)
        exact = g.derivative(x, order)
        assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact)), (order, fd, exact)


def test_derivative_order_is_capped():
    with pytest.raises(InvalidParameters):
        Bump().derivative(1.5, 5)


def test_scaling_moves_support():
    g = Bump().scaled(2.0)
    assert g.support == (2.0, 4.0)
    assert g(3.0) == pytest.approx(Bump()(1.5))


def test_log_gaussian_mellin_closed_form():
    g = LogGaussian(N=100.0, s=0.25)
    for w in (1.0, 0.5 + 2.0j, -0.5 + 10.0j):
        numeric = TestFunction.mellin(g, w)
        assert abs(numeric - g.mellin(w)) <= 1e-8 * abs(g.mellin(w))
    g1, d1, d2 = g.mellin_derivatives()
    assert g1 == pytest.approx(g.mellin(1.0).real)
    mu = math.log(100.0) + 0.0625
    assert d1 == pytest.approx(g1 * mu)
    assert d2 == pytest.approx(g1 * (mu**2 + 0.0625))


def test_scaled_mellin_picks_up_power():
    g = Bump()
    s = 3.0
    assert g.scaled(s).mellin(0.5) == pytest.approx(s**0.5 * g.mellin(0.5), rel=1e-9)


def test_product_support_and_leibniz():
    g = product(Bump(center=1.5, half_width=0.5), GaussianBump(center=1.6, width=1.0))
    assert g.support == (1.1, 2.0)
    x = np.array([1.3, 1.5, 1.8])
    assert np.allclose(g(x), Bump()(x) * GaussianBump(center=1.6, width=1.0)(x))


def test_factory_and_zero_function():
    assert isinstance(make_test_function("bump", center=2.0), Bump)
    assert make_test_function("log-gaussian", N=50.0).kind == "log-gaussian"
    with pytest.raises(InvalidParameters):
        make_test_function("sawtooth")
    z = ZeroFunction()
    assert not np.any(z(np.linspace(1, 2, 11)))


def test_invalid_shapes_are_rejected():
    with pytest.raises(InvalidParameters):
        Bump(half_width=0.0)
    with pytest.raises(InvalidParameters):
        LogGaussian(N=-1.0)


def test_bump_value_inside_the_support():
    # t = -1/2 gives exp(1 - 1/(1 - 1/4))
    assert Bump()(1.25) == pytest.approx(math.exp(-1.0 / 3.0), rel=1e-14)
    values = Bump()(np.array([1.25, 1.5, 1.75]))
    assert values[1] == pytest.approx(1.0)
    assert values[0] == pytest.approx(values[2])
