import pytest

from depth_subconvexity.analytic.phase import (
    linear_phase,
    nonstationary_decay_check,
    quadratic_phase,
    stationary_phase_compare,
    stationary_point,
    total_variation,
)
from depth_subconvexity.analytic.testfunctions import Bump, ZeroFunction
from depth_subconvexity.errors import InvalidParameters, NoStationaryPoint
from depth_subconvexity.harness.grid import RunConfig
from depth_subconvexity.harness.verifiers import run_tuple


def test_stationary_point_of_quadratic_phase():
    assert stationary_point(quadratic_phase(100.0)) == pytest.approx(1.5, abs=1e-12)


def test_linear_phase_has_no_stationary_point():
    with pytest.raises(NoStationaryPoint):
        stationary_point(linear_phase(50.0))


def test_leading_term_and_expansion():
    result = stationary_phase_compare(quadratic_phase(400.0), order=1)
    assert result.t0 == pytest.approx(1.5)
    assert result.relative_error < 0.01
    assert result.expansion_error < result.relative_error / 10
    assert set(result.to_dict()) >= {"relative_error", "expansion_error", "t0"}


def test_leading_term_improves_with_y():
    coarse = stationary_phase_compare(quadratic_phase(100.0)).relative_error
    fine = stationary_phase_compare(quadratic_phase(400.0)).relative_error
    assert fine < coarse < 0.05


def test_expansion_order_is_bounded():
    with pytest.raises(InvalidParameters):
        stationary_phase_compare(quadratic_phase(100.0), order=3)


def test_zero_amplitude_gives_zero():
    result = stationary_phase_compare(quadratic_phase(100.0, amplitude=ZeroFunction()))
    assert result.direct == 0 and result.relative_error == 0.0


def test_total_variation_of_a_bump():
    assert total_variation(Bump(height=1.0)) == pytest.approx(2.0, rel=1e-6)


def test_nonstationary_decay():
    report = nonstationary_decay_check()
    assert report.variation_ratio <= 1.0
    assert report.slope <= -1.9
    assert report.to_dict()["B_max"] == 320


@pytest.mark.parametrize("order", [0, 1])
def test_error_slope_matches_the_expansion_order(order):
    cfg = RunConfig(verifier="stationary-phase")
    report = run_tuple("stationary-phase", {"order": order}, cfg)
    assert report.passed, report.details
    assert abs(report.details["slope"] + order + 1) <= 0.4
    assert report.details["ladder"][0] == 200.0


def test_order_one_error_follows_the_fourth_derivative():
    # (i / 4Y)^2 g''''(t0) / 2 with g'''' = -192 at the centre of the unit bump on [1, 2]
    for Y in (800.0, 1600.0):
        result = stationary_phase_compare(quadratic_phase(Y), order=1)
        assert result.expansion_error == pytest.approx(6.0 / Y**2, rel=0.05)
