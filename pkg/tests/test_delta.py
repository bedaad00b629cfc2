import math

import numpy as np
import pytest
from scipy import integrate

from depth_subconvexity.analytic.delta import (
    DeltaExpansion,
    derivative_constant,
    dfi_delta,
    expansion,
    g_properties_check,
    n2_truncation_check,
    smooth_step,
    w0,
    window_w1,
)
from depth_subconvexity.errors import OutOfRange
from depth_subconvexity.harness.grid import RunConfig
from depth_subconvexity.harness.runner import run_verifier


def test_w0_is_a_normalised_bump():
    value, _ = integrate.quad(lambda t: float(w0(t)), 0.5, 1.0)
    assert value == pytest.approx(1.0, rel=1e-10)
    assert w0(np.array([0.4, 1.1])).tolist() == [0.0, 0.0]


def test_smooth_step_plateau():
    y = np.array([-2.0, -1.0, -0.5, 0.0, 0.3, 0.5, 0.75, 1.0, 3.0])
    values = smooth_step(y)
    assert values.tolist()[:1] == [0.0]
    assert np.all(values[2:6] == 1.0)
    assert 0.0 < values[6] < 1.0
    assert values[7] == 0.0 and values[8] == 0.0
    assert np.all(window_w1(np.array([-2.0, 2.0]), 2.0) == 1.0)
    assert np.all(window_w1(np.array([-4.0, 4.0]), 2.0) == 0.0)


def test_expansion_parameters():
    exp = DeltaExpansion(50.0)
    assert exp.Q == pytest.approx(2 * np.sqrt(50.0))
    assert exp.q_max == 14
    with pytest.raises(OutOfRange):
        DeltaExpansion(0.5)
    assert exp.points_per_bump == pytest.approx(32768 / (8 * np.sqrt(50.0)))
    with pytest.raises(OutOfRange):
        DeltaExpansion(50.0, fft_points=1024)


@pytest.mark.parametrize("L", [25, 50, 100])
def test_delta_detects_zero(L):
    assert abs(dfi_delta(0, L) - 1.0) <= 1e-3
    worst = max(abs(dfi_delta(n, L)) for n in range(-2 * L, 2 * L + 1) if n)
    assert worst <= 1e-3


def test_delta_refuses_out_of_range_arguments():
    with pytest.raises(OutOfRange):
        dfi_delta(101, 50)


def test_g_properties_report_keys():
    report = g_properties_check(1, np.linspace(-3.0, 3.0, 13), L=50.0)
    assert set(report.ratios) == {
        "near_one",
        "derivative_1",
        "derivative_2",
        "decay_b3",
        "l1_over_q_tenth",
    }
    assert all(np.isfinite(v) for v in report.ratios.values())
    assert report.to_dict()["q"] == 1


def test_derivative_constants_grow_with_order():
    first, second = derivative_constant(1), derivative_constant(2)
    assert 4.0 < first < 16.0
    assert second > 100.0


def test_g_properties_default_grid_stays_under_the_ceiling():
    result = run_verifier(RunConfig(verifier="g-properties"))
    assert len(result.reports) == 14
    assert result.passed, [(r.params["q"], r.details) for r in result.failures]


def test_smooth_window_matches_the_hard_cut():
    exp = expansion(50.0)
    for n in (0, 1, 30):
        windowed = exp.delta(n, window=True)
        assert abs(windowed - exp.delta(n)) <= 1e-6
        assert abs(windowed - (1.0 if n == 0 else 0.0)) <= 1e-3
    assert exp.radius >= max(exp.tail_radius(q) for q in range(1, exp.q_max + 1))
    assert exp.epsilon_equivalent == pytest.approx(math.log(max(exp.radius, 1.0)) / math.log(50))


def test_n2_truncation_cutoff_sits_near_the_prediction():
    report = n2_truncation_check(1000.0, 1000, 40.0)
    assert report.predicted == pytest.approx(40.0)
    assert report.cutoff >= 40
    assert 1.0 <= report.ratio <= 16.0


@pytest.mark.parametrize("name", ["x-window", "n2-truncation"])
def test_window_and_truncation_default_grids_pass(name):
    result = run_verifier(RunConfig(verifier=name))
    assert result.reports
    assert result.passed, [r.details for r in result.failures]
