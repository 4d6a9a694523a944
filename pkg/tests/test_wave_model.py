import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dominowave.errors import Divergent, EmptyGrid, InsufficientData, NonFalling, NonPropagating
from dominowave.geometry import PRACTICAL_LIMIT, array_from_ratios, normalize_speed
from dominowave.validation import MeasurementPoint
from dominowave.wave_model import (
    CollisionParams,
    Status,
    angular_velocity,
    calibrate_restitution,
    collision_map,
    energy_gain,
    fall_time,
    limiting_omega,
    limiting_speed,
    predict_normalized,
    simulate_chain,
    speed_curve,
)

# Frozen from tests/oracles/model_oracle.py (scipy QUADPACK + brute iteration).
ORACLE_FALL_TIME_HALF = 0.3464956405352593  # d/H=0.5, H=1, omega0=1.1467
ORACLE_OMEGA_E0 = 1.1462294595661617
ORACLE_OMEGA_E07 = 3.2034623603281465
ORACLE_PERIOD_E07 = 0.1543866537591792
ORACLE_VNORM = 1.3444456943244503  # d/H=0.5, t/H=0.15, e=0.7
ORACLE_CURVE = [
    0.5225770993144063, 0.7307186008081584, 0.9375377184284843, 1.1423845261993968,
    1.3444456943244503, 1.5426139374183818, 1.735210435164781, 1.9192567137713172,
]

HALF = array_from_ratios(0.5, 0.0)


def test_restitution_bounds():
    assert CollisionParams(0.0).transfer == 0.5
    assert CollisionParams(1.0).transfer == 1.0
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            CollisionParams(bad)


def test_fall_time_large_omega_asymptote():
    assert fall_time(HALF, 1000.0) == pytest.approx((math.pi / 6) / 1000.0, rel=1e-3)


def test_fall_time_matches_oracle():
    assert fall_time(HALF, 1.1467) == pytest.approx(ORACLE_FALL_TIME_HALF, abs=1e-9)
    assert fall_time(HALF, 1.1467) == pytest.approx(0.344, abs=5e-3)


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_fall_time_needs_push(omega):
    with pytest.raises(NonFalling):
        fall_time(HALF, omega)


def test_fall_time_beyond_limit():
    with pytest.raises(NonPropagating):
        fall_time(array_from_ratios(0.9, 0.0), 1.0)


def test_collision_map_elastic_full_transfer():
    w = 2.5
    assert collision_map(HALF, CollisionParams(1.0), w) == pytest.approx(
        math.sqrt(w * w + energy_gain(HALF)), rel=1e-15
    )


def test_collision_map_inelastic_half():
    w0 = math.sqrt(4.0 - energy_gain(HALF))
    assert collision_map(HALF, CollisionParams(0.0), w0) == pytest.approx(1.0, rel=1e-14)


def test_collision_map_fixed_point():
    p = CollisionParams(0.7)
    assert energy_gain(HALF) == pytest.approx(3.9445, rel=2e-3)
    w = limiting_omega(HALF, p)
    assert w == pytest.approx(3.204, abs=1e-3)
    assert collision_map(HALF, p, w) == pytest.approx(w, rel=1e-14)


def test_limiting_omega_inelastic_closed_form():
    w = limiting_omega(HALF, CollisionParams(0.0))
    assert w == pytest.approx(math.sqrt(energy_gain(HALF) / 3.0), rel=1e-14)
    assert w == pytest.approx(ORACLE_OMEGA_E0, rel=1e-9)
    assert math.sqrt(w * w + energy_gain(HALF)) == pytest.approx(2.293, abs=1e-3)


@pytest.mark.parametrize("e,oracle", [(0.0, ORACLE_OMEGA_E0), (0.7, ORACLE_OMEGA_E07)])
def test_limiting_omega_matches_iteration(e, oracle):
    p = CollisionParams(e)
    w = 0.1
    for _ in range(200):
        w = collision_map(HALF, p, w)
    assert limiting_omega(HALF, p) == pytest.approx(w, rel=1e-9)
    assert limiting_omega(HALF, p) == pytest.approx(oracle, rel=1e-9)


def test_limiting_omega_elastic_diverges():
    with pytest.raises(Divergent):
        limiting_omega(HALF, CollisionParams(1.0))


def test_limiting_speed_oracle():
    spec = array_from_ratios(0.5, 0.15)
    pred = limiting_speed(spec, CollisionParams(0.7))
    assert pred.status is Status.CONVERGED
    assert pred.normalized_speed == pytest.approx(ORACLE_VNORM, rel=1e-8)
    assert round(pred.normalized_speed, 2) == 1.34
    assert pred.collision_period == pytest.approx(ORACLE_PERIOD_E07, rel=1e-8)
    assert pred.wave_speed == pytest.approx(spec.pitch / pred.collision_period, rel=1e-12)
    assert pred.normalized_speed == normalize_speed(pred.wave_speed, spec.height)


def test_limiting_speed_scale_invariant():
    values = [
        limiting_speed(array_from_ratios(0.5, 0.15, height=h), CollisionParams(0.7)).normalized_speed
        for h in (0.2, 0.8)
    ]
    assert values[0] == pytest.approx(values[1], rel=1e-9)


def test_limiting_speed_beyond_limit():
    with pytest.raises(NonPropagating):
        limiting_speed(array_from_ratios(0.9, 0.15), CollisionParams(0.7))


def test_speed_curve_single_point_consistent():
    (point,) = speed_curve([0.3], 0.15, 0.7)
    assert point.normalized_speed == predict_normalized(0.3, 0.15, 0.7)


def test_speed_curve_grid_against_oracle():
    grid = [round(0.1 * k, 1) for k in range(1, 9)]
    curve = speed_curve(grid, 0.15, 0.7)
    assert [c.d_over_h for c in curve] == grid
    assert all(c.ok and math.isfinite(c.normalized_speed) for c in curve)
    np.testing.assert_allclose([c.normalized_speed for c in curve], ORACLE_CURVE, rtol=1e-8)


def test_speed_curve_errors_recorded_in_row():
    curve = speed_curve([0.4, 0.9], 0.15, 0.7)
    assert curve[0].ok
    assert curve[1].status is Status.NON_PROPAGATING
    assert math.isnan(curve[1].normalized_speed)
    assert speed_curve([0.4], 0.15, 1.0)[0].status is Status.DIVERGENT


def test_speed_curve_empty():
    with pytest.raises(EmptyGrid):
        speed_curve([])


def test_speed_curve_parallel_identical():
    grid = [0.05 * k for k in range(1, 18)]
    assert speed_curve(grid, workers=3) == speed_curve(grid)


def test_simulate_two_dominoes():
    spec = array_from_ratios(0.5, 0.15, count=2)
    series = simulate_chain(spec, CollisionParams(0.7), 2.0)
    assert len(series) == 1
    assert series.impact_times[0] == fall_time(spec, 2.0)


def test_simulate_converges_to_fixed_point():
    spec = array_from_ratios(0.5, 0.15, count=100)
    p = CollisionParams(0.7)
    series = simulate_chain(spec, p, 0.3)
    assert len(series) == 99
    assert all(np.diff(series.impact_times) > 0)
    target = fall_time(spec, limiting_omega(spec, p))
    assert np.mean(series.periods[-50:]) == pytest.approx(target, rel=1e-3)
    # starting below the fixed point, each domino starts faster and falls quicker
    assert all(np.diff(series.periods) <= 1e-12)


def test_simulate_from_fixed_point_is_steady():
    spec = array_from_ratios(0.5, 0.15, count=30)
    p = CollisionParams(0.7)
    periods = simulate_chain(spec, p, limiting_omega(spec, p)).periods
    np.testing.assert_allclose(periods, periods[0], rtol=1e-9)


def test_simulate_elastic_flags_divergence():
    spec = array_from_ratios(0.5, 0.15, count=51)
    series = simulate_chain(spec, CollisionParams(1.0), 1.0)
    assert series.divergent
    assert len(series) == 50
    assert all(np.diff(series.post_impact_omegas) > 0)


def test_energy_consistency_at_contact():
    spec = array_from_ratios(0.4, 0.1, height=0.3, count=5)
    series = simulate_chain(spec, CollisionParams(0.5), 2.0)
    starts = [2.0] + series.post_impact_omegas[:-1]
    k = 3 * 9.80665 / 0.3
    for w0, pre in zip(starts, series.pre_impact_omegas):
        assert pre == pytest.approx(math.sqrt(w0 * w0 + k * (1 - math.cos(spec.contact_angle))), rel=1e-9)


@given(st.floats(0.0, math.pi / 3), st.floats(0.01, 50.0))
def test_angular_velocity_energy(theta, w0):
    spec = array_from_ratios(0.5, 0.0, height=0.7)
    k = 3 * 9.80665 / 0.7
    assert angular_velocity(spec, w0, theta) == pytest.approx(
        math.sqrt(w0 * w0 + k * (1 - math.cos(theta))), rel=1e-9
    )


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, PRACTICAL_LIMIT), st.floats(0.01, 20.0), st.floats(1.01, 3.0))
def test_fall_time_decreases_with_omega(r, w, factor):
    spec = array_from_ratios(r, 0.1)
    assert fall_time(spec, w * factor) < fall_time(spec, w)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, PRACTICAL_LIMIT), st.floats(0.0, 0.99), st.floats(0.001, 0.009))
def test_speed_increases_with_restitution(r, e, de):
    assert predict_normalized(r, 0.15, e + de) > predict_normalized(r, 0.15, e)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.02, PRACTICAL_LIMIT), st.floats(0.0, 0.99), st.floats(0.05, 0.95))
def test_fixed_point_bracketing(r, e, frac):
    spec = array_from_ratios(r, 0.1)
    p = CollisionParams(e)
    w_star = limiting_omega(spec, p)
    below, above = w_star * frac, w_star / frac
    assert below < collision_map(spec, p, below) < w_star
    assert w_star < collision_map(spec, p, above) < above


@settings(max_examples=25, deadline=None)
@given(st.floats(0.02, PRACTICAL_LIMIT), st.floats(0.0, 0.3), st.floats(0.0, 0.99),
       st.floats(0.01, 5.0), st.sampled_from([0.25, 4.0]))
def test_scale_invariance(r, t, e, h, k):
    a = limiting_speed(array_from_ratios(r, t, height=h), CollisionParams(e)).normalized_speed
    b = limiting_speed(array_from_ratios(r, t, height=k * h), CollisionParams(e)).normalized_speed
    assert a == pytest.approx(b, rel=1e-9)


def _points(pairs):
    return [MeasurementPoint(r, v) for r, v in pairs]


def test_calibration_recovers_synthetic_restitution():
    grid = [0.15, 0.3, 0.45, 0.6, 0.75]
    data = _points((r, predict_normalized(r, 0.15, 0.6)) for r in grid)
    fit = calibrate_restitution(data, 0.15)
    assert fit.restitution == pytest.approx(0.6, abs=2e-3)
    assert fit.rms < 1e-3


def test_calibration_table1_matches_grid_oracle():
    from dominowave.validation import builtin_dataset

    fit = calibrate_restitution(builtin_dataset("larham_vertical"), 0.15)
    # exhaustive 1e-4 grid over e with scipy quadrature
    assert fit.restitution == pytest.approx(0.7395, abs=2e-4)
    assert fit.rms == pytest.approx(0.4722859694888277, rel=1e-6)


def test_calibration_needs_two_points():
    with pytest.raises(InsufficientData):
        calibrate_restitution(_points([(0.3, 1.2)]))
    with pytest.raises(InsufficientData):
        calibrate_restitution([MeasurementPoint(0.3, 1.2), MeasurementPoint(0.9, 1.0)])
