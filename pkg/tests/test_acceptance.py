"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from dominowave.acoustics import SynthesisParams, analyze_rate, synthesize_collapse, wave_speed_from_recording
from dominowave.errors import Divergent, NonPropagating
from dominowave.geometry import array_from_ratios
from dominowave.validation import MeasurementPoint, builtin_dataset, range_check
from dominowave.wave_model import (
    CollisionParams,
    calibrate_restitution,
    collision_map,
    fall_time,
    limiting_omega,
    limiting_speed,
    predict_normalized,
    simulate_chain,
)

from conftest import click_train

TABLE_1 = [(0.04, 1.07), (0.14, 1.33), (0.23, 1.53), (0.33, 1.51), (0.43, 1.47),
           (0.53, 1.50), (0.62, 1.40), (0.72, 1.33), (0.82, 1.23)]
TABLE_2 = [(0.28, 1.15), (0.47, 1.19), (0.67, 1.15), (0.87, 0.68)]

# d/H=0.5, t/H=0.15, e=0.7, from the scipy-quadrature oracle in tests/oracles
ORACLE_VNORM = 1.3444456943244503


def test_c1_dataset_fidelity():
    v = builtin_dataset("larham_vertical")
    h = builtin_dataset("larham_horizontal")
    assert [(p.d_over_h, p.v_norm) for p in v.points] == TABLE_1
    assert [(p.d_over_h, p.v_norm) for p in h.points] == TABLE_2
    assert len(v.points) + len(h.points) == 13


def test_c2_range_claim():
    assert range_check(builtin_dataset("larham_vertical"), 1.0, 1.6)
    assert range_check(builtin_dataset("larham_horizontal"), 1.0, 1.6)


def test_c3_practical_limit():
    with pytest.raises(NonPropagating):
        limiting_speed(array_from_ratios(0.88, 0.15), CollisionParams(0.7))
    pred = limiting_speed(array_from_ratios(0.86, 0.15), CollisionParams(0.7))
    assert math.isfinite(pred.normalized_speed) and pred.normalized_speed > 0


def test_c4_scale_invariance():
    start = time.perf_counter()
    values = [
        limiting_speed(array_from_ratios(0.5, 0.15, height=h), CollisionParams(0.7)).normalized_speed
        for h in (0.05, 0.2, 0.8)
    ]
    assert max(values) - min(values) <= 1e-9 * max(values)
    assert time.perf_counter() - start < 1.0


def test_c5_fixed_point_consistency():
    start = time.perf_counter()
    spec = array_from_ratios(0.5, 0.15, count=100)
    p = CollisionParams(0.7)
    w_star = limiting_omega(spec, p)
    periods = simulate_chain(spec, p, 1.0).periods
    assert np.mean(periods[-50:]) == pytest.approx(fall_time(spec, w_star), rel=1e-3)
    w = 0.1
    for _ in range(200):
        w = collision_map(spec, p, w)
    assert abs(w - w_star) <= 1e-9 * w_star
    assert time.perf_counter() - start < 1.0


def test_c6_divergence():
    start = time.perf_counter()
    spec = array_from_ratios(0.5, 0.15, count=51)
    p = CollisionParams(1.0)
    with pytest.raises(Divergent):
        limiting_speed(spec, p)
    series = simulate_chain(spec, p, 1.0)
    assert series.divergent
    assert len(series.post_impact_omegas) == 50
    assert all(b > a for a, b in zip(series.post_impact_omegas, series.post_impact_omegas[1:]))
    assert time.perf_counter() - start < 1.0


def test_c7_analyzer_recovery():
    start = time.perf_counter()
    for i, rate in enumerate((5, 10, 20, 40, 60)):
        est = analyze_rate(click_train(rate, duration=30.0, snr_db=10, seed=100 + i, fs=44100))
        assert abs(est.rate_hz - rate) / rate <= 0.01, (rate, est)
        noisy = analyze_rate(click_train(rate, duration=30.0, snr_db=0, seed=200 + i, fs=44100))
        assert abs(noisy.rate_hz - rate) / rate <= 0.05 or not noisy.reliable, (rate, noisy)
    assert time.perf_counter() - start < 30.0


def test_c8_end_to_end_round_trip():
    start = time.perf_counter()
    spec = array_from_ratios(0.5, 0.15, height=0.05, count=150)
    p = CollisionParams(0.7)
    model = limiting_speed(spec, p).normalized_speed
    assert model == pytest.approx(ORACLE_VNORM, rel=1e-8)
    series = simulate_chain(spec, p, 1.0)
    recording = synthesize_collapse(series.impact_times, SynthesisParams(snr_db=30, noise_seed=1), 44100)
    measured = wave_speed_from_recording(recording, spec.pitch, spec.height)
    assert measured.estimate.reliable
    assert measured.normalized_speed == pytest.approx(model, rel=0.02)
    assert time.perf_counter() - start < 10.0


def test_c9a_calibration_fit_to_table_1():
    # The pairwise model's speed grows roughly in proportion to d/H + t/H,
    # while the measurements are flat; the best attainable rms is ~0.47.
    start = time.perf_counter()
    fit = calibrate_restitution(builtin_dataset("larham_vertical"), 0.15)
    assert time.perf_counter() - start < 5.0
    assert fit.rms <= 0.15, f"best fit e*={fit.restitution:.4f} leaves rms={fit.rms:.4f}"


def test_c9b_self_calibration():
    start = time.perf_counter()
    data = [MeasurementPoint(r, predict_normalized(r, 0.15, 0.6)) for r in (0.14, 0.23, 0.33, 0.43, 0.53, 0.62, 0.72)]
    fit = calibrate_restitution(data, 0.15)
    assert abs(fit.restitution - 0.6) <= 0.002
    assert time.perf_counter() - start < 5.0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
