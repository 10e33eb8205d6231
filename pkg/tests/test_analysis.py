import math

import numpy as np
import pytest

from noonlab import (
    BeamsplitterSpec,
    ConditioningError,
    CoincidenceCurve,
    DetectorSpec,
    SourceSpec,
    default_phase_grid,
    fit_trig,
    fringe_minima,
    poisson_weights,
    sample_clicks,
)

GRID = default_phase_grid(120)


def test_constant_curve():
    rates = np.full(GRID.shape, 0.37)
    fit = fit_trig(GRID, rates, None, 3)
    assert fit.c0 == pytest.approx(0.37, abs=1e-12)
    assert fit.visibility == pytest.approx(0.0, abs=1e-12)


def test_pure_harmonic_recovered_exactly():
    rates = 1.0 + 0.8 * np.cos(5 * GRID)
    fit = fit_trig(GRID, rates, None, 5)
    assert fit.visibility == pytest.approx(0.8, abs=1e-10)
    assert fit.a[4] == pytest.approx(0.8, abs=1e-10)
    assert fit.b[4] == pytest.approx(0.0, abs=1e-10)


def test_visibility_invariant_under_fringe_offset():
    for offset in (0.0, 0.7, 2.2):
        rates = 1.0 + np.cos(4 * GRID + offset)
        fit = fit_trig(GRID, rates, None, 4)
        assert fit.visibility == pytest.approx(1.0, abs=1e-10)


def test_exact_interpolation_of_low_degree_polynomials():
    # >= 4n+2 uniform points recover a degree-<=n trig polynomial exactly
    n = 3
    grid = default_phase_grid(4 * n + 2)
    rng = np.random.default_rng(0)
    coef = rng.normal(size=2 * n + 1)
    rates = np.full(grid.shape, coef[0])
    for k in range(1, n + 1):
        rates += coef[2 * k - 1] * np.cos(k * grid) + coef[2 * k] * np.sin(k * grid)
    fit = fit_trig(grid, rates, None, n)
    got = np.concatenate([[fit.c0], np.stack([fit.a, fit.b], axis=1).ravel()])
    assert np.max(np.abs(got - coef)) < 1e-10
    assert fit.residual_rms < 1e-12


def test_visibility_scale_invariant():
    rates = 0.2 + 0.1 * np.cos(2 * GRID)
    a = fit_trig(GRID, rates, None, 2).visibility
    b = fit_trig(GRID, 37.0 * rates, None, 2).visibility
    assert a == pytest.approx(b, rel=1e-12)


def test_weighted_fit_matches_known_curve():
    rates = 0.5 + 0.25 * np.sin(3 * GRID)
    w = np.linspace(0.5, 2.0, GRID.size)
    fit = fit_trig(GRID, rates, w, 3)
    assert fit.visibility == pytest.approx(0.5, abs=1e-10)


def test_sigma_scales_with_pulses():
    # Poisson-weighted sigma_V should fall like 1/sqrt(pulses); the source
    # is bright enough that the one-count floor never binds
    src = SourceSpec(r=0.4, gamma=1.0, phi_cs=math.pi, cutoff=28)
    det = DetectorSpec(4, 0.5)
    bs = BeamsplitterSpec()
    grid = default_phase_grid(40)
    sigmas = []
    pulse_counts = [10**3, 10**4, 10**5]
    for pulses in pulse_counts:
        samples = sample_clicks(src, bs, det, det, grid, pulses, seed=9)
        counts = samples.counts_for((1, 1))
        fit = fit_trig(grid, counts / pulses, poisson_weights(counts, pulses), 2)
        sigmas.append(fit.sigma_visibility)
    slope = (math.log(sigmas[2]) - math.log(sigmas[0])) / (
        math.log(pulse_counts[2]) - math.log(pulse_counts[0])
    )
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_degenerate_grid_raises():
    phases = np.zeros(9)
    rates = np.ones(9)
    with pytest.raises(ConditioningError):
        fit_trig(phases, rates, None, 2)


def test_zero_offset_visibility_undefined():
    rates = 1e-15 * np.cos(2 * GRID)
    with pytest.raises(ConditioningError):
        fit_trig(GRID, rates, None, 2)


def test_sample_count_precondition():
    grid = default_phase_grid(6)
    with pytest.raises(ValueError):
        fit_trig(grid, np.ones(6), None, 3)  # needs 2*3+1 = 7


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        fit_trig(GRID, np.ones(GRID.size), np.zeros(GRID.size), 1)


def test_poisson_weights_floor():
    w = poisson_weights(np.array([0.0, 1.0, 4.0]), 100)
    assert w == pytest.approx([10000.0, 10000.0, 2500.0])


def make_curve(rates, pattern=(1, 1)):
    return CoincidenceCurve(GRID, rates, pattern)


def test_minima_of_two_fold_fringe():
    curve = make_curve(1.0 + np.cos(2 * GRID))
    minima = fringe_minima(curve, 2)
    assert len(minima) == 2
    phis = [m[0] for m in minima]
    assert phis == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-6)
    assert all(abs(v) < 1e-10 for _, v in minima)


def test_minima_of_constant_curve_empty():
    curve = make_curve(np.full(GRID.shape, 0.5))
    assert fringe_minima(curve, 2) == []


def test_minima_requires_samples():
    tiny = CoincidenceCurve(np.array([0.0, 1.0]), np.array([1.0, 2.0]), (1, 0))
    with pytest.raises(ValueError):
        fringe_minima(tiny, 1)


def test_minima_uses_pattern_total_by_default():
    curve = make_curve(1.0 + np.cos(2 * GRID), pattern=(1, 1))
    assert len(fringe_minima(curve)) == 2


def test_predict_reproduces_samples():
    rates = 0.3 + 0.2 * np.cos(GRID) - 0.05 * np.sin(2 * GRID)
    fit = fit_trig(GRID, rates, None, 2)
    assert np.max(np.abs(fit.predict(GRID) - rates)) < 1e-10
