import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionperc.lattice import build_family, vectors_for_family
from fusionperc.threshold import (NO_PERCOLATION, Crossing, SweepCurve,
                                  ThresholdError, estimate_threshold, extrapolate,
                                  find_crossing, sweep)

from oracles import exact_bond_spanning_probability


def _curve(params, prob, trials=1000, length=16):
    params = np.asarray(params, dtype=float)
    prob = np.asarray(prob, dtype=float)
    stderr = np.sqrt(np.clip(prob * (1 - prob), 1e-6, None) / trials)
    return SweepCurve(params=params, prob=prob, stderr=stderr,
                      trials=np.full(params.size, trials), length=length,
                      model="bond")


def test_symmetric_curve_crosses_at_center():
    crossing = find_crossing(_curve([0.2, 0.5, 0.8], [0.1, 0.5, 0.9]))
    assert crossing.value == pytest.approx(0.5, abs=1e-6)
    assert crossing.error > 0


def test_step_curve_crossing_within_spacing():
    params = np.linspace(0.0, 1.0, 11)
    prob = (params >= 0.42).astype(float)
    crossing = find_crossing(_curve(params, prob))
    step_cell = (0.4, 0.5)
    assert step_cell[0] - 0.01 <= crossing.value <= step_cell[1] + 0.01
    assert crossing.error >= 0.1 / np.sqrt(12) * 0.9


def test_crossing_requires_bracketing():
    with pytest.raises(ThresholdError, match="widen the grid"):
        find_crossing(_curve([0.1, 0.2, 0.3], [0.6, 0.8, 0.9]))
    with pytest.raises(ThresholdError):
        find_crossing(_curve([0.1, 0.2, 0.3], [0.0, 0.1, 0.2]))


@given(scale=st.floats(0.01, 100.0), shift=st.floats(-50.0, 50.0))
@settings(max_examples=30, deadline=None)
def test_crossing_equivariant_under_affine_reparameterization(scale, shift):
    params = np.linspace(0.3, 0.7, 9)
    prob = 1.0 / (1.0 + np.exp(-(params - 0.52) / 0.05))
    base = find_crossing(_curve(params, prob))
    mapped = find_crossing(_curve(params * scale + shift, prob))
    assert mapped.value == pytest.approx(base.value * scale + shift,
                                         rel=1e-4, abs=1e-6 * max(1.0, abs(scale)))


def test_extrapolate_constant_crossings():
    crossings = [Crossing(L, 0.42, 0.001) for L in (8, 16, 32)]
    est = extrapolate(crossings)
    assert est.lambda_c == pytest.approx(0.42, abs=2e-3)
    assert est.error > 0


def test_extrapolate_needs_three_sizes():
    with pytest.raises(ThresholdError):
        extrapolate([Crossing(8, 0.4, 0.001), Crossing(16, 0.41, 0.001)])
    with pytest.raises(ThresholdError):
        extrapolate([Crossing(8, 0.4, 0.001), Crossing(8, 0.41, 0.001),
                     Crossing(8, 0.42, 0.001)])


@pytest.mark.parametrize("amplitude,nu", [(0.3, 0.75), (-0.2, 1.0), (0.15, 1.4),
                                          (0.4, 0.9), (-0.35, 1.3)])
def test_extrapolate_recovers_synthetic_power_law(amplitude, nu):
    lam_true = 0.37
    rng = np.random.default_rng(hash((amplitude, nu)) % 2**32)
    lengths = [8, 12, 18, 27, 40]
    crossings = []
    for L in lengths:
        err = 4e-4
        value = lam_true + amplitude * L ** (-1.0 / nu) + rng.normal(0, err)
        crossings.append(Crossing(L, value, err))
    est = extrapolate(crossings)
    assert abs(est.lambda_c - lam_true) <= max(2 * est.error, 2e-3)


def test_sweep_monotone_on_square_lattice():
    lat = build_family("hc", 2, 32, "open")
    curve = sweep(lat, "bond", [0.3, 0.5, 0.7], 300, 5, threads=2)
    assert curve.prob[0] < curve.prob[1] < curve.prob[2]
    assert np.all(curve.stderr >= 0)


def test_sweep_matches_exact_curve_on_2x2():
    lat = build_family("hc", 2, 2, "open")
    grid = [0.3, 0.5, 0.7]
    trials = 8000
    curve = sweep(lat, "bond", grid, trials, 91, threads=2)
    for x, q in zip(curve.params, curve.prob):
        exact = exact_bond_spanning_probability(lat, float(x))
        sigma = np.sqrt(exact * (1 - exact) / trials)
        assert abs(q - exact) < 3 * sigma


def test_estimate_threshold_square_bond():
    est = estimate_threshold(vectors_for_family("hc", 2), "bond", [12, 16, 24],
                             400, 2024, resolution=2e-3, threads=2)
    assert est.percolates
    assert est.lambda_c == pytest.approx(0.5, abs=0.008)
    assert len(est.crossings) == 3
    assert est.fit_form in ("power-law", "fixed-1/L")


def test_estimate_threshold_hc_d4_spin_fusion():
    """Loss threshold of the 4d hypercubic fusion lattice (reference 0.9300)."""
    est = estimate_threshold(vectors_for_family("hc", 4), "spin", (6, 8, 10, 13),
                             1000, 20250, boundary="transverse-periodic",
                             resolution=5e-4, threads=2, keep_curves=False)
    assert est.lambda_c == pytest.approx(0.9300, abs=0.004)


def test_estimate_threshold_detects_no_percolation():
    # honeycomb bond threshold (0.653) is above p_s = 0.5, so the spin model
    # cannot percolate even at eta = 1
    est = estimate_threshold(vectors_for_family("hc", 2), "spin", [8, 12, 16],
                             200, 7, diamond_filter=True, threads=2)
    assert not est.percolates
    assert est.lambda_c == NO_PERCOLATION


def test_estimate_threshold_reproducible():
    spec = vectors_for_family("hc", 2)
    a = estimate_threshold(spec, "bond", [8, 12, 16], 200, 11, threads=2)
    b = estimate_threshold(spec, "bond", [8, 12, 16], 200, 11, threads=1)
    assert a.lambda_c == b.lambda_c
    assert a.error == b.error
    assert [(c.value, c.error) for c in a.crossings] == \
        [(c.value, c.error) for c in b.crossings]


def test_sweep_curve_stderr_formula():
    lat = build_family("hc", 2, 8, "open")
    curve = sweep(lat, "bond", [0.4, 0.6], 250, 3, threads=1)
    for q, e in zip(curve.prob, curve.stderr):
        assert e == pytest.approx(np.sqrt(q * (1 - q) / 250))
        assert 0.0 <= q <= 1.0
