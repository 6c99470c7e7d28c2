import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_physical
from sepdist import errors, tomography as tomo
from sepdist.symplectic import ppt_values


def test_six_settings_match_table():
    X, D, P = 0.0, math.pi / 4, math.pi / 2
    expected = [(X, X, X), (P, P, P), (P, X, X), (X, P, X), (X, X, P), (D, D, D)]
    assert [s.angles for s in tomo.SETTINGS] == expected
    assert tomo.setting_index(tomo.MeasurementSetting((P, X, X))) == 2
    with pytest.raises(errors.MissingSetting):
        tomo.setting_index(tomo.MeasurementSetting((D, X, X)))


def test_vacuum_variances():
    b = tomo.sample_block(np.eye(6), tomo.SETTINGS[0], 100_000, seed=1)
    var = np.diag(b.second_moments())
    assert np.all(np.abs(var - 1) <= 0.01)
    assert b.mean_is_consistent()


def test_sample_block_deterministic(gamma_m):
    a = tomo.sample_block(gamma_m, tomo.SETTINGS[3], 1000, seed=99)
    b = tomo.sample_block(gamma_m, tomo.SETTINGS[3], 1000, seed=99)
    c = tomo.sample_block(gamma_m, tomo.SETTINGS[3], 1000, seed=100)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_sample_block_measured_entries(gamma_m):
    n = 200_000
    C = tomo.sample_block(gamma_m, tomo.SETTINGS[0], n, seed=3).second_moments()
    # Var(X_A) and Cov(X_B, X_C) against their Gaussian standard errors
    se_aa = math.sqrt(2 * gamma_m[0, 0] ** 2 / n)
    se_bc = math.sqrt((gamma_m[2, 2] * gamma_m[4, 4] + gamma_m[2, 4] ** 2) / n)
    assert gamma_m[0, 0] == pytest.approx(0.76) and gamma_m[2, 4] == pytest.approx(-3.92)
    assert abs(C[0, 0] - 0.76) <= 3 * se_aa
    assert abs(C[1, 2] + 3.92) <= 3 * se_bc


def test_sample_block_rejects_indefinite():
    g = np.diag([-1.0, 1, 1, 1, 1, 1])
    with pytest.raises(errors.NotPositiveDefinite):
        tomo.sample_block(g, tomo.SETTINGS[0], 10, seed=0)


def test_semidefinite_projection_is_clipped():
    # perfectly correlated X quadratures: the projected covariance is singular
    g = np.eye(6)
    g[np.ix_([0, 2, 4], [0, 2, 4])] = 1.0
    b = tomo.sample_block(g, tomo.SETTINGS[0], 1000, seed=0)
    assert np.allclose(b.samples[:, 0], b.samples[:, 1], atol=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_population_moments_recover_gamma(seed):
    g = random_physical(np.random.default_rng(seed), 3)
    rec = tomo.reconstruct_from_moments(tomo.population_moments(g))
    assert np.allclose(rec.gamma_hat, g, atol=1e-12 * max(1.0, np.abs(g).max()), rtol=0)
    assert np.all(rec.std_errors == 0)


def test_reconstruct_identity():
    rec = tomo.reconstruct(tomo.simulate_tomography(np.eye(6), 1_000_000, seed=11))
    assert np.max(np.abs(rec.gamma_hat - np.eye(6))) <= 0.005
    assert np.array_equal(rec.gamma_hat, rec.gamma_hat.T)
    assert np.all(rec.std_errors >= 0)


@pytest.fixture(scope="module")
def measured_reconstruction():
    from sepdist.data import GAMMA_MEASURED

    return tomo.reconstruct(tomo.simulate_tomography(GAMMA_MEASURED, 1_000_000, seed=12))


def test_reconstruct_measured_fixed_tolerance(measured_reconstruction, gamma_m):
    assert np.max(np.abs(measured_reconstruction.gamma_hat - gamma_m)) <= 0.01


def test_reconstruct_measured_within_errors(measured_reconstruction, gamma_m):
    rec = measured_reconstruction
    assert np.all(np.abs(rec.gamma_hat - gamma_m) <= 4 * rec.std_errors)


def test_reconstruction_bias(gamma_m):
    n, runs = 100_000, 50
    est = np.array([
        tomo.reconstruct(tomo.simulate_tomography(gamma_m, n, tomo.run_seed(5, r))).gamma_hat
        for r in range(runs)
    ])
    bias = est.mean(axis=0) - gamma_m
    se = est.std(axis=0, ddof=1) / math.sqrt(runs)
    assert np.all(np.abs(bias) < 3 * se + 1e-12)


def test_standard_errors_match_spread(gamma_m):
    runs = 40
    est = np.array([
        tomo.reconstruct(tomo.simulate_tomography(gamma_m, 20_000, tomo.run_seed(8, r))).gamma_hat
        for r in range(runs)
    ])
    predicted = tomo.reconstruct(tomo.simulate_tomography(gamma_m, 20_000, 8)).std_errors
    ratio = est.std(axis=0, ddof=1) / predicted
    assert 0.7 < np.median(ratio) < 1.3


def test_reconstruct_errors(gamma_m):
    blocks = tomo.simulate_tomography(gamma_m, 200, seed=0)
    with pytest.raises(errors.MissingSetting):
        tomo.reconstruct(blocks[:5])
    with pytest.raises(errors.MissingSetting):
        tomo.reconstruct_from_moments({i: np.eye(3) for i in range(5)})
    few = tomo.simulate_tomography(gamma_m, 50, seed=0)
    with pytest.raises(errors.InsufficientSamples):
        tomo.reconstruct(few)
    with pytest.raises(errors.InsufficientSamples):
        tomo.QuadratureSampleBlock(tomo.SETTINGS[0], np.zeros((1, 3)))


def test_block_save_load(tmp_path, gamma_m):
    b = tomo.sample_block(gamma_m, tomo.SETTINGS[5], 500, seed=42)
    path = tmp_path / "block.csv"
    b.save(path)
    assert path.read_text().splitlines()[0] == "xA,xB,xC"
    meta = json.loads(path.with_suffix(".json").read_text())
    assert meta["setting"] == 6 and meta["seed"] == 42 and meta["n"] == 500
    back = tomo.QuadratureSampleBlock.load(path)
    assert np.array_equal(back.samples, b.samples)
    assert back.setting == b.setting


def test_monte_carlo_vacuum():
    # the PPT value of a noisy identity is the smallest of nearly degenerate
    # eigenvalues, so it sits below 1 by an amount of order the per-run error
    small = tomo.monte_carlo_ppt(np.eye(6), 10_000, 20, seed=1)
    large = tomo.monte_carlo_ppt(np.eye(6), 200_000, 20, seed=1)
    assert np.all(np.abs(small.mean - 1) <= 3 * math.sqrt(2 / 10_000))
    assert np.all(np.abs(large.mean - 1) <= 3 * math.sqrt(2 / 200_000))
    assert np.all(np.abs(large.mean - 1) < np.abs(small.mean - 1))


def test_monte_carlo_reproducible_and_order_free(gamma_l):
    a = tomo.monte_carlo_ppt(gamma_l, 1000, 8, seed=77)
    b = tomo.monte_carlo_ppt(gamma_l, 1000, 8, seed=77)
    assert a.to_json() == b.to_json()
    # each run depends only on (seed, run index)
    single = tomo._one_run((gamma_l, 1000, 77, 5))
    assert np.array_equal(a.mu[5], single)
    shuffled = tomo.MonteCarloResult(a.mu[::-1].copy(), 1000, 8, 77)
    assert np.allclose(shuffled.mean, a.mean, rtol=0, atol=1e-15)
    doc = a.to_json()
    assert set(doc) == {"muA", "muB", "muC", "n_samples", "n_runs", "seed"}
    assert set(doc["muA"]) == {"mean", "std"}


def test_monte_carlo_parallel_matches_serial(gamma_l):
    a = tomo.monte_carlo_ppt(gamma_l, 500, 4, seed=3)
    b = tomo.monte_carlo_ppt(gamma_l, 500, 4, seed=3, workers=2)
    assert np.array_equal(a.mu, b.mu)


@pytest.mark.slow
def test_ppt_spread_scales_inverse_sqrt_n(gamma_l):
    small = tomo.monte_carlo_ppt(gamma_l, 10_000, 200, seed=101)
    large = tomo.monte_carlo_ppt(gamma_l, 1_000_000, 80, seed=202)
    ratio = small.std.mean() / large.std.mean()
    assert ratio == pytest.approx(10.0, rel=0.2)
    assert np.allclose(ppt_values(gamma_l), large.mean, atol=0.002)
