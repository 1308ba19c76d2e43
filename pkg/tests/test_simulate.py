import math

import numpy as np
import pytest

from hawkescox.diagnostics import interevent_hist
from hawkescox.errors import NumericalError
from hawkescox.model import ModelParams, intensity
from hawkescox.simulate import SimConfig, rng_streams, simulate, simulate_counts, simulate_latent

BASE = ModelParams(a=0.65, sigma2=1.0, mu=2.0, b=0.35, theta=0.5)


def batch_mean_se(v, batches=50):
    parts = np.array_split(np.asarray(v, dtype=float), batches)
    means = np.array([p.mean() for p in parts])
    return means.std(ddof=1) / math.sqrt(batches)


def test_zero_variance_latent_is_constant():
    x = simulate_latent(SimConfig(BASE.replace(sigma2=0.0), 50, seed=3))
    assert np.all(x == 2.0)


def test_latent_moments():
    x = simulate_latent(SimConfig(BASE, 100_000, seed=11))
    a = 0.65
    # exact SE of the mean of a stationary AR(1)
    se = math.sqrt(1.0 / len(x) * (1 + a) / (1 - a))
    assert abs(x.mean() - 2.0) < 3 * se
    xc = x - x.mean()
    r1 = np.dot(xc[1:], xc[:-1]) / np.dot(xc, xc)
    assert abs(r1 - 0.65) < 0.02
    assert x.var() == pytest.approx(1.0, rel=0.05)


def test_fixed_seed_is_bit_identical():
    cfg = SimConfig(BASE, 300, seed=42)
    s1, s2 = simulate(cfg), simulate(cfg)
    assert np.array_equal(s1.x, s2.x)
    assert np.array_equal(s1.y.counts, s2.y.counts)
    assert s1.x.tobytes() == s2.x.tobytes()
    assert not np.array_equal(simulate(SimConfig(BASE, 300, seed=43)).y.counts, s1.y.counts)


def test_streams_are_independent_and_named():
    s = rng_streams(5)
    assert set(s) == {"latent", "counts", "sampler"}
    draws = [g.standard_normal(4) for g in s.values()]
    assert not np.allclose(draws[0], draws[1])
    # the latent stream alone reproduces the latent path
    x = simulate_latent(SimConfig(BASE, 20, seed=5), rng_streams(5)["latent"])
    assert np.array_equal(x, simulate(SimConfig(BASE, 20, seed=5)).x)


def test_decomposition_consistent_with_model():
    sim = simulate(SimConfig(BASE.replace(c=0.001), 400, seed=9))
    d = intensity(BASE.replace(c=0.001), sim.x, sim.y)
    np.testing.assert_allclose(sim.decomp.lam, d.lam, rtol=1e-13)
    np.testing.assert_allclose(sim.decomp.hawkes, d.hawkes, rtol=1e-12, atol=1e-12)
    assert len(sim.x) == len(sim.y) == 400


def test_degenerate_poisson_mean():
    p = BASE.replace(theta=0.0, sigma2=0.0)
    sim = simulate(SimConfig(p, 100_000, seed=1))
    lam = math.exp(2.0)
    se = math.sqrt(lam / 100_000)
    assert abs(sim.y.counts.mean() - lam) < 3 * se


def test_branching_mean_identity():
    p = ModelParams(a=0.65, sigma2=0.5, mu=1.0, b=0.35, theta=0.5)
    sim = simulate(SimConfig(p, 100_000, seed=2))
    expected = math.exp(1.0 + 0.25) / 0.5
    assert abs(sim.y.counts.mean() - expected) < 3 * batch_mean_se(sim.y.counts)


def test_clustered_cox_exceeds_poisson_baseline_at_short_lags():
    p = ModelParams(a=0.9, sigma2=0.7, mu=1.8, b=0.35, theta=0.0)
    sim = simulate(SimConfig(p, 500, seed=4))
    h = interevent_hist(sim.y)
    assert np.all(h.counts[:3] > h.baseline[:3])


def test_hawkes_branching_ratio():
    p = ModelParams(a=0.5, sigma2=0.0, mu=0.8, b=0.075, theta=0.9)
    ratios = []
    for seed in range(10):
        sim = simulate(SimConfig(p, 5000, seed=seed))
        ratios.append(sim.y.total / (5000 * math.exp(0.8)))
    assert all(abs(r - 10.0) <= 3.0 for r in ratios), ratios


def test_overflow_raises():
    cfg = SimConfig(BASE, 3, seed=0)
    with pytest.raises(NumericalError):
        simulate_counts(cfg, np.array([0.0, 800.0, 0.0]))


def test_invalid_length():
    with pytest.raises(ValueError):
        SimConfig(BASE, 0)
