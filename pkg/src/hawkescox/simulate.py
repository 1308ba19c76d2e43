"""Forward simulation of the discrete Hawkes-Cox model.

Randomness comes from numpy's PCG64. A single integer seed is expanded with
``SeedSequence(seed).spawn(3)`` into three independent streams, used for the
latent path, the counts and the MCMC sampler respectively, so each component
can be reproduced on its own.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .kernels import EXP_LIMIT
from .model import CountSeries, IntensityDecomposition, ModelParams

STREAMS = ("latent", "counts", "sampler")


def rng_streams(seed):
    """Named, independent PCG64 generators derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return {name: np.random.Generator(np.random.PCG64(ss)) for name, ss in zip(STREAMS, children)}


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    n: int
    seed: int = 0
    trend: bool = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class SimOutput:
    x: np.ndarray
    y: CountSeries
    decomp: IntensityDecomposition


def simulate_latent(config, rng=None):
    """Stationary AR(1) path: x_1 ~ N(mu, sigma2), x_i = mu + a(x_{i-1} - mu) + noise."""
    p = config.params
    if rng is None:
        rng = rng_streams(config.seed)["latent"]
    z = rng.standard_normal(config.n)
    x = np.empty(config.n)
    if p.sigma2 == 0.0:
        x[:] = p.mu
        return x
    innov = math.sqrt(p.sigma2 * (1.0 - p.a ** 2))
    x[0] = p.mu + math.sqrt(p.sigma2) * z[0]
    for i in range(1, config.n):
        x[i] = p.mu + p.a * (x[i - 1] - p.mu) + innov * z[i]
    return x


def simulate_counts(config, x, rng=None):
    """Draw y_i ~ Poisson(lambda_i) bin by bin, lambda_i depending on y_{<i}."""
    p = config.params
    if rng is None:
        rng = rng_streams(config.seed)["counts"]
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (config.n,):
        raise ValueError(f"latent path has shape {x.shape}, expected ({config.n},)")
    arg = x + (p.c * np.arange(1, config.n + 1) if config.trend else 0.0)
    if arg.max() > EXP_LIMIT:
        raise NumericalError("background intensity overflows")
    background = np.exp(arg)
    hawkes = np.zeros(config.n)
    y = np.zeros(config.n, dtype=np.int64)
    gain = p.theta * (1.0 - p.b)
    g = 0.0
    for i in range(config.n):
        if i > 0:
            g = p.b * g + gain * y[i - 1]
        hawkes[i] = g
        y[i] = rng.poisson(background[i] + g)
    lam = background + hawkes
    return CountSeries(y, dt=p.dt), IntensityDecomposition(lam=lam, background=background, hawkes=hawkes)


def simulate(config):
    streams = rng_streams(config.seed)
    x = simulate_latent(config, streams["latent"])
    y, decomp = simulate_counts(config, x, streams["counts"])
    return SimOutput(x=x, y=y, decomp=decomp)
