"""Finite-difference check of the analytic posterior gradient."""
import numpy as np

from .model import ModelParams
from .posterior import PriorSpec, evaluate
from .simulate import SimConfig, rng_streams, simulate_counts, simulate_latent

COMPONENTS = ("x", "a", "sigma2", "mu", "b", "theta", "c")


def random_state(n, rng, trend=True):
    """A random in-support (x, params, y) triple with y drawn from the model."""
    params = ModelParams(
        a=rng.uniform(0.2, 0.9),
        sigma2=rng.uniform(0.3, 1.5),
        mu=rng.uniform(0.5, 2.0),
        b=rng.uniform(0.1, 0.8),
        theta=rng.uniform(0.1, 0.8),
        c=rng.uniform(-0.5, 0.5) / n if trend else 0.0,
    )
    cfg = SimConfig(params, n)
    x = simulate_latent(cfg, rng)
    y, _ = simulate_counts(cfg, x, rng)
    return x, params.as_array(), y.as_float()


def _fd(f, v, h):
    # fourth-order central difference
    return (-f(v + 2 * h) + 8 * f(v + h) - 8 * f(v - h) + f(v - 2 * h)) / (12 * h)


def relative_error(analytic, numeric, floor=1.0):
    """``|analytic - numeric| / max(|analytic|, |numeric|, floor)`` (max over entries)."""
    analytic = np.atleast_1d(analytic)
    numeric = np.atleast_1d(numeric)
    scale = max(np.max(np.abs(analytic)), np.max(np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric)) / scale)


def check_state(x, p, y, prior=PriorSpec(), trend=True, h=1e-3):
    """Relative error of each gradient component at one state."""
    n = x.shape[0]
    _, gx, gp = evaluate(x, p, y, prior, trend)
    out = {}

    num_x = np.empty(n)
    for i in range(n):
        def f(v, i=i):
            xx = x.copy()
            xx[i] = v
            return evaluate(xx, p, y, prior, trend)[0]
        num_x[i] = _fd(f, x[i], h)
    out["x"] = relative_error(gx, num_x)

    for k, name in enumerate(COMPONENTS[1:]):
        if name == "c" and not trend:
            continue
        step = h / n if name == "c" else h

        def f(v, k=k):
            q = p.copy()
            q[k] = v
            return evaluate(x, q, y, prior, trend)[0]
        out[name] = relative_error(gp[k], _fd(f, p[k], step))
    return out


def run(n=50, states=20, seed=0, trend=True):
    """Worst relative error per component over ``states`` random states."""
    rng = rng_streams(seed)["sampler"]
    worst = {}
    for _ in range(states):
        x, p, y = random_state(n, rng, trend)
        for name, err in check_state(x, p, y, trend=trend).items():
            worst[name] = max(worst.get(name, 0.0), err)
    return worst
