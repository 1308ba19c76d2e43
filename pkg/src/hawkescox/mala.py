"""Blocked Metropolis-adjusted Langevin sampler.

One sweep updates, in order,

1. the latent path ``x``                (step ``eps_x``, default 0.1)
2. ``a, sigma2, mu`` (and ``c``)         (step ``eps_cox``, default 0.01)
3. ``b, theta``                          (step ``eps_hawkes``, default 0.01)

Each block is a MALA move targeting the full joint posterior with the other
blocks held fixed (Metropolis-within-Gibbs). Step sizes are never adapted.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DataError, NumericalError
from .model import PARAM_NAMES, CountSeries
from .posterior import PriorSpec, State, evaluate
from .simulate import rng_streams

logger = logging.getLogger(__name__)

BLOCKS = ("x", "cox", "hawkes")
_COX = np.array([0, 1, 2])
_COX_TREND = np.array([0, 1, 2, 5])
_HAWKES = np.array([3, 4])


@dataclass
class McmcConfig:
    iters: int = 500_000
    burnin: int = 250_000
    eps_x: float = 0.1
    eps_cox: float = 0.01
    eps_hawkes: float = 0.01
    eps_c: float = 1e-4
    thin_x: int = 100
    seed: int = 0
    trend_enabled: bool = False
    init: Optional[State] = None
    prior: PriorSpec = field(default_factory=PriorSpec)
    # blocks left out are held at their initial values
    blocks: tuple = BLOCKS

    def __post_init__(self):
        if not 0 <= self.burnin < self.iters:
            raise ValueError(f"need 0 <= burnin < iters, got burnin={self.burnin}, iters={self.iters}")
        for name in ("eps_x", "eps_cox", "eps_hawkes", "eps_c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.thin_x < 1:
            raise ValueError("thin_x must be >= 1")
        unknown = set(self.blocks) - set(BLOCKS)
        if unknown:
            raise ValueError(f"unknown blocks {sorted(unknown)}; choose from {BLOCKS}")

    def echo(self):
        """JSON-friendly copy of the scalar settings."""
        return {
            "iters": self.iters, "burnin": self.burnin,
            "eps_x": self.eps_x, "eps_cox": self.eps_cox,
            "eps_hawkes": self.eps_hawkes, "eps_c": self.eps_c,
            "thin_x": self.thin_x, "seed": self.seed,
            "trend_enabled": self.trend_enabled,
            "blocks": list(self.blocks),
            "prior": {"var_mu": self.prior.var_mu, "var_sigma2": self.prior.var_sigma2,
                      "var_c": self.prior.var_c},
        }


@dataclass
class ChainSamples:
    """Post-burn-in draws.

    ``param_draws[k]`` belongs to iteration ``draw_iters[k]``; ``x_draws[m]``
    to iteration ``x_iters[m]``. ``log_post_trace`` covers every iteration,
    burn-in included.
    """
    draw_iters: np.ndarray
    param_draws: np.ndarray
    x_iters: np.ndarray
    x_draws: np.ndarray
    accept_rates: dict
    log_post_trace: np.ndarray
    trend: bool = False
    dt: float = 1.0
    seed: int = 0

    @property
    def param_names(self):
        return PARAM_NAMES if self.trend else PARAM_NAMES[:5]

    def params_at(self, iteration):
        k = np.searchsorted(self.draw_iters, iteration)
        if k >= len(self.draw_iters) or self.draw_iters[k] != iteration:
            raise KeyError(f"no parameter draw stored for iteration {iteration}")
        return self.param_draws[k]

    def x_param_draws(self):
        """Parameter vectors aligned with ``x_draws``."""
        k = np.searchsorted(self.draw_iters, self.x_iters)
        return self.param_draws[k]


def _log_q(to, frm, grad_frm, eps):
    # log N(to; frm + eps^2/2 grad, eps^2 I) without the shared constant
    d = to - frm - 0.5 * eps * eps * grad_frm
    return -0.5 * float(np.sum(d * d / (eps * eps)))


def _mala_move(cur, lp_cur, g_cur, target, eps, rng):
    """Propose and accept/reject. ``target(v) -> (logp, grad, extra)``."""
    prop = cur + 0.5 * eps * eps * g_cur + eps * rng.standard_normal(cur.shape)
    lp_prop, g_prop, extra = target(prop)
    u = rng.random()
    if not math.isfinite(lp_prop):
        return cur, lp_cur, g_cur, None, False
    log_alpha = (lp_prop + _log_q(cur, prop, g_prop, eps)) - (lp_cur + _log_q(prop, cur, g_cur, eps))
    if log_alpha >= 0.0 or math.log(u) < log_alpha:
        return prop, lp_prop, g_prop, extra, True
    return cur, lp_cur, g_cur, None, False


def mala_block_step(current, grad_fn, logpost_fn, eps, rng):
    """One MALA transition for a single block.

    ``eps`` may be a scalar or a per-coordinate array. Proposals with
    non-finite log density are rejected. Returns ``(new_value, accepted)``.
    """
    cur = np.atleast_1d(np.asarray(current, dtype=np.float64))
    eps = np.asarray(eps, dtype=np.float64)

    def target(v):
        lp = logpost_fn(v)
        if not math.isfinite(lp):
            return -math.inf, None, None
        return lp, np.atleast_1d(np.asarray(grad_fn(v), dtype=np.float64)), None

    new, _, _, _, accepted = _mala_move(cur, logpost_fn(cur), np.atleast_1d(grad_fn(cur)), target, eps, rng)
    if np.ndim(current) == 0:
        return float(new[0]), accepted
    return new, accepted


def init_state(y, config):
    """Starting state; ``config.init`` is returned unchanged when given."""
    if config.init is not None:
        return config.init
    counts = y.counts if isinstance(y, CountSeries) else np.asarray(y)
    mu0 = math.log(float(np.mean(counts)) + 1e-3)
    n = counts.shape[0]
    return State(x=np.full(n, mu0), params=np.array([0.5, 0.5, mu0, 0.5, 0.25, 0.0]))


def run_chain(y, config):
    """Run the blocked sampler on a count series."""
    if not isinstance(y, CountSeries):
        y = CountSeries(np.asarray(y))
    yf = y.as_float()
    n = y.n
    trend = config.trend_enabled
    prior = config.prior
    rng = rng_streams(config.seed)["sampler"]

    state = init_state(y, config)
    x = np.array(state.x, dtype=np.float64)
    p = np.array(state.params, dtype=np.float64)
    if x.shape != (n,):
        raise DataError(f"initial latent path has length {x.shape[0]}, data has {n}")
    if not trend:
        p[5] = 0.0
    lp, gx, gp = evaluate(x, p, yf, prior, trend)
    if not math.isfinite(lp):
        raise NumericalError(f"log posterior is not finite at the initial state: params={p.tolist()}")

    cox_idx = _COX_TREND if trend else _COX
    eps_cox = np.full(cox_idx.shape[0], config.eps_cox)
    if trend:
        eps_cox[-1] = config.eps_c

    n_keep = config.iters - config.burnin
    draw_iters = np.arange(config.burnin, config.iters)
    param_draws = np.empty((n_keep, 6))
    x_iters = np.arange(config.burnin, config.iters, config.thin_x)
    x_draws = np.empty((x_iters.shape[0], n))
    trace = np.empty(config.iters)
    accepted = dict.fromkeys(BLOCKS, 0)

    def target_x(xv):
        lp_, gx_, gp_ = evaluate(xv, p, yf, prior, trend)
        return lp_, gx_, gp_

    def make_param_target(idx):
        def target(v):
            q = p.copy()
            q[idx] = v
            lp_, gx_, gp_ = evaluate(x, q, yf, prior, trend)
            return lp_, (None if gp_ is None else gp_[idx]), (gx_, gp_)
        return target

    param_blocks = []
    if "cox" in config.blocks:
        param_blocks.append(("cox", cox_idx, make_param_target(cox_idx), eps_cox))
    if "hawkes" in config.blocks:
        param_blocks.append(("hawkes", _HAWKES, make_param_target(_HAWKES), config.eps_hawkes))
    update_x = "x" in config.blocks

    t0 = time.perf_counter()
    report_every = max(config.iters // 10, 1)
    k_x = 0
    for it in range(config.iters):
        if update_x:
            x_new, lp_new, gx_new, gp_new, acc = _mala_move(x, lp, gx, target_x, config.eps_x, rng)
            if acc:
                x, lp, gx, gp = x_new, lp_new, gx_new, gp_new
                accepted["x"] += 1

        for name, idx, target, eps in param_blocks:
            v_new, lp_new, _, extra, acc = _mala_move(p[idx], lp, gp[idx], target, eps, rng)
            if acc:
                p[idx] = v_new
                lp = lp_new
                gx, gp = extra
                accepted[name] += 1

        trace[it] = lp
        if it >= config.burnin:
            param_draws[it - config.burnin] = p
            if k_x < x_iters.shape[0] and it == x_iters[k_x]:
                x_draws[k_x] = x
                k_x += 1
        if (it + 1) % report_every == 0:
            logger.info("iter %d/%d  logpost %.3f  (%.1fs)", it + 1, config.iters, lp,
                        time.perf_counter() - t0)

    rates = {k: v / config.iters for k, v in accepted.items() if k in config.blocks}
    return ChainSamples(
        draw_iters=draw_iters,
        param_draws=param_draws,
        x_iters=x_iters,
        x_draws=x_draws,
        accept_rates=rates,
        log_post_trace=trace,
        trend=trend,
        dt=y.dt,
        seed=config.seed,
    )
