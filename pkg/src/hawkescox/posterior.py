"""Log-posterior of the latent path and parameters, with analytic gradients.

Up to an additive constant,

    log pi = sum_i (-lambda_i + y_i log lambda_i)
             - 0.5 log|Sigma| - 0.5 (x - mu)' Sigma^-1 (x - mu)
             + log p(a, sigma2, mu, b, theta[, c])

with uniform priors on a, b, theta, N(0, var) on mu and c, and N(0, var)
truncated to sigma2 > 0. Outside the prior support the value is ``-inf``.
Every evaluation is O(N).
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DataError
from .model import CountSeries, ModelParams

NEG_INF = -math.inf


@dataclass(frozen=True)
class PriorSpec:
    """Prior variances (not standard deviations) of the Gaussian priors."""
    var_mu: float = 5.0
    var_sigma2: float = 5.0
    var_c: float = 5.0

    def __post_init__(self):
        for name in ("var_mu", "var_sigma2", "var_c"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"prior variance {name} must be positive and finite, got {v}")

    def log_density(self, p, trend=True):
        a, s2, mu, b, th, c = p
        out = -0.5 * mu * mu / self.var_mu - 0.5 * s2 * s2 / self.var_sigma2
        if trend:
            out -= 0.5 * c * c / self.var_c
        return out

    def grad(self, p, trend=True):
        a, s2, mu, b, th, c = p
        dc = -c / self.var_c if trend else 0.0
        return np.array([0.0, -s2 / self.var_sigma2, -mu / self.var_mu, 0.0, 0.0, dc])


def in_support(p):
    a, s2, mu, b, th, c = p
    return (
        0.0 < a < 1.0
        and 0.0 < s2 < math.inf
        and 0.0 < b < 1.0
        and 0.0 <= th < 1.0
        and math.isfinite(mu)
        and math.isfinite(c)
    )


@dataclass
class State:
    """Latent path plus the raw parameter vector ``[a, sigma2, mu, b, theta, c]``.

    The vector is deliberately unvalidated so that proposals outside the
    prior support can be represented (and scored as ``-inf``).
    """
    x: np.ndarray
    params: np.ndarray

    def __post_init__(self):
        self.x = np.array(self.x, dtype=np.float64)
        self.params = np.array(self.params, dtype=np.float64)
        if self.params.shape != (6,):
            raise ValueError("params must have six entries [a, sigma2, mu, b, theta, c]")

    @classmethod
    def from_params(cls, x, params):
        return cls(x=x, params=params.as_array())

    def model_params(self, dt=1.0):
        return ModelParams.from_array(self.params, dt=dt)

    def copy(self):
        return State(self.x.copy(), self.params.copy())


class ParamGrad(NamedTuple):
    da: float
    dsigma2: float
    dmu: float
    db: float
    dtheta: float
    dc: float


def _counts_array(y, n):
    if isinstance(y, CountSeries):
        arr = y.as_float()
    else:
        arr = np.ascontiguousarray(y, dtype=np.float64)
    if arr.shape != (n,):
        raise DataError(f"count series length {arr.shape[0]} does not match latent path length {n}")
    return arr


def evaluate(x, p, y, prior, trend=True):
    """Fast path used by the sampler.

    ``x`` and ``y`` must be float64 arrays of equal length. Returns
    ``(logp, grad_x, grad_params)``; the gradients are ``None`` when ``logp``
    is ``-inf`` (outside support or exponent overflow).
    """
    if not in_support(p):
        return NEG_INF, None, None
    a, s2, mu, b, th, c = p
    if not trend:
        c = 0.0
    ok, loglik, gauss, gx, ga, gs2, gmu, gb, gth, gc = kernels.posterior_terms(
        x, y, a, s2, mu, b, th, c)
    if not ok or not math.isfinite(loglik):
        return NEG_INF, None, None
    logp = loglik + gauss + prior.log_density(p, trend)
    gp = np.array([ga, gs2, gmu, gb, gth, gc if trend else 0.0]) + prior.grad(p, trend)
    return logp, gx, gp


def _prepare(state, y):
    x = np.ascontiguousarray(state.x, dtype=np.float64)
    return x, _counts_array(y, x.shape[0])


def log_post(state, y, prior=PriorSpec(), trend=True):
    """Unnormalised log posterior; ``-inf`` outside the prior support."""
    x, yf = _prepare(state, y)
    logp, _, _ = evaluate(x, state.params, yf, prior, trend)
    return logp


def grad_x(state, y, prior=PriorSpec(), trend=True):
    """Gradient in the latent path: ``v - Sigma^-1 (x - mu)``."""
    x, yf = _prepare(state, y)
    logp, gx, _ = evaluate(x, state.params, yf, prior, trend)
    if gx is None:
        raise ValueError("gradient requested at a state with zero posterior density")
    return gx


def grad_params(state, y, prior=PriorSpec(), trend=True):
    x, yf = _prepare(state, y)
    logp, _, gp = evaluate(x, state.params, yf, prior, trend)
    if gp is None:
        raise ValueError("gradient requested at a state with zero posterior density")
    return ParamGrad(*(float(v) for v in gp))
