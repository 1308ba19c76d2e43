"""Stationary AR(1) Gaussian prior with covariance ``sigma2 * a**|i-j|``.

The precision matrix is tridiagonal, so everything here is O(N) and never
forms an N x N matrix. For N == 1 the precision is ``1/sigma2``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class Ar1Spec:
    a: float
    sigma2: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.a < 1.0):
            raise ValueError(f"a must lie in (0, 1), got {self.a}")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise ValueError(f"sigma2 must be positive and finite, got {self.sigma2}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")


def _centered(spec, xt):
    xt = np.ascontiguousarray(xt, dtype=np.float64)
    if xt.ndim != 1 or xt.shape[0] != spec.n:
        raise ValueError(f"expected a path of length {spec.n}, got shape {xt.shape}")
    if not np.all(np.isfinite(xt)):
        raise ValueError("centered path contains non-finite entries")
    return xt


def precision_apply(spec, xt):
    """Return ``Sigma^-1 @ xt`` using the tridiagonal stencil."""
    xt = _centered(spec, xt)
    return kernels.tridiag_apply(xt, spec.a, spec.sigma2)


def log_det(spec):
    """``log|Sigma| = N log(sigma2) + (N-1) log(1 - a^2)``."""
    return spec.n * math.log(spec.sigma2) + (spec.n - 1) * math.log1p(-spec.a * spec.a)


def _quad_bracket(spec, xt):
    s_all, s_int, s_cross = kernels.quad_parts(xt)
    a = spec.a
    return s_all + a * a * s_int - 2.0 * a * s_cross, s_int, s_cross


def quad_form(spec, xt):
    """``xt' Sigma^-1 xt`` in closed form."""
    xt = _centered(spec, xt)
    if spec.n == 1:
        return float(xt[0] ** 2 / spec.sigma2)
    bracket, _, _ = _quad_bracket(spec, xt)
    # the bracket is a sum of squares in exact arithmetic
    return max(bracket, 0.0) / (spec.sigma2 * (1.0 - spec.a ** 2))


def d_logprior_da(spec, xt):
    """d/da of ``-0.5 log|Sigma| - 0.5 xt' Sigma^-1 xt``."""
    xt = _centered(spec, xt)
    if spec.n == 1:
        return 0.0
    a = spec.a
    one_m = 1.0 - a * a
    pre = 1.0 / (spec.sigma2 * one_m)
    bracket, s_int, s_cross = _quad_bracket(spec, xt)
    dq = pre * (2.0 * a / one_m) * bracket + pre * (2.0 * a * s_int - 2.0 * s_cross)
    dlogdet = -2.0 * a * (spec.n - 1) / one_m
    return -0.5 * dlogdet - 0.5 * dq


def d_logprior_dsigma2(spec, xt):
    """d/dsigma2 of ``-0.5 log|Sigma| - 0.5 xt' Sigma^-1 xt``."""
    q = quad_form(spec, xt)
    return -0.5 * spec.n / spec.sigma2 + 0.5 * q / spec.sigma2


def dense_covariance(spec):
    """Dense ``sigma2 * a**|i-j|``. For tests and small diagnostics only."""
    idx = np.arange(spec.n)
    return spec.sigma2 * spec.a ** np.abs(idx[:, None] - idx[None, :])


def sample(spec, rng, size=None):
    """Draw zero-mean stationary AR(1) paths, shape ``(n,)`` or ``(size, n)``."""
    shape = (spec.n,) if size is None else (size, spec.n)
    z = rng.standard_normal(shape)
    out = np.empty(shape)
    innov = math.sqrt(spec.sigma2 * (1.0 - spec.a ** 2))
    out[..., 0] = math.sqrt(spec.sigma2) * z[..., 0]
    for i in range(1, spec.n):
        out[..., i] = spec.a * out[..., i - 1] + innov * z[..., i]
    return out
