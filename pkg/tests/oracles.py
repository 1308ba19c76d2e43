"""Slow, independent reference implementations used only by the tests.

Nothing here calls into the package's O(N) paths: covariances are dense,
the Hawkes term is the explicit double sum, and derivatives are finite
differences.
"""
import math

import numpy as np


def dense_sigma(a, sigma2, n):
    idx = np.arange(n)
    return sigma2 * a ** np.abs(idx[:, None] - idx[None, :])


def kernel_sum(y, b, theta):
    """g_i = sum_{j<i} theta (1-b)/b b^(i-j) y_j, written out literally."""
    n = len(y)
    g = np.zeros(n)
    for i in range(n):
        for j in range(i):
            g[i] += theta * (1.0 - b) / b * b ** (i - j) * y[j]
    return g


def dense_log_post(x, p, y, var_mu=5.0, var_sigma2=5.0, var_c=5.0, trend=True):
    """Same additive-constant convention as the package."""
    a, s2, mu, b, theta, c = p
    if not (0 < a < 1 and s2 > 0 and 0 < b < 1 and 0 <= theta < 1):
        return -math.inf
    n = len(x)
    c = c if trend else 0.0
    i = np.arange(1, n + 1)
    lam = np.exp(x + c * i) + kernel_sum(y, b, theta)
    loglik = np.sum(-lam + y * np.log(lam))
    S = dense_sigma(a, s2, n)
    xt = x - mu
    sign, logdet = np.linalg.slogdet(S)
    quad = xt @ np.linalg.solve(S, xt)
    prior = -0.5 * mu ** 2 / var_mu - 0.5 * s2 ** 2 / var_sigma2
    if trend:
        prior -= 0.5 * c ** 2 / var_c
    return loglik - 0.5 * logdet - 0.5 * quad + prior


def central_diff(f, v, h):
    return (f(v + h) - f(v - h)) / (2.0 * h)


def fd_gradient(f, v, h):
    v = np.asarray(v, dtype=np.float64)
    out = np.empty_like(v)
    for k in range(v.shape[0]):
        e = np.zeros_like(v)
        e[k] = h if np.ndim(h) == 0 else h[k]
        out[k] = (f(v + e) - f(v - e)) / (2.0 * e[k])
    return out


def rel_err(a, b):
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
