"""Hot O(N) kernels, in two flavours.

Every kernel exists as ``<name>_nb`` (numba, explicit loops) and
``<name>_np`` (vectorised numpy/scipy). The public name is bound to one of
them at import according to :mod:`hawkescox._accel`. Both flavours are kept
importable so tests and the benchmark can compare them directly.

Kernels take raw floats and float64 arrays and do no validation; callers are
responsible for the parameter domain.
"""
import math

import numpy as np
from scipy.signal import lfilter

from ._accel import USE_NUMBA, njit

# exp() arguments above this are treated as overflow
EXP_LIMIT = 700.0


# --------------------------------------------------------------------------
# Hawkes recursion: g_1 = 0, g_i = b g_{i-1} + theta (1-b) y_{i-1}
# --------------------------------------------------------------------------

@njit
def hawkes_recursion_nb(y, b, theta):
    n = y.shape[0]
    g = np.zeros(n)
    dg_db = np.zeros(n)
    dg_dth = np.zeros(n)
    for i in range(1, n):
        yp = y[i - 1]
        g[i] = b * g[i - 1] + theta * (1.0 - b) * yp
        dg_db[i] = g[i - 1] + b * dg_db[i - 1] - theta * yp
        dg_dth[i] = b * dg_dth[i - 1] + (1.0 - b) * yp
    return g, dg_db, dg_dth


def hawkes_recursion_np(y, b, theta):
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    den = [1.0, -b]
    y_lag = np.zeros(n)
    y_lag[1:] = y[:-1]
    dg_dth = lfilter([1.0], den, (1.0 - b) * y_lag)
    g = theta * dg_dth
    g_lag = np.zeros(n)
    g_lag[1:] = g[:-1]
    dg_db = lfilter([1.0], den, g_lag - theta * y_lag)
    return g, dg_db, dg_dth


# --------------------------------------------------------------------------
# AR(1) precision: tridiagonal apply and quadratic-form pieces
# --------------------------------------------------------------------------

@njit
def tridiag_apply_nb(xt, a, sigma2):
    n = xt.shape[0]
    w = np.empty(n)
    if n == 1:
        w[0] = xt[0] / sigma2
        return w
    pre = 1.0 / (sigma2 * (1.0 - a * a))
    diag = 1.0 + a * a
    w[0] = pre * (xt[0] - a * xt[1])
    for i in range(1, n - 1):
        w[i] = pre * (diag * xt[i] - a * (xt[i - 1] + xt[i + 1]))
    w[n - 1] = pre * (xt[n - 1] - a * xt[n - 2])
    return w


def tridiag_apply_np(xt, a, sigma2):
    xt = np.asarray(xt, dtype=np.float64)
    n = xt.shape[0]
    if n == 1:
        return xt / sigma2
    w = (1.0 + a * a) * xt
    w[0] = xt[0]
    w[-1] = xt[-1]
    w[:-1] -= a * xt[1:]
    w[1:] -= a * xt[:-1]
    return w / (sigma2 * (1.0 - a * a))


@njit
def quad_parts_nb(xt):
    """(sum of squares, sum of interior squares, lag-one cross sum)."""
    n = xt.shape[0]
    s_all = 0.0
    s_cross = 0.0
    for i in range(n):
        s_all += xt[i] * xt[i]
    for i in range(n - 1):
        s_cross += xt[i] * xt[i + 1]
    s_int = s_all - xt[0] * xt[0]
    if n > 1:
        s_int -= xt[n - 1] * xt[n - 1]
    return s_all, s_int, s_cross


def quad_parts_np(xt):
    xt = np.asarray(xt, dtype=np.float64)
    s_all = float(xt @ xt)
    s_cross = float(xt[:-1] @ xt[1:])
    s_int = s_all - xt[0] ** 2
    if xt.shape[0] > 1:
        s_int -= xt[-1] ** 2
    return s_all, s_int, s_cross


# --------------------------------------------------------------------------
# Fused log-posterior terms and gradient (hyperpriors excluded)
# --------------------------------------------------------------------------
# Returns (ok, loglik, gauss, gx, ga, gs2, gmu, gb, gth, gc) where
#   loglik = sum(-lam + y log lam), gauss = -0.5 log|S| - 0.5 x~' S^-1 x~,
# and the scalar gradients are of loglik + gauss. ok is False when an
# exponent exceeds EXP_LIMIT; the other outputs are then meaningless.


@njit
def posterior_terms_nb(x, y, a, sigma2, mu, b, theta, c):
    n = x.shape[0]
    gx = np.empty(n)
    ok = True
    for i in range(n):
        if x[i] + c * (i + 1) > EXP_LIMIT:
            ok = False
    if not ok:
        return False, 0.0, 0.0, gx, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0

    # Gaussian prior on the latent path
    xt = np.empty(n)
    for i in range(n):
        xt[i] = x[i] - mu
    w = tridiag_apply_nb(xt, a, sigma2)
    if n == 1:
        q = xt[0] * xt[0] / sigma2
        dq_da = 0.0
        logdet = math.log(sigma2)
        dlogdet_da = 0.0
    else:
        s_all, s_int, s_cross = quad_parts_nb(xt)
        one_m = 1.0 - a * a
        pre = 1.0 / (sigma2 * one_m)
        bracket = s_all + a * a * s_int - 2.0 * a * s_cross
        q = pre * bracket
        dq_da = pre * (2.0 * a / one_m) * bracket + pre * (2.0 * a * s_int - 2.0 * s_cross)
        logdet = n * math.log(sigma2) + (n - 1) * math.log(one_m)
        dlogdet_da = -2.0 * a * (n - 1) / one_m
    gauss = -0.5 * logdet - 0.5 * q
    ga = -0.5 * dlogdet_da - 0.5 * dq_da
    gs2 = -0.5 * n / sigma2 + 0.5 * q / sigma2
    gmu = 0.0
    for i in range(n):
        gmu += w[i]

    # Poisson likelihood with the Hawkes recursion fused in
    loglik = 0.0
    gb = 0.0
    gth = 0.0
    gc = 0.0
    g = 0.0
    dgb = 0.0
    dgt = 0.0
    for i in range(n):
        if i > 0:
            yp = y[i - 1]
            dgb = g + b * dgb - theta * yp
            g = b * g + theta * (1.0 - b) * yp
            dgt = b * dgt + (1.0 - b) * yp
        bg = math.exp(x[i] + c * (i + 1))
        lam = bg + g
        loglik -= lam
        if y[i] > 0.0:
            if lam <= 0.0:
                loglik = -np.inf
                r = 0.0
            else:
                loglik += y[i] * math.log(lam)
                r = y[i] / lam - 1.0
        else:
            r = -1.0
        gx[i] = r * bg - w[i]
        gb += r * dgb
        gth += r * dgt
        gc += r * bg * (i + 1)
    return True, loglik, gauss, gx, ga, gs2, gmu, gb, gth, gc


def posterior_terms_np(x, y, a, sigma2, mu, b, theta, c):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    idx = np.arange(1, n + 1, dtype=np.float64)
    arg = x + c * idx
    if arg.max() > EXP_LIMIT:
        return False, 0.0, 0.0, np.empty(n), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0

    xt = x - mu
    w = tridiag_apply_np(xt, a, sigma2)
    if n == 1:
        q = xt[0] ** 2 / sigma2
        dq_da = 0.0
        logdet = math.log(sigma2)
        dlogdet_da = 0.0
    else:
        s_all, s_int, s_cross = quad_parts_np(xt)
        one_m = 1.0 - a * a
        pre = 1.0 / (sigma2 * one_m)
        bracket = s_all + a * a * s_int - 2.0 * a * s_cross
        q = pre * bracket
        dq_da = pre * (2.0 * a / one_m) * bracket + pre * (2.0 * a * s_int - 2.0 * s_cross)
        logdet = n * math.log(sigma2) + (n - 1) * math.log(one_m)
        dlogdet_da = -2.0 * a * (n - 1) / one_m
    gauss = -0.5 * logdet - 0.5 * q
    ga = -0.5 * dlogdet_da - 0.5 * dq_da
    gs2 = -0.5 * n / sigma2 + 0.5 * q / sigma2
    gmu = float(w.sum())

    g, dg_db, dg_dth = hawkes_recursion_np(y, b, theta)
    bg = np.exp(arg)
    lam = bg + g
    pos = y > 0
    if np.any(lam[pos] <= 0.0):
        loglik = -np.inf
    else:
        loglik = float(-lam.sum() + (y[pos] * np.log(lam[pos])).sum())
    r = np.full(n, -1.0)
    safe = pos & (lam > 0.0)
    r[safe] = y[safe] / lam[safe] - 1.0
    r[pos & ~safe] = 0.0
    gx = r * bg - w
    gb = float(r @ dg_db)
    gth = float(r @ dg_dth)
    gc = float((r * bg) @ idx)
    return True, loglik, gauss, gx, ga, gs2, gmu, gb, gth, gc


if USE_NUMBA:
    hawkes_recursion = hawkes_recursion_nb
    tridiag_apply = tridiag_apply_nb
    quad_parts = quad_parts_nb
    posterior_terms = posterior_terms_nb
else:
    hawkes_recursion = hawkes_recursion_np
    tridiag_apply = tridiag_apply_np
    quad_parts = quad_parts_np
    posterior_terms = posterior_terms_np
