"""Discrete Hawkes-Cox intensity.

    lambda_i = exp(x_i + c*i) + g_i,
    g_1 = 0,  g_i = b*g_{i-1} + theta*(1-b)*y_{i-1}

Bins are indexed from 1 in the trend factor. ``g`` is the self-exciting
(Hawkes) part and ``exp(x_i + c*i)`` the history-independent background.
"""
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DataError, NumericalError


@dataclass(frozen=True)
class ModelParams:
    a: float
    sigma2: float
    mu: float
    b: float
    theta: float
    c: float = 0.0
    dt: float = 1.0

    def __post_init__(self):
        for name in ("a", "sigma2", "mu", "b", "theta", "c", "dt"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"a must lie in (0, 1), got {self.a}")
        if self.sigma2 < 0.0:
            raise ValueError(f"sigma2 must be >= 0, got {self.sigma2}")
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"b must lie in (0, 1), got {self.b}")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    def replace(self, **changes):
        return replace(self, **changes)

    def as_array(self):
        """``[a, sigma2, mu, b, theta, c]`` as float64."""
        return np.array([self.a, self.sigma2, self.mu, self.b, self.theta, self.c])

    @classmethod
    def from_array(cls, values, dt=1.0):
        a, sigma2, mu, b, theta, c = (float(v) for v in values)
        return cls(a=a, sigma2=sigma2, mu=mu, b=b, theta=theta, c=c, dt=dt)


PARAM_NAMES = ("a", "sigma2", "mu", "b", "theta", "c")


@dataclass(frozen=True)
class CountSeries:
    counts: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1 or counts.shape[0] < 1:
            raise DataError("count series must be a non-empty 1-D array")
        if counts.dtype.kind == "f":
            if not np.all(np.isfinite(counts)) or np.any(counts != np.round(counts)):
                raise DataError("counts must be integers")
        elif counts.dtype.kind not in "iub":
            raise DataError(f"counts must be integers, got dtype {counts.dtype}")
        counts = counts.astype(np.int64)
        if np.any(counts < 0):
            raise DataError("counts must be non-negative")
        if not self.dt > 0:
            raise DataError(f"dt must be positive, got {self.dt}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    def __len__(self):
        return self.counts.shape[0]

    @property
    def n(self):
        return self.counts.shape[0]

    @property
    def total(self):
        return int(self.counts.sum())

    def as_float(self):
        return self.counts.astype(np.float64)


@dataclass(frozen=True)
class IntensityDecomposition:
    lam: np.ndarray
    background: np.ndarray
    hawkes: np.ndarray


def _as_counts(y):
    return y if isinstance(y, CountSeries) else CountSeries(np.asarray(y))


def _check_path(x, n):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != n:
        raise DataError(f"latent path length {x.shape} does not match {n} count bins")
    if not np.all(np.isfinite(x)):
        raise DataError("latent path contains non-finite values")
    return x


def log_background(params, x, trend=True):
    x = np.asarray(x, dtype=np.float64)
    if not trend or params.c == 0.0:
        return x.copy()
    return x + params.c * np.arange(1, x.shape[0] + 1)


def intensity(params, x, y, trend=True):
    """Evaluate lambda and its background / Hawkes split for every bin.

    ``trend=False`` skips the ``exp(c*i)`` factor regardless of ``params.c``.
    Raises :class:`NumericalError` if a background exponent exceeds 700.
    """
    y = _as_counts(y)
    x = _check_path(x, y.n)
    arg = log_background(params, x, trend)
    if arg.max() > kernels.EXP_LIMIT:
        i = int(arg.argmax()) + 1
        raise NumericalError(f"background exp overflow at bin {i} (exponent {arg.max():.1f})")
    background = np.exp(arg)
    g, _, _ = kernels.hawkes_recursion(y.as_float(), params.b, params.theta)
    return IntensityDecomposition(lam=background + g, background=background, hawkes=g)


def intensity_param_grads(params, x, y):
    """Derivatives of lambda with respect to ``b`` and ``theta``.

    Only the Hawkes part depends on them, so ``x`` is used for validation only.
    """
    y = _as_counts(y)
    _check_path(x, y.n)
    _, dg_db, dg_dth = kernels.hawkes_recursion(y.as_float(), params.b, params.theta)
    return dg_db, dg_dth


class ContinuousParams(NamedTuple):
    omega1: float
    alpha1: float
    omega2: float
    alpha2: float
    mu: float

    @property
    def timescale_cox(self):
        return math.inf if self.omega1 == 0 else 1.0 / self.omega1

    @property
    def timescale_hawkes(self):
        return math.inf if self.omega2 == 0 else 1.0 / self.omega2


def to_continuous(params):
    """Map discrete parameters back to the Euler-discretised SDE rates.

    Inverts ``a = 1 - omega1 dt``, ``sigma2 = alpha1^2 dt / (1 - a^2)``,
    ``b = 1 - omega2 dt`` and ``theta (1 - b) = alpha2 omega2``.
    Timescales are in the units of ``dt``.
    """
    dt = params.dt
    omega1 = (1.0 - params.a) / dt
    omega2 = (1.0 - params.b) / dt
    alpha1 = math.sqrt(params.sigma2 * (1.0 - params.a ** 2) / dt)
    alpha2 = params.theta * dt
    return ContinuousParams(omega1, alpha1, omega2, alpha2, params.mu)


def from_continuous(cont, dt=1.0, c=0.0):
    a = 1.0 - cont.omega1 * dt
    b = 1.0 - cont.omega2 * dt
    sigma2 = cont.alpha1 ** 2 * dt / (1.0 - a * a)
    theta = cont.alpha2 * cont.omega2 / (1.0 - b)
    return ModelParams(a=a, sigma2=sigma2, mu=cont.mu, b=b, theta=theta, c=c, dt=dt)


def hawkes_fraction(decomp, y):
    """Share of observed events attributed to the self-exciting component.

    Each event in bin i is split in proportion ``hawkes_i / lambda_i``.
    """
    y = _as_counts(y)
    if decomp.lam.shape[0] != y.n:
        raise DataError("decomposition and count series lengths differ")
    total = y.total
    if total == 0:
        return 0.0
    share = np.divide(decomp.hawkes, decomp.lam, out=np.zeros(y.n), where=decomp.lam > 0)
    frac = float(y.as_float() @ share) / total
    return min(max(frac, 0.0), 1.0)
