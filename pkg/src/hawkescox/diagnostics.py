"""Posterior summaries and model criticism."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate

from . import kernels
from .errors import DataError
from .model import CountSeries

KS_95 = 1.36


@dataclass
class Band:
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray


@dataclass
class FitSummary:
    param_mean: dict
    param_sd: dict
    hawkes_pct_mean: float
    hawkes_pct_sd: float
    timescale_cox: float
    timescale_hawkes: float
    timescale_cox_draws: float
    timescale_hawkes_draws: float
    accept_rates: dict
    lambda_band: Band
    background_band: Band
    hawkes_band: Band
    level: float = 0.95
    n_draws: int = 0
    dt: float = 1.0


def draw_decompositions(chain, y):
    """Arrays (M, N) of lambda, background and Hawkes part for each stored x draw."""
    yf = y.as_float()
    params = chain.x_param_draws()
    x = chain.x_draws
    idx = np.arange(1, y.n + 1, dtype=np.float64)
    c = params[:, 5] if chain.trend else np.zeros(params.shape[0])
    background = np.exp(x + c[:, None] * idx[None, :])
    hawkes = np.empty_like(background)
    for m, (b, theta) in enumerate(params[:, 3:5]):
        hawkes[m] = kernels.hawkes_recursion(yf, b, theta)[0]
    return background + hawkes, background, hawkes


def _band(draws, level):
    tail = 50.0 * (1.0 - level)
    lo, hi = np.percentile(draws, [tail, 100.0 - tail], axis=0)
    return Band(mean=draws.mean(axis=0), lo=lo, hi=hi)


def summarize(chain, y, level=0.95):
    """Posterior moments, % Hawkes attribution, timescales and intensity bands."""
    if not isinstance(y, CountSeries):
        y = CountSeries(np.asarray(y), dt=chain.dt)
    if chain.param_draws.shape[0] == 0 or chain.x_draws.shape[0] == 0:
        raise ValueError("chain holds no post-burn-in draws")
    if chain.x_draws.shape[1] != y.n:
        raise DataError("chain latent paths and count series have different lengths")

    names = chain.param_names
    draws = chain.param_draws[:, : len(names)]
    mean = dict(zip(names, draws.mean(axis=0).tolist()))
    sd = dict(zip(names, draws.std(axis=0).tolist()))

    lam, background, hawkes = draw_decompositions(chain, y)
    total = y.total
    if total > 0:
        pct = 100.0 * (hawkes / lam) @ y.as_float() / total
    else:
        pct = np.zeros(lam.shape[0])

    dt = chain.dt
    return FitSummary(
        param_mean=mean,
        param_sd=sd,
        hawkes_pct_mean=float(pct.mean()),
        hawkes_pct_sd=float(pct.std()),
        timescale_cox=dt / (1.0 - mean["a"]),
        timescale_hawkes=dt / (1.0 - mean["b"]),
        timescale_cox_draws=float(np.mean(dt / (1.0 - draws[:, 0]))),
        timescale_hawkes_draws=float(np.mean(dt / (1.0 - draws[:, 3]))),
        accept_rates=dict(chain.accept_rates),
        lambda_band=_band(lam, level),
        background_band=_band(background, level),
        hawkes_band=_band(hawkes, level),
        level=level,
        n_draws=int(lam.shape[0]),
        dt=dt,
    )


@dataclass
class ResidualReport:
    tau: np.ndarray
    curve: np.ndarray
    ks_band: float
    ks_stat: float
    within_band: bool
    total_time: float

    @property
    def n(self):
        return self.tau.shape[0]


def rescaled_times(lam, y, spread="even", rng=None):
    """Event times after the time change ``t -> integral of lambda``.

    Bin i spans ``[T_{i-1}, T_i]`` with ``T_i = lambda_1 + ... + lambda_i``.
    Its ``y_i`` events sit at ``T_{i-1} + k/(y_i+1) * lambda_i`` with
    ``spread="even"``, or at sorted uniform positions with ``spread="random"``.
    """
    lam = np.asarray(lam, dtype=np.float64)
    counts = y.counts if isinstance(y, CountSeries) else np.asarray(y, dtype=np.int64)
    if lam.shape != counts.shape:
        raise DataError("intensity and count series lengths differ")
    if not np.all(lam > 0):
        raise DataError("intensity must be strictly positive in every bin")
    edges = np.cumsum(lam)
    start = edges - lam
    bins = np.repeat(np.arange(counts.shape[0]), counts)
    if spread == "even":
        first = np.cumsum(counts) - counts
        k = np.arange(bins.shape[0]) - first[bins] + 1
        frac = k / (counts[bins] + 1.0)
    elif spread == "random":
        rng = np.random.default_rng() if rng is None else rng
        frac = rng.random(bins.shape[0])
        # sort within each bin
        frac = frac[np.lexsort((frac, bins))]
    else:
        raise ValueError(f"unknown spread rule {spread!r}")
    return start[bins] + frac * lam[bins], float(edges[-1])


def residuals(lam, y, spread="even", rng=None):
    """Time-rescaling residuals with a 95% Kolmogorov-Smirnov envelope.

    ``curve`` holds ``N(tau) - tau`` at each event. The band check uses the
    conditional form: given n events on ``[0, T]`` the rescaled times are
    uniform, so ``sup |N(tau) - n tau / T|`` is compared with ``1.36 sqrt(n)``.
    """
    tau, total = rescaled_times(lam, y, spread, rng)
    n = tau.shape[0]
    k = np.arange(1, n + 1)
    curve = k - tau
    band = KS_95 * math.sqrt(n)
    if n == 0:
        return ResidualReport(tau, curve, band, 0.0, True, total)
    expected = n * tau / total
    stat = float(max(np.max(np.abs(k - expected)), np.max(np.abs(k - 1 - expected))))
    return ResidualReport(tau=tau, curve=curve, ks_band=band, ks_stat=stat,
                          within_band=stat <= band, total_time=total)


@dataclass
class InterEventHist:
    edges: np.ndarray
    counts: np.ndarray
    baseline: np.ndarray

    @property
    def total_pairs(self):
        return int(self.counts.sum())


def pair_counts_by_lag(counts):
    """Number of event pairs separated by exactly k bins, k = 0..N-1."""
    c = np.asarray(counts, dtype=np.int64)
    n = c.shape[0]
    if n > 1:
        auto = correlate(c.astype(np.float64), c.astype(np.float64), mode="full")[n - 1:]
        pairs = np.rint(auto).astype(np.int64)
    else:
        pairs = np.zeros(1, dtype=np.int64)
    pairs[0] = int(np.sum(c * (c - 1)) // 2)
    return pairs


def interevent_hist(y, bin_width=None, dt=None):
    """Histogram of all pairwise gaps ``t_i - t_j`` (i > j).

    Events sit at bin centres, so gaps are multiples of ``dt`` and events in
    the same bin are 0 apart. ``baseline`` is the expected histogram if the
    same number of events were scattered uniformly over the bins: a wedge
    decreasing linearly in the gap.
    """
    if not isinstance(y, CountSeries):
        y = CountSeries(np.asarray(y), dt=1.0 if dt is None else dt)
    dt = y.dt if dt is None else dt
    bin_width = dt if bin_width is None else bin_width
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    n_events = y.total
    if n_events < 2:
        raise DataError(f"need at least 2 events for inter-event times, got {n_events}")

    n = y.n
    pairs = pair_counts_by_lag(y.counts)
    lag = np.arange(n)
    slot = np.floor(lag * dt / bin_width + 1e-9).astype(np.int64)
    n_slots = int(slot[-1]) + 1
    hist = np.bincount(slot, weights=pairs, minlength=n_slots).astype(np.int64)

    total_pairs = n_events * (n_events - 1) / 2.0
    prob = 2.0 * (n - lag) / float(n * n)
    prob[0] = 1.0 / n
    baseline = np.bincount(slot, weights=total_pairs * prob, minlength=n_slots)
    edges = np.arange(n_slots + 1) * bin_width
    return InterEventHist(edges=edges, counts=hist, baseline=baseline)
