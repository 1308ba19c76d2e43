"""File formats.

Counts        CSV ``index,count`` (1-based contiguous index) or a single ``count`` column.
Events        CSV with a ``time`` column (numeric, in dt units) or ``date`` (ISO-8601).
Chain dir     ``chain.csv``   iter,a,sigma2,mu,b,theta[,c],logpost   (post burn-in)
              ``x_draws.csv`` iter,x1..xN                            (thinned)
              ``trace.csv``   iter,logpost                           (every iteration)
              ``meta.json``   acceptance rates, trend flag, dt, seed, config
Summary       one JSON document (see ``SUMMARY_SCHEMA``)
Bands         CSV ``i,y,lambda_mean,lambda_lo,lambda_hi,background_mean,hawkes_mean``

Floats are written with ``repr`` (shortest round-trip form), so every
writer is byte-for-byte deterministic and every reader is lossless.
"""
import csv
import json
import math
from importlib import resources
from datetime import date, datetime, timezone
from pathlib import Path

import numpy as np

from .diagnostics import Band, FitSummary
from .errors import DataError
from .mala import ChainSamples
from .model import PARAM_NAMES, CountSeries

SECONDS_PER_WEEK = 7 * 24 * 3600.0


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_rows(path, header, rows):
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _read_table(path):
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [(lineno, r) for lineno, r in enumerate(rows, start=1) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip().lower() for h in rows[0][1]]
    return path, header, rows[1:]


def bundled_path(name="weekly_counts.csv"):
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("hawkescox") / "data" / name))


# -- counts ---------------------------------------------------------------

def _parse_count(text, path, lineno):
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"{path}:{lineno}: count {text!r} is not a number") from None
    if not math.isfinite(value) or value != int(value):
        raise DataError(f"{path}:{lineno}: count {text!r} is not an integer")
    if value < 0:
        raise DataError(f"{path}:{lineno}: count {text!r} is negative")
    return int(value)


def read_counts(path, dt=1.0):
    path, header, rows = _read_table(path)
    if header == ["index", "count"]:
        counts = []
        for expected, (lineno, row) in enumerate(rows, start=1):
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                index = int(row[0].strip())
            except ValueError:
                raise DataError(f"{path}:{lineno}: index {row[0]!r} is not an integer") from None
            if index != expected:
                raise DataError(f"{path}:{lineno}: index {expected} missing (found {index})")
            counts.append(_parse_count(row[1], path, lineno))
    elif header == ["count"]:
        counts = []
        for lineno, row in rows:
            if len(row) != 1:
                raise DataError(f"{path}:{lineno}: expected 1 field, got {len(row)}")
            counts.append(_parse_count(row[0], path, lineno))
    else:
        raise DataError(f"{path}: header must be 'index,count' or 'count', got {','.join(header)!r}")
    if not counts:
        raise DataError(f"{path}: no data rows")
    return CountSeries(np.array(counts, dtype=np.int64), dt=dt)


def write_counts(y, path):
    _write_rows(path, ["index", "count"], ((i, int(c)) for i, c in enumerate(y.counts, start=1)))


# -- raw events -----------------------------------------------------------

def _to_datetime(text):
    value = datetime.fromisoformat(text.strip())
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value


def dates_to_weeks(dates, origin):
    """ISO-8601 strings (or datetimes) to fractional weeks after ``origin``."""
    origin = _to_datetime(origin) if isinstance(origin, str) else origin
    if isinstance(origin, date) and not isinstance(origin, datetime):
        origin = datetime(origin.year, origin.month, origin.day, tzinfo=timezone.utc)
    out = []
    for d in dates:
        d = _to_datetime(d) if isinstance(d, str) else d
        out.append((d - origin).total_seconds() / SECONDS_PER_WEEK)
    return np.array(out, dtype=np.float64)


def read_events(path, origin=None):
    """Event times from a ``time`` or ``date`` column, sorted ascending.

    Dates need ``origin`` (ISO-8601) and are returned in weeks after it.
    """
    path, header, rows = _read_table(path)
    if "time" in header:
        col = header.index("time")
        times = []
        for lineno, row in rows:
            try:
                times.append(float(row[col]))
            except (ValueError, IndexError):
                raise DataError(f"{path}:{lineno}: bad event time") from None
        times = np.array(times)
    elif "date" in header:
        if origin is None:
            raise DataError(f"{path}: date column requires an origin")
        col = header.index("date")
        try:
            times = dates_to_weeks([row[col] for _, row in rows], origin)
        except (ValueError, IndexError) as exc:
            raise DataError(f"{path}: bad date ({exc})") from None
    else:
        raise DataError(f"{path}: need a 'time' or 'date' column")
    if not np.all(np.isfinite(times)):
        raise DataError(f"{path}: non-finite event time")
    return np.sort(times)


def bin_events(times, dt=1.0, origin=0.0):
    """Count events in half-open bins ``[origin + (i-1) dt, origin + i dt)``."""
    times = np.sort(np.asarray(times, dtype=np.float64))
    if dt <= 0:
        raise ValueError("dt must be positive")
    if times.shape[0] == 0:
        raise DataError("no events to bin")
    if times[0] < origin:
        raise DataError(f"event at {times[0]} precedes origin {origin}")
    slot = np.floor((times - origin) / dt).astype(np.int64)
    return CountSeries(np.bincount(slot, minlength=int(slot[-1]) + 1), dt=dt)


# -- chains ---------------------------------------------------------------

def write_chain(chain, directory, config=None):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = list(chain.param_names)
    k = len(names)
    trace = chain.log_post_trace
    _write_rows(d / "chain.csv", ["iter", *names, "logpost"],
                ([it, *row[:k], trace[it]] for it, row in zip(chain.draw_iters, chain.param_draws)))
    n = chain.x_draws.shape[1]
    _write_rows(d / "x_draws.csv", ["iter", *(f"x{i}" for i in range(1, n + 1))],
                ([it, *row] for it, row in zip(chain.x_iters, chain.x_draws)))
    _write_rows(d / "trace.csv", ["iter", "logpost"], enumerate(trace))
    meta = {
        "accept_rates": chain.accept_rates,
        "trend": chain.trend,
        "dt": chain.dt,
        "seed": chain.seed,
        "iters": int(trace.shape[0]),
        "config": config,
    }
    _write_json(d / "meta.json", meta)


def _read_matrix(path):
    path, header, rows = _read_table(path)
    try:
        data = np.array([[float(v) for v in row] for _, row in rows], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    return header, data.reshape(len(rows), len(header))


def read_chain(directory):
    d = Path(directory)
    try:
        meta = json.loads((d / "meta.json").read_text())
    except OSError as exc:
        raise DataError(f"cannot read {d / 'meta.json'}: {exc.strerror}") from exc
    trend = bool(meta["trend"])
    header, chain_tab = _read_matrix(d / "chain.csv")
    _, xs = _read_matrix(d / "x_draws.csv")
    _, tr = _read_matrix(d / "trace.csv")
    params = np.zeros((chain_tab.shape[0], 6))
    k = 6 if trend else 5
    params[:, :k] = chain_tab[:, 1:1 + k]
    return ChainSamples(
        draw_iters=chain_tab[:, 0].astype(np.int64),
        param_draws=params,
        x_iters=xs[:, 0].astype(np.int64),
        x_draws=xs[:, 1:],
        accept_rates=meta["accept_rates"],
        log_post_trace=tr[:, 1],
        trend=trend,
        dt=float(meta["dt"]),
        seed=meta["seed"],
    )


# -- summaries and plot data ----------------------------------------------

def _write_json(path, obj):
    path = Path(path)
    try:
        path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _band_dict(band):
    return {"mean": band.mean.tolist(), "lo": band.lo.tolist(), "hi": band.hi.tolist()}


def summary_to_dict(summary, config=None, seed=None):
    return {
        "param_mean": summary.param_mean,
        "param_sd": summary.param_sd,
        "hawkes_pct_mean": summary.hawkes_pct_mean,
        "hawkes_pct_sd": summary.hawkes_pct_sd,
        "timescale_cox": summary.timescale_cox,
        "timescale_hawkes": summary.timescale_hawkes,
        "timescale_cox_draws": summary.timescale_cox_draws,
        "timescale_hawkes_draws": summary.timescale_hawkes_draws,
        "accept_rates": summary.accept_rates,
        "level": summary.level,
        "n_draws": summary.n_draws,
        "dt": summary.dt,
        "lambda_band": _band_dict(summary.lambda_band),
        "background_band": _band_dict(summary.background_band),
        "hawkes_band": _band_dict(summary.hawkes_band),
        "config": config,
        "seed": seed,
    }


def write_summary(summary, path, config=None, seed=None):
    _write_json(path, summary_to_dict(summary, config, seed))


def read_summary(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc

    def band(key):
        b = doc[key]
        return Band(np.array(b["mean"]), np.array(b["lo"]), np.array(b["hi"]))

    return FitSummary(
        param_mean=doc["param_mean"], param_sd=doc["param_sd"],
        hawkes_pct_mean=doc["hawkes_pct_mean"], hawkes_pct_sd=doc["hawkes_pct_sd"],
        timescale_cox=doc["timescale_cox"], timescale_hawkes=doc["timescale_hawkes"],
        timescale_cox_draws=doc["timescale_cox_draws"],
        timescale_hawkes_draws=doc["timescale_hawkes_draws"],
        accept_rates=doc["accept_rates"],
        lambda_band=band("lambda_band"), background_band=band("background_band"),
        hawkes_band=band("hawkes_band"),
        level=doc["level"], n_draws=doc["n_draws"], dt=doc["dt"],
    )


_BAND_SCHEMA = {
    "type": "object",
    "required": ["mean", "lo", "hi"],
    "properties": {k: {"type": "array", "items": {"type": "number"}} for k in ("mean", "lo", "hi")},
}
_NUM_MAP = {"type": "object", "additionalProperties": {"type": "number"}}

SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "param_mean", "param_sd", "hawkes_pct_mean", "hawkes_pct_sd",
        "timescale_cox", "timescale_hawkes", "timescale_cox_draws", "timescale_hawkes_draws",
        "accept_rates", "level", "n_draws", "dt",
        "lambda_band", "background_band", "hawkes_band", "config", "seed",
    ],
    "properties": {
        "param_mean": _NUM_MAP,
        "param_sd": _NUM_MAP,
        "hawkes_pct_mean": {"type": "number", "minimum": 0, "maximum": 100},
        "hawkes_pct_sd": {"type": "number", "minimum": 0},
        "timescale_cox": {"type": "number"},
        "timescale_hawkes": {"type": "number"},
        "timescale_cox_draws": {"type": "number"},
        "timescale_hawkes_draws": {"type": "number"},
        "accept_rates": _NUM_MAP,
        "level": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "n_draws": {"type": "integer", "minimum": 1},
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "lambda_band": _BAND_SCHEMA,
        "background_band": _BAND_SCHEMA,
        "hawkes_band": _BAND_SCHEMA,
        "config": {"type": ["object", "null"]},
        "seed": {"type": ["integer", "null"]},
    },
}


def write_bands(summary, y, path):
    lb, bb, hb = summary.lambda_band, summary.background_band, summary.hawkes_band
    header = ["i", "y", "lambda_mean", "lambda_lo", "lambda_hi", "background_mean", "hawkes_mean"]
    rows = ((i + 1, int(y.counts[i]), lb.mean[i], lb.lo[i], lb.hi[i], bb.mean[i], hb.mean[i])
            for i in range(y.n))
    _write_rows(path, header, rows)


def write_residuals(report, path):
    _write_rows(path, ["k", "tau", "n_minus_tau"],
                ((k, t, c) for k, (t, c) in enumerate(zip(report.tau, report.curve), start=1)))


def write_residual_draws(rows, path):
    """Rows of ``(iter, ks_stat, ks_band, within_band)``, one per posterior draw."""
    _write_rows(path, ["iter", "ks_stat", "ks_band", "within_band"], rows)


def write_interevent(hist, path):
    rows = ((lo, hi, int(c), b) for lo, hi, c, b in
            zip(hist.edges[:-1], hist.edges[1:], hist.counts, hist.baseline))
    _write_rows(path, ["gap_lo", "gap_hi", "pairs", "uniform_baseline"], rows)


def write_simulation(sim, directory, params=None, seed=None):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_counts(sim.y, d / "counts.csv")
    _write_rows(d / "latent.csv", ["i", "x"], enumerate(sim.x.tolist(), start=1))
    dec = sim.decomp
    _write_rows(d / "decomposition.csv", ["i", "lambda", "background", "hawkes"],
                ((i + 1, dec.lam[i], dec.background[i], dec.hawkes[i]) for i in range(sim.y.n)))
    if params is not None:
        echo = {name: getattr(params, name) for name in (*PARAM_NAMES, "dt")}
        _write_json(d / "config.json", {"params": echo, "n": sim.y.n, "seed": seed})
