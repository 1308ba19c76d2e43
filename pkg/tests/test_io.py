import json

import jsonschema
import numpy as np
import pytest

from hawkescox import io
from hawkescox.diagnostics import interevent_hist, residuals, summarize
from hawkescox.errors import DataError
from hawkescox.mala import McmcConfig, run_chain
from hawkescox.model import CountSeries, ModelParams
from hawkescox.simulate import SimConfig, simulate

TRUTH = ModelParams(a=0.65, sigma2=1.0, mu=2.0, b=0.35, theta=0.5)


@pytest.fixture(scope="module")
def fitted():
    sim = simulate(SimConfig(TRUTH.replace(c=0.001), 40, seed=2))
    cfg = McmcConfig(iters=400, burnin=100, thin_x=30, seed=2, trend_enabled=True)
    ch = run_chain(sim.y, cfg)
    return sim, cfg, ch, summarize(ch, sim.y)


def test_read_counts_with_index(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("index,count\n1,3\n2,0\n3,5\n")
    assert io.read_counts(f).counts.tolist() == [3, 0, 5]


def test_read_counts_single_column_and_dt(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("count\n4\n2\n")
    y = io.read_counts(f, dt=0.5)
    assert y.counts.tolist() == [4, 2] and y.dt == 0.5


@pytest.mark.parametrize("body,needle", [
    ("index,count\n1,3\n3,5\n", "index 2 missing"),
    ("index,count\n1,3\n2,-1\n", "negative"),
    ("index,count\n1,3\n2,1.5\n", "not an integer"),
    ("index,count\n1,3\n2,abc\n", "not a number"),
    ("index,count\n1,3\n2\n", ":3:"),
    ("when,count\n1,3\n", "header"),
    ("index,count\n", "no data"),
])
def test_read_counts_errors(tmp_path, body, needle):
    f = tmp_path / "c.csv"
    f.write_text(body)
    with pytest.raises(DataError, match=needle):
        io.read_counts(f)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        io.read_counts(tmp_path / "nope.csv")


def test_counts_round_trip(tmp_path, rng):
    y = CountSeries(rng.poisson(6, size=77))
    io.write_counts(y, tmp_path / "c.csv")
    assert np.array_equal(io.read_counts(tmp_path / "c.csv").counts, y.counts)


def test_bin_events_examples():
    assert io.bin_events([0.5, 1.2, 1.9]).counts.tolist() == [1, 2]
    assert io.bin_events([0.5, 1.0]).counts.tolist() == [1, 1]
    assert io.bin_events([0.5, 3.5]).counts.tolist() == [1, 0, 0, 1]
    assert io.bin_events([10.2, 10.7, 13.0], dt=2.0, origin=10.0).counts.tolist() == [2, 1]
    with pytest.raises(DataError):
        io.bin_events([-0.1, 2.0])


def test_bin_events_exact_right_edge():
    # an event exactly on a bin boundary opens a new bin
    assert io.bin_events([0.2, 2.0]).counts.tolist() == [1, 0, 1]


def test_events_from_dates(tmp_path):
    f = tmp_path / "e.csv"
    f.write_text("date\n2020-01-08\n2020-01-01T12:00:00\n2020-01-20\n")
    t = io.read_events(f, origin="2020-01-01")
    np.testing.assert_allclose(t, [0.5 / 7, 1.0, 19 / 7])
    assert io.bin_events(t).counts.tolist() == [1, 1, 1]
    with pytest.raises(DataError):
        io.read_events(f)


def test_events_from_times(tmp_path):
    f = tmp_path / "e.csv"
    f.write_text("time\n2.5\n0.1\n")
    assert io.read_events(f).tolist() == [0.1, 2.5]
    f.write_text("time\nnan\n")
    with pytest.raises(DataError):
        io.read_events(f)


def test_chain_round_trip_is_exact(tmp_path, fitted):
    _, cfg, ch, _ = fitted
    io.write_chain(ch, tmp_path, cfg.echo())
    back = io.read_chain(tmp_path)
    assert np.array_equal(back.param_draws, ch.param_draws)
    assert np.array_equal(back.x_draws, ch.x_draws)
    assert np.array_equal(back.log_post_trace, ch.log_post_trace)
    assert np.array_equal(back.draw_iters, ch.draw_iters)
    assert np.array_equal(back.x_iters, ch.x_iters)
    assert back.accept_rates == ch.accept_rates and back.trend and back.seed == 2
    header = (tmp_path / "chain.csv").read_text().splitlines()[0]
    assert header == "iter,a,sigma2,mu,b,theta,c,logpost"


def test_chain_header_without_trend(tmp_path):
    y = simulate(SimConfig(TRUTH, 20, seed=1)).y
    ch = run_chain(y, McmcConfig(iters=50, burnin=10, seed=1))
    io.write_chain(ch, tmp_path)
    assert (tmp_path / "chain.csv").read_text().splitlines()[0] == "iter,a,sigma2,mu,b,theta,logpost"
    assert np.array_equal(io.read_chain(tmp_path).param_draws, ch.param_draws)


def test_summary_validates_and_round_trips(tmp_path, fitted):
    _, cfg, ch, s = fitted
    path = tmp_path / "summary.json"
    io.write_summary(s, path, cfg.echo(), seed=2)
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, io.SUMMARY_SCHEMA)
    back = io.read_summary(path)
    assert back.param_mean == s.param_mean and back.hawkes_pct_sd == s.hawkes_pct_sd
    assert np.array_equal(back.lambda_band.hi, s.lambda_band.hi)
    assert doc["config"]["eps_x"] == 0.1 and doc["seed"] == 2


def test_bands_rows(tmp_path, fitted):
    sim, _, _, s = fitted
    io.write_bands(s, sim.y, tmp_path / "bands.csv")
    lines = (tmp_path / "bands.csv").read_text().splitlines()
    assert lines[0] == "i,y,lambda_mean,lambda_lo,lambda_hi,background_mean,hawkes_mean"
    assert len(lines) - 1 == sim.y.n


def test_writers_are_byte_deterministic(tmp_path, fitted):
    sim, cfg, ch, s = fitted
    for d in ("a", "b"):
        out = tmp_path / d
        io.write_chain(ch, out, cfg.echo())
        io.write_summary(s, out / "summary.json", cfg.echo(), 2)
        io.write_bands(s, sim.y, out / "bands.csv")
        io.write_residuals(residuals(sim.decomp.lam, sim.y), out / "residuals.csv")
        io.write_interevent(interevent_hist(sim.y), out / "interevent.csv")
        io.write_simulation(sim, out / "sim", TRUTH, 2)
    names = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    assert len(names) == 12
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_floats_keep_seventeen_digits(tmp_path):
    y = CountSeries(np.array([1, 2]))
    from hawkescox.diagnostics import Band, FitSummary
    v = np.array([0.1 + 0.2, 1 / 3])
    band = Band(v, v, v)
    s = FitSummary({"a": 0.1 + 0.2}, {"a": 0.0}, 1 / 7, 0.0, 1.0, 1.0, 1.0, 1.0, {}, band, band, band,
                   n_draws=1)
    io.write_bands(s, y, tmp_path / "b.csv")
    row = (tmp_path / "b.csv").read_text().splitlines()[1].split(",")
    assert float(row[2]) == 0.1 + 0.2
    assert row[2] == repr(0.1 + 0.2)
