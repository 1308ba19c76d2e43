"""Command-line interface: ``hawkescox {simulate,fit,diagnose,gradcheck}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure,
4 gradient check failure.
"""
import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import gradcheck, io
from ._accel import backend
from .diagnostics import draw_decompositions, interevent_hist, residuals, summarize
from .errors import DataError, NumericalError
from .mala import McmcConfig, run_chain
from .model import ModelParams
from .posterior import PriorSpec
from .simulate import SimConfig, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL, EXIT_GRADCHECK = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser():
    parser = _Parser(prog="hawkescox", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a discrete Hawkes-Cox count series")
    p.add_argument("--a", type=float, default=0.65, help="lag-one correlation of the latent AR(1), in (0,1)")
    p.add_argument("--sigma2", type=float, default=1.0, help="marginal variance of the latent path (log-intensity units^2), >= 0")
    p.add_argument("--mu", type=float, default=2.0, help="latent mean (log events per bin)")
    p.add_argument("--b", type=float, default=0.35, help="Hawkes decay factor per bin, in (0,1)")
    p.add_argument("--theta", type=float, default=0.5, help="branching ratio (offspring per event), in [0,1)")
    p.add_argument("--c", type=float, default=0.0, help="log-trend rate per bin (background multiplied by exp(c*i))")
    p.add_argument("--dt", type=float, default=1.0, help="bin width (time units, weeks by default)")
    p.add_argument("--n", type=_positive_int, default=500, help="number of bins")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("fit", help="run the blocked MALA sampler on a counts CSV")
    p.add_argument("--counts", required=True, type=Path, help="counts CSV (index,count)")
    p.add_argument("--dt", type=float, default=1.0, help="bin width (time units, weeks by default)")
    p.add_argument("--trend", action="store_true", help="include the exp(c*i) background trend factor")
    p.add_argument("--iters", type=_positive_int, default=500_000, help="total MCMC iterations (sweeps)")
    p.add_argument("--burnin", type=int, default=250_000, help="iterations discarded as burn-in")
    p.add_argument("--eps-x", type=float, default=0.1, help="Langevin step for the latent path (log-intensity units)")
    p.add_argument("--eps-cox", type=float, default=0.01, help="Langevin step for a, sigma2, mu")
    p.add_argument("--eps-hawkes", type=float, default=0.01, help="Langevin step for b, theta")
    p.add_argument("--eps-c", type=float, default=1e-4, help="Langevin step for the trend rate c (per bin)")
    p.add_argument("--thin-x", type=_positive_int, default=100, help="store every k-th latent path after burn-in (iterations)")
    p.add_argument("--prior-var-mu", type=float, default=5.0, help="prior variance of mu")
    p.add_argument("--prior-var-sigma2", type=float, default=5.0, help="prior variance of sigma2 (truncated to > 0)")
    p.add_argument("--prior-var-c", type=float, default=5.0, help="prior variance of c")
    p.add_argument("--level", type=float, default=0.95, help="credible band level, in (0,1)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (chain k uses seed + k)")
    p.add_argument("--chains", type=_positive_int, default=1, help="independent chains, run concurrently")
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("diagnose", help="residual analysis and inter-event statistics for a fit")
    p.add_argument("--counts", required=True, type=Path, help="counts CSV used for the fit")
    p.add_argument("--fit-dir", required=True, type=Path, help="directory written by 'fit' (one chain)")
    p.add_argument("--dt", type=float, default=None, help="bin width (time units); default taken from the fit")
    p.add_argument("--bin-width", type=float, default=None, help="histogram bin width for inter-event gaps (time units); default dt")
    p.add_argument("--spread", choices=("even", "random"), default="even", help="placement of events within a bin")
    p.add_argument("--per-draw", action="store_true", help="also score residuals under every stored posterior draw")
    p.add_argument("--level", type=float, default=0.95, help="credible band level, in (0,1)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for --spread random")
    p.add_argument("--out", type=Path, default=None, help="output directory (default: the fit directory)")

    p = sub.add_parser("gradcheck", help="compare analytic gradients with finite differences")
    p.add_argument("--n", type=_positive_int, default=50, help="number of bins per random instance")
    p.add_argument("--states", type=_positive_int, default=20, help="number of random states")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--no-trend", action="store_true", help="leave the trend rate c out of the check")
    p.add_argument("--tol", type=float, default=1e-4, help="failure threshold on relative error")
    return parser


# -- subcommands ----------------------------------------------------------

def _model_params(args):
    try:
        return ModelParams(a=args.a, sigma2=args.sigma2, mu=args.mu, b=args.b,
                           theta=args.theta, c=args.c, dt=args.dt)
    except ValueError as exc:
        raise UsageError(f"invalid parameters: {exc}") from None


def cmd_simulate(args):
    params = _model_params(args)
    sim = simulate(SimConfig(params, args.n, seed=args.seed))
    io.write_simulation(sim, args.out, params=params, seed=args.seed)
    print(json.dumps({"params": params.__dict__, "n": args.n, "seed": args.seed,
                      "total_events": sim.y.total}, sort_keys=True))
    return EXIT_OK


def _fit_config(args, seed):
    try:
        prior = PriorSpec(args.prior_var_mu, args.prior_var_sigma2, args.prior_var_c)
        return McmcConfig(iters=args.iters, burnin=args.burnin, eps_x=args.eps_x,
                          eps_cox=args.eps_cox, eps_hawkes=args.eps_hawkes, eps_c=args.eps_c,
                          thin_x=args.thin_x, seed=seed, trend_enabled=args.trend, prior=prior)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def fit_one(y, config, out, level=0.95):
    """Run one chain and write chain files, summary.json and bands.csv into ``out``."""
    t0 = time.perf_counter()
    chain = run_chain(y, config)
    wall = time.perf_counter() - t0
    summary = summarize(chain, y, level=level)
    out = Path(out)
    echo = config.echo()
    io.write_chain(chain, out, config=echo)
    io.write_summary(summary, out / "summary.json", config=echo, seed=config.seed)
    io.write_bands(summary, y, out / "bands.csv")
    return chain.accept_rates, wall, summary


def _fit_worker(job):
    y, config, out, level = job
    rates, wall, summary = fit_one(y, config, out, level)
    return rates, wall, summary.hawkes_pct_mean


def cmd_fit(args):
    if not 0 < args.level < 1:
        raise UsageError("--level must lie in (0, 1)")
    y = io.read_counts(args.counts, dt=args.dt)
    if args.chains == 1:
        jobs = [(y, _fit_config(args, args.seed), args.out, args.level)]
    else:
        jobs = [(y, _fit_config(args, args.seed + k), args.out / f"chain_{k}", args.level)
                for k in range(args.chains)]
    if len(jobs) == 1:
        results = [_fit_worker(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(_fit_worker, jobs))
    for (_, config, out, _), (rates, wall, pct) in zip(jobs, results):
        rate_txt = "  ".join(f"{k}={v:.3f}" for k, v in rates.items())
        print(f"{out}: seed={config.seed}  accept[{rate_txt}]  hawkes%={pct:.1f}  "
              f"wall={wall:.1f}s  backend={backend()}")
    return EXIT_OK


def cmd_diagnose(args):
    if not 0 < args.level < 1:
        raise UsageError("--level must lie in (0, 1)")
    chain = io.read_chain(args.fit_dir)
    dt = chain.dt if args.dt is None else args.dt
    y = io.read_counts(args.counts, dt=dt)
    out = args.fit_dir if args.out is None else args.out
    out.mkdir(parents=True, exist_ok=True)

    summary = summarize(chain, y, level=args.level)
    meta_path = Path(args.fit_dir) / "meta.json"
    config = json.loads(meta_path.read_text()).get("config")
    io.write_summary(summary, out / "summary.json", config=config, seed=chain.seed)

    rng = np.random.default_rng(args.seed)
    report = residuals(summary.lambda_band.mean, y, spread=args.spread, rng=rng)
    io.write_residuals(report, out / "residuals.csv")
    hist = interevent_hist(y, bin_width=args.bin_width, dt=dt)
    io.write_interevent(hist, out / "interevent.csv")

    if args.per_draw:
        lam_draws, _, _ = draw_decompositions(chain, y)
        rows = []
        for m, lam in enumerate(lam_draws):
            r = residuals(lam, y, spread=args.spread, rng=rng)
            rows.append((int(chain.x_iters[m]), r.ks_stat, r.ks_band, r.within_band))
        io.write_residual_draws(rows, out / "residual_draws.csv")

    print(f"events={report.n}  ks_stat={report.ks_stat:.3f}  band={report.ks_band:.3f}  "
          f"within_band={report.within_band}  hawkes%={summary.hawkes_pct_mean:.1f} "
          f"({summary.hawkes_pct_sd:.1f})")
    return EXIT_OK


def cmd_gradcheck(args):
    trend = not args.no_trend
    worst = gradcheck.run(n=args.n, states=args.states, seed=args.seed, trend=trend)
    failed = False
    for name, err in worst.items():
        ok = err <= args.tol
        failed |= not ok
        print(f"{name:>7s}  max_rel_err={err:.3e}  {'ok' if ok else 'FAIL'}")
    return EXIT_GRADCHECK if failed else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "diagnose": cmd_diagnose,
    "gradcheck": cmd_gradcheck,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hawkescox {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"hawkescox {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"hawkescox {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
