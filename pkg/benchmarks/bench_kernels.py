"""Time the hot kernels and a full sampler sweep under both backends.

    python benchmarks/bench_kernels.py [--sizes 1000 4000 16000] [--sweeps 2000]

The backend is chosen at import time, so each backend runs in its own
subprocess with HAWKESCOX_PURE_NUMPY set accordingly.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit


def measure(sizes, sweeps):
    from hawkescox import kernels
    from hawkescox._accel import backend
    from hawkescox.mala import McmcConfig, run_chain
    from hawkescox.model import ModelParams
    from hawkescox.simulate import SimConfig, simulate

    params = ModelParams(a=0.65, sigma2=1.0, mu=2.0, b=0.35, theta=0.5)
    rows = []
    for n in sizes:
        sim = simulate(SimConfig(params, n, seed=1))
        x, y = sim.x, sim.y.as_float()
        calls = {
            "hawkes_recursion": lambda: kernels.hawkes_recursion(y, 0.35, 0.5),
            "tridiag_apply": lambda: kernels.tridiag_apply(x - 2.0, 0.65, 1.0),
            "posterior_terms": lambda: kernels.posterior_terms(x, y, 0.65, 1.0, 2.0, 0.35, 0.5, 0.0),
        }
        for name, fn in calls.items():
            fn()
            t = min(timeit.repeat(fn, number=200, repeat=5)) / 200
            rows.append({"backend": backend(), "n": n, "what": name, "seconds": t})
        cfg = McmcConfig(iters=sweeps, burnin=sweeps - 1, thin_x=sweeps, seed=1)
        run_chain(sim.y, McmcConfig(iters=10, burnin=9, seed=1))
        t = min(timeit.repeat(lambda: run_chain(sim.y, cfg), number=1, repeat=3)) / sweeps
        rows.append({"backend": backend(), "n": n, "what": "sweep", "seconds": t})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000, 16000])
    ap.add_argument("--sweeps", type=int, default=2000)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        json.dump(measure(args.sizes, args.sweeps), sys.stdout)
        return

    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, HAWKESCOX_PURE_NUMPY=flag)
        cmd = [sys.executable, __file__, "--child", "--sweeps", str(args.sweeps),
               "--sizes", *map(str, args.sizes)]
        rows += json.loads(subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout)

    table = {(r["what"], r["n"], r["backend"]): r["seconds"] for r in rows}
    whats = ["hawkes_recursion", "tridiag_apply", "posterior_terms", "sweep"]
    print(f"{'kernel':<18}{'N':>7}{'numba (us)':>13}{'numpy (us)':>13}{'speedup':>9}")
    for what in whats:
        for n in args.sizes:
            nb_t, np_t = table.get((what, n, "numba")), table[(what, n, "numpy")]
            nb_txt = f"{nb_t * 1e6:13.1f}" if nb_t is not None else f"{'n/a':>13}"
            speed = f"{np_t / nb_t:9.1f}" if nb_t else f"{'':>9}"
            print(f"{what:<18}{n:>7}{nb_txt}{np_t * 1e6:13.1f}{speed}")
    for backend in ("numba", "numpy"):
        sweeps = [table.get(("sweep", n, backend)) for n in args.sizes]
        if None not in sweeps and len(sweeps) > 1:
            steps = ", ".join(f"{b / a:.2f}" for a, b in zip(sweeps, sweeps[1:]))
            print(f"{backend} sweep-time ratio between successive sizes: {steps}")


if __name__ == "__main__":
    main()
