"""The numba and numpy kernel flavours must agree."""
import numpy as np
import pytest

from hawkescox import kernels
from hawkescox._accel import HAS_NUMBA

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("n", [1, 2, 3, 17, 400])
def test_hawkes_recursion_flavours_agree(rng, n):
    y = rng.poisson(4.0, size=n).astype(float)
    for b, theta in [(0.35, 0.5), (0.075, 0.9), (0.9, 0.0)]:
        for u, v in zip(kernels.hawkes_recursion_nb(y, b, theta),
                        kernels.hawkes_recursion_np(y, b, theta)):
            np.testing.assert_allclose(u, v, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 300])
def test_tridiag_and_quad_parts_agree(rng, n):
    xt = rng.normal(size=n)
    np.testing.assert_allclose(kernels.tridiag_apply_nb(xt, 0.7, 1.3),
                               kernels.tridiag_apply_np(xt, 0.7, 1.3), rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(kernels.quad_parts_nb(xt), kernels.quad_parts_np(xt), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 50])
@pytest.mark.parametrize("c", [0.0, 0.004])
def test_posterior_terms_agree(rng, n, c):
    x = rng.normal(1.0, 0.5, size=n)
    y = rng.poisson(3.0, size=n).astype(float)
    nb = kernels.posterior_terms_nb(x, y, 0.6, 0.8, 1.1, 0.3, 0.4, c)
    np_ = kernels.posterior_terms_np(x, y, 0.6, 0.8, 1.1, 0.3, 0.4, c)
    assert nb[0] and np_[0]
    for u, v in zip(nb[1:], np_[1:]):
        np.testing.assert_allclose(u, v, rtol=1e-10, atol=1e-10)


def test_overflow_flagged_by_both():
    x = np.array([0.0, 701.0])
    y = np.array([1.0, 1.0])
    assert not kernels.posterior_terms_nb(x, y, 0.5, 1.0, 0.0, 0.5, 0.5, 0.0)[0]
    assert not kernels.posterior_terms_np(x, y, 0.5, 1.0, 0.0, 0.5, 0.5, 0.0)[0]


def test_pure_numpy_backend_end_to_end(tmp_path):
    import os
    import subprocess
    import sys
    env = dict(os.environ, HAWKESCOX_PURE_NUMPY="1")
    probe = subprocess.run([sys.executable, "-c", "from hawkescox._accel import backend; print(backend())"],
                           env=env, capture_output=True, text=True, check=True)
    assert probe.stdout.strip() == "numpy"
    grad = subprocess.run([sys.executable, "-m", "hawkescox", "gradcheck", "--states", "3"],
                          env=env, capture_output=True, text=True)
    assert grad.returncode == 0, grad.stdout + grad.stderr
    sim = subprocess.run([sys.executable, "-m", "hawkescox", "simulate", "--n", "50", "--out", str(tmp_path)],
                         env=env, capture_output=True, text=True)
    assert sim.returncode == 0
    fit = subprocess.run([sys.executable, "-m", "hawkescox", "fit", "--counts", str(tmp_path / "counts.csv"),
                          "--iters", "200", "--burnin", "100", "--out", str(tmp_path / "fit")],
                         env=env, capture_output=True, text=True)
    assert fit.returncode == 0 and "backend=numpy" in fit.stdout
