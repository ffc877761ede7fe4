import os
import subprocess
import sys

import numpy as np
import pytest

from rmdom import _kernels

numba_only = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _inputs(order=40, n=25, seed=0):
    rng = np.random.default_rng(seed)
    x = np.sort(rng.uniform(-1.0, 1.0, n))
    beta = np.r_[1.0, rng.uniform(0.0, 3.0, order)]
    w = rng.uniform(0.0, 0.1, n)
    return x, beta, w


def test_legendre_recurrence_low_orders():
    x = np.array([-1.0, -0.3, 0.0, 0.5, 1.0])
    p = _kernels.legendre_table_numpy(3, x)
    assert np.allclose(p[2], 1.5 * x**2 - 0.5, rtol=0, atol=1e-15)
    assert np.allclose(p[3], 2.5 * x**3 - 1.5 * x, rtol=0, atol=1e-15)


def test_legendre_matches_numpy_polynomial():
    x = np.linspace(-1.0, 1.0, 101)
    p = _kernels.legendre_table_numpy(300, x)
    for l in (7, 120, 300):
        coef = np.zeros(l + 1)
        coef[l] = 1.0
        assert np.max(np.abs(p[l] - np.polynomial.legendre.legval(x, coef))) < 1e-11


@numba_only
def test_legendre_backends_agree():
    x, _, _ = _inputs()
    a = _kernels.legendre_table_numpy(299, x)
    b = _kernels.legendre_table_numba(299, x)
    assert np.array_equal(a, b)


@numba_only
def test_scatter_backends_agree():
    x, beta, w = _inputs()
    p = _kernels.legendre_table_numpy(beta.size - 1, x)
    pp_a, pm_a = _kernels.scatter_blocks_numpy(p, beta, w, 0.9)
    pp_b, pm_b = _kernels.scatter_blocks_numba(p, beta, w, 0.9)
    scale = np.abs(pp_a).max()
    assert np.max(np.abs(pp_a - pp_b)) <= 1e-13 * scale
    assert np.max(np.abs(pm_a - pm_b)) <= 1e-13 * scale


@numba_only
@pytest.mark.parametrize("seq", [
    [1.0, 1.5, 1.75, 1.875, 1.9375],
    np.cumsum([(-1) ** (k + 1) / k for k in range(1, 12)]),
    [2.0, 2.0, 2.0],
    [1.0, 3.0, 2.0, 2.5, 2.2, 2.4],
])
def test_epsilon_backends_agree(seq):
    s = np.asarray(seq, dtype=np.float64)
    a = _kernels.epsilon_table_numpy(s, 1e-300, 1e-14)
    b = _kernels.epsilon_table_numba(s, 1e-300, 1e-14)
    assert a[1] == b[1]
    assert a[0] == pytest.approx(b[0], rel=1e-14)


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", None)])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, RMDOM_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from rmdom._kernels import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.strip()
    assert out == (expected or ("numba" if _kernels.HAVE_NUMBA else "numpy"))
