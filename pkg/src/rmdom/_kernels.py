"""
Hot numeric kernels.

Each kernel has a pure-numpy implementation and a numba ``@njit``
counterpart. The numba path is used when numba imports and the
environment variable ``RMDOM_DISABLE_NUMBA`` is unset (or ``0``).
Both paths are always importable so tests and the benchmark can
compare them directly.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None

_DISABLED = os.environ.get("RMDOM_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"


# -- pure numpy -------------------------------------------------------------

def legendre_table_numpy(order, x):
    """Rows l = 0..order of P_l evaluated at every entry of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    p = np.empty((order + 1, x.size))
    p[0] = 1.0
    if order >= 1:
        p[1] = x
    for l in range(1, order):
        p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1)
    return p


def scatter_blocks_numpy(p, beta, weights, omega):
    """Same-hemisphere and cross-hemisphere weighted kernel blocks.

    ``pp[i, j] = omega * w_j * f(mu_i, mu_j)`` and
    ``pm[i, j] = omega * w_j * f(mu_i, -mu_j)`` with
    ``f(a, b) = 0.5 * sum_l beta_l P_l(a) P_l(b)``.
    """
    # P_l(-x) = (-1)^l P_l(x): split the sum by parity, pp = E + O, pm = E - O
    even = (p[0::2].T * beta[0::2]) @ p[0::2]
    odd = (p[1::2].T * beta[1::2]) @ p[1::2]
    half = 0.5 * omega * weights
    return (even + odd) * half, (even - odd) * half


def epsilon_table_numpy(seq, tiny, rtol):
    """Wynn epsilon table; returns (even-column estimate, columns built).

    Growth stops at the first difference below ``tiny + rtol * |entry|``:
    past that point the next column is dominated by rounding noise.
    """
    s = np.asarray(seq, dtype=np.float64)
    m = s.size
    prev = np.zeros(m + 1)
    cur = s.copy()
    best = cur[-1]
    k = 0
    while cur.size > 1:
        diff = cur[1:] - cur[:-1]
        bound = tiny + rtol * np.maximum(np.abs(cur[1:]), np.abs(cur[:-1]))
        if np.any(np.abs(diff) <= bound):
            break
        nxt = prev[1:cur.size] + 1.0 / diff
        prev, cur = cur, nxt
        k += 1
        if k % 2 == 0:
            best = cur[-1]
    return best, k


# -- numba ------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def legendre_table_numba(order, x):
        n = x.size
        p = np.empty((order + 1, n))
        for j in range(n):
            p[0, j] = 1.0
            if order >= 1:
                p[1, j] = x[j]
            for l in range(1, order):
                p[l + 1, j] = ((2 * l + 1) * x[j] * p[l, j] - l * p[l - 1, j]) / (l + 1)
        return p

    @numba.njit(cache=True)
    def scatter_blocks_numba(p, beta, weights, omega):
        nl, n = p.shape
        ne = (nl + 1) // 2
        no = nl // 2
        pe = np.empty((ne, n))
        qe = np.empty((ne, n))
        po = np.empty((no, n))
        qo = np.empty((no, n))
        for l in range(nl):
            for j in range(n):
                if l % 2 == 0:
                    pe[l // 2, j] = p[l, j]
                    qe[l // 2, j] = beta[l] * p[l, j]
                else:
                    po[l // 2, j] = p[l, j]
                    qo[l // 2, j] = beta[l] * p[l, j]
        even = np.dot(qe.T.copy(), pe)
        if no > 0:
            odd = np.dot(qo.T.copy(), po)
        else:
            odd = np.zeros((n, n))
        pp = np.empty((n, n))
        pm = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                half = 0.5 * omega * weights[j]
                pp[i, j] = (even[i, j] + odd[i, j]) * half
                pm[i, j] = (even[i, j] - odd[i, j]) * half
        return pp, pm

    @numba.njit(cache=True)
    def epsilon_table_numba(seq, tiny, rtol):
        m = seq.size
        prev = np.zeros(m + 1)
        cur = seq.copy()
        best = cur[m - 1]
        k = 0
        while cur.size > 1:
            size = cur.size
            nxt = np.empty(size - 1)
            stop = False
            for i in range(size - 1):
                d = cur[i + 1] - cur[i]
                if abs(d) <= tiny + rtol * max(abs(cur[i + 1]), abs(cur[i])):
                    stop = True
                    break
                nxt[i] = prev[i + 1] + 1.0 / d
            if stop:
                break
            prev = cur
            cur = nxt
            k += 1
            if k % 2 == 0:
                best = cur[cur.size - 1]
        return best, k

else:  # pragma: no cover
    legendre_table_numba = legendre_table_numpy
    scatter_blocks_numba = scatter_blocks_numpy
    epsilon_table_numba = epsilon_table_numpy


if USE_NUMBA:
    legendre_table = legendre_table_numba
    scatter_blocks = scatter_blocks_numba
    epsilon_table = epsilon_table_numba
else:
    legendre_table = legendre_table_numpy
    scatter_blocks = scatter_blocks_numpy
    epsilon_table = epsilon_table_numpy
