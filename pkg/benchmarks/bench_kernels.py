"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--n 300] [--repeat 5] [--no-solve]

Kernel timings call both implementations in-process. The end-to-end solve
is run once per backend in a subprocess, because the backend is chosen
from RMDOM_DISABLE_NUMBA at import time.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from rmdom import _kernels
from rmdom.phase import cloudc1
from rmdom.quadrature import build_direction_set, radau_right

SOLVE_SNIPPET = """
import time
from rmdom.bench import runner
from rmdom._kernels import BACKEND
from rmdom.phase import isotropic
from rmdom.solver import SlabProblem, solve
cfg = runner.preset("Ia", n={n})
problem = runner.make_problem(cfg)
solve(SlabProblem(1.0, 0.5, isotropic()), 8, cfg.edit_mus, [0.0])  # warm caches and jit
t = time.perf_counter()
solve(problem, {n}, cfg.edit_mus, cfg.depths())
print(BACKEND, time.perf_counter() - t)
"""


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(n, repeat):
    pf = cloudc1()
    dirs = build_direction_set(radau_right(n), [k / 10 for k in range(1, 11)])
    x = np.ascontiguousarray(dirs.nodes)
    beta = pf.coefficients
    w = np.ascontiguousarray(dirs.weights)
    p = _kernels.legendre_table_numpy(pf.order, x)
    seq = np.cumsum([(-1) ** (k + 1) / k for k in range(1, 40)])
    cases = [
        ("legendre_table", lambda f: f(pf.order, x), "legendre_table"),
        ("scatter_blocks", lambda f: f(p, beta, w, 1.0), "scatter_blocks"),
        ("epsilon_table", lambda f: f(seq, 1e-300, 1e-14), "epsilon_table"),
    ]
    rows = []
    for label, call, name in cases:
        slow = getattr(_kernels, f"{name}_numpy")
        fast = getattr(_kernels, f"{name}_numba")
        t_np = best_of(lambda: call(slow), repeat)
        t_nb = best_of(lambda: call(fast), repeat)
        rows.append((label, t_np, t_nb))
    return rows


def solve_times(n):
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, RMDOM_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(n=n)],
                             env=env, capture_output=True, text=True, check=True)
        backend, seconds = res.stdout.split()
        out[backend] = float(seconds)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=300, help="half-range quadrature order")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--no-solve", action="store_true", help="skip the end-to-end solve")
    args = parser.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy kernels are available")
        return 1
    print(f"CloudC1 kernel (L=299), N={args.n} plus 10 edit directions, best of {args.repeat}")
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for label, t_np, t_nb in kernel_rows(args.n, args.repeat):
        print(f"{label:<16}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}")
    if not args.no_solve:
        times = solve_times(args.n)
        print(f"\nfull Table Ia solve at N={args.n}:")
        for backend in ("numpy", "numba"):
            if backend in times:
                print(f"  {backend:<6} {times[backend]:.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
