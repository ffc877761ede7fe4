"""
Convergence in quadrature order and Wynn-epsilon acceleration.

Edit directions are faux nodes, so an edit value means the same thing at
every order N and the per-edit sequences can be compared and extrapolated
directly.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import SolverError
from .solver import solve

log = logging.getLogger(__name__)

DEFAULT_SCHEDULE = (50, 25, 400)
TINY = 1e-300
# Relative difference at which an epsilon column counts as converged.
EPS_RTOL = 1e-14
# Edits whose magnitude stays below this are structural zeros, not
# converging quantities.
ZERO_EDIT = 1e-14


def wynn_epsilon(seq):
    """Limit estimate of ``seq`` from the Wynn epsilon table.

    Builds eps_{k+1}^{(n)} = eps_{k-1}^{(n+1)} + 1 / (eps_k^{(n+1)} - eps_k^{(n)})
    with eps_{-1} = 0 and eps_0 = seq, and returns the last entry of the
    highest even column. Table growth stops at the first difference below
    1e-300 + 1e-14 |entry|, so an exactly converged column is not followed
    by columns built from rounding noise.
    """
    s = np.ascontiguousarray(seq, dtype=np.float64).ravel()
    if s.size < 3:
        raise ValueError("wynn_epsilon needs at least 3 terms")
    best, _ = _kernels.epsilon_table(s, TINY, EPS_RTOL)
    return float(best)


@dataclass
class ConvergenceReport:
    orders: list = field(default_factory=list)
    edit_snapshots: list = field(default_factory=list)
    final_rel_err: float = float("inf")
    converged: bool = False
    accelerated: np.ndarray = None
    tol: float = 0.0
    tables: list = field(default_factory=list, repr=False)
    failure: str = ""

    @property
    def final(self):
        """SolutionTable of the last successful order."""
        return self.tables[-1] if self.tables else None


def relative_change(new, old, floor=TINY, zero=ZERO_EDIT):
    """Worst |new - old| / max(|new|, floor) over edits that are not structural zeros."""
    new = np.asarray(new)
    old = np.asarray(old)
    live = np.abs(new) >= zero
    if not np.any(live):
        return 0.0
    rel = np.abs(new[live] - old[live]) / np.maximum(np.abs(new[live]), floor)
    return float(rel.max())


def accelerate(snapshots):
    """Apply wynn_epsilon to each edit's sequence over orders independently."""
    stack = np.asarray(snapshots, dtype=np.float64)
    if stack.shape[0] < 3:
        return None
    flat = stack.reshape(stack.shape[0], -1)
    out = np.array([wynn_epsilon(flat[:, j]) for j in range(flat.shape[1])])
    return out.reshape(stack.shape[1:])


def converge(problem, edit_mus, edit_taus, tol, schedule=DEFAULT_SCHEDULE,
             quad="radau", component="diffuse", depth_labels=None):
    """Raise N along ``schedule`` until consecutive edit grids agree to ``tol``.

    Returns a report with ``converged=False`` if ``n_max`` is reached.
    A SolverError at some order propagates with that order attached and
    the partial report (earlier orders only) as ``exc.report``.
    """
    n_start, n_step, n_max = (int(v) for v in schedule)
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if n_start < 2 or n_step < 1 or n_max < n_start:
        raise ValueError(f"bad schedule {schedule!r}")
    report = ConvergenceReport(tol=float(tol))
    for n in range(n_start, n_max + 1, n_step):
        try:
            table = solve(problem, n, edit_mus, edit_taus, quad=quad, depth_labels=depth_labels)
        except SolverError as exc:
            exc.order = n
            report.failure = str(exc)
            report.converged = False
            exc.report = report
            raise
        grid = table.display(component)
        if not np.all(np.isfinite(grid)):
            raise SolverError("non-finite edit values", order=n)
        report.orders.append(n)
        report.edit_snapshots.append(grid)
        report.tables.append(table)
        if len(report.orders) >= 2:
            report.final_rel_err = relative_change(grid, report.edit_snapshots[-2])
            log.info("N=%d  max relative change %.3e", n, report.final_rel_err)
            if report.final_rel_err <= tol:
                report.converged = True
                break
    report.accelerated = accelerate(report.edit_snapshots)
    return report
