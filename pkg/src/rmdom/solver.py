"""End-to-end pipeline: quadrature -> kernel -> eigensystem -> edit grid."""

from dataclasses import dataclass, field

import numpy as np

from . import core
from .phase import PhaseFunction, build_scatter_matrices, scattering_source
from .quadrature import build_direction_set, make_rule

COMPONENTS = ("diffuse", "total", "uncollided")


@dataclass(frozen=True)
class SlabProblem:
    """Homogeneous slab [tau0, tau1] lit on its near face.

    ``incident="beam"`` puts ``strength`` into a discrete delta at ``mu0``
    (the default is I(0, mu) = delta(mu - 1) / 2); ``incident="isotropic"``
    sets I+(tau0, mu) = strength for every mu. The far face sees vacuum.
    """

    tau1: float
    omega: float
    phase: PhaseFunction
    tau0: float = 0.0
    incident: str = "beam"
    mu0: float = 1.0
    strength: float = 0.5

    def __post_init__(self):
        if not self.tau1 > self.tau0:
            raise ValueError("need tau1 > tau0")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError("omega must lie in [0, 1]")
        if self.incident not in ("beam", "isotropic"):
            raise ValueError(f"unknown incident condition {self.incident!r}")


@dataclass(frozen=True)
class SolutionTable:
    """Intensities on an edit grid.

    Rows are signed cosines, ascending from -1 to +1: a row at -m holds
    I-(tau) in direction -m, a row at +m holds I+(tau), and a row at 0 holds
    the grazing intensity. ``total`` keeps the true incoming values on the
    boundary columns; :meth:`display` zeroes them the way printed tables do.
    """

    mus: np.ndarray
    taus: np.ndarray
    total: np.ndarray
    uncollided: np.ndarray
    tau0: float
    tau1: float
    order: int
    omega: float
    omega_used: float
    depth_labels: tuple = ()
    info: dict = field(default_factory=dict, compare=False)

    @property
    def clamped(self):
        return self.omega_used != self.omega

    @property
    def diffuse(self):
        return self.total - self.uncollided

    def component(self, name="diffuse"):
        if name == "diffuse":
            return self.diffuse
        if name == "total":
            return self.total
        if name == "uncollided":
            return self.uncollided
        raise ValueError(f"unknown component {name!r}; expected one of {COMPONENTS}")

    def incoming_mask(self):
        """Cells that hold incoming boundary intensities."""
        mask = np.zeros(self.total.shape, dtype=bool)
        near = np.isclose(self.taus, self.tau0, rtol=0.0, atol=1e-12 * max(1.0, self.tau1))
        far = np.isclose(self.taus, self.tau1, rtol=0.0, atol=1e-12 * max(1.0, self.tau1))
        mask[np.ix_(self.mus > 0.0, near)] = True
        mask[np.ix_(self.mus < 0.0, far)] = True
        return mask

    def display(self, name="diffuse"):
        grid = self.component(name).copy()
        grid[self.incoming_mask()] = 0.0
        return grid

    def value(self, mu, tau, name="diffuse"):
        i = int(np.argmin(np.abs(self.mus - mu)))
        j = int(np.argmin(np.abs(self.taus - tau)))
        if abs(self.mus[i] - mu) > 1e-12 or abs(self.taus[j] - tau) > 1e-12 * max(1.0, self.tau1):
            raise KeyError(f"(mu={mu}, tau={tau}) is not on the edit grid")
        return float(self.component(name)[i, j])


def _boundary(problem, dirs):
    if problem.incident == "beam":
        return core.beam_boundary(dirs, problem.mu0, problem.strength)
    return core.isotropic_boundary(dirs, near=problem.strength, far=0.0)


def solve(problem, n, edit_mus=(), edit_taus=(), quad="radau", depth_labels=None):
    """Solve ``problem`` with an ``n``-point half-range rule.

    ``edit_mus`` are cosine magnitudes in [0, 1]; each positive one yields a
    +mu and a -mu row, and 0 yields the grazing row. ``edit_taus`` are
    absolute depths. Core failures surface as :class:`core.SolverError`
    carrying ``n``.
    """
    mags = sorted({float(m) for m in edit_mus})
    if any(m < 0.0 or m > 1.0 for m in mags):
        raise ValueError("edit cosines must lie in [0, 1]")
    positive = [m for m in mags if m > 0.0]
    taus = np.asarray([float(t) for t in edit_taus], dtype=np.float64)
    order = np.argsort(taus, kind="stable")
    taus = taus[order]
    if depth_labels is None:
        labels = tuple(repr(float(t)) for t in taus)
    else:
        labels = tuple(np.asarray(list(depth_labels), dtype=object)[order])

    omega_used, _ = core.effective_albedo(problem.omega)
    dirs = build_direction_set(make_rule(quad, n), positive)
    bd = _boundary(problem, dirs)
    try:
        scatter = build_scatter_matrices(problem.phase, dirs, omega_used)
        tm = core.assemble(scatter, dirs)
        es = core.eigendecompose(tm)
        a, b, rcond = core.mode_coefficients(es, bd, problem.tau0, problem.tau1)
    except core.SolverError as exc:
        # core only knows the matrix size, which counts faux directions
        exc.order = int(n)
        raise
    tau0, tau1 = problem.tau0, problem.tau1
    depths = core.check_depths(taus, tau0, tau1)
    i_plus, i_minus = core.evaluate_modes(es, a, b, tau0, tau1, depths)

    rows = [-m for m in reversed(positive)] + ([0.0] if 0.0 in mags else []) + positive
    total = np.zeros((len(rows), taus.size))
    unc = np.zeros_like(total)
    for r, mu in enumerate(rows):
        if mu == 0.0:
            total[r] = scattering_source(problem.phase, dirs, omega_used, i_plus, i_minus, 0.0)
            continue
        k = dirs.index_of(abs(mu))
        if mu > 0.0:
            total[r] = i_plus[k]
            unc[r] = bd.in_plus[k] * np.exp(-(depths - tau0) / mu)
        else:
            total[r] = i_minus[k]
            unc[r] = bd.in_minus[k] * np.exp(-(tau1 - depths) / -mu)

    info = {
        "rcond": rcond,
        "directions": dirs.n,
        "faux": int(dirs.faux_mask.sum()),
        "lambda_max": float(es.lambdas_pos[-1]),
        "lambda_min": float(es.lambdas_pos[0]),
        "quad": quad,
        "phase": problem.phase.name,
    }
    return SolutionTable(
        mus=np.asarray(rows, dtype=np.float64),
        taus=depths,
        total=total,
        uncollided=unc,
        tau0=tau0,
        tau1=tau1,
        order=int(n),
        omega=float(problem.omega),
        omega_used=omega_used,
        depth_labels=labels,
        info=info,
    )
