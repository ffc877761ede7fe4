"""Benchmark configuration and the solve / sweep driver behind the CLI."""

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .. import accel
from ..phase import from_name
from ..solver import SlabProblem, solve
from .tables import parse_depth

ELEVEN = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
TWENTY_ONE = tuple(k / 10 for k in range(11))
ASYMMETRIC = ("0", "1/20", "1/5", "1/2", "3/4", "1")
UNIFORM = ("0", "1/5", "2/5", "3/5", "4/5", "1")


@dataclass(frozen=True)
class BenchmarkConfig:
    """One benchmark problem plus its edit grid.

    ``edit_taus`` holds labels: 'a/b' is a fraction of tau1, a bare number is
    an absolute depth unless ``taus_are_fractions`` is set.
    """

    tau1: float = 64.0
    omega: float = 1.0
    phase_source: str = "cloudc1"
    quad: str = "radau"
    edit_mus: tuple = ELEVEN
    edit_taus: tuple = ASYMMETRIC
    taus_are_fractions: bool = True
    tol: float = 5e-8
    schedule: tuple = accel.DEFAULT_SCHEDULE
    n: int = None
    incident: str = "beam"
    component: str = "diffuse"

    def __post_init__(self):
        if not self.tau1 > 0.0:
            raise ValueError("tau1 must be positive")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError("omega must lie in [0, 1]")
        if self.taus_are_fractions:
            for label in self.edit_taus:
                f = Fraction(str(label))
                if not 0 <= f <= 1:
                    raise ValueError(f"depth fraction {label} outside [0, 1]")

    def depths(self):
        return [parse_depth(t, self.tau1, self.taus_are_fractions) for t in self.edit_taus]

    def labels(self):
        if not self.taus_are_fractions:
            return tuple(str(t) for t in self.edit_taus)
        return tuple(_fraction_label(t) for t in self.edit_taus)


def _fraction_label(label):
    f = Fraction(str(label))
    if f == 1:
        return "tau1"
    return str(f)


# Published benchmark setups keyed by table name, with the order they are run at.
PRESETS = {
    "Ia": (BenchmarkConfig(edit_mus=ELEVEN, edit_taus=ASYMMETRIC), 300),
    "Ib": (BenchmarkConfig(edit_mus=ELEVEN, edit_taus=ASYMMETRIC), 300),
    "IIa": (BenchmarkConfig(edit_mus=ELEVEN, edit_taus=UNIFORM), 350),
    "IIb": (BenchmarkConfig(edit_mus=TWENTY_ONE, edit_taus=UNIFORM), 350),
}


def preset(name, **overrides):
    cfg, n = PRESETS[name]
    overrides.setdefault("n", n)
    return replace(cfg, **overrides)


def default_start(phase, n_start):
    """First order at which the quadrature integrates the kernel exactly."""
    return max(int(n_start), math.ceil((phase.order + 1) / 2))


def make_problem(config, phase=None):
    phase = phase if phase is not None else from_name(config.phase_source)
    return SlabProblem(
        tau1=config.tau1, omega=config.omega, phase=phase, incident=config.incident
    )


def run(config, phase=None):
    """Solve at ``config.n`` or sweep along ``config.schedule``.

    Returns ``(table, report)``; ``report`` is None for a single-order run.
    """
    problem = make_problem(config, phase)
    if config.n is not None:
        table = solve(
            problem, config.n, config.edit_mus, config.depths(),
            quad=config.quad, depth_labels=config.labels(),
        )
        return table, None
    report = accel.converge(
        problem, config.edit_mus, config.depths(), config.tol,
        schedule=config.schedule, quad=config.quad,
        component=config.component, depth_labels=config.labels(),
    )
    return report.final, report
