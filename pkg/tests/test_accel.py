import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmdom import accel
from rmdom.core import SolverError
from rmdom.phase import isotropic, linear
from rmdom.solver import SlabProblem, solve


def test_constant_sequence():
    assert accel.wynn_epsilon([3.5, 3.5, 3.5, 3.5]) == 3.5


def test_geometric_partial_sums():
    assert accel.wynn_epsilon([1.0, 1.5, 1.75]) == 2.0


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.95, 0.95).filter(lambda r: abs(r) > 1e-3), st.floats(-10, 10).filter(lambda a: abs(a) > 1e-3),
       st.integers(3, 9))
def test_geometric_limit_is_exact(ratio, first, terms):
    sums = np.cumsum(first * ratio ** np.arange(terms))
    limit = first / (1.0 - ratio)
    # longer tables must not be spoiled by columns built after column 2 is exact
    assert accel.wynn_epsilon(sums) == pytest.approx(limit, rel=1e-12)


def test_alternating_harmonic():
    partial = np.cumsum([(-1) ** (k + 1) / k for k in range(1, 10)])
    assert abs(partial[-1] - math.log(2)) > 0.05
    assert abs(accel.wynn_epsilon(partial) - math.log(2)) <= 5e-6


def test_needs_three_terms():
    with pytest.raises(ValueError):
        accel.wynn_epsilon([1.0, 2.0])


def test_relative_change_skips_structural_zeros():
    new = np.array([1.0, 0.0, 2.0])
    old = np.array([1.1, 0.0, 2.0])
    assert accel.relative_change(new, old) == pytest.approx(0.1)
    assert accel.relative_change(np.zeros(3), np.ones(3)) == 0.0


def test_accelerate_is_per_edit():
    snaps = [np.array([[1.0, 10.0]]), np.array([[1.5, 10.0]]), np.array([[1.75, 10.0]])]
    out = accel.accelerate(snaps)
    assert out.shape == (1, 2)
    assert out[0, 0] == 2.0 and out[0, 1] == 10.0
    assert accel.accelerate(snaps[:2]) is None


def test_pure_absorber_converges_at_second_order():
    problem = SlabProblem(tau1=1.0, omega=0.0, phase=isotropic(), incident="isotropic", strength=1.0)
    report = accel.converge(problem, (0.3, 1.0), [0.0, 0.5, 1.0], 1e-12, schedule=(4, 4, 40),
                            component="total")
    assert report.converged
    assert report.orders == [4, 8]
    assert report.final_rel_err <= 1e-12


def test_converged_edits_match_a_fine_solve():
    problem = SlabProblem(tau1=5.0, omega=0.9, phase=isotropic(), incident="isotropic", strength=1.0)
    mus, taus = (0.1, 0.5, 1.0), [0.0, 2.5, 5.0]
    report = accel.converge(problem, mus, taus, 1e-6, schedule=(8, 8, 64))
    assert report.converged
    assert report.final_rel_err <= 1e-6
    assert report.orders == sorted(set(report.orders))
    fine = solve(problem, 128, mus, taus).display()
    live = np.abs(fine) > 1e-14
    assert np.max(np.abs(report.final.display()[live] - fine[live]) / fine[live]) <= 1e-5


def test_not_converged_is_reported_not_raised():
    problem = SlabProblem(tau1=2.0, omega=0.95, phase=linear(2.0))
    report = accel.converge(problem, (0.5,), [1.0], 1e-15, schedule=(4, 4, 12))
    assert not report.converged
    assert report.orders == [4, 8, 12]
    assert report.accelerated is not None
    assert all(np.all(np.isfinite(s)) for s in report.edit_snapshots)


def test_solver_failure_carries_order_and_partial_report(cloud):
    problem = SlabProblem(tau1=64.0, omega=1.0, phase=cloud)
    with pytest.raises(SolverError) as info:
        accel.converge(problem, (0.5,), [0.0, 64.0], 1e-8, schedule=(50, 25, 100))
    assert info.value.order == 50
    assert info.value.report.orders == []
    assert not info.value.report.converged


@pytest.mark.parametrize("schedule,tol", [((1, 1, 4), 1e-6), ((4, 0, 8), 1e-6), ((8, 1, 4), 1e-6),
                                          ((4, 4, 8), 0.0)])
def test_bad_arguments(schedule, tol):
    problem = SlabProblem(tau1=1.0, omega=0.5, phase=isotropic())
    with pytest.raises(ValueError):
        accel.converge(problem, (0.5,), [0.0], tol, schedule=schedule)
