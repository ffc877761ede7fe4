import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from rmdom import core, oracle
from rmdom.phase import build_scatter_matrices, isotropic, linear
from rmdom.quadrature import build_direction_set, radau_right


def transport(pf, omega, n):
    dirs = build_direction_set(radau_right(n))
    return dirs, core.assemble(build_scatter_matrices(pf, dirs, omega), dirs)


def test_expm_of_zero_is_identity():
    assert np.array_equal(oracle.expm_dense(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal():
    e = oracle.expm_dense(np.diag([-1.0, 2.0]), 1.0)
    assert e == pytest.approx(np.diag([math.exp(-1), math.exp(2)]), rel=1e-14, abs=1e-300)


def test_expm_rotation():
    theta = 0.7
    e = oracle.expm_dense(np.array([[0.0, -theta], [theta, 0.0]]))
    want = [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    assert np.allclose(e, want, rtol=0, atol=1e-15)


def test_expm_nilpotent():
    e = oracle.expm_dense(np.array([[0.0, 1.0], [0.0, 0.0]]), 3.0)
    assert np.array_equal(e, [[1.0, 3.0], [0.0, 1.0]])


matrices = st.integers(2, 8).flatmap(
    lambda n: st.lists(st.floats(-2.0, 2.0), min_size=n * n, max_size=n * n).map(
        lambda v: np.array(v).reshape(n, n)
    )
)


@settings(max_examples=40, deadline=None)
@given(matrices, st.floats(0.0, 1.5), st.floats(0.0, 1.5))
def test_semigroup(a, s, t):
    lhs = oracle.expm_dense(a, s + t)
    rhs = oracle.expm_dense(a, s) @ oracle.expm_dense(a, t)
    assert np.linalg.norm(lhs - rhs) <= 1e-11 * np.linalg.norm(lhs)


@settings(max_examples=40, deadline=None)
@given(matrices, st.floats(0.0, 1.5))
def test_inverse_and_scipy_agreement(a, t):
    e = oracle.expm_dense(a, t)
    assert np.allclose(e @ oracle.expm_dense(a, -t), np.eye(a.shape[0]), rtol=0, atol=1e-10)
    ref = scipy.linalg.expm(a * t)
    assert np.linalg.norm(e - ref) <= 1e-12 * np.linalg.norm(ref)


def test_regime_guard():
    with pytest.raises(oracle.RegimeError):
        oracle.expm_dense(np.eye(2) * 50.0)
    with pytest.raises(ValueError):
        oracle.expm_dense(np.ones((2, 3)))


def test_pure_absorber_transmission():
    dirs, tm = transport(isotropic(), 0.0, 6)
    r = oracle.reference_response(tm, 0.0, 1.0).r
    n = dirs.n
    assert np.allclose(np.diag(r[:n, :n]), np.exp(-1.0 / dirs.nodes), rtol=1e-13, atol=0)
    assert np.allclose(np.diag(r[n:, n:]), np.exp(-1.0 / dirs.nodes), rtol=1e-13, atol=0)
    assert np.all(np.abs(r[:n, n:]) <= 1e-15) and np.all(np.abs(r[n:, :n]) <= 1e-15)


@pytest.mark.parametrize("pf,omega,tau1,n,tol", [
    (isotropic(), 0.5, 1.0, 8, 1e-10),
    (linear(1.0), 0.9, 2.0, 16, 1e-9),
    (linear(2.5), 0.99, 5.0, 12, 1e-9),
])
def test_matches_scaled_response(pf, omega, tau1, n, tol):
    _, tm = transport(pf, omega, n)
    want = oracle.reference_response(tm, 0.0, tau1).r
    got = core.response_matrix(core.eigendecompose(tm), 0.0, tau1).r
    assert np.max(np.abs(got - want)) <= tol


def test_details_and_doubling():
    _, tm = transport(isotropic(), 0.5, 4)
    res = oracle.reference_response(tm, 0.0, 3.0, return_details=True)
    assert res.condition_note <= oracle.SUBLAYER_NORM
    assert res.doublings >= 1
    assert np.all(np.isfinite(res.expm))


def test_rejects_empty_slab():
    _, tm = transport(isotropic(), 0.5, 3)
    with pytest.raises(ValueError):
        oracle.reference_response(tm, 1.0, 1.0)
