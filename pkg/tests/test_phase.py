import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmdom.phase import (
    PhaseFunction,
    build_scatter_matrices,
    eval_phase,
    from_name,
    isotropic,
    linear,
    load_coefficient_file,
    load_coefficients,
    scattering_source,
)
from rmdom.quadrature import build_direction_set, gauss_legendre, radau_right

cosines = st.floats(-1.0, 1.0)
kernels = st.lists(st.floats(-3.0, 3.0), min_size=0, max_size=12).map(
    lambda rest: PhaseFunction([1.0, *rest])
)


def test_parse_single_term():
    pf = load_coefficients(io.StringIO("1.0"))
    assert pf.order == 0


def test_parse_linear():
    pf = load_coefficients(io.StringIO("1.0\n1.5"))
    assert pf.order == 1 and pf.coefficients[1] == 1.5


def test_parse_renormalize():
    pf = load_coefficients(io.StringIO("2.0\n3.0"), renormalize=True)
    assert pf.coefficients.tolist() == [1.0, 1.5]


def test_parse_comments_and_blanks():
    pf = load_coefficients("# header\n\n1.0\n  # note\n0.5\n")
    assert pf.coefficients.tolist() == [1.0, 0.5]


def test_parse_errors():
    with pytest.raises(ValueError, match="line 2"):
        load_coefficients("1.0\nabc\n")
    with pytest.raises(ValueError):
        load_coefficients("# nothing\n")
    with pytest.raises(ValueError):
        load_coefficients("2.0\n1.0\n")


def test_file_round_trip(tmp_path):
    path = tmp_path / "k.txt"
    path.write_text("1\n0.25\n0.0625\n", encoding="utf-8")
    pf = from_name(str(path))
    assert pf.coefficients.tolist() == [1.0, 0.25, 0.0625]
    assert load_coefficient_file(str(path)).name == "k.txt"


def test_named_kernels():
    assert from_name("isotropic").order == 0
    assert from_name("linear:2.5").coefficients.tolist() == [1.0, 2.5]


def test_cloudc1_file(cloud):
    pf = cloud
    assert pf.order == 299
    assert pf.coefficients[1] == pytest.approx(2.544)
    assert np.all(pf.coefficients > 0.0)


def test_eval_isotropic():
    assert eval_phase(isotropic(), 0.3, -0.9) == 0.5


def test_eval_linear_forward():
    assert eval_phase(linear(1.5), 1.0, 1.0) == pytest.approx(1.25, abs=1e-15)


def test_eval_rejects_out_of_range():
    with pytest.raises(ValueError):
        eval_phase(isotropic(), 1.2, 0.0)


@settings(max_examples=100, deadline=None)
@given(kernels, cosines, cosines)
def test_reflection_symmetry(pf, a, b):
    assert eval_phase(pf, -a, -b) == eval_phase(pf, a, b)
    assert eval_phase(pf, a, -b) == eval_phase(pf, -a, b)


@settings(max_examples=50, deadline=None)
@given(kernels, cosines)
def test_normalization(pf, mu_in):
    x, w = gauss_legendre(pf.order + 1)
    assert abs(w @ eval_phase(pf, mu_in, x) - 1.0) <= 1e-10


def test_cloudc1_normalization(cloud):
    pf = cloud
    x, w = gauss_legendre(pf.order + 1)
    for mu_in in (-1.0, -0.3, 0.0, 0.7, 1.0):
        assert abs(w @ eval_phase(pf, mu_in, x) - 1.0) <= 1e-10


def test_isotropic_scatter_columns():
    dirs = build_direction_set(radau_right(2))
    sm = build_scatter_matrices(isotropic(), dirs, 1.0)
    assert np.allclose(sm.pp, sm.pm, atol=0, rtol=1e-15)
    assert sm.pp[:, 0] == pytest.approx([3 / 8, 3 / 8], abs=1e-15)
    assert sm.pp[:, 1] == pytest.approx([1 / 8, 1 / 8], abs=1e-15)


def test_zero_albedo_scatter():
    dirs = build_direction_set(radau_right(5), [0.5])
    sm = build_scatter_matrices(linear(2.0), dirs, 0.0)
    assert not sm.pp.any() and not sm.pm.any()


@settings(max_examples=30, deadline=None)
@given(kernels, st.integers(2, 20), st.lists(st.floats(0.01, 1.0), max_size=5), st.floats(0.0, 1.0))
def test_scatter_blocks(pf, n, edits, omega):
    dirs = build_direction_set(radau_right(n), edits)
    sm = build_scatter_matrices(pf, dirs, omega)
    assert np.all(sm.pp[:, dirs.faux_mask] == 0.0)
    assert np.all(sm.pm[:, dirs.faux_mask] == 0.0)
    mu = dirs.nodes
    want_pp = omega * dirs.weights[None, :] * eval_phase(pf, mu[:, None], mu[None, :])
    want_pm = omega * dirs.weights[None, :] * eval_phase(pf, mu[:, None], -mu[None, :])
    scale = 1.0 + np.abs(want_pp).max() + np.abs(want_pm).max()
    assert np.max(np.abs(sm.pp - want_pp)) <= 1e-13 * scale
    assert np.max(np.abs(sm.pm - want_pm)) <= 1e-13 * scale


def test_scattering_source_matches_direct_sum():
    pf = linear(1.2)
    dirs = build_direction_set(radau_right(6))
    rng = np.random.default_rng(3)
    ip, im = rng.random(6), rng.random(6)
    got = scattering_source(pf, dirs, 0.8, ip, im, 0.0)
    want = 0.8 * np.sum(dirs.weights * (eval_phase(pf, dirs.nodes, 0.0) * ip
                                        + eval_phase(pf, -dirs.nodes, 0.0) * im))
    assert got == pytest.approx(want, rel=1e-14)
