"""
Legendre-expanded scattering phase functions.

The azimuthally averaged kernel is

    f(mu', mu) = 1/2 * sum_{l=0}^{L} beta_l P_l(mu') P_l(mu),   beta_0 = 1,

so that f integrates to one over mu in [-1, 1].
"""

import io
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import _kernels

NORM_TOL = 1e-12


@dataclass(frozen=True)
class PhaseFunction:
    coefficients: np.ndarray
    name: str = ""

    def __post_init__(self):
        beta = np.array(self.coefficients, dtype=np.float64).ravel()
        if beta.size == 0:
            raise ValueError("a phase function needs at least beta_0")
        if abs(beta[0] - 1.0) > NORM_TOL:
            raise ValueError(f"beta_0 must be 1 (got {beta[0]!r})")
        if not np.all(np.isfinite(beta)):
            raise ValueError("coefficients must be finite")
        beta[0] = 1.0
        beta.setflags(write=False)
        object.__setattr__(self, "coefficients", beta)

    @property
    def order(self):
        return self.coefficients.size - 1


@dataclass(frozen=True)
class ScatterMatrices:
    """Weighted kernel blocks ``C++W`` (``pp``) and ``C+-W`` (``pm``).

    By reflection symmetry these are the only two distinct blocks.
    """

    pp: np.ndarray
    pm: np.ndarray
    omega: float


def isotropic():
    return PhaseFunction([1.0], name="isotropic")


def linear(beta1):
    return PhaseFunction([1.0, float(beta1)], name=f"linear:{beta1:g}")


def load_coefficients(source, renormalize=False, name=""):
    """Parse one coefficient per line (beta_0 first); '#' starts a comment.

    ``source`` is a text stream, or a string holding the file contents.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    values = []
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"line {lineno}: not a number: {line!r}") from None
    if not values:
        raise ValueError("no coefficients found")
    beta = np.asarray(values)
    if renormalize:
        if beta[0] == 0.0:
            raise ValueError("cannot renormalize: beta_0 is zero")
        beta = beta / beta[0]
    return PhaseFunction(beta, name=name)


def load_coefficient_file(path, renormalize=False):
    with open(path, encoding="utf-8") as fh:
        return load_coefficients(fh, renormalize, name=os.path.basename(path))


def cloudc1():
    """The 300-term Cloud C.1 kernel shipped as package data."""
    data = resources.files("rmdom").joinpath("data", "cloudc1.txt")
    try:
        text = data.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(
            "CloudC1 coefficient file missing: expected rmdom/data/cloudc1.txt "
            "(Cloud C.1 Legendre moments, e.g. the cldmom table of cdisort c_getmom)"
        ) from None
    return load_coefficients(text, name="cloudc1")


def from_name(spec):
    """Resolve ``isotropic``, ``linear:<beta1>``, ``cloudc1`` or a file path."""
    if spec == "isotropic":
        return isotropic()
    if spec.startswith("linear:"):
        return linear(float(spec.split(":", 1)[1]))
    if spec.lower() in ("cloudc1", "cloud", "cloud-c1"):
        return cloudc1()
    return load_coefficient_file(spec)


def legendre_table(order, x):
    return _kernels.legendre_table(int(order), np.ascontiguousarray(x, dtype=np.float64))


def eval_phase(pf, mu_in, mu_out):
    """f(mu_in, mu_out); broadcasts over array arguments."""
    a, b = np.broadcast_arrays(np.asarray(mu_in, float), np.asarray(mu_out, float))
    if np.any(np.abs(a) > 1.0) or np.any(np.abs(b) > 1.0):
        raise ValueError("direction cosines must lie in [-1, 1]")
    pa = legendre_table(pf.order, a.ravel())
    pb = legendre_table(pf.order, b.ravel())
    val = 0.5 * np.einsum("l,li,li->i", pf.coefficients, pa, pb)
    return val.reshape(a.shape) if a.ndim else float(val[0])


def build_scatter_matrices(pf, dirs, omega):
    """``pp[i, j] = omega w_j f(mu_i, mu_j)``, ``pm[i, j] = omega w_j f(mu_i, -mu_j)``."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1] (got {omega!r})")
    p = legendre_table(pf.order, dirs.nodes)
    w = np.ascontiguousarray(dirs.weights)
    pp, pm = _kernels.scatter_blocks(p, pf.coefficients, w, float(omega))
    return ScatterMatrices(pp, pm, float(omega))


def scattering_source(pf, dirs, omega, i_plus, i_minus, mu):
    """omega * sum_m w_m [f(mu_m, mu) I+_m + f(-mu_m, mu) I-_m].

    At mu = 0 the transport equation has no streaming term, so this is the
    grazing-direction intensity itself.
    """
    p_nodes = legendre_table(pf.order, dirs.nodes)
    p_mu = legendre_table(pf.order, np.atleast_1d(float(mu)))[:, 0]
    sign = np.ones(pf.order + 1)
    sign[1::2] = -1.0
    f_plus = 0.5 * (pf.coefficients * p_mu) @ p_nodes
    f_minus = 0.5 * (pf.coefficients * p_mu * sign) @ p_nodes
    w = dirs.weights
    return omega * (np.dot(w * f_plus, i_plus) + np.dot(w * f_minus, i_minus))
