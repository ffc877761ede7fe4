"""
First-order response-matrix solution of the discrete-ordinates slab problem.

The 2N x 2N transport matrix

    A = [[-att, coup], [-coup, att]],  att = M^-1 (I - C++W),  coup = M^-1 C+-W

is diagonalized once. Every exponential the solver evaluates is a decaying
one: growing modes are referenced to the far face of the slab, so the
coefficient system and the response matrix only contain e^{-|lambda| t}
with t >= 0. Nothing here can overflow, however thick the slab.

Naming: ``att``/``coup`` are the attenuation and coupling blocks, and
``a``/``b`` are the coefficient vectors of the decaying and (rescaled)
growing modes.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg.lapack import dgecon

# Largest albedo handed to the eigensolver; at omega = 1 the zero
# eigenvalue is double and A is defective.
OMEGA_MAX = 1.0 - 1e-12
IMAG_RTOL = 1e-10
IMAG_ATOL = 1e-12
RCOND_MIN = 1e-13


class SolverError(RuntimeError):
    """A numerical failure the solver refuses to paper over.

    ``order`` is the half-range quadrature size in effect, when known.
    """

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order

    def __str__(self):
        msg = super().__str__()
        return msg if self.order is None else f"{msg} (N={self.order})"


@dataclass(frozen=True)
class TransportMatrix:
    att: np.ndarray
    coup: np.ndarray
    full: np.ndarray

    @property
    def n(self):
        return self.att.shape[0]


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues split by sign and the four N x N blocks of T.

    Column k of ``t1``/``t3`` belongs to ``lambdas_neg[k]`` and column k of
    ``t2``/``t4`` to ``lambdas_pos[k]``; both sets are ascending.
    """

    lambdas_neg: np.ndarray
    lambdas_pos: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    t3: np.ndarray
    t4: np.ndarray

    @property
    def n(self):
        return self.lambdas_neg.size

    @property
    def decay_neg(self):
        return -self.lambdas_neg

    @property
    def decay_pos(self):
        return self.lambdas_pos

    @property
    def eigenvalues(self):
        return np.concatenate([self.lambdas_neg, self.lambdas_pos])

    @property
    def vectors(self):
        return np.block([[self.t1, self.t2], [self.t3, self.t4]])


@dataclass(frozen=True)
class ResponseMatrix:
    """Maps [I+(tau0); I-(tau1)] to [I+(tau1); I-(tau0)]."""

    r: np.ndarray
    tau0: float
    tau1: float
    rcond: float = float("nan")

    @property
    def n(self):
        return self.r.shape[0] // 2


@dataclass(frozen=True)
class BoundaryData:
    """Incoming intensities: ``in_plus`` at the near face, ``in_minus`` at the far face."""

    in_plus: np.ndarray
    in_minus: np.ndarray

    def __post_init__(self):
        ip = np.array(self.in_plus, dtype=np.float64)
        im = np.array(self.in_minus, dtype=np.float64)
        if ip.shape != im.shape or ip.ndim != 1:
            raise ValueError("in_plus and in_minus must be 1-D and the same length")
        if not (np.all(np.isfinite(ip)) and np.all(np.isfinite(im))):
            raise ValueError("boundary intensities must be finite")
        if np.any(ip < 0.0) or np.any(im < 0.0):
            raise ValueError("boundary intensities must be non-negative")
        ip.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "in_plus", ip)
        object.__setattr__(self, "in_minus", im)

    @property
    def stacked(self):
        return np.concatenate([self.in_plus, self.in_minus])


def effective_albedo(omega):
    """Albedo actually used by the solver and whether it was clamped."""
    omega = float(omega)
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1] (got {omega!r})")
    if omega > OMEGA_MAX:
        return OMEGA_MAX, True
    return omega, False


def assemble(scatter, dirs):
    mu = dirs.nodes
    n = mu.size
    if scatter.pp.shape != (n, n) or scatter.pm.shape != (n, n):
        raise ValueError(
            f"scatter blocks {scatter.pp.shape} do not match {n} directions"
        )
    att = (np.eye(n) - scatter.pp) / mu[:, None]
    coup = scatter.pm / mu[:, None]
    full = np.block([[-att, coup], [-coup, att]])
    return TransportMatrix(att, coup, full)


def eigendecompose(tm):
    n = tm.n
    try:
        lam, vec = sla.eig(tm.full, check_finite=True)
    except (sla.LinAlgError, ValueError) as exc:
        raise SolverError(f"eigensolver failed: {exc}", order=n) from exc
    bad = np.abs(lam.imag) > IMAG_RTOL * np.abs(lam.real) + IMAG_ATOL
    if np.any(bad):
        worst = lam[bad][np.argmax(np.abs(lam[bad].imag))]
        raise SolverError(
            f"{bad.sum()} eigenvalues are complex beyond tolerance (worst {worst:.3e})",
            order=n,
        )
    lam = lam.real
    vec = vec.real
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vec = vec[:, order]
    n_neg = int(np.sum(lam < 0.0))
    if n_neg != n or lam[n] <= 0.0:
        raise SolverError(
            f"expected {n} negative and {n} positive eigenvalues, got {n_neg} negative",
            order=n,
        )
    return EigenSystem(
        lambdas_neg=lam[:n],
        lambdas_pos=lam[n:],
        t1=vec[:n, :n],
        t2=vec[:n, n:],
        t3=vec[n:, :n],
        t4=vec[n:, n:],
    )


def gamma_minus(lams, t):
    """Diagonal of exp(-lams * t) as a vector; lams > 0 and t >= 0 only.

    Entries lie in [0, 1]; large arguments underflow to 0.
    """
    t = float(t)
    lams = np.asarray(lams, dtype=np.float64)
    if not t >= 0.0:
        raise ValueError(f"gamma_minus needs a non-negative distance (got {t!r})")
    if np.any(lams <= 0.0):
        raise ValueError("gamma_minus needs strictly positive decay constants")
    return np.exp(-lams * t)


def _factor(matrix, n):
    lu_piv = sla.lu_factor(matrix, check_finite=False)
    anorm = np.linalg.norm(matrix, 1)
    rcond, info = dgecon(lu_piv[0], anorm, norm="1")
    if info != 0 or not rcond >= RCOND_MIN:
        raise SolverError(
            f"coefficient system is singular to working precision (rcond={rcond:.2e})",
            order=n,
        )
    return lu_piv, rcond


def _coefficient_system(es, tau0, tau1):
    d = tau1 - tau0
    g1 = gamma_minus(es.decay_neg, d)
    g4 = gamma_minus(es.decay_pos, d)
    matrix = np.block([[es.t1, es.t2 * g4], [es.t3 * g1, es.t4]])
    return matrix, g1, g4


def _check_slab(tau0, tau1):
    if not tau1 > tau0:
        raise ValueError(f"need tau1 > tau0 (got {tau0!r}, {tau1!r})")


def response_matrix(es, tau0, tau1):
    """Scaled response matrix; the inner inverse is applied by LU solves."""
    tau0, tau1 = float(tau0), float(tau1)
    _check_slab(tau0, tau1)
    matrix, g1, g4 = _coefficient_system(es, tau0, tau1)
    lu_piv, rcond = _factor(matrix, es.n)
    top = np.block([[es.t1 * g1, es.t2], [es.t3, es.t4 * g4]])
    # R = top @ inv(matrix)  <=>  matrix^T R^T = top^T
    r = sla.lu_solve(lu_piv, top.T, trans=1, check_finite=False).T
    return ResponseMatrix(r, tau0, tau1, float(rcond))


def solve_boundary(rm, bd):
    n = rm.n
    if bd.in_plus.size != n:
        raise ValueError(f"boundary data has {bd.in_plus.size} directions, response has {n}")
    out = rm.r @ bd.stacked
    return out[:n], out[n:]


def mode_coefficients(es, bd, tau0, tau1):
    """Solve for the decaying (``a``) and rescaled growing (``b``) amplitudes."""
    tau0, tau1 = float(tau0), float(tau1)
    _check_slab(tau0, tau1)
    if bd.in_plus.size != es.n:
        raise ValueError(f"boundary data has {bd.in_plus.size} directions, system has {es.n}")
    matrix, _, _ = _coefficient_system(es, tau0, tau1)
    lu_piv, rcond = _factor(matrix, es.n)
    ab = sla.lu_solve(lu_piv, bd.stacked, check_finite=False)
    return ab[: es.n], ab[es.n :], float(rcond)


def check_depths(taus, tau0, tau1):
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    slack = 1e-12 * max(1.0, abs(tau1))
    if np.any(taus < tau0 - slack) or np.any(taus > tau1 + slack):
        raise ValueError(f"edit depths must lie in [{tau0}, {tau1}]")
    return np.clip(taus, tau0, tau1)


def evaluate_modes(es, a, b, tau0, tau1, taus):
    """I+ and I- as (N, len(taus)) arrays from known mode amplitudes."""
    taus = check_depths(taus, tau0, tau1)
    ga = np.empty((es.n, taus.size))
    gb = np.empty((es.n, taus.size))
    for j, tau in enumerate(taus):
        ga[:, j] = gamma_minus(es.decay_neg, tau - tau0) * a
        gb[:, j] = gamma_minus(es.decay_pos, tau1 - tau) * b
    return es.t1 @ ga + es.t2 @ gb, es.t3 @ ga + es.t4 @ gb


def interior(es, bd, tau0, tau1, taus):
    """Intensities (I+(tau), I-(tau)) at each requested depth."""
    tau0, tau1 = float(tau0), float(tau1)
    a, b, _ = mode_coefficients(es, bd, tau0, tau1)
    i_plus, i_minus = evaluate_modes(es, a, b, tau0, tau1, taus)
    return [(i_plus[:, j], i_minus[:, j]) for j in range(i_plus.shape[1])]


def interior_unscaled(es, bd, tau0, tau1, taus):
    """Direct evaluation with growing exponentials e^{+lambda t}.

    Algebraically identical to :func:`interior`. It raises
    ``FloatingPointError`` once ``lambda_max * (tau1 - tau0)`` exceeds the
    double-precision range, which is why :func:`interior` exists. Kept for
    verification only.
    """
    tau0, tau1 = float(tau0), float(tau1)
    _check_slab(tau0, tau1)
    d = tau1 - tau0
    lam = es.eigenvalues
    t = es.vectors
    n = es.n
    with np.errstate(over="raise", invalid="raise"):
        grow = np.exp(lam * d)
        rows = np.vstack([t[:n], t[n:] * grow])
        c = np.linalg.solve(rows, bd.stacked)
        out = []
        for tau in check_depths(taus, tau0, tau1):
            full = t @ (np.exp(lam * (tau - tau0)) * c)
            out.append((full[:n], full[n:]))
    return out


def beam_boundary(dirs, mu0=1.0, strength=0.5):
    """Discrete delta at ``mu0``: value strength / w(mu0), so sum w I+ = strength."""
    try:
        k = dirs.index_of(mu0)
    except KeyError:
        raise ValueError(f"beam direction mu0={mu0!r} is not a quadrature node") from None
    if dirs.faux_mask[k] or dirs.weights[k] == 0.0:
        raise ValueError(f"beam direction mu0={mu0!r} is a zero-weight edit node")
    in_plus = np.zeros(dirs.n)
    in_plus[k] = strength / dirs.weights[k]
    return BoundaryData(in_plus, np.zeros(dirs.n))


def isotropic_boundary(dirs, near=1.0, far=0.0):
    return BoundaryData(np.full(dirs.n, float(near)), np.full(dirs.n, float(far)))
