"""
Half-range angular quadratures.

Rules live on the direction-cosine interval [0, 1]; the negative
hemisphere is the mirror image, so a rule of size N yields 2N discrete
directions. Nodes are always ascending.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

# An edit cosine closer than this to a real node is absorbed by it.
DEDUP_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class HalfQuadrature:
    """Nodes and weights of a rule on [0, 1] (weights sum to 1)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        weights = _frozen(self.weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if nodes.size and (nodes[0] <= 0.0 or nodes[-1] > 1.0):
            raise ValueError("half-range nodes must lie in (0, 1]")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights < 0.0):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class DirectionSet:
    """A half-range rule augmented with zero-weight edit directions.

    ``faux_mask[m]`` is true where direction ``m`` is an edit direction
    that carries no quadrature weight.
    """

    half: HalfQuadrature
    faux_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        mask = self.faux_mask
        if mask is None:
            mask = np.zeros(len(self.half), dtype=bool)
        mask = np.array(mask, dtype=bool)
        if mask.shape != self.half.nodes.shape:
            raise ValueError("faux_mask length must match the rule")
        if np.any(self.half.weights[mask] != 0.0):
            raise ValueError("faux directions must carry zero weight")
        mask.setflags(write=False)
        object.__setattr__(self, "faux_mask", mask)

    @property
    def n(self):
        return len(self.half)

    @property
    def nodes(self):
        return self.half.nodes

    @property
    def weights(self):
        return self.half.weights

    def index_of(self, mu, tol=DEDUP_TOL):
        """Index of the node within ``tol`` of ``mu``; KeyError if none."""
        k = int(np.argmin(np.abs(self.nodes - mu)))
        if abs(self.nodes[k] - mu) > tol:
            raise KeyError(f"no direction at mu={mu!r}")
        return k


def _jacobi_legendre(n):
    """Off-diagonal of the Legendre Jacobi matrix on [-1, 1] (size n)."""
    k = np.arange(1, n, dtype=np.float64)
    return k / np.sqrt(4.0 * k * k - 1.0)


def gauss_legendre(n, a=-1.0, b=1.0):
    """Gauss-Legendre rule on [a, b] by the Golub-Welsch eigenvalue method.

    Exact for polynomials of degree <= 2n - 1. Returns ``(nodes, weights)``
    with ascending nodes.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not a < b:
        raise ValueError("need a < b")
    if n == 1:
        x, w = np.zeros(1), np.full(1, 2.0)
    else:
        x, v = eigh_tridiagonal(np.zeros(n), _jacobi_legendre(n))
        w = 2.0 * v[0] ** 2
        # symmetrize away eigensolver noise
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def radau_right(n):
    """Radau rule on [0, 1] with the fixed node mu = 1.

    The Legendre Jacobi matrix is modified in its last diagonal entry so
    that 1 is an eigenvalue (Golub's construction); the resulting rule is
    exact for polynomials of degree <= 2n - 2.
    """
    n = int(n)
    if n < 2:
        raise ValueError("a Radau rule needs n >= 2")
    off = _jacobi_legendre(n)
    # (J_{n-1} - I) d = off_{n-1}^2 e_{n-1} fixes the last diagonal entry
    j = np.diag(off[:-1], 1) + np.diag(off[:-1], -1) - np.eye(n - 1)
    rhs = np.zeros(n - 1)
    rhs[-1] = off[-1] ** 2
    diag = np.zeros(n)
    diag[-1] = 1.0 + np.linalg.solve(j, rhs)[-1]
    x, v = eigh_tridiagonal(diag, off)
    nodes = 0.5 * (x + 1.0)
    weights = v[0] ** 2
    nodes[-1] = 1.0
    return HalfQuadrature(nodes, weights)


def half_range_gauss(n):
    """Gauss-Legendre rule mapped onto (0, 1) as a HalfQuadrature."""
    x, w = gauss_legendre(n, 0.0, 1.0)
    return HalfQuadrature(x, w)


def build_direction_set(rule, edit_mus=()):
    """Merge zero-weight edit directions into ``rule``.

    Edits within ``DEDUP_TOL`` of a real node (or of each other) collapse
    onto the existing direction.
    """
    edits = np.asarray(sorted(float(m) for m in edit_mus), dtype=np.float64)
    if np.any(edits <= 0.0) or np.any(edits > 1.0):
        raise ValueError("edit cosines must lie in (0, 1]")
    nodes = list(rule.nodes)
    weights = list(rule.weights)
    faux = [False] * len(nodes)
    for mu in edits:
        if np.min(np.abs(np.asarray(nodes) - mu)) <= DEDUP_TOL:
            continue
        nodes.append(mu)
        weights.append(0.0)
        faux.append(True)
    order = np.argsort(nodes, kind="stable")
    half = HalfQuadrature(np.asarray(nodes)[order], np.asarray(weights)[order])
    return DirectionSet(half, np.asarray(faux)[order])


def make_rule(kind, n):
    """Named rule factory used by the pipeline: ``radau`` or ``gauss``."""
    if kind == "radau":
        return radau_right(n)
    if kind == "gauss":
        return half_range_gauss(n)
    raise ValueError(f"unknown quadrature {kind!r} (expected 'radau' or 'gauss')")
