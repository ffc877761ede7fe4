"""
Brute-force reference route, independent of the eigendecomposition.

``expm_dense`` is a Taylor scaling-and-squaring matrix exponential. The
reference response of a slab is built by exponentiating A over a thin
sublayer, converting that two-point propagator into a reflection /
transmission map, and doubling the sublayer up to the full thickness.
Converting a thick-slab propagator in one shot is hopeless: its entries
grow like e^{lambda_max * tau} and the transmission is recovered by
cancellation, so the sublayer is kept in a regime where that costs nothing.
"""

from dataclasses import dataclass
import math

import numpy as np

from .core import ResponseMatrix

# Largest ||A t||_1 accepted by expm_dense; bounds every mode by e^40.
EXPM_NORM_LIMIT = 40.0
# Sublayer thickness target: ||A h||_1 <= this before doubling.
SUBLAYER_NORM = 1.0


class RegimeError(ValueError):
    """Input outside the regime where the oracle is trustworthy."""


@dataclass(frozen=True)
class OracleResult:
    expm: np.ndarray
    response: ResponseMatrix
    condition_note: float
    doublings: int


def expm_dense(a, t=1.0):
    """exp(A t) by scaling and squaring around a truncated Taylor series.

    The matrix is halved until ||A t||_1 / 2^s <= 0.5 and the series is
    summed until the next term is below double-precision resolution.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm_dense needs a square matrix")
    at = a * float(t)
    norm = np.linalg.norm(at, 1)
    if not np.isfinite(norm) or norm > EXPM_NORM_LIMIT:
        raise RegimeError(
            f"||A t||_1 = {norm:.3g} exceeds {EXPM_NORM_LIMIT}; modes may reach e^{norm:.0f}"
        )
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    x = at / 2.0**s
    n = a.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 40):
        term = term @ x / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(s):
        result = result @ result
    return result


def _layer_from_propagator(e, n):
    """Reflection/transmission blocks of a layer from its propagator.

    The propagator maps [I+; I-] at the top to [I+; I-] at the bottom.
    Returned as (t_plus, r_minus, r_plus, t_minus) with

        I+(bottom) = t_plus I+(top) + r_minus I-(bottom)
        I-(top)    = r_plus I+(top) + t_minus I-(bottom)
    """
    e11, e12 = e[:n, :n], e[:n, n:]
    e21, e22 = e[n:, :n], e[n:, n:]
    t_minus = np.linalg.inv(e22)
    r_plus = -t_minus @ e21
    r_minus = e12 @ t_minus
    t_plus = e11 + e12 @ r_plus
    return t_plus, r_minus, r_plus, t_minus


def _add_layers(top, bottom):
    """Stack two layers (adding method)."""
    tp1, rm1, rp1, tm1 = top
    tp2, rm2, rp2, tm2 = bottom
    n = tp1.shape[0]
    eye = np.eye(n)
    # interface intensities: u = I+, d = I- at the shared face
    k_u = np.linalg.inv(eye - rm1 @ rp2)
    k_d = np.linalg.inv(eye - rp2 @ rm1)
    t_plus = tp2 @ k_u @ tp1
    r_minus = rm2 + tp2 @ k_u @ rm1 @ tm2
    r_plus = rp1 + tm1 @ k_d @ rp2 @ tp1
    t_minus = tm1 @ k_d @ tm2
    return t_plus, r_minus, r_plus, t_minus


def reference_response(tm, tau0, tau1, return_details=False):
    """Response matrix of the slab from matrix exponentials and doubling."""
    tau0, tau1 = float(tau0), float(tau1)
    if not tau1 > tau0:
        raise ValueError("need tau1 > tau0")
    a = np.asarray(tm.full, dtype=np.float64)
    n = a.shape[0] // 2
    d = tau1 - tau0
    norm = np.linalg.norm(a, 1)
    doublings = max(0, int(math.ceil(math.log2(max(norm * d / SUBLAYER_NORM, 1.0)))))
    h = d / 2.0**doublings
    e = expm_dense(a, h)
    layer = _layer_from_propagator(e, n)
    for _ in range(doublings):
        layer = _add_layers(layer, layer)
    t_plus, r_minus, r_plus, t_minus = layer
    r = np.block([[t_plus, r_minus], [r_plus, t_minus]])
    if not np.all(np.isfinite(r)):
        raise RegimeError("reference response is not finite")
    rm = ResponseMatrix(r, tau0, tau1)
    if return_details:
        return OracleResult(e, rm, float(norm * h), doublings)
    return rm
