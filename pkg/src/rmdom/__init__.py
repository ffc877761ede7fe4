"""Response-matrix discrete-ordinates solver for the 1D slab transport equation."""

from ._kernels import BACKEND
from .core import (
    BoundaryData,
    EigenSystem,
    ResponseMatrix,
    SolverError,
    TransportMatrix,
    assemble,
    beam_boundary,
    eigendecompose,
    gamma_minus,
    interior,
    response_matrix,
    solve_boundary,
)
from .phase import PhaseFunction, build_scatter_matrices, eval_phase, load_coefficients
from .quadrature import DirectionSet, HalfQuadrature, build_direction_set, gauss_legendre, radau_right
from .solver import SlabProblem, SolutionTable, solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryData",
    "DirectionSet",
    "EigenSystem",
    "HalfQuadrature",
    "PhaseFunction",
    "ResponseMatrix",
    "SlabProblem",
    "SolutionTable",
    "SolverError",
    "TransportMatrix",
    "assemble",
    "beam_boundary",
    "build_direction_set",
    "build_scatter_matrices",
    "eigendecompose",
    "eval_phase",
    "gamma_minus",
    "gauss_legendre",
    "interior",
    "load_coefficients",
    "radau_right",
    "response_matrix",
    "solve",
    "solve_boundary",
]
