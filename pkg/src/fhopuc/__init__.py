"""Orthogonal polynomials on the unit circle for Fisher-Hartwig weights:
exact moments and recursion, Szegő data, asymptotic predictors and zeros."""

from .numerics import DOUBLE, OCTUPLE, QUAD, ComplexPoly, Precision
from .weight import AnalyticFactor, MomentTable, Singularity, WeightSpec, moments, preset
from .opuc import OpucState, eval_phi, eval_phi_star, levinson, toeplitz_det
from .szego import SzegoData, build_szego
from .specfun import calH, find_h

__all__ = [
    "DOUBLE", "QUAD", "OCTUPLE", "Precision", "ComplexPoly",
    "AnalyticFactor", "Singularity", "WeightSpec", "MomentTable", "moments", "preset",
    "OpucState", "levinson", "eval_phi", "eval_phi_star", "toeplitz_det",
    "SzegoData", "build_szego", "calH", "find_h",
]
