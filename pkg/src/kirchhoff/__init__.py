"""Exact bifurcation data for the 1-D Kirchhoff-type problem

    -(b + a ||u'||^2) u''(x) = lambda u(x)^p  on (-1, 1),  u > 0,  u(+-1) = 0,

together with the first eigenpair of -||u'||^(p-1) u'' = mu u^p and the
numerical oracles that check every closed form.
"""

from .bifurcation import (
    Branch,
    BranchPoint,
    CurveSweep,
    curve_sweep,
    lambda_of_xi,
    solution_profile,
    xi_of_lambda,
)
from .eigenproblem import EigenPair, eigen_pair, mu1, phi1, zeta
from .errors import DomainError, KirchhoffError, NumericError, RegimeError
from .profile import ProfileGrid, ProfileScalars
from .scalar_reduction import ProblemParams, ReductionRoots, SolutionCount, solve_roots
from .special_integrals import TimeMapConstants, compute_A, compute_B, compute_C, constants

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchPoint",
    "CurveSweep",
    "DomainError",
    "EigenPair",
    "KirchhoffError",
    "NumericError",
    "ProblemParams",
    "ProfileGrid",
    "ProfileScalars",
    "ReductionRoots",
    "RegimeError",
    "SolutionCount",
    "TimeMapConstants",
    "compute_A",
    "compute_B",
    "compute_C",
    "constants",
    "curve_sweep",
    "eigen_pair",
    "lambda_of_xi",
    "mu1",
    "phi1",
    "solution_profile",
    "solve_roots",
    "xi_of_lambda",
    "zeta",
]
