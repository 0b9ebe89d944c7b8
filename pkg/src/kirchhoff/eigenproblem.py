"""First eigenpair of -||u'||^(p-1) u'' = mu u^p on (-1, 1), p > 1.

mu_1 is the infimum of ||u'||^(p+1) over u in H_0^1 with int u^(p+1) = 1, and
the minimiser phi_1 is a multiple nu W_p of the normalised profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import profile
from .errors import RegimeError
from .special_integrals import _check_exponent, constants

__all__ = ["EigenPair", "mu1", "mu1_alt", "zeta", "nu", "phi_grad_norm", "phi1", "eigen_pair"]


@dataclass(frozen=True)
class EigenPair:
    p: float
    mu1: float
    zeta: float
    nu: float
    phi_grad_norm: float


def _check(p) -> float:
    p = _check_exponent(p)
    if p <= 1.0:
        raise RegimeError(f"the nonlocal eigenproblem requires p > 1, got p = {p}")
    return p


def mu1(p) -> float:
    """mu_1 = 2^((p-3)/2) (p+1) A_p^((p+3)/2) B_p^((p-1)/2)."""
    p = _check(p)
    c = constants(p)
    return 2.0 ** (0.5 * (p - 3.0)) * (p + 1.0) * c.a_p ** (0.5 * (p + 3.0)) * c.b_p ** (0.5 * (p - 1.0))


def mu1_alt(p) -> float:
    """The same eigenvalue grouped as ((p+1)/2) 2^((p-1)/2) A_p^((p+3)/2) B_p^((p-1)/2)."""
    p = _check(p)
    c = constants(p)
    return (
        0.5 * (p + 1.0) * 2.0 ** (0.5 * (p - 1.0))
        * c.a_p ** (0.5 * (p + 3.0)) * c.b_p ** (0.5 * (p - 1.0))
    )


def zeta(p) -> float:
    """phi_1(0) = (A_p / (2 C_p))^(1/(p+1))."""
    p = _check(p)
    c = constants(p)
    return (c.a_p / (2.0 * c.c_p)) ** (1.0 / (p + 1.0))


def nu(p) -> float:
    """Scale factor with phi_1 = nu W_p."""
    p = _check(p)
    c = constants(p)
    q = p * p - 1.0
    return (
        2.0 ** (2.0 / q)
        * (p + 1.0) ** (-1.0 / (p - 1.0))
        * c.a_p ** (-(p + 3.0) / q)
        * c.c_p ** (-1.0 / (p + 1.0))
    )


def phi_grad_norm(p) -> float:
    """||phi_1'|| = sqrt(2 A_p B_p) zeta."""
    p = _check(p)
    c = constants(p)
    return math.sqrt(2.0 * c.a_p * c.b_p) * zeta(p)


def phi1(p, x):
    """First eigenfunction nu W_p(x); accepts scalars or arrays."""
    p = _check(p)
    w = profile.evaluate(p, x)
    return nu(p) * w


def eigen_pair(p) -> EigenPair:
    return EigenPair(float(p), mu1(p), zeta(p), nu(p), phi_grad_norm(p))


def phi1_grid(p, n: int) -> profile.ProfileGrid:
    """phi_1 sampled on the symmetric n-node grid."""
    p = _check(p)
    base = profile.sample(p, n)
    s = nu(p)
    return profile.ProfileGrid(p, base.xs, s * np.asarray(base.values), s * base.max_value, s * base.grad_norm)
