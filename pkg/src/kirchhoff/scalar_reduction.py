"""Reduction of the nonlocal problem to one scalar equation.

Every solution of -(b + a ||u'||^2) u'' = lambda u^p is a multiple of W_p, and
t = ||u'||^2 must satisfy

    g(t) = a t + b - R t^((p-1)/2) = 0,    R = lambda ||W_p'||^(1-p).

Conversely each positive root t gives the solution u = t^(1/2) W_p / ||W_p'||.
This module counts and computes those roots for every exponent regime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import profile
from ._roots import expand_bracket, newton_in_bracket
from .errors import DomainError, RegimeError
from .special_integrals import _check_exponent

__all__ = [
    "ProblemParams",
    "SolutionCount",
    "ReductionRoots",
    "g",
    "g_prime",
    "tangency_threshold",
    "tangency_point",
    "solve_roots",
    "regime_of",
    "TANGENCY_RTOL",
]

# |L(lambda) - a| below this (relative to a) is treated as the tangent case.
TANGENCY_RTOL = 1e-10
# Strict existence thresholds (p = 1, p = 3) are compared with this slack so
# that a lambda computed from the threshold formula itself lands on "none".
THRESHOLD_RTOL = 1e-12


@dataclass(frozen=True)
class ProblemParams:
    """Coefficients (a, b, p) and, where relevant, the parameter lambda."""

    a: float
    b: float
    p: float
    lam: float | None = None

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "p", _check_exponent(self.p))
        if self.lam is not None:
            if not (math.isfinite(self.lam) and self.lam > 0):
                raise DomainError(f"lambda must be finite and > 0, got {self.lam!r}")
            object.__setattr__(self, "lam", float(self.lam))

    def require_lambda(self) -> float:
        if self.lam is None:
            raise DomainError("lambda is required for this operation")
        return self.lam


class SolutionCount(enum.IntEnum):
    ZERO = 0
    ONE = 1
    TWO = 2


@dataclass(frozen=True)
class ReductionRoots:
    params: ProblemParams
    roots: tuple[float, ...]
    count: SolutionCount
    regime: str


def regime_of(p: float) -> str:
    if p < 1.0:
        return "p<1"
    if p == 1.0:
        return "p=1"
    if p < 3.0:
        return "1<p<3"
    if p == 3.0:
        return "p=3"
    return "p>3"


def _coefficient(params: ProblemParams) -> float:
    """R = lambda ||W_p'||^(1-p)."""
    if params.p == 1.0:
        raise RegimeError("the scalar reduction needs p != 1; p = 1 is the linear case")
    lam = params.require_lambda()
    return lam * profile.grad_norm(params.p) ** (1.0 - params.p)


def g(params: ProblemParams, t: float) -> float:
    """g(t) = a t + b - R t^((p-1)/2)."""
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    r = _coefficient(params)
    return params.a * t + params.b - r * t ** (0.5 * (params.p - 1.0))


def g_prime(params: ProblemParams, t: float) -> float:
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    r = _coefficient(params)
    return params.a - 0.5 * (params.p - 1.0) * r * t ** (0.5 * (params.p - 3.0))


def tangency_threshold(a: float, b: float, p: float, lam: float) -> float:
    """L(lambda); two solutions when L > a, one when L = a, none when L < a (1 < p < 3)."""
    params = ProblemParams(a, b, p, lam)
    p = params.p
    if not 1.0 < p < 3.0:
        raise RegimeError(f"the tangency threshold is defined for 1 < p < 3, got p = {p}")
    w = profile.grad_norm(p)
    return (
        0.5
        * (p - 1.0)
        * lam ** (2.0 / (p - 1.0))
        * w**-2.0
        * (2.0 * b / (3.0 - p)) ** ((p - 3.0) / (p - 1.0))
    )


def tangency_point(a: float, b: float, p: float, lam: float) -> float:
    """Stationary point of g: its minimum for 1 < p < 3, its maximum for p > 3.

    When L(lambda) = a this is the point of tangency of a t + b with
    R t^((p-1)/2).
    """
    params = ProblemParams(a, b, p, lam)
    p = params.p
    if not (1.0 < p < 3.0 or p > 3.0):
        raise RegimeError(f"g has an interior stationary point only for 1 < p < 3 or p > 3, got p = {p}")
    r = _coefficient(params)
    return (2.0 * a / ((p - 1.0) * r)) ** (2.0 / (p - 3.0))


def solve_roots(params: ProblemParams) -> ReductionRoots:
    """All positive roots of g, in increasing order."""
    p = params.p
    lam = params.require_lambda()
    regime = regime_of(p)
    if p == 1.0:
        raise RegimeError("p = 1 has no scalar reduction; use the bifurcation module")

    def f(t):
        return g(params, t)

    def df(t):
        return g_prime(params, t)

    roots: list[float] = []
    if p < 1.0:
        lo = expand_bracket(f, 1.0, 0.5, want_positive=False)
        hi = expand_bracket(f, 1.0, 2.0, want_positive=True)
        roots.append(newton_in_bracket(f, df, lo, hi))
    elif p == 3.0:
        w2 = profile.grad_norm(3.0) ** 2
        if lam > params.a * w2 * (1.0 + THRESHOLD_RTOL):
            roots.append(params.b * w2 / (lam - params.a * w2))
    elif p > 3.0:
        t0 = tangency_point(params.a, params.b, p, lam)
        hi = expand_bracket(f, 2.0 * t0, 2.0, want_positive=False)
        roots.append(newton_in_bracket(f, df, t0, hi))
    else:
        level = tangency_threshold(params.a, params.b, p, lam)
        t0 = tangency_point(params.a, params.b, p, lam)
        if abs(level - params.a) <= TANGENCY_RTOL * params.a:
            roots.append(t0)
        elif level > params.a:
            lo = expand_bracket(f, 0.5 * t0, 0.5, want_positive=True)
            hi = expand_bracket(f, 2.0 * t0, 2.0, want_positive=True)
            roots.append(newton_in_bracket(f, df, lo, t0))
            roots.append(newton_in_bracket(f, df, t0, hi))
    return ReductionRoots(params, tuple(roots), SolutionCount(len(roots)), regime)
