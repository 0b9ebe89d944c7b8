"""Exact bifurcation curves lambda(xi), their inverses and the solution profiles.

With xi = ||u||_inf the curve is

    lambda(xi) = (p+1)/2 A_p^2 (2 A_p B_p a xi^(3-p) + b xi^(1-p))     (p != 1)
    lambda(xi) = pi^4/16 a xi^2 + pi^2/4 b                            (p = 1)

and every solution satisfies ||u'||^2 = 2 A_p B_p xi^2.  The curve is
increasing for p <= 1, decreasing for p >= 3 and U-shaped in between.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import profile
from ._roots import newton_in_bracket
from .errors import DomainError, NumericError, RegimeError
from .profile import ProfileGrid, symmetric_grid
from .scalar_reduction import (
    TANGENCY_RTOL,
    THRESHOLD_RTOL,
    ProblemParams,
    tangency_threshold,
)
from .special_integrals import constants

__all__ = [
    "ProblemParams",
    "Branch",
    "BranchPoint",
    "CurveSweep",
    "lambda_of_xi",
    "lambda_of_xi_cubic",
    "lambda_of_xi_linear",
    "dlambda_dxi",
    "xi_at_minimum",
    "existence_threshold",
    "q1",
    "q2",
    "xi_of_lambda",
    "profile_scale",
    "solution_profile",
    "curve_shape",
    "curve_sweep",
]

_PI2_4 = math.pi**2 / 4.0


class Branch(str, enum.Enum):
    UNIQUE = "Unique"
    LOWER = "Lower"
    UPPER = "Upper"


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    xi: float
    branch: Branch
    grad_norm: float

    @property
    def t(self) -> float:
        """||u'||^2 on this branch."""
        return self.grad_norm**2


@dataclass(frozen=True)
class CurveSweep:
    params: ProblemParams
    points: tuple[BranchPoint, ...]
    shape: str


def q1() -> float:
    """W_2(0) = (3/2) A_2^2."""
    return 1.5 * constants(2.0).a_p ** 2


def q2() -> float:
    """||W_2'|| = (3/sqrt 2) A_2^(5/2) B_2^(1/2)."""
    c = constants(2.0)
    return 3.0 / math.sqrt(2.0) * c.a_p**2.5 * c.b_p**0.5


def _check_xi(xi):
    xa = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(xa <= 0.0):
        raise DomainError("xi must be finite and > 0")
    return xa


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def lambda_of_xi_linear(a, b, xi):
    """p = 1 curve: pi^4/16 a xi^2 + pi^2/4 b."""
    xa = _check_xi(xi)
    return _scalar(_PI2_4**2 * a * xa**2 + _PI2_4 * b)


def lambda_of_xi_cubic(a, b, xi):
    """p = 3 curve in its own closed form: 4 a A_3^3 B_3 + 2 A_3^2 b xi^-2."""
    xa = _check_xi(xi)
    c = constants(3.0)
    return _scalar(4.0 * a * c.a_p**3 * c.b_p + 2.0 * c.a_p**2 * b * xa**-2.0)


def lambda_of_xi(a, b, p, xi):
    """Parameter value of the solution with sup-norm ``xi`` (vectorised over xi)."""
    params = ProblemParams(a, b, p)
    xa = _check_xi(xi)
    p = params.p
    if p == 1.0:
        return lambda_of_xi_linear(a, b, xa)
    c = constants(p)
    lam = 0.5 * (p + 1.0) * c.a_p**2 * (
        2.0 * c.a_p * c.b_p * a * xa ** (3.0 - p) + b * xa ** (1.0 - p)
    )
    return _scalar(lam)


def dlambda_dxi(a, b, p, xi):
    params = ProblemParams(a, b, p)
    xa = _check_xi(xi)
    p = params.p
    if p == 1.0:
        return _scalar(2.0 * _PI2_4**2 * a * xa)
    c = constants(p)
    return _scalar(
        0.5
        * (p + 1.0)
        * c.a_p**2
        * (2.0 * c.a_p * c.b_p * a * (3.0 - p) * xa ** (2.0 - p) + b * (1.0 - p) * xa ** (-p))
    )


def xi_at_minimum(a, b, p) -> float:
    """argmin of lambda(xi) for 1 < p < 3: sqrt((p-1) b / ((3-p) 2 A_p B_p a))."""
    params = ProblemParams(a, b, p)
    p = params.p
    if not 1.0 < p < 3.0:
        raise RegimeError(f"lambda(xi) has an interior minimum only for 1 < p < 3, got p = {p}")
    c = constants(p)
    return math.sqrt((p - 1.0) * b / ((3.0 - p) * 2.0 * c.a_p * c.b_p * a))


def existence_threshold(a, b, p) -> tuple[float, str]:
    """Infimum of lambda over the curve and whether it is attained.

    Returns (value, kind) with kind "none" (every lambda > 0 works),
    "strict" (solutions exist iff lambda > value) or "attained" (iff
    lambda >= value).
    """
    params = ProblemParams(a, b, p)
    p = params.p
    if p < 1.0 or p > 3.0:
        return 0.0, "none"
    if p == 1.0:
        return _PI2_4 * b, "strict"
    if p == 3.0:
        return a * profile.grad_norm(3.0) ** 2, "strict"
    return float(lambda_of_xi(a, b, p, xi_at_minimum(a, b, p))), "attained"


def _grad_norm_of_xi(p: float, xi: float) -> float:
    if p == 1.0:
        return math.sqrt(_PI2_4) * xi
    c = constants(p)
    return math.sqrt(2.0 * c.a_p * c.b_p) * xi


def _point(a, b, p, lam, xi, branch) -> BranchPoint:
    return BranchPoint(float(lam), float(xi), branch, _grad_norm_of_xi(p, xi))


def _invert_monotone(a, b, p, lam, lo, hi, increasing):
    """Solve lambda(xi) = lam on a monotone piece of the curve, in log xi.

    ``lo``/``hi`` of None mean the piece extends to 0 / infinity.
    """

    def f(s):
        return math.log(lambda_of_xi(a, b, p, math.exp(s))) - math.log(lam)

    def df(s):
        x = math.exp(s)
        return x * dlambda_dxi(a, b, p, x) / lambda_of_xi(a, b, p, x)

    if lo is None:
        start = math.log(hi) - 1.0 if hi is not None else 0.0
        slo = _walk(f, start, -1.0, want_positive=not increasing)
    else:
        slo = math.log(lo)
    if hi is None:
        start = max(slo + 1.0, 0.0) if lo is None else slo + 1.0
        shi = _walk(f, start, 1.0, want_positive=increasing)
    else:
        shi = math.log(hi)
    return math.exp(newton_in_bracket(f, df, slo, shi))


def _walk(f, start, step, want_positive, limit=4000):
    s = start
    for _ in range(limit):
        v = f(s)
        if v != 0.0 and (v > 0.0) == want_positive:
            return s
        s += step
    raise NumericError("could not bracket xi on the bifurcation curve", {"last_log_xi": s})


def xi_of_lambda(a, b, p, lam) -> list[BranchPoint]:
    """All branch points with lambda(xi) = lam, ordered Lower, Upper (or one Unique).

    An empty list means no positive solution exists for this lambda.
    """
    params = ProblemParams(a, b, p, lam)
    p = params.p
    if p == 1.0:
        thr = _PI2_4 * b
        if lam <= thr * (1.0 + THRESHOLD_RTOL):
            return []
        xi = (4.0 / math.pi**2) * math.sqrt((lam - thr) / a)
        return [_point(a, b, p, lam, xi, Branch.UNIQUE)]
    if p == 3.0:
        c = constants(3.0)
        thr, _ = existence_threshold(a, b, 3.0)
        if lam <= thr * (1.0 + THRESHOLD_RTOL):
            return []
        xi = math.sqrt(2.0 * c.a_p**2 * b / (lam - thr))
        return [_point(a, b, p, lam, xi, Branch.UNIQUE)]
    if p < 1.0 or p > 3.0:
        xi = _invert_monotone(a, b, p, lam, None, None, increasing=p < 1.0)
        return [_point(a, b, p, lam, xi, Branch.UNIQUE)]

    level = tangency_threshold(a, b, p, lam)
    xi_min = xi_at_minimum(a, b, p)
    if abs(level - a) <= TANGENCY_RTOL * a:
        if p == 2.0:
            xi_min = math.sqrt(b / a) * q1() / q2()
        return [_point(a, b, p, lam, xi_min, Branch.UNIQUE)]
    if level < a:
        return []
    if p == 2.0:
        ratio = lam / q2()
        disc = math.sqrt(max(ratio**2 - 4.0 * a * b, 0.0))
        scale = q1() / q2() / (2.0 * a)
        upper = (ratio + disc) * scale
        # Lower root via the product of roots, free of cancellation.
        lower = (4.0 * a * b / (ratio + disc)) * scale
    else:
        lower = _invert_monotone(a, b, p, lam, None, xi_min, increasing=False)
        upper = _invert_monotone(a, b, p, lam, xi_min, None, increasing=True)
    return [
        _point(a, b, p, lam, lower, Branch.LOWER),
        _point(a, b, p, lam, upper, Branch.UPPER),
    ]


def profile_scale(a, b, p, lam, xi) -> float:
    """Factor c with u = c W_p, written through lambda and xi only.

    Equals (lambda / (b + 2 A_p B_p a xi^2))^(1/(1-p)), which must agree with
    xi / eta_p on any branch.
    """
    c = constants(p)
    return (lam / (b + 2.0 * c.a_p * c.b_p * a * xi**2)) ** (1.0 / (1.0 - p))


def _select_branch(points, branch, params) -> BranchPoint:
    if not points:
        thr, kind = existence_threshold(params.a, params.b, params.p)
        rel = ">" if kind == "strict" else ">="
        raise RegimeError(
            f"no positive solution for lambda = {params.lam!r}: requires lambda {rel} {thr!r}"
        )
    if branch is None:
        if len(points) > 1:
            raise RegimeError("two branches exist; pass branch='Lower' or branch='Upper'")
        return points[0]
    branch = Branch(branch)
    for pt in points:
        if pt.branch is branch:
            return pt
    raise RegimeError(
        f"branch {branch.value} does not exist here; available: {[pt.branch.value for pt in points]}"
    )


def solution_profile(a, b, p, lam, branch=None, n: int = 2001) -> ProfileGrid:
    """Sample the exact solution u_lambda of the selected branch on ``n`` nodes."""
    params = ProblemParams(a, b, p, lam)
    pt = _select_branch(xi_of_lambda(a, b, p, lam), branch, params)
    p = params.p
    if p == 1.0:
        if int(n) != n or n < 3 or n % 2 == 0:
            raise DomainError(f"grid size must be an odd integer >= 3, got {n!r}")
        xs = symmetric_grid(int(n))
        half = np.cos(0.5 * math.pi * xs[: int(n) // 2 + 1])
        half[0] = 0.0
        values = pt.xi * np.concatenate([half, half[-2::-1]])
        return ProfileGrid(p, xs, values, pt.xi, pt.grad_norm)
    base = profile.sample(p, n)
    # u = t^(1/2) ||W_p'||^-1 W_p, i.e. xi / eta_p times W_p.
    scale = math.sqrt(pt.t) / base.grad_norm
    return ProfileGrid(p, base.xs, scale * base.values, scale * base.max_value, pt.grad_norm)


def curve_shape(p: float) -> str:
    if p <= 1.0:
        return "increasing"
    if p < 3.0:
        return "U-shaped"
    return "decreasing"


def curve_sweep(a, b, p, xi_range, n: int) -> CurveSweep:
    """Log-spaced samples of lambda(xi) over ``xi_range = (xi_min, xi_max)``."""
    params = ProblemParams(a, b, p)
    try:
        lo, hi = (float(v) for v in xi_range)
    except (TypeError, ValueError) as exc:
        raise DomainError("xi_range must be a pair (xi_min, xi_max)") from exc
    if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo < hi):
        raise DomainError(f"need 0 < xi_min < xi_max, got ({lo!r}, {hi!r})")
    if int(n) != n or n < 2:
        raise DomainError(f"need n >= 2 samples, got {n!r}")
    xis = np.geomspace(lo, hi, int(n))
    lams = np.atleast_1d(lambda_of_xi(a, b, p, xis))
    p = params.p
    split = xi_at_minimum(a, b, p) if 1.0 < p < 3.0 else None
    pts = []
    for xi, lam in zip(xis, lams):
        if split is None:
            br = Branch.UNIQUE
        else:
            br = Branch.LOWER if xi < split else Branch.UPPER
        pts.append(_point(a, b, p, lam, xi, br))
    return CurveSweep(params, tuple(pts), curve_shape(p))
