"""The normalised profile W_p solving -W'' = W^p on (-1, 1), W(+-1) = 0.

Energy conservation gives W'(x) = sqrt(2/(p+1)) sqrt(eta^(p+1) - W^(p+1)) on
[-1, 0] with eta = W(0), so every value of W is fixed by the incomplete time
map

    int_0^w dtheta / sqrt(eta^(p+1) - theta^(p+1)) = sqrt(2/(p+1)) (x + 1).

Writing w = eta r and u = r^(p+1) turns the left-hand side into an incomplete
Beta integral, and the unit half-length forces

    int_0^r ds / sqrt(1 - s^(p+1)) = (1 + x) A_p.

``evaluate`` inverts this relation with a bracketed Newton iteration; the
complete relation (x = 0) gives the closed form for eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError, RegimeError
from .special_integrals import _check_exponent, _lower_beta, constants

__all__ = [
    "ProfileGrid",
    "ProfileScalars",
    "eta",
    "grad_norm",
    "scalars",
    "evaluate",
    "time_map_position",
    "sample",
    "symmetric_grid",
]

_EPS = np.finfo(float).eps
_MAX_NEWTON = 80


@dataclass(frozen=True)
class ProfileGrid:
    """Samples of a nonnegative, even solution profile on a grid of [-1, 1].

    ``derivative`` is only filled by producers that track W' themselves
    (the shooting oracle); everyone else leaves it as None.
    """

    p: float
    xs: np.ndarray
    values: np.ndarray
    max_value: float
    grad_norm: float
    derivative: np.ndarray | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return int(self.xs.size)

    @property
    def h(self) -> float:
        return float(self.xs[1] - self.xs[0])


@dataclass(frozen=True)
class ProfileScalars:
    p: float
    eta: float
    grad_norm: float


def _check_profile_exponent(p) -> float:
    p = _check_exponent(p)
    if p == 1.0:
        raise RegimeError("W_p is undefined at p = 1 (linear case has no normalised profile)")
    return p


def eta(p) -> float:
    """Sup-norm eta_p = W_p(0) = [sqrt((p+1)/2) A_p]^(2/(p-1))."""
    p = _check_profile_exponent(p)
    a_p = constants(p).a_p
    return math.exp(2.0 / (p - 1.0) * (0.5 * math.log(0.5 * (p + 1.0)) + math.log(a_p)))


def grad_norm(p) -> float:
    """L2 norm of W_p', equal to sqrt(2 A_p B_p) eta_p."""
    p = _check_profile_exponent(p)
    c = constants(p)
    return math.sqrt(2.0 * c.a_p * c.b_p) * eta(p)


def scalars(p) -> ProfileScalars:
    return ProfileScalars(float(p), eta(p), grad_norm(p))


def _newton_bracketed(fun, lo, hi, z0):
    """Vectorised Newton with bisection fallback on increasing ``fun``.

    ``fun(z)`` returns (value, derivative); each component has a root in
    [lo, hi].  Iterates until steps reach rounding level.
    """
    lo = lo.copy()
    hi = hi.copy()
    z = np.clip(z0, lo, hi)
    for _ in range(_MAX_NEWTON):
        f, df = fun(z)
        lo = np.where(f < 0.0, z, lo)
        hi = np.where(f > 0.0, z, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / df
        z_new = z - step
        bad = ~np.isfinite(z_new) | (z_new <= lo) | (z_new >= hi)
        z_new = np.where(bad, 0.5 * (lo + hi), z_new)
        z_new = np.where(f == 0.0, z, z_new)
        moved = np.abs(z_new - z)
        z = z_new
        if np.all(moved <= 4.0 * _EPS * np.maximum(np.abs(z), 1e-300)):
            return z
    raise NumericError(
        "time-map inversion did not converge",
        {"max_step": float(np.max(moved)), "bracket_width": float(np.max(hi - lo))},
    )


def _unit_profile(p: float, xneg: np.ndarray) -> np.ndarray:
    """W_p / eta_p at abscissae in [-1, 0]."""
    k = 1.0 / (p + 1.0)
    a_p = constants(p).a_p
    total = a_p / k
    frac = 1.0 + xneg
    out = np.empty_like(xneg)
    half_val = float(_lower_beta(k, 0.5, np.array([0.5]))[0][0])
    left = frac * total <= half_val

    if np.any(left):
        target = frac[left] * total

        def f_left(r):
            u = np.exp((p + 1.0) * np.log(np.maximum(r, 1e-300)))
            u = np.where(r > 0.0, u, 0.0)
            val = _lower_beta(k, 0.5, u)[0] - target
            return val, (p + 1.0) / np.sqrt(1.0 - u)

        r_max = 0.5**k
        lo = np.zeros_like(target)
        hi = np.full_like(target, r_max)
        out[left] = _newton_bracketed(f_left, lo, hi, target * k)

    right = ~left
    if np.any(right):
        target = -xneg[right] * total

        def f_right(q):
            v = q * q
            val = _lower_beta(0.5, k, v)[0] - target
            return val, 2.0 * np.exp((k - 1.0) * np.log1p(-v))

        lo = np.zeros_like(target)
        hi = np.full_like(target, math.sqrt(0.5))
        q = _newton_bracketed(f_right, lo, hi, 0.5 * target)
        out[right] = np.exp(k * np.log1p(-q * q))
    return out


def evaluate(p, x):
    """W_p(x) for scalar or array ``x`` with |x| <= 1.

    Values on (0, 1] come from even reflection of the [-1, 0] branch, so
    W(x) and W(-x) are bitwise identical.
    """
    p = _check_profile_exponent(p)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) > 1.0):
        raise DomainError("profile abscissa must satisfy |x| <= 1")
    flat = -np.abs(xa.ravel())
    vals = eta(p) * _unit_profile(p, flat)
    vals = vals.reshape(xa.shape)
    return float(vals) if vals.ndim == 0 else vals


def time_map_position(p, w):
    """Abscissa x in [-1, 0] at which the left half of W_p reaches ``w``.

    This is the incomplete time map itself, the inverse of ``evaluate`` on
    [-1, 0]; it is used for roundtrip checks.
    """
    p = _check_profile_exponent(p)
    e = eta(p)
    wa = np.asarray(w, dtype=float)
    if np.any(wa < 0.0) or np.any(wa > e * (1.0 + 4.0 * _EPS)):
        raise DomainError("profile value must lie in [0, eta_p]")
    r = np.clip(wa.ravel() / e, 0.0, 1.0)
    k = 1.0 / (p + 1.0)
    total = constants(p).a_p / k
    with np.errstate(divide="ignore"):
        logu = (p + 1.0) * np.log(r)
    u = np.exp(logu)
    out = np.empty_like(r)
    low = u <= 0.5
    if np.any(low):
        out[low] = _lower_beta(k, 0.5, u[low])[0] / total - 1.0
    if np.any(~low):
        v = -np.expm1(logu[~low])
        out[~low] = -_lower_beta(0.5, k, v)[0] / total
    out = out.reshape(wa.shape)
    return float(out) if out.ndim == 0 else out


def symmetric_grid(n: int) -> np.ndarray:
    """Uniform grid on [-1, 1] with x[n-1-i] == -x[i] exactly."""
    m = n - 1
    i = np.arange(n)
    return (2.0 * i - m) / m


def sample(p, n: int) -> ProfileGrid:
    """Sample W_p on ``n`` uniform nodes (n odd, so x = 0 is a node)."""
    p = _check_profile_exponent(p)
    if int(n) != n or n < 3 or n % 2 == 0:
        raise DomainError(f"grid size must be an odd integer >= 3, got {n!r}")
    n = int(n)
    xs = symmetric_grid(n)
    half = xs[: n // 2 + 1]
    left = eta(p) * _unit_profile(p, half)
    left[0] = 0.0
    values = np.concatenate([left, left[-2::-1]])
    return ProfileGrid(p, xs, values, eta(p), grad_norm(p))
