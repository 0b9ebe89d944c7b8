"""Singular time-map constants A_p, B_p and C_p.

For p > 0 the three constants are

    A_p = int_0^1 (1 - s^(p+1))^(-1/2) ds
    B_p = int_0^1 (1 - s^(p+1))^(1/2) ds
    C_p = int_0^1 s^(p+1) (1 - s^(p+1))^(-1/2) ds

The inverse square root at s = 1 is removed by the change of variables
s^(p+1) = u = sin^2(theta), after which every constant is a Beta-type
integral  int_0^1 u^(alpha-1) (1-u)^(beta-1) du / (p+1)  with only algebraic
endpoint behaviour.  Those are evaluated with a double-exponential
(tanh-sinh) rule whose integrand is assembled in log space, so that node
abscissae a few hundred orders of magnitude from an endpoint still carry full
relative precision.  This keeps the relative error near 1e-15 for any p > 0,
including large p where u^(1/(p+1) - 1) is close to non-integrable.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError

__all__ = [
    "TimeMapConstants",
    "compute_A",
    "compute_B",
    "compute_C",
    "constants",
]

QUAD_TOL = 1e-13
MAX_NODES = 2**16
_MIN_LEVEL = 3
_TAIL_LOG = 45.0


@dataclass(frozen=True)
class TimeMapConstants:
    p: float
    a_p: float
    b_p: float
    c_p: float
    est_error: float


def _check_exponent(p) -> float:
    try:
        p = float(p)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"exponent p must be a real number, got {p!r}") from exc
    if not math.isfinite(p) or p <= 0.0:
        raise DomainError(f"exponent p must be finite and > 0, got {p!r}")
    return p


@lru_cache(maxsize=64)
def _de_level_nodes(level: int, tmax: float) -> np.ndarray:
    """Abscissae t of the tanh-sinh rule added at ``level`` (step 2**-level)."""
    h = 2.0**-level
    k = np.arange(-math.ceil(tmax / h), math.ceil(tmax / h) + 1)
    if level > 0:
        k = k[k % 2 != 0]
    return k * h


def _de_terms(t: np.ndarray, a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Integrand times Jacobian on nodes ``t`` for each upper limit ``x``.

    Computes y^a (1-y) (1 - x y)^(b-1) pi cosh(t), the mapped form of
    int_0^1 y^(a-1) (1 - x y)^(b-1) dy with y = (1 + tanh(pi/2 sinh t)) / 2.
    """
    tau = 0.5 * math.pi * np.sinh(t)
    log_y = -np.logaddexp(0.0, -2.0 * tau)
    log_1my = -np.logaddexp(0.0, 2.0 * tau)
    y = np.exp(log_y)
    xs = x[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_1mxy = np.where(xs == 1.0, log_1my[None, :], np.log1p(-xs * y[None, :]))
    log_f = a * log_y + log_1my + math.log(math.pi) + np.log(np.cosh(t))
    log_f = log_f[None, :] + (b - 1.0) * log_1mxy
    return np.exp(log_f)


def _lower_beta(a: float, b: float, x, tol: float = QUAD_TOL):
    """int_0^x u^(a-1) (1-u)^(b-1) du for a, b > 0 and 0 <= x <= 1.

    Vectorised over ``x``.  Accurate to roughly machine precision when the
    upper limit stays away from 1 (x <= 1/2) or equals 1 exactly; callers
    route limits in (1/2, 1) through the complementary integral instead.
    Returns ``(values, error_estimate)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    live = x > 0.0
    if not np.any(live):
        return out, 0.0
    xl = x[live]
    edge = min(a, b) if np.any(xl == 1.0) else min(a, 1.0)
    tmax = math.asinh((_TAIL_LOG + 10.0) / (math.pi * edge))

    level = 0
    h = 1.0
    sums = _de_terms(_de_level_nodes(0, tmax), a, b, xl).sum(axis=1)
    estimate = h * sums
    used = _de_level_nodes(0, tmax).size
    err = np.inf
    while True:
        level += 1
        h *= 0.5
        nodes = _de_level_nodes(level, tmax)
        used += nodes.size
        sums = sums + _de_terms(nodes, a, b, xl).sum(axis=1)
        refined = h * sums
        diff = np.abs(refined - estimate)
        err = float(np.max(diff / np.maximum(np.abs(refined), 1e-300)))
        estimate = refined
        if level >= _MIN_LEVEL and err <= tol:
            break
        if used > MAX_NODES:
            raise NumericError(
                "tanh-sinh refinement exceeded the node cap",
                {"a": a, "b": b, "level": level, "rel_change": err},
            )
    out[live] = np.exp(a * np.log(xl)) * estimate
    return out, err


def _complete_beta(a: float, b: float) -> tuple[float, float]:
    vals, err = _lower_beta(a, b, np.array([1.0]))
    return float(vals[0]), err * float(vals[0])


def compute_A(p) -> float:
    """A_p = int_0^1 ds / sqrt(1 - s^(p+1))."""
    return constants(p).a_p


def compute_B(p) -> float:
    """B_p = int_0^1 sqrt(1 - s^(p+1)) ds."""
    return constants(p).b_p


def compute_C(p) -> float:
    """C_p = int_0^1 s^(p+1) / sqrt(1 - s^(p+1)) ds."""
    return constants(p).c_p


_cache_lock = threading.Lock()


@lru_cache(maxsize=4096)
def _constants_cached(p: float) -> TimeMapConstants:
    k = 1.0 / (p + 1.0)
    a_val, a_err = _complete_beta(k, 0.5)
    b_val, b_err = _complete_beta(k, 1.5)
    c_val, c_err = _complete_beta(k + 1.0, 0.5)
    vals = [k * a_val, k * b_val, k * c_val]
    if not all(math.isfinite(v) and v > 0.0 for v in vals):
        raise NumericError("non-finite time-map constant", {"p": p, "values": vals})
    est = k * (a_err + b_err + c_err) + 4.0 * np.finfo(float).eps * vals[0]
    return TimeMapConstants(p, vals[0], vals[1], vals[2], float(est))


def constants(p) -> TimeMapConstants:
    """Return (A_p, B_p, C_p) for ``p`` with a combined error estimate.

    Results are memoised per float value of ``p``; the cache is guarded so
    concurrent callers never race on insertion.
    """
    p = _check_exponent(p)
    with _cache_lock:
        return _constants_cached(p)
