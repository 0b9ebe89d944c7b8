"""Independent numerical oracles for the closed forms.

Nothing here uses the time-map formulas: residuals are plain finite
differences, the profile oracle integrates -W'' = W^p by fixed-step RK4 and
shooting, roots of the scalar equation are counted by brute-force sign scans,
and the eigenvalue is bounded by sampling the Rayleigh quotient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, NumericError, RegimeError
from .profile import ProfileGrid, symmetric_grid
from .scalar_reduction import ProblemParams, _coefficient
from .special_integrals import _check_exponent

__all__ = [
    "ResidualReport",
    "ScanResult",
    "residual",
    "eigen_residual",
    "shoot_profile",
    "sign_scan_roots",
    "rayleigh_quotient",
    "random_trials",
    "rayleigh_sample",
    "fixed_node_convergence",
]

# Nodes dropped next to each wall when forming residual maxima.
BOUNDARY_SKIP = 1
TOUCH_RTOL = 1e-9


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    nonlocal_gap: float
    nonlocal_gap_rel: float
    grid_h: float
    nodes_checked: int


def _uniform_step(xs: np.ndarray) -> float:
    d = np.diff(xs)
    h = (xs[-1] - xs[0]) / (xs.size - 1)
    if np.max(np.abs(d - h)) > 1e-12 * max(1.0, abs(h)):
        raise DomainError("residual checks need a uniform grid")
    return float(h)


def _second_difference(u: np.ndarray, h: float) -> np.ndarray:
    return (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)


def residual(grid: ProfileGrid, params: ProblemParams, skip: int = BOUNDARY_SKIP) -> ResidualReport:
    """Finite-difference residual of -(b + a ||u'||^2) u'' = lambda u^p on ``grid``.

    ||u'||^2 is the trapezoid integral of second-order finite-difference
    slopes.  The pointwise residual is scaled by lambda max(u)^p and its
    maximum is taken over interior nodes, dropping ``skip`` nodes beside
    each wall.  The nonlocal gap compares the quadrature ||u'||^2 with the
    closed-form value ``grid.grad_norm**2``.
    """
    lam = params.require_lambda()
    xs = np.asarray(grid.xs, dtype=float)
    u = np.asarray(grid.values, dtype=float)
    if xs.size < 101:
        raise DomainError(f"residual checks need n >= 101 nodes, got {xs.size}")
    h = _uniform_step(xs)
    slope = np.gradient(u, h, edge_order=2)
    t_quad = float(np.trapezoid(slope * slope, dx=h))
    upp = _second_difference(u, h)
    interior = u[1:-1]
    res = np.abs((params.b + params.a * t_quad) * upp + lam * np.abs(interior) ** params.p)
    res /= lam * float(np.max(np.abs(u))) ** params.p
    sel = res[skip : res.size - skip] if skip else res
    t_ref = float(grid.grad_norm) ** 2
    gap = abs(t_quad - t_ref)
    return ResidualReport(float(np.max(sel)), gap, gap / t_ref, h, int(sel.size))


def eigen_residual(grid: ProfileGrid, mu: float, grad_norm: float, skip: int = BOUNDARY_SKIP):
    """Pointwise residual of -||phi'||^(p-1) phi'' = mu phi^p, scaled by mu max(phi)^p.

    Returns ``(xs_checked, residuals)`` for the interior nodes kept.
    """
    xs = np.asarray(grid.xs, dtype=float)
    u = np.asarray(grid.values, dtype=float)
    h = _uniform_step(xs)
    p = grid.p
    res = np.abs(grad_norm ** (p - 1.0) * _second_difference(u, h) + mu * u[1:-1] ** p)
    res /= mu * float(np.max(u)) ** p
    inner = xs[1:-1]
    if skip:
        return inner[skip:-skip], res[skip:-skip]
    return inner, res


def _rk4_half(p: float, slope: float, m: int, record: bool):
    """Integrate W'' = -sign(W)|W|^p from x = -1 (W = 0, W' = slope) over m steps to x = 0."""
    h = 1.0 / m

    def acc(w):
        return -math.copysign(abs(w) ** p, w)

    w, v = 0.0, slope
    i0 = 0
    ws = [0.0] if record else None
    vs = [slope] if record else None
    if p < 1.0:
        # W^p is not Lipschitz at W = 0; take the first node from the
        # leading terms of the local expansion instead of an RK4 step.
        z = h
        w = slope * z - slope**p * z ** (p + 2.0) / ((p + 1.0) * (p + 2.0))
        v = slope - slope**p * z ** (p + 1.0) / (p + 1.0)
        i0 = 1
        if record:
            ws.append(w)
            vs.append(v)
    half = 0.5 * h
    for _ in range(i0, m):
        k1w, k1v = v, acc(w)
        k2w, k2v = v + half * k1v, acc(w + half * k1w)
        k3w, k3v = v + half * k2v, acc(w + half * k2w)
        k4w, k4v = v + h * k3v, acc(w + h * k3w)
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if record:
            ws.append(w)
            vs.append(v)
    if record:
        return np.array(ws), np.array(vs)
    return w, v


def shoot_profile(p, n: int = 4001) -> ProfileGrid:
    """Solve -W'' = W^p, W(+-1) = 0 by shooting on the slope W'(-1).

    The target is the symmetry condition W'(0) = 0, so only the left half is
    integrated.  The slope is bracketed by a doubling scan (from small slopes
    upward for p > 1, from large slopes downward for p < 1, so that the first
    sign change belongs to the single-bump solution) and refined with Brent's
    method.
    """
    p = _check_exponent(p)
    if p == 1.0:
        raise RegimeError("the profile equation is linear at p = 1; no normalised profile")
    if int(n) != n or n < 5 or n % 2 == 0:
        raise DomainError(f"shooting grid size must be odd and >= 5, got {n!r}")
    n = int(n)
    m = (n - 1) // 2

    def end_slope(s):
        return _rk4_half(p, s, m, record=False)[1]

    slopes = 2.0 ** np.arange(-30, 31)
    if p < 1.0:
        slopes = slopes[::-1]
    scan = []
    bracket = None
    prev_s, prev_v = None, None
    for s in slopes:
        v = end_slope(float(s))
        scan.append((float(s), v))
        if prev_v is not None and math.isfinite(v) and (v > 0.0) != (prev_v > 0.0):
            bracket = (min(prev_s, s), max(prev_s, s))
            break
        prev_s, prev_v = float(s), v
    if bracket is None:
        raise NumericError("shooting scan found no sign change of W'(0)", {"scan": scan})
    s_star = brentq(end_slope, bracket[0], bracket[1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    ws, vs = _rk4_half(p, s_star, m, record=True)
    if np.any(ws[1:] <= 0.0) or np.any(vs[:-1] <= 0.0):
        raise NumericError("shooting converged to a solution that is not a single positive bump", {"slope": s_star})
    xs = symmetric_grid(n)
    values = np.concatenate([ws, ws[-2::-1]])
    deriv = np.concatenate([vs, -vs[-2::-1]])
    grad2 = 2.0 * simpson(vs * vs, dx=1.0 / m)
    return ProfileGrid(p, xs, values, float(ws[-1]), math.sqrt(grad2), deriv)


@dataclass(frozen=True)
class ScanResult:
    count: int
    brackets: tuple[tuple[float, float], ...]
    touches: tuple[float, ...]


def sign_scan_roots(params: ProblemParams, t_lo: float = 1e-12, t_hi: float = 1e12, n: int = 20000) -> ScanResult:
    """Count roots of g(t) = a t + b - R t^((p-1)/2) on a log-spaced grid.

    Sign changes between neighbouring nodes give brackets.  A root where g
    only touches zero cannot change sign, so every discrete local minimum of
    |g| is also refined by bounded minimisation and counted as a double root
    when |g| falls below ``TOUCH_RTOL (a t + b)`` there.
    """
    if not (0.0 < t_lo < t_hi):
        raise DomainError("need 0 < t_lo < t_hi")
    if n < 1000:
        raise DomainError("sign scan needs n >= 1000 nodes")
    r = _coefficient(params)
    e = 0.5 * (params.p - 1.0)
    a, b = params.a, params.b

    def gfun(t):
        return a * t + b - r * t**e

    ts = np.geomspace(t_lo, t_hi, n)
    gs = gfun(ts)
    sgn = np.sign(gs)
    change = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    brackets = [(float(ts[i]), float(ts[i + 1])) for i in change]

    touches = []
    absg = np.abs(gs) / (a * ts + b)
    cand = np.nonzero((absg[1:-1] <= absg[:-2]) & (absg[1:-1] <= absg[2:]))[0] + 1
    logs = np.log(ts)
    for i in cand:
        if (i - 1) in change or i in change:
            continue

        def obj(s):
            t = math.exp(s)
            return abs(gfun(t)) / (a * t + b)

        res = minimize_scalar(obj, bounds=(logs[i - 1], logs[i + 1]), method="bounded",
                              options={"xatol": 1e-13})
        if res.fun <= TOUCH_RTOL:
            touches.append(float(math.exp(res.x)))
    return ScanResult(len(brackets) + len(touches), tuple(brackets), tuple(touches))


def _power_integral(lo: np.ndarray, hi: np.ndarray, q: float) -> np.ndarray:
    """(hi^q - lo^q) / (q (hi - lo)) for 0 <= lo <= hi, without cancellation."""
    out = np.empty_like(hi)
    zero = lo <= 0.0
    out[zero] = hi[zero] ** (q - 1.0) / q
    nz = ~zero
    if np.any(nz):
        ln = np.log(hi[nz] / lo[nz])
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(ln > 0.0, np.expm1(q * ln) / (q * np.expm1(ln)), 1.0)
        out[nz] = lo[nz] ** (q - 1.0) * ratio
    return out


def rayleigh_quotient(p: float, xs, values) -> float:
    """||v'||^(p+1) / int |v|^(p+1) for the piecewise-linear interpolant of ``values``.

    Both integrals are exact for the interpolant, so the result is an upper
    bound for mu_1 up to rounding.  ``values`` must vanish at both ends.
    """
    xs = np.asarray(xs, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if v[0] != 0.0 or v[-1] != 0.0:
        raise DomainError("trial function must vanish at x = +-1")
    dx = np.diff(xs)
    grad2 = float(np.sum(np.diff(v) ** 2 / dx))
    lo = np.minimum(v[:-1], v[1:])
    hi = np.maximum(v[:-1], v[1:])
    mass = float(np.sum(dx * _power_integral(lo, hi, p + 2.0)))
    if not mass > 0.0:
        raise DomainError("trial function must be nonzero")
    return grad2 ** (0.5 * (p + 1.0)) / mass


def random_trials(n_trials: int, seed: int, nodes: int = 2001):
    """Yield seeded admissible trial functions sampled on ``nodes`` points.

    Three families rotate: random piecewise-linear bumps, powers of smooth
    compact bumps with random centre and width, and full-width cosine powers
    with a small random low-frequency perturbation (these land close to the
    minimiser, which keeps the lower-bound check sharp).
    """
    rng = np.random.default_rng(seed)
    xs = symmetric_grid(nodes)
    for k in range(n_trials):
        family = k % 3
        if family == 0:
            left = rng.uniform(-1.0, 0.6)
            right = rng.uniform(left + 0.2, 1.0)
            knots = rng.integers(1, 7)
            kx = np.linspace(left, right, knots + 2)
            ky = np.concatenate([[0.0], rng.uniform(0.1, 1.0, knots), [0.0]])
            vals = np.interp(xs, kx, ky, left=0.0, right=0.0)
        elif family == 1:
            centre = rng.uniform(-0.5, 0.5)
            width = rng.uniform(0.2, 1.0 - abs(centre))
            power = rng.uniform(0.6, 3.0)
            z = 1.0 - ((xs - centre) / width) ** 2
            vals = np.where(z > 0.0, z, 0.0) ** power
        else:
            power = rng.uniform(0.7, 1.6)
            amp = rng.normal(0.0, 0.05, 3)
            wobble = 1.0 + sum(c * np.sin((j + 1) * np.pi * (xs + 1.0) / 2.0) for j, c in enumerate(amp))
            vals = np.cos(0.5 * np.pi * xs).clip(min=0.0) ** power * np.abs(wobble)
        vals[0] = vals[-1] = 0.0
        yield xs, vals


def rayleigh_sample(p, n_trials: int, seed: int = 0, nodes: int = 2001, extra=()) -> float:
    """Smallest Rayleigh quotient over seeded random trials plus ``extra`` ones.

    ``extra`` holds (xs, values) pairs, e.g. an injected eigenfunction.
    """
    p = _check_exponent(p)
    if p <= 1.0:
        raise RegimeError("Rayleigh sampling of the nonlocal eigenvalue needs p > 1")
    if n_trials < 1:
        raise DomainError("need at least one trial")
    best = math.inf
    for xs, vals in random_trials(n_trials, seed, nodes):
        best = min(best, rayleigh_quotient(p, xs, vals))
    for xs, vals in extra:
        best = min(best, rayleigh_quotient(p, xs, vals))
    return best


def fixed_node_convergence(grids, residual_fn, skip: int = BOUNDARY_SKIP):
    """Residual maxima over the abscissae shared by a sequence of refined grids.

    ``grids`` must be successive refinements (each n-1 a multiple of the
    coarsest n-1).  ``residual_fn(grid)`` returns (xs, residuals) over the
    interior nodes with no wall skipping.  Evaluating every grid on the
    coarsest grid's interior nodes measures pointwise convergence at fixed
    points rather than at nodes that slide toward the wall as h shrinks.
    Returns (maxima, successive ratios).
    """
    coarse = grids[0].n - 1
    maxima = []
    for grid in grids:
        stride = (grid.n - 1) // coarse
        if stride * coarse != grid.n - 1:
            raise DomainError("grids must be nested refinements of the coarsest one")
        _, res = residual_fn(grid)
        j = np.arange(1 + skip, coarse - skip)
        maxima.append(float(np.max(res[j * stride - 1])))
    ratios = [maxima[i] / maxima[i + 1] for i in range(len(maxima) - 1)]
    return maxima, ratios
