"""Scalar bracketing and root polishing shared by the reduction and curve modules."""

from __future__ import annotations

import math

from .errors import NumericError

_EPS = 2.220446049250313e-16


def expand_bracket(f, start: float, factor: float, want_positive: bool, limit: int = 400):
    """Walk ``start * factor**k`` until ``f`` has the requested sign.

    Returns the first point reached; raises NumericError if none of ``limit``
    steps gets there.
    """
    x = start
    for _ in range(limit):
        fx = f(x)
        if (fx > 0.0) == want_positive and fx != 0.0:
            return x
        x *= factor
        if not math.isfinite(x) or x == 0.0:
            break
    raise NumericError(
        "could not bracket root by geometric expansion",
        {"start": start, "factor": factor, "last": x},
    )


def newton_in_bracket(f, df, lo: float, hi: float, rtol: float = 4 * _EPS, maxiter: int = 200) -> float:
    """Safeguarded Newton iteration on [lo, hi] with f(lo), f(hi) of opposite sign.

    Falls back to bisection whenever the Newton step leaves the bracket.
    Positive brackets wider than a factor 4 are bisected geometrically, so
    brackets spanning many decades still shrink quickly.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NumericError("root is not bracketed", {"lo": lo, "hi": hi, "f_lo": flo, "f_hi": fhi})
    rising = fhi > 0.0
    x = _split(lo, hi)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx > 0.0) == rising:
            hi = x
        else:
            lo = x
        d = df(x)
        x_new = x - fx / d if d != 0.0 and math.isfinite(d) else math.nan
        if not (lo < x_new < hi):
            x_new = _split(lo, hi)
        if abs(x_new - x) <= rtol * abs(x_new) or hi - lo <= rtol * abs(x_new):
            return x_new
        x = x_new
    raise NumericError("Newton iteration did not converge", {"lo": lo, "hi": hi, "x": x})


def _split(lo: float, hi: float) -> float:
    if lo > 0.0 and hi > 4.0 * lo:
        return math.sqrt(lo) * math.sqrt(hi)
    return 0.5 * (lo + hi)
