"""Bessel and Hankel functions plus bracketing root finders.

Everything here is a thin, contract-enforcing layer over scipy.special,
with our own zero indexing built on sequential sign scans so that the
q-th zero really is the q-th zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special
from scipy.optimize import brentq


class InvalidBracketError(ValueError):
    """The endpoints of a root bracket do not have opposite signs."""


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidBracketError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.f_lo * self.f_hi < 0.0):
            raise InvalidBracketError(
                f"f values {self.f_lo}, {self.f_hi} do not change sign"
            )


def bracket(f: Callable[[float], float], lo: float, hi: float) -> RootBracket:
    """Evaluate f at the endpoints and build a checked bracket."""
    return RootBracket(lo, hi, f(lo), f(hi))


def bessel_j(nu: float, x) -> float:
    """Bessel function of the first kind J_nu(x), nu >= -1, x >= 0."""
    if nu < -1:
        raise ValueError(f"order {nu} < -1 not supported")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_j requires x >= 0")
    return special.jv(nu, x)[()] if x.ndim == 0 else special.jv(nu, x)


def hankel1(order: int, x) -> complex:
    """Hankel function of the first kind H^(1)_order(x) for order 0 or 1, x > 0."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are supported")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("hankel1 requires x > 0 (logarithmic singularity at 0)")
    out = special.hankel1(order, x)
    return out[()] if x.ndim == 0 else out


def find_root(f: Callable[[float], float], brk: RootBracket, tol: float = 1e-12) -> float:
    """Root of f inside a sign-changing bracket, to bracket width <= tol.

    Deterministic: same inputs give bit-identical output.
    """
    return brentq(f, brk.lo, brk.hi, xtol=tol, rtol=4 * np.finfo(float).eps)


# Cache of computed zeros per order: _zeros_cache[p] is a growing list
# [j_{p,1}, j_{p,2}, ...] found by sequential sign scan, so indexing is
# guaranteed correct.
_zeros_cache: dict[float, list[float]] = {}

# J_p(x) > 0 on (0, j_{p,1}) and j_{p,1} > p, so a scan starting just
# above max(p, previous zero) with a step well under the ~pi zero
# spacing cannot skip zeros.
_SCAN_STEP = 0.5


def bessel_j_zero(p: float, q: int) -> float:
    """q-th positive zero j_{p,q} of J_p, p >= 0, q >= 1."""
    if p < 0:
        raise ValueError("order p must be >= 0")
    if q < 1:
        raise ValueError("zero index q must be >= 1")
    p = float(p)
    zeros = _zeros_cache.setdefault(p, [])
    while len(zeros) < q:
        x = zeros[-1] + 1e-9 if zeros else max(p, 1e-6)
        fx = special.jv(p, x)
        while True:
            x2 = x + _SCAN_STEP
            fx2 = special.jv(p, x2)
            if fx * fx2 < 0:
                zeros.append(brentq(lambda t: special.jv(p, t), x, x2, xtol=1e-13))
                break
            if fx2 == 0.0:  # landed exactly on a zero
                zeros.append(x2)
                x, fx = x2 + 1e-9, special.jv(p, x2 + 1e-9)
                break
            x, fx = x2, fx2
    return zeros[q - 1]
