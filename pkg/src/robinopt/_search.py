"""Internal helpers: golden-section minimization and capped thread maps."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_minimize(f, lo: float, hi: float, tol: float):
    """Golden-section search for the minimum of a unimodal f on [lo, hi].

    Returns (x, f(x)).  Deterministic; terminates when the bracket width
    drops below tol.
    """
    a, b = lo, hi
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        h *= _INVPHI
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * h
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ROBINOPT_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map preserving input order, threaded when ROBINOPT_THREADS > 1."""
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
