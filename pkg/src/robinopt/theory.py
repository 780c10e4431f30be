"""The paper-level analytic results as executable numerical checks.

lambda_n^*(V, alpha) denotes the infimum of the n-th Robin eigenvalue over
domains of volume V.  The default evaluator is the ball-union catalog
(optimal disjoint unions of balls), which is exact whenever the minimizer
is such a union and an upper bound otherwise; any better evaluator with
the same signature can be plugged in.

Implemented checks: the Wolf-Keller combination (th:wkrobin), the n-ball
bound (th:nballs), the auxiliary ball B* (lemma:ball), the two gap bounds
(eq:comp / eq:explicit), the figure verification quantity, the remark
lambda_2^* < 2 lambda_1^*, and trend diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ._search import golden_minimize
from .ball import (
    ball_from_volume,
    ball_spectrum,
    ball_union_min_lambda,
    unit_ball_volume,
)
from .specfun import bessel_j_zero

# Callable (j, V, alpha) -> lambda_j^*(V, alpha)
LambdaStarFn = Callable[[int, float, float], float]


@dataclass(frozen=True)
class StarEvaluator:
    """Best-known lambda_n^*(V, alpha) for a fixed index n."""

    n: int
    eval: Callable[[float, float], float]


@dataclass(frozen=True)
class WKResult:
    k: int
    xi1: float
    xi2: float
    value: float
    per_k_values: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class BStarResult:
    n: int
    alpha: float
    radius: float
    volume: float
    lam_star: float
    residual: float


@dataclass(frozen=True)
class BoundsReport:
    kind: str  # n_ball | gap_comp | gap_explicit | fig_est
    n: int
    alpha: float
    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class TrendReport:
    n_max: int
    alpha: float
    gaps: tuple[float, ...]  # (lam_{j+1}^*)^{N/2} - (lam_j^*)^{N/2}
    ratios: tuple[float, ...]  # lam_j^* / j^{1/N}
    gaps_decreasing: bool
    ratio_max: float


# ---------------------------------------------------------------------------
# Evaluators
# ---------------------------------------------------------------------------


def catalog_lambda_star(j: int, N: int, V: float, alpha: float) -> float:
    """lambda_j^* restricted to disjoint unions of balls (exact for small
    alpha, an upper bound in general)."""
    return ball_union_min_lambda(j, N, V, alpha)[0]


def catalog_evaluator(n: int, N: int = 2) -> StarEvaluator:
    return StarEvaluator(n=n, eval=lambda V, alpha: catalog_lambda_star(n, N, V, alpha))


def ball_kth_eigenvalue(N: int, volume: float, alpha: float, k: int) -> float:
    """k-th eigenvalue (with multiplicity) of the ball of given volume."""
    spec = ball_spectrum(ball_from_volume(N, volume), alpha, k)
    lams: list[float] = []
    for e in spec:
        lams.extend([e.lam] * e.multiplicity)
    return sorted(lams)[k - 1]


def optimal_two_ball_split(
    counts: tuple[int, int], N: int, V: float, alpha: float
) -> tuple[float, float]:
    """(fraction, value): the volume fraction f of the first ball that
    minimizes max(lambda_{c1}(ball fV), lambda_{c2}(ball (1-f)V)) over
    f in (0,1), by golden-section (the WK equalization argument)."""
    c1, c2 = counts

    def worst(f: float) -> float:
        return max(
            ball_kth_eigenvalue(N, f * V, alpha, c1),
            ball_kth_eigenvalue(N, (1.0 - f) * V, alpha, c2),
        )

    f, val = golden_minimize(worst, 1e-9, 1.0 - 1e-9, tol=1e-11)
    return f, val


# ---------------------------------------------------------------------------
# Wolf-Keller combination (th:wkrobin)
# ---------------------------------------------------------------------------

_WK_T1_TOL = 1e-10


def _wk_pair(k, nk, N, V, alpha, lam_star: LambdaStarFn):
    """xi1, xi2 > 1 with xi1^-N + xi2^-N = 1 equalizing the two scaled
    branch values t_i^2 lambda^*(V, alpha/t_i); returns (xi1, xi2, value)."""

    def t2_of(t1: float) -> float:
        return (1.0 - t1**-N) ** (-1.0 / N)

    def imbalance(t1: float) -> float:
        t2 = t2_of(t1)
        return t1**2 * lam_star(k, V, alpha / t1) - t2**2 * lam_star(nk, V, alpha / t2)

    lo = 1.0 + 1e-9
    while imbalance(lo) > 0.0:
        lo = 1.0 + (lo - 1.0) / 8.0
        if lo - 1.0 < 1e-15:
            raise ArithmeticError("WK bisection: no sign change near t1 = 1")
    hi = 2.0
    while imbalance(hi) <= 0.0:
        hi *= 2.0
        if hi > 2.0**60:
            raise ArithmeticError("WK bisection: no sign change at large t1")
    while hi - lo > _WK_T1_TOL:
        mid = 0.5 * (lo + hi)
        if imbalance(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    t1 = 0.5 * (lo + hi)
    t2 = t2_of(t1)
    value = max(t1**2 * lam_star(k, V, alpha / t1), t2**2 * lam_star(nk, V, alpha / t2))
    return t1, t2, value


def wolf_keller_combine(
    n: int, N: int, V: float, alpha: float, lam_star: LambdaStarFn | None = None
) -> WKResult:
    """Best disconnected candidate value via eq:minvalue.

    For each split k + (n-k) the unique pair xi1, xi2 > 1 with
    xi1^-N + xi2^-N = 1 equalizes the two scaled branches; the result is
    the minimum over k, reported with the winning pair.
    """
    if n < 2:
        raise ValueError("wolf_keller_combine needs n >= 2")
    if V <= 0 or alpha <= 0:
        raise ValueError("need V > 0 and alpha > 0")
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    per_k: list[tuple[int, float]] = []
    best = None
    for k in range(1, n):
        xi1, xi2, value = _wk_pair(k, n - k, N, V, alpha, ls)
        per_k.append((k, value))
        if best is None or value < best[3]:
            best = (k, xi1, xi2, value)
    k, xi1, xi2, value = best
    return WKResult(k=k, xi1=xi1, xi2=xi2, value=value, per_k_values=tuple(per_k))


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


def n_ball_bound(n: int, N: int, V: float, alpha: float) -> BoundsReport:
    """th:nballs: lambda_n(B_n, alpha) <= N alpha (n omega_N / V)^(1/N)."""
    wN = unit_ball_volume(N)
    lhs = ball_kth_eigenvalue(N, V / n, alpha, 1)
    rhs = N * alpha * (n * wN / V) ** (1.0 / N)
    return BoundsReport("n_ball", n, alpha, lhs, rhs, lhs <= rhs * (1 + 1e-12))


def bstar_radius(
    n: int,
    N: int,
    V: float,
    alpha: float,
    lam_star: LambdaStarFn | None = None,
) -> BStarResult:
    """The ball B* of lemma:ball: the unique radius r with

        lambda_1(B(0,r), (V/(V+|B|))^(1/N) alpha) = lambda_n^*(V, alpha),

    found by bisection on |B| in (0, min{V, omega_N (j_{N/2-1,1} /
    sqrt(lambda_n^*))^N}); the left side is strictly decreasing in |B|.
    """
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    lam = ls(n, V, alpha)
    wN = unit_ball_volume(N)

    def lhs(vol: float) -> float:
        a_eff = (V / (V + vol)) ** (1.0 / N) * alpha
        return ball_kth_eigenvalue(N, vol, a_eff, 1)

    hi = min(V, wN * (bessel_j_zero(N / 2 - 1, 1) / math.sqrt(lam)) ** N)
    lo = hi * 1e-12
    while lhs(lo) <= lam:
        lo *= 0.25
        if lo < 1e-280:
            raise ArithmeticError("bstar bracket failed near |B| = 0")
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        if lhs(mid) > lam:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    vol = 0.5 * (lo + hi)
    res = abs(lhs(vol) - lam) / lam
    return BStarResult(
        n=n,
        alpha=alpha,
        radius=(vol / wN) ** (1.0 / N),
        volume=vol,
        lam_star=lam,
        residual=res,
    )


def gap_bound_comp(
    n: int, N: int, V: float, alpha: float, lam_star: LambdaStarFn | None = None
) -> BoundsReport:
    """eq:comp with B* from lemma:ball:

    (lam_{n+1}^*)^(N/2) - (lam_n^*)^(N/2)
        <= (omega_N/V) [lambda_1(B_1, (V|B*|/(V+|B*|))^(1/N) omega_N^(-1/N)
           alpha)]^(N/2),  B_1 the unit-radius ball.
    """
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    wN = unit_ball_volume(N)
    bs = bstar_radius(n, N, V, alpha, lam_star=ls)
    lhs = ls(n + 1, V, alpha) ** (N / 2) - bs.lam_star ** (N / 2)
    a_eff = (V * bs.volume / (V + bs.volume)) ** (1.0 / N) * wN ** (-1.0 / N) * alpha
    rhs = (wN / V) * ball_kth_eigenvalue(N, wN, a_eff, 1) ** (N / 2)
    return BoundsReport("gap_comp", n, alpha, lhs, rhs, lhs <= rhs * (1 + 1e-12))


def gap_bound_explicit(
    n: int, N: int, V: float, alpha: float, lam_star: LambdaStarFn | None = None
) -> BoundsReport:
    """eq:explicit: the B*-free (strict) version of the gap bound."""
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    wN = unit_ball_volume(N)
    lhs = ls(n + 1, V, alpha) ** (N / 2) - ls(n, V, alpha) ** (N / 2)
    rhs = (wN / V) * ball_kth_eigenvalue(
        N, wN, (V / wN) ** (1.0 / N) * alpha, 1
    ) ** (N / 2)
    return BoundsReport("gap_explicit", n, alpha, lhs, rhs, lhs < rhs)


def gap_verification_quantity(
    n: int, alpha: float, lam_star: LambdaStarFn | None = None
) -> float:
    """The figure verification quantity for N = 2, V = 1:

        lam_{n+1}^* - lam_n^*
            - pi lambda_1(B_1, (|B*|/(1+|B*|))^(1/2) pi^(-1/2) alpha),

    which the gap bound eq:comp says must always be <= 0."""
    N, V = 2, 1.0
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    rep = gap_bound_comp(n, N, V, alpha, lam_star=ls)
    return rep.lhs - rep.rhs


def fig_est_report(
    n: int, alpha: float, lam_star: LambdaStarFn | None = None
) -> BoundsReport:
    rep = gap_bound_comp(n, 2, 1.0, alpha, lam_star=lam_star)
    return BoundsReport("fig_est", n, alpha, rep.lhs, rep.rhs, rep.lhs <= rep.rhs)


def remark_gap_inequality_check(alpha: float, N: int = 2, V: float = 1.0) -> bool:
    """rem:gapbound(ii): lambda_2^*(alpha) = 2^(2/N) lambda_1(B, 2^(-1/N)
    alpha) < 2^(2/N) lambda_1(B, alpha) = 2^(2/N) lambda_1^*(alpha), with B
    the volume-V ball.  (For N = 2 this is the printed chain with the
    eq:scaled-consistent parameter alpha/sqrt(2).)  Verifies both the
    equality (to 1e-9 relative) and the strict inequality."""
    t = 2.0 ** (-1.0 / N)
    lam2_star = catalog_lambda_star(2, N, V, alpha)
    two_scaled = t**-2 * ball_kth_eigenvalue(N, V, t * alpha, 1)
    lam1_star = ball_kth_eigenvalue(N, V, alpha, 1)
    equality = abs(lam2_star - two_scaled) <= 1e-9 * lam2_star
    strict = lam2_star < 2.0 * lam1_star
    return equality and strict


def trend_checks(
    n_max: int,
    N: int,
    V: float,
    alpha: float,
    lam_star: LambdaStarFn | None = None,
    slack: float = 1e-9,
) -> TrendReport:
    """Trend diagnostics: the dimension-normalized gaps should decrease
    toward 0 (cor:growth) and lambda_n^*/n^(1/N) should stay bounded
    (th:nballs gives the linear-in-alpha cap)."""
    ls = lam_star if lam_star is not None else (
        lambda j, VV, a: catalog_lambda_star(j, N, VV, a)
    )
    lams = [ls(j, V, alpha) for j in range(1, n_max + 2)]
    gaps = tuple(
        b ** (N / 2) - a ** (N / 2) for a, b in zip(lams, lams[1:])
    )
    ratios = tuple(l / j ** (1.0 / N) for j, l in enumerate(lams[:-1], start=1))
    decreasing = all(g2 <= g1 + slack * max(1.0, g1) for g1, g2 in zip(gaps, gaps[1:]))
    return TrendReport(
        n_max=n_max,
        alpha=alpha,
        gaps=gaps,
        ratios=ratios,
        gaps_decreasing=decreasing,
        ratio_max=max(ratios),
    )
