"""Analytic Robin spectra of N-dimensional balls and unions of balls.

The radial part of an eigenfunction of the ball with angular index ell is
r^{1-N/2} J_nu(sqrt(lambda) r) with nu = ell + N/2 - 1, and the Robin
condition reduces to

    z J_{nu-1}(z) + (alpha*r - ell - N + 2) J_nu(z) = 0,   z = sqrt(lambda) r.

The k-th positive root of this equation lies strictly between consecutive
zeros of J_nu, which gives guaranteed brackets for every eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import special
from scipy.optimize import brentq

from .specfun import bessel_j_zero


@dataclass(frozen=True)
class BallSpec:
    dim: int
    radius: float

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dimension must be >= 2")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius**self.dim


@dataclass(frozen=True)
class BallSpectrumEntry:
    lam: float
    ell: int
    k: int
    multiplicity: int


@dataclass(frozen=True)
class TransitionResult:
    n: int
    alpha_n: float
    gamma0: float
    C_N: float


def unit_ball_volume(N: int) -> float:
    """Volume of the unit ball in R^N: pi^(N/2) / Gamma(N/2 + 1)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return math.pi ** (N / 2) / math.gamma(N / 2 + 1)


def ball_from_volume(N: int, volume: float) -> BallSpec:
    return BallSpec(N, (volume / unit_ball_volume(N)) ** (1.0 / N))


@lru_cache(maxsize=None)
def sphere_multiplicity(N: int, ell: int) -> int:
    """Dimension of the space of spherical harmonics of degree ell on S^{N-1}."""
    if ell == 0:
        return 1
    if N == 2:
        return 2
    lower = math.comb(N + ell - 3, ell - 2) if ell >= 2 else 0
    return math.comb(N + ell - 1, ell) - lower


def _radial_root(N: int, ell: int, k: int, c0: float, c1: float) -> float:
    """k-th positive root z of z*J_{nu-1}(z) + (c0 + c1*z)*J_nu(z) = 0.

    nu = ell + N/2 - 1.  Requires ell + (c0 + 2 - 2*nu... ) i.e. the
    combination to be positive near 0, which holds for every Robin
    parameter alpha > 0 and for ell >= 1 at alpha = 0.
    """
    nu = ell + N / 2 - 1

    def f(z):
        return z * special.jv(nu - 1, z) + (c0 + c1 * z) * special.jv(nu, z)

    hi = bessel_j_zero(nu, k)
    lo = bessel_j_zero(nu, k - 1) if k > 1 else 0.0
    # endpoint values z*J_{nu-1}(z) at zeros of J_nu alternate in sign and
    # f(0+) > 0, so (lo, hi) always brackets exactly one root; nudge off
    # the endpoints where f vanishes only in the k = 1 case near z = 0.
    if k == 1:
        lo = hi * 0.5
        while f(lo) <= 0.0:
            lo *= 0.5
            if lo < 1e-140:
                raise ArithmeticError("failed to bracket radial root near 0")
        if f(hi) >= 0.0:  # cannot happen for a valid equation
            raise ArithmeticError("radial bracket endpoint sign unexpected")
        return brentq(f, lo, hi, xtol=1e-300, rtol=1e-14)
    a = lo * (1 + 1e-13)
    b = hi * (1 - 1e-13)
    fa, fb = f(a), f(b)
    if fa * fb >= 0.0:
        raise ArithmeticError("radial bracket endpoint sign unexpected")
    return brentq(f, a, b, xtol=1e-300, rtol=1e-14)


def ball_eigenvalue(ball: BallSpec, alpha: float, ell: int, k: int) -> float:
    """k-th eigenvalue of the angular-ell Robin boundary equation on a ball."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if ell < 0 or k < 1:
        raise ValueError("need ell >= 0 and k >= 1")
    N, r = ball.dim, ball.radius
    if alpha == 0.0 and ell == 0:
        if k == 1:
            return 0.0  # Neumann constant mode, exact
        z = _radial_root(N, 0, k, -N + 2.0, 0.0)
        return (z / r) ** 2
    z = _radial_root(N, ell, k, alpha * r - ell - N + 2.0, 0.0)
    return (z / r) ** 2


def ball_spectrum(ball: BallSpec, alpha: float, count: int) -> list[BallSpectrumEntry]:
    """The lowest `count` eigenvalues of the ball with multiplicities, sorted."""
    if count < 1:
        raise ValueError("count must be >= 1")
    entries: list[BallSpectrumEntry] = []

    def total(es):
        return sum(e.multiplicity for e in es)

    def cutoff(es):
        # eigenvalue of the current count-th candidate, or +inf if not
        # enough collected yet
        c = 0
        for e in es:
            c += e.multiplicity
            if c >= count:
                return e.lam
        return math.inf

    ell = 0
    while True:
        first = ball_eigenvalue(ball, alpha, ell, 1)
        if first > cutoff(entries):
            break  # first roots increase with ell, so no later ell matters
        mult = sphere_multiplicity(ball.dim, ell)
        k = 1
        lam = first
        while lam <= cutoff(entries) or total(entries) < count:
            entries.append(BallSpectrumEntry(lam, ell, k, mult))
            entries.sort(key=lambda e: e.lam)
            while total(entries) - entries[-1].multiplicity >= count:
                entries.pop()
            k += 1
            lam = ball_eigenvalue(ball, alpha, ell, k)
        ell += 1
    return entries


def union_of_balls_eigenvalue(balls: list[BallSpec], alpha: float, n: int) -> float:
    """n-th smallest eigenvalue of the disjoint union of the given balls."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dims = {b.dim for b in balls}
    if len(dims) != 1:
        raise ValueError("all balls must share one dimension")
    merged: list[float] = []
    for b in balls:
        for e in ball_spectrum(b, alpha, n):
            merged.extend([e.lam] * e.multiplicity)
    merged.sort()
    return merged[n - 1]


def ball_union_min_lambda_k(n: int, k: int, N: int, V: float, alpha: float):
    """Least n-th eigenvalue over unions of exactly k disjoint balls of
    total volume V.  Returns (value, counts, volumes)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if V <= 0 or alpha <= 0:
        raise ValueError("need V > 0, alpha > 0")
    wN = unit_ball_volume(N)

    def min_volume(lam):
        radii = _count_radii(N, alpha, lam, n)
        w = [wN * r**N for r in radii]
        # W[c][m]: least volume of exactly m balls carrying c eigenvalues
        inf = math.inf
        W = [[inf] * (k + 1) for _ in range(n + 1)]
        choice = [[0] * (k + 1) for _ in range(n + 1)]
        W[0][0] = 0.0
        for c in range(1, n + 1):
            for m in range(1, min(k, c) + 1):
                for j in range(1, c - m + 2):
                    v = W[c - j][m - 1] + w[j - 1]
                    if v < W[c][m]:
                        W[c][m], choice[c][m] = v, j
        counts = []
        c, m = n, k
        while m > 0:
            counts.append(choice[c][m])
            c -= choice[c][m]
            m -= 1
        return W[n][k], sorted(counts, reverse=True), w

    hi = union_of_balls_eigenvalue(
        [ball_from_volume(N, V / k)] * k, alpha, n
    ) * (1 + 1e-9)
    lo = hi / 2
    while min_volume(lo)[0] <= V:
        hi = lo
        lo /= 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if min_volume(mid)[0] <= V:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    _, counts, w = min_volume(lam)
    return lam, counts, [w[c - 1] for c in counts]


def transition_alpha(N: int, n: int, V: float) -> TransitionResult:
    """Robin parameter at which the n-th eigenvalue of n equal balls ties the
    n-th eigenvalue of n-(N+1) equal balls plus one larger ball."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if n < N + 1:
        # n = N+1 is allowed: zero small balls, the tie is against a
        # single larger ball
        raise ValueError(f"need n >= N+1 = {N + 1}")
    if V <= 0:
        raise ValueError("V must be positive")
    C = (N + 1) ** (1.0 / N)
    nu = N / 2 - 1
    mu = N / 2

    def f(g):
        return (
            special.jv(nu, g) * special.jv(mu, C * g)
            - C * g * special.jv(nu, g) * special.jv(mu + 1, C * g)
            + C * g * special.jv(mu, g) * special.jv(mu, C * g)
        )

    # gamma0 must precede the first zero of J_{N/2-1} for alpha_n > 0
    upper = bessel_j_zero(nu, 1)
    g = 0.01
    gamma0 = None
    fg = f(g)
    while g < upper:
        g2 = min(g + 0.01, upper)
        fg2 = f(g2)
        if fg * fg2 < 0:
            gamma0 = brentq(f, g, g2, xtol=1e-14)
            break
        g, fg = g2, fg2
    if gamma0 is None:
        raise ArithmeticError("no root of the transition equation found")
    coeff = gamma0 * special.jv(mu, gamma0) / special.jv(nu, gamma0)
    alpha_n = coeff * (n * unit_ball_volume(N) / V) ** (1.0 / N)
    return TransitionResult(n=n, alpha_n=alpha_n, gamma0=gamma0, C_N=C)


def ball_lambda1_alpha_slope(ball: BallSpec, alpha: float) -> float:
    """d lambda_1 / d alpha for a ball; N/radius at alpha = 0."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0.0:
        return ball.dim / ball.radius  # surface/volume of the ball
    h = 1e-6 * max(1.0, alpha)
    lo = max(alpha - h, 0.0)
    f_hi = ball_eigenvalue(ball, alpha + h, 0, 1)
    f_lo = ball_eigenvalue(ball, lo, 0, 1)
    return (f_hi - f_lo) / (alpha + h - lo)


# ---------------------------------------------------------------------------
# Optimal unions of balls (the lambda_n^* catalog restricted to ball unions)
# ---------------------------------------------------------------------------


def _count_radii(N: int, alpha: float, lam: float, count: int) -> list[float]:
    """r_1 <= ... <= r_count where r_k is the smallest radius at which a ball
    has k Robin eigenvalues <= lam.

    The mode (ell, j) crosses lam at radius z/sqrt(lam), where z solves the
    radial equation with alpha*r rewritten as (alpha/sqrt(lam)) * z.
    """
    s = math.sqrt(lam)
    c1 = alpha / s
    zs: list[float] = []  # mode roots, expanded by multiplicity

    def kth(k):
        t = sorted(zs)
        return t[k - 1] if len(t) >= k else math.inf

    ell = 0
    while True:
        z1 = _radial_root(N, ell, 1, -ell - N + 2.0, c1)
        if z1 > kth(count):
            break
        mult = sphere_multiplicity(N, ell)
        j = 1
        z = z1
        while z <= kth(count) or len(zs) < count:
            zs.extend([z] * mult)
            j += 1
            z = _radial_root(N, ell, j, -ell - N + 2.0, c1)
        ell += 1
    zs.sort()
    return [z / s for z in zs[:count]]


def _min_volume_for_count(N, alpha, lam, n):
    """(W, parts): least total volume of a ball union with n eigenvalues
    <= lam, and the per-ball eigenvalue counts achieving it."""
    radii = _count_radii(N, alpha, lam, n)
    wN = unit_ball_volume(N)
    w = [wN * r**N for r in radii]  # w[k-1]: volume for k eigenvalues
    W = [0.0] * (n + 1)
    choice = [0] * (n + 1)
    for c in range(1, n + 1):
        best, bk = math.inf, 0
        for k in range(1, c + 1):
            v = W[c - k] + w[k - 1]
            if v < best:
                best, bk = v, k
        W[c], choice[c] = best, bk
    parts = []
    c = n
    while c > 0:
        parts.append(choice[c])
        c -= choice[c]
    return W[n], sorted(parts, reverse=True), w


_catalog_cache: dict[tuple, tuple] = {}


def ball_union_min_lambda(n: int, N: int, V: float, alpha: float):
    """Least n-th eigenvalue over disjoint unions of balls of total volume V.

    Returns (value, parts, volumes): the per-ball eigenvalue counts and ball
    volumes of the optimal union.  Solved by bisecting the level lam at
    which the least volume carrying n eigenvalues <= lam equals V.
    """
    if n < 1 or V <= 0 or alpha <= 0:
        raise ValueError("need n >= 1, V > 0, alpha > 0")
    key = (n, N, V, alpha)
    if key in _catalog_cache:
        return _catalog_cache[key]
    # at lam = lambda_n(B_n, alpha) the n-singleton union uses volume V
    hi = ball_eigenvalue(ball_from_volume(N, V / n), alpha, 0, 1) * (1 + 1e-9)
    lo = hi / 2
    while _min_volume_for_count(N, alpha, lo, n)[0] <= V:
        hi = lo
        lo /= 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _min_volume_for_count(N, alpha, mid, n)[0] <= V:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    _, parts, w = _min_volume_for_count(N, alpha, lam, n)
    volumes = [w[k - 1] for k in parts]
    result = (lam, parts, volumes)
    _catalog_cache[key] = result
    return result
