"""Steepest-descent minimization of lambda_n over area-normalized shapes.

The design variable is the concatenated Fourier coefficient vector of all
components (a0, a_1..a_M, b_1..b_M per component) plus the two center
coordinates of every component after the first; the first center is frozen
because eigenvalues are translation invariant.  Every evaluated point is
rescaled to the target area before solving, so the volume constraint is
maintained by construction and pure dilations are projected out of the
finite-difference gradient.

Clustered eigenvalues are handled with the log-barrier objective

    lambda_n - sum_{j=1..active} omega * log(lambda_{n-j+1} - lambda_{n-j}),

with a barrier term activated once its gap falls below the cluster
threshold and omega driven to zero on a geometric schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import geometry, mfs
from ._search import golden_minimize, parallel_map

# omega^{(m)} = 0.5 * 2^{-m}; the schedule advances every
# _OMEGA_ADVANCE_EVERY iterations or whenever a line search stalls
_DEFAULT_OMEGAS = tuple(0.5 * 2.0**-m for m in range(24))
_OMEGA_ADVANCE_EVERY = 10
# relative gaps below this are treated as true multiplicities (the solver
# dedupes at 1e-7), not as clusters needing a barrier
_MULTIPLICITY_REL_GAP = 1e-6
_XMAX_SHRINKS = 6
_IMPROVE_RETRIES = 2
_STALL_WINDOW = 5
_MAX_STALLS = 3


class NonpositiveGapError(ValueError):
    """A barrier term was requested on a gap that is not positive."""


@dataclass(frozen=True)
class OptimConfig:
    fd_step: float = 1e-5
    cluster_threshold: float = 0.1
    omega_schedule: tuple[float, ...] = _DEFAULT_OMEGAS
    max_iters: int = 200
    line_search_tol: float = 2e-3
    stall_tol: float = 1e-6

    def __post_init__(self):
        if self.fd_step <= 0:
            raise ValueError("fd_step must be positive")
        if not 0 < self.cluster_threshold < 1:
            raise ValueError("cluster_threshold must lie in (0, 1)")
        ws = tuple(float(w) for w in self.omega_schedule)
        object.__setattr__(self, "omega_schedule", ws)
        if not ws or ws[0] <= 0 or any(b <= 0 or b >= a for a, b in zip(ws, ws[1:])):
            raise ValueError("omega_schedule must be positive, strictly decreasing")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.line_search_tol <= 0 or self.stall_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class OptimIterate:
    coeff_vector: tuple[float, ...]
    lambda_values: tuple[float, ...]
    objective: float
    step: float


@dataclass(frozen=True)
class OptimTrace:
    iterates: tuple[OptimIterate, ...]


# ---------------------------------------------------------------------------
# Coefficient vector packing
# ---------------------------------------------------------------------------


def pack_domain(domain: geometry.MultiDomain) -> np.ndarray:
    """Flatten a domain to its design vector (see module docstring)."""
    parts: list[float] = []
    for c in domain.components:
        parts.append(c.a0)
        parts.extend(c.a)
        parts.extend(c.b)
    for c in domain.components[1:]:
        parts.extend(c.center)
    return np.asarray(parts, dtype=float)


def unpack_domain(vec, template: geometry.MultiDomain) -> geometry.MultiDomain:
    """Rebuild a domain from a design vector; orders and the first center
    are taken from the template.  Raises InvalidShapeError on bad shapes."""
    vec = np.asarray(vec, dtype=float)
    coeffs = []
    i = 0
    for c in template.components:
        m = c.order
        a0 = float(vec[i])
        a = tuple(vec[i + 1 : i + 1 + m])
        b = tuple(vec[i + 1 + m : i + 1 + 2 * m])
        i += 2 * m + 1
        coeffs.append((a0, a, b))
    centers = [template.components[0].center]
    for _ in template.components[1:]:
        centers.append((float(vec[i]), float(vec[i + 1])))
        i += 2
    comps = tuple(
        geometry.ShapeFourier(a0=a0, a=a, b=b, center=ctr)
        for (a0, a, b), ctr in zip(coeffs, centers)
    )
    return geometry.MultiDomain(comps)


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


def clustered_objective(
    lambda_values, n: int, active_count: int, omegas
) -> float:
    """lambda_n minus log barriers on the active_count gaps below it."""
    lams = list(lambda_values)
    if len(lams) < n:
        raise ValueError(f"need at least {n} eigenvalues, got {len(lams)}")
    if any(b < a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda_values must be sorted ascending")
    if active_count < 0 or active_count > n - 1:
        raise ValueError("active_count must lie in [0, n-1]")
    omegas = list(omegas)
    if len(omegas) < active_count:
        raise ValueError("need one omega per active barrier term")
    val = lams[n - 1]
    for j in range(1, active_count + 1):
        gap = lams[n - j] - lams[n - j - 1]
        if gap <= 0:
            raise NonpositiveGapError(
                f"gap lambda_{n - j + 1} - lambda_{n - j} = {gap} is not positive"
            )
        val -= omegas[j - 1] * math.log(gap)
    return val


def _objective(lams, n: int, active: int, omega: float) -> float:
    # drop barrier terms that hit an exactly degenerate gap (the caller's
    # multiplicity filter makes this rare, but line-search probes can land
    # on coincident eigenvalues)
    while active > 0:
        try:
            return clustered_objective(lams, n, active, (omega,) * active)
        except NonpositiveGapError:
            active -= 1
    return list(lams)[n - 1]


# ---------------------------------------------------------------------------
# Solver plumbing
# ---------------------------------------------------------------------------


def _solve(domain, alpha, n, mcfg, window=None, strict=True):
    cfg = mcfg
    if window is not None:
        cfg = replace(mcfg, lambda_min=window[0], lambda_max=window[1])
    try:
        return mfs.eigenvalues(domain, alpha, n, cfg).values()[:n]
    except mfs.NotEnoughEigenvaluesError:
        if window is None or not strict:
            raise
        # warm window missed an eigenvalue that moved; fall back to the
        # caller's (usually wide default) window
        return mfs.eigenvalues(domain, alpha, n, mcfg).values()[:n]


def _window(lams, lo_factor: float, hi_factor: float):
    return (max(1e-6, lams[0] * lo_factor), lams[-1] * hi_factor + 1e-3)


_SHAPE_ERRORS = (
    geometry.InvalidShapeError,
    geometry.SourcePlacementError,
    mfs.NotEnoughEigenvaluesError,
)


def fd_gradient(
    domain: geometry.MultiDomain,
    alpha: float,
    n: int,
    cfg: OptimConfig,
    mfs_cfg: mfs.MfsConfig,
    *,
    active_count: int = 0,
    omega: float = 0.0,
    base_lams=None,
) -> np.ndarray:
    """One-sided finite-difference gradient of the (clustered) objective.

    Each perturbed coefficient vector is re-normalized to the base area
    before the solve, so the a0 direction of a ball maps to a pure
    dilation and gets gradient ~ 0.
    """
    V = domain.total_area
    if base_lams is None:
        base_lams = _solve(domain, alpha, n, mfs_cfg)
    f0 = _objective(base_lams, n, active_count, omega)
    vec = pack_domain(domain)
    eps = cfg.fd_step
    # eps-perturbations move the eigenvalues by ~1e-4 relative, so a tight
    # window is safe and keeps spurious far-away dips out of the scan
    win = _window(base_lams, 0.9, 1.1)

    def entry(i: int) -> float:
        for sign in (1.0, -1.0):
            pv = vec.copy()
            pv[i] += sign * eps
            try:
                pd = geometry.normalize_area(unpack_domain(pv, domain), V)
                lams = _solve(pd, alpha, n, mfs_cfg, win, strict=True)
                return sign * (_objective(lams, n, active_count, omega) - f0) / eps
            except _SHAPE_ERRORS:
                continue
        return 0.0

    return np.asarray(parallel_map(entry, range(len(vec))), dtype=float)


# ---------------------------------------------------------------------------
# Descent loop
# ---------------------------------------------------------------------------


def minimize(
    domain0: geometry.MultiDomain,
    alpha: float,
    n: int,
    cfg: OptimConfig | None = None,
    mfs_cfg: mfs.MfsConfig | None = None,
    volume: float | None = None,
) -> tuple[geometry.MultiDomain, OptimTrace]:
    """Steepest descent with golden-section line search on the step size."""
    cfg = cfg if cfg is not None else OptimConfig()
    mcfg = mfs_cfg if mfs_cfg is not None else mfs.MfsConfig()
    V = domain0.total_area if volume is None else float(volume)
    dom = geometry.normalize_area(domain0, V)
    lams = _solve(dom, alpha, n, mcfg)

    sched = cfg.omega_schedule
    active = 0
    m_idx = 0
    since_advance = 0
    stalls = 0
    x_max = 1.0
    recent: list[float] = []
    iterates: list[OptimIterate] = []

    def record(obj, step):
        iterates.append(
            OptimIterate(
                coeff_vector=tuple(pack_domain(dom)),
                lambda_values=tuple(lams),
                objective=obj,
                step=step,
            )
        )

    omega = sched[0]
    record(_objective(lams, n, active, omega), 0.0)

    for _ in range(cfg.max_iters):
        # barrier activation: walk gaps downward from lambda_n, skipping
        # true multiplicities, activating while gaps sit below theta
        while active < n - 1:
            j = active + 1
            gap = lams[n - j] - lams[n - j - 1]
            scale = lams[n - 1]
            if _MULTIPLICITY_REL_GAP * scale < gap < cfg.cluster_threshold * scale:
                active = j
                recent.clear()
            else:
                break
        omega = sched[min(m_idx, len(sched) - 1)]
        if active:
            # cap the barrier slope omega/gap: near a genuine multiplicity
            # the gap keeps shrinking and a fixed omega would make the
            # barrier dominate lambda_n and repel the iterate from the
            # optimum
            # 0.1: safely below the break-even slope 0.5 at which the
            # barrier exactly cancels the lambda_n gain of closing a gap
            # symmetrically (two-component equalization)
            gmin = min(lams[n - j] - lams[n - j - 1] for j in range(1, active + 1))
            if gmin > 0:
                omega = min(omega, 0.1 * gmin)
        f0 = _objective(lams, n, active, omega)

        grad = fd_gradient(
            dom, alpha, n, cfg, mcfg,
            active_count=active, omega=omega, base_lams=lams,
        )
        gnorm = float(np.max(np.abs(grad)))
        if gnorm <= 1e-12 * max(1.0, abs(f0)):
            record(f0, 0.0)
            break

        vec = pack_domain(dom)
        win = _window(lams, 0.8, 1.25)
        memo: dict[float, tuple] = {}

        def f(x: float) -> float:
            if x == 0.0:
                return f0
            if x in memo:
                return memo[x][2]
            try:
                # strict=True: a warm-window detection miss falls back to the
                # full-window solve instead of poisoning the golden search
                # with a spurious +inf at an interior point
                pd = geometry.normalize_area(unpack_domain(vec - x * grad, dom), V)
                pl = _solve(pd, alpha, n, mcfg, win, strict=True)
                ob = _objective(pl, n, active, omega)
            except _SHAPE_ERRORS:
                return math.inf
            memo[x] = (pd, pl, ob)
            return ob

        accepted = None
        xm = x_max
        for shrink in range(_XMAX_SHRINKS):
            if math.isfinite(f(xm)):
                break
            xm *= 0.5
            x_max = xm  # invalid shapes permanently shrink the cap
        null_direction = xm > 1e-12 and abs(f(xm) - f0) <= 1e-11 * max(1.0, abs(f0))
        if xm > 1e-12 and not null_direction:
            for attempt in range(_IMPROVE_RETRIES):
                xs, fs = golden_minimize(f, 0.0, xm, tol=cfg.line_search_tol * xm)
                if fs < f0 and xs in memo:
                    accepted = (xs, *memo[xs])
                    break
                # retry on a shorter bracket only if the search got close
                # to f0; a clearly uphill direction is a stall
                if attempt == 0 and fs - f0 > 1e-9 * max(1.0, abs(f0)):
                    break
                xm *= 0.5

        if accepted is None:
            record(f0, 0.0)
            stalls += 1
            m_idx += 1  # advance the omega schedule on stall
            since_advance = 0
            recent.clear()
            if stalls >= _MAX_STALLS:
                break
            continue

        stalls = 0
        xs, dom, lams, fnew = accepted
        record(fnew, xs)
        x_max = min(1.0, max(x_max, 4.0 * xs))

        since_advance += 1
        if since_advance >= _OMEGA_ADVANCE_EVERY:
            m_idx += 1
            since_advance = 0
            recent.clear()
        recent.append(fnew)
        if len(recent) > _STALL_WINDOW:
            drop = recent[-_STALL_WINDOW - 1] - recent[-1]
            if drop < cfg.stall_tol * max(1.0, abs(recent[-1])):
                break

    return dom, OptimTrace(tuple(iterates))


# ---------------------------------------------------------------------------
# Topology enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TopologyOutcome:
    fractions: tuple[float, ...]
    domain: geometry.MultiDomain
    lambda_values: tuple[float, ...]
    value: float
    trace: OptimTrace


@dataclass(frozen=True)
class SweepResult:
    best: TopologyOutcome
    outcomes: tuple[TopologyOutcome, ...]


def _fractions(partition, n: int) -> tuple[float, ...]:
    if isinstance(partition, int):
        if partition < 1:
            raise ValueError("component count must be >= 1")
        fr = (1.0 / partition,) * partition
    else:
        fr = tuple(float(p) for p in partition)
        total = sum(fr)
        if total <= 0 or any(p <= 0 for p in fr):
            raise ValueError("area fractions must be positive")
        fr = tuple(p / total for p in fr)
    if len(fr) > n:
        raise ValueError(f"at most n = {n} components allowed, got {len(fr)}")
    return fr


def topology_sweep(
    alpha: float,
    n: int,
    partitions,
    cfg: OptimConfig | None = None,
    mfs_cfg: mfs.MfsConfig | None = None,
    volume: float = 1.0,
) -> SweepResult:
    """Minimize lambda_n from disk seeds for each component-count split and
    return the best across topologies.

    A partition is either an int k (k equal-area disks) or a sequence of
    area fractions.  The per-topology final value is the plain lambda_n of
    the minimizer (barrier terms removed).
    """
    outcomes: list[TopologyOutcome] = []
    for part in partitions:
        fr = _fractions(part, n)
        seed = geometry.seeded_disks([f * volume for f in fr])
        mcfg = mfs_cfg
        if mcfg is not None and mcfg.np_per_component is not None:
            per = mcfg.np_per_component
            if len(per) != len(fr):
                mcfg = replace(mcfg, np_per_component=(per[0],) * len(fr))
        dom, trace = minimize(seed, alpha, n, cfg, mcfg, volume=volume)
        lams = trace.iterates[-1].lambda_values
        outcomes.append(
            TopologyOutcome(
                fractions=fr,
                domain=dom,
                lambda_values=tuple(lams),
                value=lams[n - 1],
                trace=trace,
            )
        )
    best = min(outcomes, key=lambda o: o.value)
    return SweepResult(best=best, outcomes=tuple(outcomes))
