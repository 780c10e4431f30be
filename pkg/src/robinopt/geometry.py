"""Star-shaped Fourier components and disjoint unions of them.

A component is the set {0 < r < r_M(theta)} translated by `center`, with
r_M a truncated trigonometric polynomial.  Areas are exact in the
coefficients; perimeters and boundary data use trapezoid quadrature on a
uniform theta grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

POSITIVITY_GRID = 4096


class InvalidShapeError(ValueError):
    """The Fourier radius is not strictly positive on the check grid."""


class SourcePlacementError(ValueError):
    """A requested MFS source point falls inside (or on) the domain."""


@dataclass(frozen=True)
class ShapeFourier:
    a0: float
    a: tuple[float, ...] = ()
    b: tuple[float, ...] = ()
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if len(self.a) != len(self.b):
            raise InvalidShapeError("a and b must have the same length")
        r = self.radius(np.linspace(0.0, 2 * np.pi, POSITIVITY_GRID, endpoint=False))
        if np.min(r) <= 0.0:
            raise InvalidShapeError("radius r_M(theta) must be positive everywhere")

    @property
    def order(self) -> int:
        return len(self.a)

    def radius(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = np.full_like(theta, self.a0)
        for i, (ai, bi) in enumerate(zip(self.a, self.b), start=1):
            r = r + ai * np.cos(i * theta) + bi * np.sin(i * theta)
        return r

    def radius_prime(self, theta):
        theta = np.asarray(theta, dtype=float)
        rp = np.zeros_like(theta)
        for i, (ai, bi) in enumerate(zip(self.a, self.b), start=1):
            rp = rp + i * (-ai * np.sin(i * theta) + bi * np.cos(i * theta))
        return rp

    def max_radius(self) -> float:
        th = np.linspace(0.0, 2 * np.pi, POSITIVITY_GRID, endpoint=False)
        return float(np.max(self.radius(th)))

    def scaled(self, s: float) -> "ShapeFourier":
        return ShapeFourier(
            a0=self.a0 * s,
            a=tuple(v * s for v in self.a),
            b=tuple(v * s for v in self.b),
            center=(self.center[0] * s, self.center[1] * s),
        )

    def contains(self, point) -> bool:
        """Point-in-star-shape test against the radial representation."""
        dx = point[0] - self.center[0]
        dy = point[1] - self.center[1]
        rho = math.hypot(dx, dy)
        if rho == 0.0:
            return True
        theta = math.atan2(dy, dx)
        return rho < float(self.radius(theta))


@dataclass(frozen=True)
class MultiDomain:
    components: tuple[ShapeFourier, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidShapeError("MultiDomain needs at least one component")
        # disjointness via bounding disks: conservative but cheap
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                ci, cj = comps[i], comps[j]
                d = math.hypot(ci.center[0] - cj.center[0], ci.center[1] - cj.center[1])
                if d <= ci.max_radius() + cj.max_radius():
                    raise InvalidShapeError(
                        f"components {i} and {j} have overlapping bounding disks"
                    )

    @property
    def total_area(self) -> float:
        return sum(area(c) for c in self.components)

    def contains(self, point) -> bool:
        return any(c.contains(point) for c in self.components)


@dataclass(frozen=True)
class BoundaryPoint:
    x: tuple[float, float]
    normal: tuple[float, float]
    arc_weight: float
    component: int = 0


def area(shape: ShapeFourier) -> float:
    """Exact area pi*a0^2 + (pi/2) * sum(a_i^2 + b_i^2)."""
    return math.pi * shape.a0**2 + 0.5 * math.pi * sum(
        ai * ai + bi * bi for ai, bi in zip(shape.a, shape.b)
    )


def perimeter(shape: ShapeFourier, n_quad: int = 8192) -> float:
    """Arclength integral of sqrt(r^2 + r'^2) by the trapezoid rule."""
    n_quad = max(n_quad, POSITIVITY_GRID)
    th = np.linspace(0.0, 2 * np.pi, n_quad, endpoint=False)
    r = shape.radius(th)
    rp = shape.radius_prime(th)
    return float(np.sum(np.sqrt(r * r + rp * rp)) * (2 * np.pi / n_quad))


def normalize_area(domain: MultiDomain, V: float) -> MultiDomain:
    """Uniformly rescale coefficients and centers so the total area is V."""
    total = domain.total_area
    if total <= 0:
        raise InvalidShapeError("total area must be positive")
    s = math.sqrt(V / total)
    if s == 1.0:
        return domain
    return MultiDomain(tuple(c.scaled(s) for c in domain.components))


def boundary_points(
    domain: MultiDomain, np_per_component: list[int]
) -> list[BoundaryPoint]:
    """Collocation points at uniform theta parameters with outward unit
    normals and local arclength weights."""
    if len(np_per_component) != len(domain.components):
        raise ValueError("one point count per component required")
    points: list[BoundaryPoint] = []
    for ci, (comp, n_pts) in enumerate(zip(domain.components, np_per_component)):
        if n_pts < 8 * (comp.order + 1):
            raise ValueError(
                f"component {ci}: need at least {8 * (comp.order + 1)} points"
            )
        th = np.linspace(0.0, 2 * np.pi, n_pts, endpoint=False)
        r = comp.radius(th)
        rp = comp.radius_prime(th)
        cos_t, sin_t = np.cos(th), np.sin(th)
        x = comp.center[0] + r * cos_t
        y = comp.center[1] + r * sin_t
        # tangent (r' cos - r sin, r' sin + r cos) rotated -90 degrees
        nx = r * cos_t + rp * sin_t
        ny = r * sin_t - rp * cos_t
        speed = np.sqrt(nx * nx + ny * ny)
        nx /= speed
        ny /= speed
        w = speed * (2 * np.pi / n_pts)
        for k in range(n_pts):
            points.append(
                BoundaryPoint(
                    x=(float(x[k]), float(y[k])),
                    normal=(float(nx[k]), float(ny[k])),
                    arc_weight=float(w[k]),
                    component=ci,
                )
            )
    return points


def source_points(
    boundary: list[BoundaryPoint], gamma: float, domain: MultiDomain | None = None
) -> list[tuple[float, float]]:
    """MFS source points y_i = x_i + gamma * n_i, checked to lie outside."""
    if gamma <= 0:
        raise SourcePlacementError("gamma must be positive")
    out = []
    for bp in boundary:
        y = (bp.x[0] + gamma * bp.normal[0], bp.x[1] + gamma * bp.normal[1])
        if domain is not None and domain.contains(y):
            raise SourcePlacementError(f"source {y} falls inside the domain")
        out.append(y)
    return out


# ---------------------------------------------------------------------------
# Shape file format
# ---------------------------------------------------------------------------


def domain_to_dict(domain: MultiDomain, V: float | None = None) -> dict:
    return {
        "V": domain.total_area if V is None else V,
        "components": [
            {"center": list(c.center), "a0": c.a0, "a": list(c.a), "b": list(c.b)}
            for c in domain.components
        ],
    }


def domain_from_dict(data: dict) -> tuple[MultiDomain, float]:
    comps = tuple(
        ShapeFourier(
            a0=c["a0"],
            a=tuple(c.get("a", ())),
            b=tuple(c.get("b", ())),
            center=tuple(c.get("center", (0.0, 0.0))),
        )
        for c in data["components"]
    )
    return MultiDomain(comps), float(data.get("V", 1.0))


def save_domain(path, domain: MultiDomain, V: float | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(domain_to_dict(domain, V), fh, indent=1)
        fh.write("\n")


def load_domain(path) -> tuple[MultiDomain, float]:
    with open(path) as fh:
        return domain_from_dict(json.load(fh))


def disk(radius: float, center=(0.0, 0.0)) -> ShapeFourier:
    return ShapeFourier(a0=radius, center=center)


def seeded_disks(areas: list[float], separation: float = 4.0) -> MultiDomain:
    """Disjoint disks with the given areas, centers spread on a line."""
    radii = [math.sqrt(a / math.pi) for a in areas]
    comps = []
    x = 0.0
    for i, r in enumerate(radii):
        if i > 0:
            x += separation * (radii[i - 1] + r)
        comps.append(disk(r, center=(x, 0.0)))
    return MultiDomain(tuple(comps))
