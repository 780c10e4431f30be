"""robinopt: minimization of Robin Laplacian eigenvalues over planar
domains of fixed area — analytic ball spectra, an MFS eigensolver,
shape optimization, and executable checks of the supporting theory."""

from . import ball, geometry, mfs, optim, specfun, theory
from .ball import (
    BallSpec,
    ball_eigenvalue,
    ball_spectrum,
    ball_union_min_lambda,
    transition_alpha,
    union_of_balls_eigenvalue,
)
from .geometry import MultiDomain, ShapeFourier, disk, load_domain, save_domain
from .mfs import EigResult, MfsConfig, eigenvalues
from .optim import OptimConfig, OptimTrace, minimize, topology_sweep

__all__ = [
    "ball",
    "geometry",
    "mfs",
    "optim",
    "specfun",
    "theory",
    "BallSpec",
    "ball_eigenvalue",
    "ball_spectrum",
    "ball_union_min_lambda",
    "transition_alpha",
    "union_of_balls_eigenvalue",
    "MultiDomain",
    "ShapeFourier",
    "disk",
    "load_domain",
    "save_domain",
    "EigResult",
    "MfsConfig",
    "eigenvalues",
    "OptimConfig",
    "OptimTrace",
    "minimize",
    "topology_sweep",
]

__version__ = "0.1.0"
