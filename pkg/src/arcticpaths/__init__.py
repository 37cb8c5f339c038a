"""Non-intersecting lattice paths with arbitrary starting points.

Exact partition and one-point functions at finite size, the tangent-method
arctic curve of a boundary shape, saddle-point asymptotics and a Monte Carlo
sampler for cross-checks.
"""
from .boundary import (BoundaryShape, ComplementarySequence, Jump, Segment, ShapeError,
                       StartSequence, complement_of, realize, tilde_of)
from .exactcomb import PathConfiguration, SizeGuardError, det_exact, partition_product
from .onepoint import H, Hcheck, Hhat, Htilde
from .arctic import ArcticPortion, Resolvent, portions, special_points
from .asymptotics import convergence_study, rate_function, saddle_t
from .shapefile import load_shape, parse_shape

__version__ = "0.1.0"

__all__ = [
    "BoundaryShape", "ComplementarySequence", "Jump", "Segment", "ShapeError",
    "StartSequence", "complement_of", "realize", "tilde_of",
    "PathConfiguration", "SizeGuardError", "det_exact", "partition_product",
    "H", "Hcheck", "Hhat", "Htilde",
    "ArcticPortion", "Resolvent", "portions", "special_points",
    "convergence_study", "rate_function", "saddle_t",
    "load_shape", "parse_shape",
]
