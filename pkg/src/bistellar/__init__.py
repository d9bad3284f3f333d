"""Exact triangulations of point configurations and geometric bistellar flips."""

from .config import Circuit, Facet, PointConfiguration, is_perturbation_of
from .exact import SQRT2, Scalar
from .flips import (
    Flip,
    FlipGraph,
    apply_flip,
    find_flips,
    flip_graph,
    incremental_construction,
    monotone_flip_sequence,
)
from .regular import (
    GkzVector,
    Lift,
    gkz_vector,
    is_regular,
    monotone_compare,
    secondary_polytope_summary,
    standard_lift,
    subdivision_from_lift,
)
from .subdivision import (
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    flip_subdivision_refinements,
    is_valid_subdivision,
    is_valid_triangulation,
    refines,
)

__all__ = [
    "Circuit", "Facet", "PointConfiguration", "is_perturbation_of",
    "SQRT2", "Scalar",
    "Flip", "FlipGraph", "apply_flip", "find_flips", "flip_graph",
    "incremental_construction", "monotone_flip_sequence",
    "GkzVector", "Lift", "gkz_vector", "is_regular", "monotone_compare",
    "secondary_polytope_summary", "standard_lift", "subdivision_from_lift",
    "Subdivision", "Triangulation", "enumerate_triangulations_bruteforce",
    "flip_subdivision_refinements", "is_valid_subdivision", "is_valid_triangulation", "refines",
]
