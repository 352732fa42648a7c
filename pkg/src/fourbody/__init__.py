"""Planar four-body central configurations from given masses."""

from .dziobek import (
    Collinear,
    Concave,
    ConfigurationType,
    Convex,
    Direction,
    DistanceSet,
    PlanarConfig,
    WeightedAreas,
    admissible_lambda_interval,
    cayley_menger,
    classify,
    directed_areas,
    distances_from_lambda,
    embed_planar,
    recovered_masses,
    sigma,
    weighted_areas,
)
from .solver import (
    CentralConfiguration,
    SolverSettings,
    lambda_roots,
    mass_mismatch,
    solve_all,
    solve_kite,
    tune_direction,
)
from .tetra import MassVector, Tetrahedron, build_tetrahedron, reduced_mass

__all__ = [
    "CentralConfiguration",
    "Collinear",
    "Concave",
    "ConfigurationType",
    "Convex",
    "Direction",
    "DistanceSet",
    "MassVector",
    "PlanarConfig",
    "SolverSettings",
    "Tetrahedron",
    "WeightedAreas",
    "admissible_lambda_interval",
    "build_tetrahedron",
    "cayley_menger",
    "classify",
    "directed_areas",
    "distances_from_lambda",
    "embed_planar",
    "lambda_roots",
    "mass_mismatch",
    "recovered_masses",
    "reduced_mass",
    "sigma",
    "solve_all",
    "solve_kite",
    "tune_direction",
    "weighted_areas",
]

__version__ = "0.1.0"
