"""Exact Frobenius-algebra TQFTs of finite matrix groups and point counts of their character varieties."""

from .bordism import brute_force_hom_count, evaluate, parse, surface_invariant
from .classalg import ClassFunction, algebra, frobenius_axiom_suite
from .correspondence import (census_count, eigen_census, family_genus_matrix, genus_matrix_at_prime,
                             interpolate, verify_lift)
from .groups import FamilySpec, FiniteGroup, conjugacy_classes, instantiate_family
from .kernels import BACKEND
from .polyq import PolyQ
from .schemes import builtin_catalog, integrate_generator, list_builtins

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClassFunction",
    "FamilySpec",
    "FiniteGroup",
    "PolyQ",
    "algebra",
    "brute_force_hom_count",
    "builtin_catalog",
    "census_count",
    "conjugacy_classes",
    "eigen_census",
    "evaluate",
    "family_genus_matrix",
    "frobenius_axiom_suite",
    "genus_matrix_at_prime",
    "instantiate_family",
    "integrate_generator",
    "interpolate",
    "list_builtins",
    "parse",
    "surface_invariant",
    "verify_lift",
]
