"""Exact computation of automorphism groups of K3 surfaces with rank-2 Picard lattice."""

from .aut import AutReport, GroupPresentation, aut_group, classify_group, finite_order, gluing_filter
from .cone import Chamber, Ray, Wall, chamber_walls, preserves_chamber
from .lattice import GramForm, IsometryMatrix, LatticeVector, family_gram, root_classes
from .pell import PellProblem, solve_fundamental
from .quadratic import DomainError, QuadInt, QuadRat

__version__ = "0.1.0"

__all__ = [
    "AutReport",
    "Chamber",
    "DomainError",
    "GramForm",
    "GroupPresentation",
    "IsometryMatrix",
    "LatticeVector",
    "PellProblem",
    "QuadInt",
    "QuadRat",
    "Ray",
    "Wall",
    "aut_group",
    "chamber_walls",
    "classify_group",
    "family_gram",
    "finite_order",
    "gluing_filter",
    "preserves_chamber",
    "root_classes",
    "solve_fundamental",
]
