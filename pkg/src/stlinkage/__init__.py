"""Minimum-length colored and matroid-ranked (S,T)-linkage solvers."""

from .fields import FieldSpec, FieldElement, build_core_field, extend_field
from .graphs import (
    ColoredWeightedGraph,
    Digraph,
    LinkageQuery,
    LinkageSolution,
    NormalizedInstance,
    normalize,
    validate_solution,
)
from .solver import SolverConfig, SolveResult, solve

__all__ = [
    "FieldSpec",
    "FieldElement",
    "build_core_field",
    "extend_field",
    "ColoredWeightedGraph",
    "Digraph",
    "LinkageQuery",
    "LinkageSolution",
    "NormalizedInstance",
    "normalize",
    "validate_solution",
    "SolverConfig",
    "SolveResult",
    "solve",
]
