"""Invariant Hermitian forms for the Mellin-Barnes monodromy of A-hypergeometric systems."""

from .ratlin import SystemData, SystemDataError, build_system
from .fan import adjacency_graph, enumerate_chambers, enumerate_cotriangles
from .solpts import check_total_nonresonance, solution_points
from .herm import hermitian_package
from .resid import global_invariance, make_context, one_var_residue_audit

__version__ = "0.1.0"

__all__ = [
    "SystemData",
    "SystemDataError",
    "build_system",
    "adjacency_graph",
    "enumerate_chambers",
    "enumerate_cotriangles",
    "check_total_nonresonance",
    "solution_points",
    "hermitian_package",
    "global_invariance",
    "make_context",
    "one_var_residue_audit",
]
