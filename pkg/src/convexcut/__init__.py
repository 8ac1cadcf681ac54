"""Image decomposition by minimum cost multicuts with discrete convexity constraints."""
from .engine import (SolveReport, SolverConfig, solve_convex_mc, solve_convex_mcn, solve_mc,
                     solve_mcn)
from .grid import (Decomposition, EdgeLabeling, GridGraph, build_grid, components_from_edges,
                   is_multicut, multicut_of)
from .ilp import IlpInstance, IlpSolution, LinearConstraint, export_lp, relative_gap, solve
from .kernels import BACKEND as KERNEL_BACKEND
from .models import LabelSpec, VariableMap, build_mc, build_mcn
from .separation import DirectionSet, enumerate_directions

__version__ = "0.1.0"

__all__ = [
    "Decomposition", "DirectionSet", "EdgeLabeling", "GridGraph", "IlpInstance", "IlpSolution",
    "KERNEL_BACKEND", "LabelSpec", "LinearConstraint", "SolveReport", "SolverConfig",
    "VariableMap", "build_grid", "build_mc", "build_mcn", "components_from_edges",
    "enumerate_directions", "export_lp", "is_multicut", "multicut_of", "relative_gap", "solve",
    "solve_convex_mc", "solve_convex_mcn", "solve_mc", "solve_mcn",
]
