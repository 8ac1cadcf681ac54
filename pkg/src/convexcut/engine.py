"""Cutting-plane driver: solve, separate, add violated constraints, repeat."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import EdgeLabeling, GridGraph, components_from_edges
from .ilp import IlpSolution, solve
from .models import LabelSpec, VariableMap, build_mc, build_mcn, edge_costs, unary_costs
from .separation import (DirectionSet, parse_directions, separate_convexity_mc,
                         separate_convexity_mcn, separate_cycles)

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    epsilon: float = 0.02
    directions: DirectionSet | str = "8"
    max_iterations: int = 1000
    time_limit: float | None = None
    backend: str = "highs"

    def __post_init__(self):
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be a finite nonnegative number")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class SolveReport:
    resolution: tuple[int, int]
    energy: float
    iterations: int = 0
    wall_time: float = 0.0
    final_gap: float = 0.0
    constraints_added: dict = field(default_factory=lambda: {"cycle": 0, "convexity": 0})
    status: str = "optimal"
    ilp_solves: int = 0
    convexity_rounds: int = 0

    CSV_HEADER = ("Res", "E_or_ConvexE", "Iter", "Time", "Gap")

    def csv_row(self, timing: bool = True) -> list[str]:
        return [
            f"{self.resolution[0]}x{self.resolution[1]}",
            f"{self.energy:.6g}",
            str(self.iterations),
            f"{self.wall_time:.3f}" if timing else "NA",
            f"{100.0 * self.final_gap:.4g} %",
        ]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_HEADER)
        w.writerow(self.csv_row(timing))
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> str:
        data = asdict(self)
        data["resolution"] = list(self.resolution)
        if not timing:
            data["wall_time"] = None
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _remaining(cfg: SolverConfig, start: float) -> float | None:
    if cfg.time_limit is None:
        return None
    return cfg.time_limit - (time.monotonic() - start)


def _loop(g, inst, cfg, separate, report, start):
    """Run rounds until ``separate`` finds nothing; returns the last ILP solution."""
    sol: IlpSolution | None = None
    for it in range(cfg.max_iterations):
        left = _remaining(cfg, start)
        if left is not None and left <= 0:
            report.status = "timeout"
            return sol
        sol = solve(inst, cfg.epsilon, left, cfg.backend)
        report.ilp_solves += 1
        if sol.status == "infeasible":
            raise RuntimeError("constraint pool became infeasible")
        if sol.status == "timeout":
            report.status = "timeout"
            return sol
        family, cons = separate(sol.values)
        added = inst.add_all(cons)
        log.debug("round %d: %s %d separated, %d new", it, family, len(cons), added)
        if not cons:
            report.status = sol.status
            return sol
        if added == 0:
            raise RuntimeError("separated constraints are already pooled")
        report.constraints_added[family] += added
        report.iterations += 1
        if family == "convexity":
            report.convexity_rounds += 1
    report.status = "iteration_cap"
    return sol


def _finish_report(report, sol, start):
    report.wall_time = time.monotonic() - start
    if sol is not None and sol.values is not None:
        report.energy = sol.objective_value
        report.final_gap = sol.gap
    else:
        report.energy = math.inf
        report.final_gap = math.inf


def _solve_multicut(g: GridGraph, c, cfg: SolverConfig, convex: bool):
    start = time.monotonic()
    inst, vm = build_mc(g, c)
    dirs = parse_directions(cfg.directions, g) if convex else None
    report = SolveReport((g.width, g.height), 0.0)

    def separate(values):
        y = vm.edges_of(values)
        cycles = separate_cycles(g, y, vm)
        if cycles or not convex:
            return "cycle", cycles
        d = components_from_edges(g, y)
        return "convexity", [s.constraint for s in separate_convexity_mc(g, d, dirs, vm)]

    sol = _loop(g, inst, cfg, separate, report, start)
    _finish_report(report, sol, start)
    y = None if sol is None or sol.values is None else EdgeLabeling.of(vm.edges_of(sol.values))
    return y, report


def solve_mc(g: GridGraph, c, cfg: SolverConfig | None = None):
    """Minimum cost multicut; cycle constraints are added as they are violated."""
    return _solve_multicut(g, c, cfg or SolverConfig(), convex=False)


def solve_convex_mc(g: GridGraph, c, cfg: SolverConfig | None = None):
    """Minimum cost multicut with every component discrete convex."""
    return _solve_multicut(g, c, cfg or SolverConfig(), convex=True)


def _solve_labeled(g: GridGraph, c, d, ls, cfg: SolverConfig, convex: bool):
    start = time.monotonic()
    if not isinstance(ls, LabelSpec):
        ls = LabelSpec.make(int(ls))
    unary = unary_costs(g, d, ls.count)
    inst, vm = build_mcn(g, c, unary, ls)
    dirs = parse_directions(cfg.directions, g) if convex else None
    report = SolveReport((g.width, g.height), 0.0)
    constrained = convex and any(ls.constrained(k) for k in ls.labels)

    def separate(values):
        if not constrained:
            return "convexity", []
        labels = vm.labels_of(values)
        return "convexity", [s.constraint for s in separate_convexity_mcn(g, labels, unary, ls, dirs, vm)]

    sol = _loop(g, inst, cfg, separate, report, start)
    _finish_report(report, sol, start)
    if sol is None or sol.values is None:
        return None, None, report
    return vm.labels_of(sol.values), EdgeLabeling.of(vm.edges_of(sol.values)), report


def solve_mcn(g: GridGraph, c, d, ls, cfg: SolverConfig | None = None):
    """Multicut with node labels (Potts model) as a single ILP."""
    return _solve_labeled(g, c, d, ls, cfg or SolverConfig(), convex=False)


def solve_convex_mcn(g: GridGraph, c, d, ls, cfg: SolverConfig | None = None):
    """Multicut with node labels and hull-set convexity per label."""
    return _solve_labeled(g, c, d, ls, cfg or SolverConfig(), convex=True)
