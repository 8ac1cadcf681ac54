"""ILP models: multicut (MC), multicut with node labels (MCN) and their
convexity-constrained variants.

Variables are laid out as the edge block ``y_<e>`` first, followed (MCN only)
by the node-label block ``x_<v>_<l>`` in node-major order.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from .grid import Cycle, GridGraph
from .ilp import IlpInstance, LinearConstraint


class ModelError(ValueError):
    pass


def edge_costs(g: GridGraph, c) -> np.ndarray:
    arr = np.asarray(c, dtype=float).reshape(-1)
    if arr.size != g.edge_count:
        raise ModelError(f"expected {g.edge_count} edge costs, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ModelError("edge costs must be finite")
    return arr


def unary_costs(g: GridGraph, d, nlabels: int) -> np.ndarray:
    arr = np.asarray(d, dtype=float)
    if arr.shape != (g.node_count, nlabels):
        raise ModelError(f"unary costs must have shape ({g.node_count}, {nlabels}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelError("unary costs must be finite")
    return arr


@dataclass(frozen=True)
class LabelSpec:
    """Label set ``0..count-1`` with a hull set per label.

    ``hull_sets[k]`` lists the labels allowed inside the convex hull of a
    component labelled ``k``; it always contains ``k``. ``hull_sets[k]`` equal
    to the full label set leaves label ``k`` unconstrained.
    """

    count: int
    hull_sets: tuple[frozenset, ...]

    def __post_init__(self):
        if self.count < 1:
            raise ModelError("at least one label is required")
        if len(self.hull_sets) != self.count:
            raise ModelError("one hull set per label is required")
        for k, hs in enumerate(self.hull_sets):
            if k not in hs:
                raise ModelError(f"hull set of label {k} must contain {k}")
            if any(not (0 <= l < self.count) for l in hs):
                raise ModelError(f"hull set of label {k} names an unknown label")

    @classmethod
    def make(cls, count: int, hull: dict[int, Iterable[int]] | None = None) -> "LabelSpec":
        full = frozenset(range(count))
        sets = [full] * count
        for k, ls in (hull or {}).items():
            if not 0 <= k < count:
                raise ModelError(f"unknown label {k}")
            sets[k] = frozenset(ls) | {k}
        return cls(count, tuple(sets))

    @property
    def labels(self) -> range:
        return range(self.count)

    def constrained(self, k: int) -> bool:
        return len(self.hull_sets[k]) < self.count

    def hull_mask(self) -> np.ndarray:
        mask = np.zeros((self.count, self.count), dtype=bool)
        for k, hs in enumerate(self.hull_sets):
            mask[k, sorted(hs)] = True
        return mask


@dataclass(frozen=True)
class VariableMap:
    edge_var: np.ndarray
    node_label_var: np.ndarray | None = None

    @property
    def var_count(self) -> int:
        n = self.edge_var.size
        if self.node_label_var is not None:
            n += self.node_label_var.size
        return n

    def edges_of(self, values) -> np.ndarray:
        vals = np.asarray(values)
        return vals[self.edge_var].astype(np.int8)

    def labels_of(self, values) -> np.ndarray:
        """Label per node (argmax of the x block)."""
        vals = np.asarray(values)
        return np.argmax(vals[self.node_label_var], axis=1).astype(np.int32)

    def names(self) -> list[str]:
        out = [f"y_{e}" for e in range(self.edge_var.size)]
        if self.node_label_var is not None:
            n, k = self.node_label_var.shape
            out += [f"x_{v}_{l}" for v in range(n) for l in range(k)]
        return out


def build_mc(g: GridGraph, c) -> tuple[IlpInstance, VariableMap]:
    cost = edge_costs(g, c)
    vm = VariableMap(np.arange(g.edge_count))
    return IlpInstance(g.edge_count, cost.tolist(), [], vm.names()), vm


def cycle_constraint(g: GridGraph, cycle: Cycle | Sequence[int], e: int, vm: VariableMap) -> LinearConstraint:
    """``y_e <= sum of the other cycle edges`` for edge index ``e``."""
    edges = cycle.edges(g) if isinstance(cycle, Cycle) else list(cycle)
    if e not in edges:
        raise ModelError(f"edge {e} is not on the cycle")
    terms = {int(vm.edge_var[f]): 1.0 for f in edges if f != e}
    terms[int(vm.edge_var[e])] = -1.0
    return LinearConstraint.build(terms, ">=", 0.0)


def build_mcn(g: GridGraph, c, d, ls: LabelSpec) -> tuple[IlpInstance, VariableMap]:
    if not isinstance(ls, LabelSpec):
        ls = LabelSpec.make(int(ls))
    cost = edge_costs(g, c)
    unary = unary_costs(g, d, ls.count)
    ne, n, k = g.edge_count, g.node_count, ls.count
    vm = VariableMap(np.arange(ne), ne + np.arange(n * k).reshape(n, k))
    x = vm.node_label_var
    inst = IlpInstance(ne + n * k, cost.tolist() + unary.reshape(-1).tolist(), [], vm.names())
    for v in range(n):
        inst.add(LinearConstraint.build({int(x[v, l]): 1.0 for l in range(k)}, ">=", 1.0))
        for l, m in combinations(range(k), 2):
            inst.add(LinearConstraint.build({int(x[v, l]): 1.0, int(x[v, m]): 1.0}, "<=", 1.0))
    for e, (v, w) in enumerate(g.edges.tolist()):
        ye = int(vm.edge_var[e])
        # ordered label pairs on (v, w) also cover the (w, v) orientation
        for l, m in permutations(range(k), 2):
            inst.add(LinearConstraint.build({int(x[v, l]): 1.0, int(x[w, m]): 1.0, ye: -1.0}, "<=", 1.0))
        for l in range(k):
            inst.add(LinearConstraint.build({ye: 1.0, int(x[v, l]): 1.0, int(x[w, l]): 1.0}, "<=", 2.0))
    return inst, vm


def convexity_constraint_mc(pp, vm: VariableMap) -> LinearConstraint:
    """``|S(P)| * sum_P y >= sum_S(P) y`` for a path pair."""
    path, line = list(pp.path_edges), list(pp.line_edges)
    if not path or not line:
        raise ModelError("path and straight line must both be nonempty")
    size = float(len(line))
    terms: dict[int, float] = {}
    for e in path:
        terms[int(vm.edge_var[e])] = terms.get(int(vm.edge_var[e]), 0.0) + size
    for e in line:
        terms[int(vm.edge_var[e])] = terms.get(int(vm.edge_var[e]), 0.0) - 1.0
    return LinearConstraint.build(terms, ">=", 0.0)


def convexity_constraint_mcn(pp, k: int, ls: LabelSpec, vm: VariableMap) -> LinearConstraint:
    """Linear form of: path nodes all labelled ``k`` => hull nodes labelled in ``L_k``.

    ``|VS| (|VP| - sum_VP x_vk) >= |VS| - sum_{VS, L_k} x_vl`` rearranged to
    ``sum_{VS, L_k} x_vl - |VS| sum_VP x_vk >= |VS| (1 - |VP|)``.
    """
    if not 0 <= k < ls.count:
        raise ModelError(f"unknown label {k}")
    vp, vs = list(pp.nodes_p), list(pp.nodes_sp)
    if not vp or not vs:
        raise ModelError("path and hull node sets must both be nonempty")
    x = vm.node_label_var
    nvs = float(len(vs))
    terms: dict[int, float] = {}
    for v in vp:
        terms[int(x[v, k])] = terms.get(int(x[v, k]), 0.0) - nvs
    for v in vs:
        for l in sorted(ls.hull_sets[k]):
            terms[int(x[v, l])] = terms.get(int(x[v, l]), 0.0) + 1.0
    return LinearConstraint.build(terms, ">=", nvs * (1.0 - len(vp)))


def mc_energy(g: GridGraph, c, y) -> float:
    return float(np.dot(edge_costs(g, c), np.asarray(y, dtype=float)))


def mcn_energy(g: GridGraph, c, d, labels) -> float:
    """Energy of a node labelling with the induced cut."""
    labels = np.asarray(labels)
    e = g.edges
    y = (labels[e[:, 0]] != labels[e[:, 1]]).astype(float)
    d = np.asarray(d, dtype=float)
    return float(np.dot(edge_costs(g, c), y) + d[np.arange(g.node_count), labels].sum())
