"""4-connected pixel grid graphs, edge labelings and decompositions.

Nodes are numbered row-major, ``v = row * width + col``, and embedded in the
plane at ``(col, row)``. Edges come in a fixed order: every horizontal edge
(row-major), then every vertical edge (row-major).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridGraph:
    width: int
    height: int

    def __post_init__(self):
        if int(self.width) < 1 or int(self.height) < 1:
            raise GridError(f"grid dimensions must be positive, got {self.width}x{self.height}")

    @property
    def node_count(self) -> int:
        return self.width * self.height

    @property
    def edge_count(self) -> int:
        return self.width * (self.height - 1) + self.height * (self.width - 1)

    @property
    def horizontal_count(self) -> int:
        return self.height * (self.width - 1)

    def node(self, col: int, row: int) -> int:
        return row * self.width + col

    def coords(self, v: int) -> tuple[int, int]:
        return v % self.width, v // self.width

    def contains(self, col: int, row: int) -> bool:
        return 0 <= col < self.width and 0 <= row < self.height

    @cached_property
    def edges(self) -> np.ndarray:
        """(edge_count, 2) int array of endpoints, lower node first."""
        w, h = self.width, self.height
        ids = np.arange(w * h).reshape(h, w)
        horiz = np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()], axis=1)
        vert = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1)
        out = np.concatenate([horiz, vert]).astype(np.int64)
        out.setflags(write=False)
        return out

    def edge_index(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        w = self.width
        if v == u + 1 and u % w != w - 1:
            return (u // w) * (w - 1) + u % w
        if v == u + w:
            return self.horizontal_count + u
        raise GridError(f"nodes {u} and {v} are not adjacent")

    def neighbors(self, v: int) -> list[int]:
        """Adjacent nodes in increasing index order."""
        col, row = self.coords(v)
        out = []
        if row > 0:
            out.append(v - self.width)
        if col > 0:
            out.append(v - 1)
        if col < self.width - 1:
            out.append(v + 1)
        if row < self.height - 1:
            out.append(v + self.width)
        return out

    def path_edges(self, nodes: Sequence[int]) -> list[int]:
        return [self.edge_index(a, b) for a, b in zip(nodes[:-1], nodes[1:])]


def build_grid(width: int, height: int) -> GridGraph:
    return GridGraph(int(width), int(height))


@dataclass(frozen=True)
class EdgeLabeling:
    """One 0/1 flag per edge; 1 means the edge is cut."""

    values: tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable) -> "EdgeLabeling":
        vals = tuple(int(round(float(x))) for x in values)
        if any(x not in (0, 1) for x in vals):
            raise GridError("edge labels must be 0 or 1")
        return cls(vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int8)

    def cut_count(self) -> int:
        return sum(self.values)

    def serialize(self) -> str:
        return "".join("1" if x else "0" for x in self.values)

    @classmethod
    def parse(cls, text: str) -> "EdgeLabeling":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise GridError("edge labeling must consist of '0' and '1' characters")
        return cls(tuple(int(ch) for ch in text))


def _canonical(labels: Sequence[int]) -> tuple[int, ...]:
    remap: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in remap:
            remap[lab] = len(remap)
        out.append(remap[lab])
    return tuple(out)


@dataclass(frozen=True)
class Decomposition:
    """Node partition; ids are renumbered by first row-major occurrence."""

    component_of: tuple[int, ...]
    component_count: int = field(init=False)

    def __post_init__(self):
        canon = _canonical(self.component_of)
        object.__setattr__(self, "component_of", canon)
        object.__setattr__(self, "component_count", (max(canon) + 1) if canon else 0)

    def __len__(self):
        return len(self.component_of)

    def __getitem__(self, v):
        return self.component_of[v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.component_of, dtype=np.int32)

    def members(self, comp: int) -> list[int]:
        return [v for v, c in enumerate(self.component_of) if c == comp]

    def serialize(self, width: int | None = None) -> str:
        ids = [str(c) for c in self.component_of]
        if width is None:
            return " ".join(ids)
        rows = [" ".join(ids[r:r + width]) for r in range(0, len(ids), width)]
        return "\n".join(rows)

    @classmethod
    def parse(cls, text: str) -> "Decomposition":
        return cls(tuple(int(tok) for tok in text.split()))


@dataclass(frozen=True)
class Cycle:
    """Closed walk given by its node sequence (first node not repeated)."""

    nodes: tuple[int, ...]

    def edges(self, g: GridGraph) -> list[int]:
        ring = list(self.nodes) + [self.nodes[0]]
        return g.path_edges(ring)


def _check_length(g: GridGraph, y) -> np.ndarray:
    arr = np.asarray(y.values if isinstance(y, EdgeLabeling) else y, dtype=np.int8)
    if arr.shape != (g.edge_count,):
        raise GridError(f"labeling has {arr.size} entries, graph has {g.edge_count} edges")
    return arr


def components_from_edges(g: GridGraph, y) -> Decomposition:
    arr = _check_length(g, y)
    labels = kernels.label_components(g.width, g.height, arr)
    return Decomposition(tuple(int(x) for x in labels))


def multicut_of(g: GridGraph, d: Decomposition) -> EdgeLabeling:
    comp = np.asarray(d.component_of, dtype=np.int64)
    if comp.shape != (g.node_count,):
        raise GridError("decomposition size does not match the graph")
    e = g.edges
    y = (comp[e[:, 0]] != comp[e[:, 1]]).astype(np.int8)
    # every block must be connected, i.e. relabeling from y reproduces d
    if components_from_edges(g, y).component_of != d.component_of:
        raise GridError("decomposition has a block that does not induce a connected subgraph")
    return EdgeLabeling(tuple(int(x) for x in y))


def is_multicut(g: GridGraph, y) -> bool:
    arr = _check_length(g, y)
    comp = np.asarray(kernels.label_components(g.width, g.height, arr))
    e = g.edges
    induced = (comp[e[:, 0]] != comp[e[:, 1]]).astype(np.int8)
    return bool(np.array_equal(induced, arr))
