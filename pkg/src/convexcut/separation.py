"""Separation of violated cycle and convexity constraints on integral solutions.

A convexity violation is found by scanning node sequences ``v, v+(a,b),
v+2(a,b), ...``: two nodes of one component with a foreign node between
them. The violation is turned into a constraint through a path ``P`` inside
the component and a grid path ``S(P)`` hugging the straight segment between
the endpoints.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from . import kernels
from .grid import Cycle, Decomposition, GridGraph, components_from_edges
from .ilp import LinearConstraint
from .models import (LabelSpec, VariableMap, convexity_constraint_mc,
                     convexity_constraint_mcn, cycle_constraint)


class SeparationError(ValueError):
    pass


# -- directions -------------------------------------------------------------

@dataclass(frozen=True)
class DirectionSet:
    offsets: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.offsets:
            if gcd(abs(a), abs(b)) != 1:
                raise SeparationError(f"offset ({a},{b}) is not co-prime")
            if not (b > 0 or (b == 0 and a > 0)):
                raise SeparationError(f"offset ({a},{b}) is not in canonical half-plane")
            if (a, b) in seen:
                raise SeparationError(f"duplicate offset ({a},{b})")
            seen.add((a, b))

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.offsets, dtype=np.int64).reshape(-1, 2)


def _direction_key(ab):
    a, b = ab
    return (max(abs(a), b), abs(a) + b, b, -a)


def enumerate_directions(g: GridGraph | None = None, limit: int | None = None) -> DirectionSet:
    """Canonical co-prime offsets with ``|a|, b <= limit``.

    Without a limit, offsets are bounded by the grid extent; longer offsets
    only produce single-node sequences.
    """
    if limit is None:
        if g is None:
            raise SeparationError("need a grid or a limit")
        amax, bmax = g.width - 1, g.height - 1
    else:
        if limit < 0:
            raise SeparationError("limit must be nonnegative")
        amax = bmax = int(limit)
    out = []
    for b in range(0, bmax + 1):
        for a in range(-amax, amax + 1):
            if (b > 0 or a > 0) and gcd(abs(a), b) == 1:
                out.append((a, b))
    return DirectionSet(tuple(sorted(out, key=_direction_key)))


def default_directions() -> DirectionSet:
    """The four canonical unit offsets; scanned both ways they give 8 directions."""
    return enumerate_directions(limit=1)


def parse_directions(spec, g: GridGraph) -> DirectionSet:
    """``"8"``, ``"all"`` or ``"limit:M"``; a DirectionSet passes through."""
    if isinstance(spec, DirectionSet):
        return spec
    spec = str(spec).strip()
    if spec == "8":
        return default_directions()
    if spec == "all":
        return enumerate_directions(g)
    if spec.startswith("limit:"):
        return enumerate_directions(g, int(spec.split(":", 1)[1]))
    raise SeparationError(f"unknown direction spec {spec!r}")


# -- data -------------------------------------------------------------------

@dataclass(frozen=True)
class ScanViolation:
    i: int
    z: int
    j: int
    direction: tuple[int, int]
    kind: str = "mc"
    k: int | None = None
    l: int | None = None

    def key(self):
        return (self.i, self.j, self.z, self.direction)

    def serialize(self) -> str:
        s = f"violation kind={self.kind} dir={self.direction[0]},{self.direction[1]} i={self.i} z={self.z} j={self.j}"
        if self.kind == "mcn":
            s += f" k={self.k} l={self.l}"
        return s


@dataclass(frozen=True)
class PathPair:
    path: tuple[int, ...]
    line: tuple[int, ...]
    path_edges: tuple[int, ...]
    line_edges: tuple[int, ...]
    nodes_p: tuple[int, ...]
    nodes_sp: tuple[int, ...]

    @classmethod
    def make(cls, g: GridGraph, path: Sequence[int], line: Sequence[int], hull_nodes=None):
        """``nodes_sp`` are the line nodes not on the path, optionally restricted."""
        on_path = set(path)
        sp = [v for v in line if v not in on_path]
        if hull_nodes is not None:
            sp = [v for v in sp if hull_nodes[v]]
        return cls(tuple(path), tuple(line), tuple(g.path_edges(path)), tuple(g.path_edges(line)),
                   tuple(path), tuple(sp))

    def serialize(self) -> str:
        return ("pathpair path=" + ",".join(map(str, self.path))
                + " line=" + ",".join(map(str, self.line))
                + " sp=" + ",".join(map(str, self.nodes_sp)))


# -- cycle separation -------------------------------------------------------

def _bfs(g: GridGraph, src: int, dst: int, ok) -> list[int] | None:
    """Fewest-edge path through nodes accepted by ``ok`` (neighbours in index order)."""
    if src == dst:
        return [src]
    prev = {src: src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w in prev or not ok(u, w):
                continue
            prev[w] = u
            if w == dst:
                out = [w]
                while out[-1] != src:
                    out.append(prev[out[-1]])
                return out[::-1]
            queue.append(w)
    return None


def violated_cycles(g: GridGraph, y) -> list[tuple[Cycle, int]]:
    """For each cut edge joining one component, the cycle closing it and that edge."""
    y = np.asarray(y, dtype=np.int8)
    comp = components_from_edges(g, y).component_of
    out = []
    for e, (u, v) in enumerate(g.edges.tolist()):
        if not y[e] or comp[u] != comp[v]:
            continue
        path = _bfs(g, u, v, lambda a, b: not y[g.edge_index(a, b)])
        out.append((Cycle(tuple(path)), e))
    return out


def separate_cycles(g: GridGraph, y, vm: VariableMap | None = None) -> list[LinearConstraint]:
    if vm is None:
        vm = VariableMap(np.arange(g.edge_count))
    return [cycle_constraint(g, cyc, e, vm) for cyc, e in violated_cycles(g, y)]


# -- convexity scans --------------------------------------------------------

def _decomposition_array(d) -> np.ndarray:
    return np.asarray(d.component_of if isinstance(d, Decomposition) else d, dtype=np.int32)


def scan_convexity_mc(g: GridGraph, d, dirs: DirectionSet) -> list[ScanViolation]:
    comp = _decomposition_array(d)
    rows = kernels.scan_mc(g.width, g.height, comp, dirs.as_array())
    out = [ScanViolation(int(i), int(z), int(j), dirs.offsets[int(di)]) for i, z, j, di in rows.tolist()]
    return sorted(out, key=ScanViolation.key)


def label_components(g: GridGraph, labels) -> Decomposition:
    labels = np.asarray(labels)
    e = g.edges
    y = (labels[e[:, 0]] != labels[e[:, 1]]).astype(np.int8)
    return components_from_edges(g, y)


def scan_convexity_mcn(g: GridGraph, x, ls: LabelSpec, dirs: DirectionSet) -> list[ScanViolation]:
    labels = np.asarray(x, dtype=np.int32)
    comp = label_components(g, labels).as_array()
    rows = kernels.scan_mcn(g.width, g.height, comp, labels, ls.hull_mask(), dirs.as_array())
    out = [ScanViolation(int(i), int(z), int(j), dirs.offsets[int(di)], "mcn", int(k), int(l))
           for i, z, j, di, k, l in rows.tolist()]
    return sorted(out, key=ScanViolation.key)


# -- paths ------------------------------------------------------------------

def find_path_mc_nodes(g: GridGraph, d, vi: int, vj: int) -> list[int]:
    comp = _decomposition_array(d)
    if comp[vi] != comp[vj]:
        raise SeparationError(f"nodes {vi} and {vj} lie in different components")
    c = comp[vi]
    return _bfs(g, vi, vj, lambda a, b: comp[b] == c)


def find_path_mc(g: GridGraph, d, vi: int, vj: int) -> list[int]:
    """Edge indices of a fewest-edge path from ``vi`` to ``vj`` inside their component."""
    return g.path_edges(find_path_mc_nodes(g, d, vi, vj))


def find_path_mcn_nodes(g: GridGraph, d, x, unary, k: int, vi: int, vj: int) -> list[int]:
    comp = _decomposition_array(d)
    labels = np.asarray(x)
    if labels[vi] != k or labels[vj] != k:
        raise SeparationError(f"endpoints are not labelled {k}")
    if comp[vi] != comp[vj]:
        raise SeparationError(f"nodes {vi} and {vj} lie in different components")
    c = comp[vi]
    members = np.nonzero(comp == c)[0]
    weight = np.asarray(unary, dtype=float)[:, k]
    # shift only when needed to make weights nonnegative; exact otherwise
    shift = min(0.0, float(weight[members].min()))
    # (cost, hops, node); interior nodes pay their shifted unary
    best = {vi: (0.0, 0)}
    prev = {vi: vi}
    heap = [(0.0, 0, vi)]
    while heap:
        cost, hops, u = heapq.heappop(heap)
        if best.get(u) != (cost, hops):
            continue
        if u == vj:
            break
        step = 0.0 if u == vi else weight[u] - shift
        for w in g.neighbors(u):
            if comp[w] != c:
                continue
            cand = (cost + step, hops + 1)
            if w not in best or cand < best[w]:
                best[w] = cand
                prev[w] = u
                heapq.heappush(heap, (cand[0], cand[1], w))
    out = [vj]
    while out[-1] != vi:
        out.append(prev[out[-1]])
    return out[::-1]


def find_path_mcn(g: GridGraph, d, x, unary, k: int, vi: int, vj: int) -> list[int]:
    """Edge indices of a path of least summed unary cost (label ``k``) inside the component."""
    return g.path_edges(find_path_mcn_nodes(g, d, x, unary, k, vi, vj))


# -- straight line ----------------------------------------------------------

def _inside_or_on(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Nonzero-winding membership of integer points in a closed polyline, boundary included."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    ax, ay, bx, by = a[:, 0][None], a[:, 1][None], b[:, 0][None], b[:, 1][None]
    cross = (bx - ax) * (py - ay) - (px - ax) * (by - ay)
    within = ((np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx))
              & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by)))
    on = np.any((cross == 0) & within, axis=1)
    up = (ay <= py) & (by > py) & (cross > 0)
    down = (ay > py) & (by <= py) & (cross < 0)
    wn = up.sum(axis=1) - down.sum(axis=1)
    return on | (wn != 0)


def straight_line(g: GridGraph, path: Sequence[int], through: int | None = None,
                  allowed=None, inside_loop: bool = True) -> list[int] | None:
    """Monotone grid path from ``path[0]`` to ``path[-1]`` closest to their segment.

    Nodes must lie inside or on the loop formed by ``path`` and the segment
    (unless ``inside_loop`` is false) and be accepted by the ``allowed`` mask.
    With ``through`` the result visits that node. Returns the node sequence
    minimising the summed distance to the segment, or None when no such path
    exists.
    """
    vi, vj = path[0], path[-1]
    if vi == vj:
        raise SeparationError("path endpoints must be distinct")
    xi, yi = g.coords(vi)
    xj, yj = g.coords(vj)
    dx, dy = xj - xi, yj - yi
    sx = 1 if dx >= 0 else -1
    sy = 1 if dy >= 0 else -1
    nx, ny = abs(dx) + 1, abs(dy) + 1
    p_idx, q_idx = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    cols = xi + sx * p_idx
    rows = yi + sy * q_idx
    nodes = rows * g.width + cols
    # integer cross product is proportional to the distance from the segment
    dist = np.abs(dx * (rows - yi) - dy * (cols - xi))
    ok = np.ones((nx, ny), dtype=bool)
    if inside_loop:
        poly = np.array([g.coords(v) for v in path], dtype=np.int64)
        pts = np.stack([cols.ravel(), rows.ravel()], axis=1)
        ok &= _inside_or_on(poly, pts).reshape(nx, ny)
    if allowed is not None:
        ok &= np.asarray(allowed, dtype=bool)[nodes]
    if through is not None:
        tx, ty = g.coords(through)
        pz, qz = (tx - xi) * sx, (ty - yi) * sy
        if not (0 <= pz < nx and 0 <= qz < ny):
            raise SeparationError("forced node outside the bounding box")
        ok &= ~(((p_idx < pz) & (q_idx > qz)) | ((p_idx > pz) & (q_idx < qz)))
    if not ok[0, 0] or not ok[-1, -1]:
        return None

    inf = np.iinfo(np.int64).max
    cost = np.full((nx, ny), inf, dtype=np.int64)
    back = np.zeros((nx, ny), dtype=np.int8)  # 1: came from p-1, 2: from q-1
    for p in range(nx):
        for q in range(ny):
            if not ok[p, q]:
                continue
            if p == 0 and q == 0:
                cost[p, q] = dist[p, q]
                continue
            best, how = inf, 0
            cand = []
            if p > 0 and cost[p - 1, q] < inf:
                cand.append((cost[p - 1, q], nodes[p - 1, q], 1))
            if q > 0 and cost[p, q - 1] < inf:
                cand.append((cost[p, q - 1], nodes[p, q - 1], 2))
            if cand:
                best, _, how = min(cand)
                cost[p, q] = best + dist[p, q]
                back[p, q] = how
    if cost[-1, -1] == inf:
        return None
    out = []
    p, q = nx - 1, ny - 1
    while True:
        out.append(int(nodes[p, q]))
        if p == 0 and q == 0:
            break
        if back[p, q] == 1:
            p -= 1
        else:
            q -= 1
    return out[::-1]


def _bfs_within(g: GridGraph, mask, src: int, dst: int) -> list[int] | None:
    return _bfs(g, src, dst, lambda a, b: bool(mask[b]))


def path_pair_mc(g: GridGraph, d, v: ScanViolation) -> PathPair:
    """Path pair for a component violation; every line node is forced into the component
    by the segment closure of the path, so the constraint holds for all convex solutions."""
    path = find_path_mc_nodes(g, d, v.i, v.j)
    closure = kernels.segment_closure(g.width, g.height, np.asarray(path), True)
    line = straight_line(g, path, through=v.z, allowed=closure)
    if line is None:
        line = straight_line(g, path, through=v.z, allowed=closure, inside_loop=False)
    if line is None:
        head = _bfs_within(g, closure, v.i, v.z)
        tail = _bfs_within(g, closure, v.z, v.j)
        if head is None or tail is None:
            raise SeparationError(f"no closure path through {v.z} for violation {v.serialize()}")
        line = head + tail[1:]
    return PathPair.make(g, path, line)


def path_pair_mcn(g: GridGraph, d, labels, unary, v: ScanViolation) -> PathPair:
    """Path pair for a label violation; hull nodes are limited to lattice points on
    segments between two path nodes."""
    path = find_path_mcn_nodes(g, d, labels, unary, v.k, v.i, v.j)
    pairwise = kernels.segment_closure(g.width, g.height, np.asarray(path), False)
    line = straight_line(g, path, through=v.z, allowed=pairwise)
    if line is None:
        line = straight_line(g, path, through=v.z)
    if line is None:
        line = straight_line(g, path, through=v.z, inside_loop=False)
    return PathPair.make(g, path, line, hull_nodes=pairwise)


@dataclass
class Separated:
    violation: ScanViolation
    pair: PathPair
    constraint: LinearConstraint


def separate_convexity_mc(g: GridGraph, d, dirs: DirectionSet, vm: VariableMap) -> list[Separated]:
    out = []
    for v in scan_convexity_mc(g, d, dirs):
        pp = path_pair_mc(g, d, v)
        out.append(Separated(v, pp, convexity_constraint_mc(pp, vm)))
    return out


def separate_convexity_mcn(g: GridGraph, labels, unary, ls: LabelSpec, dirs: DirectionSet,
                           vm: VariableMap) -> list[Separated]:
    labels = np.asarray(labels, dtype=np.int32)
    d = label_components(g, labels)
    out = []
    for v in scan_convexity_mcn(g, labels, ls, dirs):
        pp = path_pair_mcn(g, d, labels, unary, v)
        out.append(Separated(v, pp, convexity_constraint_mcn(pp, v.k, ls, vm)))
    return out
