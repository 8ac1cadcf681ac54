"""Brute-force references for tiny instances.

Nothing here reuses the scanning, path or ILP code of the solver; convexity
is tested pairwise over lattice segments and optima come from enumeration.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from .grid import Decomposition, GridGraph

MAX_DECOMP_NODES = 12
MAX_LABELINGS = 10 ** 6
MAX_PRUNED_NODES = 25
DEFAULT_BUDGET = 5_000_000


class OracleRefused(RuntimeError):
    pass


def _canonical_step(dx: int, dy: int) -> tuple[int, int]:
    g = gcd(abs(dx), abs(dy))
    a, b = dx // g, dy // g
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return a, b


def _between(p, q) -> Iterator[tuple[int, int]]:
    dx, dy = q[0] - p[0], q[1] - p[1]
    g = gcd(abs(dx), abs(dy))
    for s in range(1, g):
        yield p[0] + s * dx // g, p[1] + s * dy // g


def _flood(width: int, height: int, same) -> list[int]:
    """Component id per node; ``same(u, v)`` says whether adjacent u, v are joined."""
    n = width * height
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in range(n):
        c, r = v % width, v // width
        for w in ((v + 1) if c + 1 < width else None, (v + width) if r + 1 < height else None):
            if w is not None and same(v, w):
                ra, rb = find(v), find(w)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    ids: dict[int, int] = {}
    out = []
    for v in range(n):
        root = find(v)
        if root not in ids:
            ids[root] = len(ids)
        out.append(ids[root])
    return out


# -- cycles -----------------------------------------------------------------

def enumerate_cycles(g: GridGraph) -> list[frozenset]:
    """Every simple cycle of the grid as a frozenset of edge indices."""
    adj = {v: g.neighbors(v) for v in range(g.node_count)}
    found = set()
    for s in range(g.node_count):
        stack = [(s, [s])]
        while stack:
            u, path = stack.pop()
            for w in adj[u]:
                if w == s and len(path) >= 4 and path[1] < path[-1]:
                    found.add(frozenset(g.path_edges(path + [s])))
                elif w > s and w not in path:
                    stack.append((w, path + [w]))
    return sorted(found, key=lambda c: (len(c), sorted(c)))


def cycle_condition(cycles: Iterable[frozenset], y) -> bool:
    """True iff no cycle meets the cut set in exactly one edge."""
    cut = {e for e, val in enumerate(y) if val}
    return all(len(c & cut) != 1 for c in cycles)


# -- decompositions -----------------------------------------------------------

@lru_cache(maxsize=16)
def _decomposition_table(width: int, height: int):
    g = GridGraph(width, height)
    n, ne = g.node_count, g.edge_count
    if n > MAX_DECOMP_NODES:
        raise OracleRefused(f"{n} nodes exceed the enumeration cap of {MAX_DECOMP_NODES}")
    edges = g.edges
    ys = ((np.arange(2 ** ne)[:, None] >> np.arange(ne)[None, :]) & 1).astype(np.int8)
    lab = np.tile(np.arange(n), (ys.shape[0], 1))
    changed = True
    while changed:
        changed = False
        for e, (u, v) in enumerate(edges.tolist()):
            joined = ys[:, e] == 0
            m = np.minimum(lab[:, u], lab[:, v])
            upd = joined & ((lab[:, u] != m) | (lab[:, v] != m))
            if upd.any():
                lab[upd, u] = m[upd]
                lab[upd, v] = m[upd]
                changed = True
    induced = (lab[:, edges[:, 0]] != lab[:, edges[:, 1]]).astype(np.int8) if ne else ys
    keep = np.all(induced == ys, axis=1)
    return ys[keep], lab[keep]


def enumerate_decompositions(g: GridGraph) -> Iterator[Decomposition]:
    _, labs = _decomposition_table(g.width, g.height)
    for row in labs:
        yield Decomposition(tuple(int(x) for x in row))


def _convex_members(g: GridGraph, comp_of, members, directions=None) -> bool:
    coords = [g.coords(v) for v in members]
    cid = comp_of[members[0]]
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            p, q = coords[a], coords[b]
            if directions is not None and _canonical_step(q[0] - p[0], q[1] - p[1]) not in directions:
                continue
            for x, y in _between(p, q):
                if comp_of[y * g.width + x] != cid:
                    return False
    return True


def is_discrete_convex(g: GridGraph, d: Decomposition, component: int, directions=None) -> bool:
    """No lattice point between two nodes of ``component`` belongs elsewhere.

    ``directions`` (iterable of canonical offsets) restricts the pairs checked;
    the default is every lattice direction.
    """
    dirs = None if directions is None else set(map(tuple, directions))
    members = [v for v, c in enumerate(d.component_of) if c == component]
    if not members:
        raise ValueError(f"no component {component}")
    return _convex_members(g, d.component_of, members, dirs)


def all_convex(g: GridGraph, d: Decomposition, directions=None) -> bool:
    return all(is_discrete_convex(g, d, k, directions) for k in range(d.component_count))


@lru_cache(maxsize=16)
def _convex_table(width: int, height: int, directions):
    g = GridGraph(width, height)
    ys, labs = _decomposition_table(width, height)
    dirs = None if directions is None else set(directions)
    flags = np.array([all_convex(g, Decomposition(tuple(int(x) for x in row)), dirs) for row in labs])
    return ys[flags].astype(float), labs[flags]


def brute_force_convex_mc(g: GridGraph, c, directions=None) -> tuple[float, Decomposition]:
    """Cheapest decomposition whose components are all discrete convex."""
    c = np.asarray(c, dtype=float)
    key = None if directions is None else tuple(sorted(map(tuple, directions)))
    ys, labs = _convex_table(g.width, g.height, key)
    energies = ys @ c
    best = int(np.argmin(energies))
    return float(energies[best]), Decomposition(tuple(int(x) for x in labs[best]))


def brute_force_mc(g: GridGraph, c) -> tuple[float, Decomposition]:
    c = np.asarray(c, dtype=float)
    ys, labs = _decomposition_table(g.width, g.height)
    energies = ys.astype(float) @ c
    best = int(np.argmin(energies))
    return float(energies[best]), Decomposition(tuple(int(x) for x in labs[best]))


# -- node labelings -----------------------------------------------------------

def label_decomposition(g: GridGraph, labels) -> Decomposition:
    labels = list(labels)
    return Decomposition(tuple(_flood(g.width, g.height, lambda u, v: labels[u] == labels[v])))


def is_convex_labeling(g: GridGraph, labels, hull_sets, directions=None) -> bool:
    """Every lattice point between two nodes of a ``k`` component has a label in ``hull_sets[k]``."""
    labels = [int(x) for x in labels]
    nlab = len(hull_sets)
    dirs = None if directions is None else set(map(tuple, directions))
    comp = _flood(g.width, g.height, lambda u, v: labels[u] == labels[v])
    groups: dict[int, list[int]] = {}
    for v, cid in enumerate(comp):
        groups.setdefault(cid, []).append(v)
    for members in groups.values():
        k = labels[members[0]]
        allowed = hull_sets[k]
        if len(allowed) >= nlab:
            continue
        coords = [g.coords(v) for v in members]
        for a in range(len(coords)):
            for b in range(a + 1, len(coords)):
                p, q = coords[a], coords[b]
                if dirs is not None and _canonical_step(q[0] - p[0], q[1] - p[1]) not in dirs:
                    continue
                for x, y in _between(p, q):
                    if labels[y * g.width + x] not in allowed:
                        return False
    return True


def labeling_energy(g: GridGraph, c, d, labels) -> float:
    labels = [int(x) for x in labels]
    total = sum(float(d[v][labels[v]]) for v in range(g.node_count))
    for e, (u, v) in enumerate(g.edges.tolist()):
        if labels[u] != labels[v]:
            total += float(c[e])
    return total


def brute_force_convex_mcn(g: GridGraph, c, d, ls, directions=None, budget: int = DEFAULT_BUDGET):
    """Cheapest labelling satisfying the hull-set convexity condition.

    Plain enumeration when ``|L|^N <= 10^6``; larger instances (up to 25 nodes)
    use depth-first enumeration with an admissible bound, still exact, and
    refuse once ``budget`` search nodes have been visited.
    Returns ``(energy, labels)``.
    """
    hull_sets = [frozenset(h) for h in ls.hull_sets]
    nlab = len(hull_sets)
    n = g.node_count
    c = [float(x) for x in c]
    d = [[float(x) for x in row] for row in np.asarray(d, dtype=float)]
    feasible = lambda labs: is_convex_labeling(g, labs, hull_sets, directions)

    if nlab ** n <= MAX_LABELINGS:
        best, best_labels = np.inf, None
        for labs in product(range(nlab), repeat=n):
            e = labeling_energy(g, c, d, labs)
            if e < best - 1e-12 and feasible(labs):
                best, best_labels = e, labs
        return best, tuple(best_labels)
    if n > MAX_PRUNED_NODES:
        raise OracleRefused(f"{n} nodes exceed the pruned enumeration cap of {MAX_PRUNED_NODES}")

    # edges grouped by their later endpoint (row-major assignment order)
    back_edges = [[] for _ in range(n)]
    for e, (u, v) in enumerate(g.edges.tolist()):
        back_edges[max(u, v)].append((min(u, v), c[e]))
    min_unary = [min(row) for row in d]
    # optimistic completion cost of nodes t.. and of edges not yet closed
    tail = [0.0] * (n + 1)
    for t in range(n - 1, -1, -1):
        tail[t] = tail[t + 1] + min_unary[t] + sum(min(0.0, w) for _, w in back_edges[t])
    order = [sorted(range(nlab), key=lambda l: (d[v][l], l)) for v in range(n)]

    best, best_labels = np.inf, None
    for k in range(nlab):
        labs = [k] * n
        e = labeling_energy(g, c, d, labs)
        if e < best:
            best, best_labels = e, tuple(labs)

    labs = [0] * n
    visited = 0

    def dfs(t, acc):
        nonlocal best, best_labels, visited
        visited += 1
        if visited > budget:
            raise OracleRefused("search budget exhausted")
        if t == n:
            if acc < best - 1e-12 and feasible(labs):
                best, best_labels = acc, tuple(labs)
            return
        for l in order[t]:
            inc = d[t][l]
            for u, w in back_edges[t]:
                if labs[u] != l:
                    inc += w
            if acc + inc + tail[t + 1] < best - 1e-12:
                labs[t] = l
                dfs(t + 1, acc + inc)

    dfs(0, 0.0)
    return best, best_labels


# -- convexity constraint forms -------------------------------------------------

def check_lemma1(pp, y) -> tuple[bool, bool]:
    """Evaluate the linear convexity inequality and the implication it encodes.

    ``y`` maps edge index to 0/1. Returns ``(inequality holds, implication holds)``.
    """
    on_path = sum(int(y[e]) for e in pp.path_edges)
    on_line = sum(int(y[e]) for e in pp.line_edges)
    inequality = len(pp.line_edges) * on_path >= on_line
    implication = (on_path != 0) or (on_line == 0)
    return inequality, implication


def check_label_implication(pp, k: int, hull_set, labels) -> bool:
    """Path nodes all labelled ``k`` implies hull nodes all labelled within ``hull_set``."""
    if all(labels[v] == k for v in pp.nodes_p):
        return all(labels[v] in hull_set for v in pp.nodes_sp)
    return True
