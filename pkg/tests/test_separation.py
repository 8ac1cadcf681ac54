import itertools

import numpy as np
import pytest

from convexcut.grid import Decomposition, build_grid, components_from_edges, is_multicut
from convexcut.models import LabelSpec, build_mc, build_mcn
from convexcut.oracle import all_convex, is_discrete_convex
from convexcut.separation import (DirectionSet, SeparationError, _inside_or_on,
                                  default_directions, enumerate_directions, find_path_mc,
                                  find_path_mc_nodes, find_path_mcn_nodes, label_components,
                                  parse_directions, scan_convexity_mc, scan_convexity_mcn,
                                  separate_convexity_mc, separate_convexity_mcn, separate_cycles,
                                  straight_line)

from conftest import random_decomposition


def test_directions_limit1():
    assert set(enumerate_directions(limit=1)) == {(1, 0), (0, 1), (1, 1), (-1, 1)}
    assert set(default_directions()) == {(1, 0), (0, 1), (1, 1), (-1, 1)}


def test_directions_limit2():
    extra = set(enumerate_directions(limit=2)) - set(enumerate_directions(limit=1))
    assert extra == {(2, 1), (-2, 1), (1, 2), (-1, 2)}


def test_directions_all_bounded_by_grid():
    dirs = enumerate_directions(build_grid(4, 3))
    assert all(abs(a) <= 3 and 0 <= b <= 2 for a, b in dirs)
    assert (2, 2) not in set(enumerate_directions(limit=5))
    assert len({(-a, -b) for a, b in dirs} & set(dirs)) == 0


def test_direction_set_validation():
    with pytest.raises(SeparationError):
        DirectionSet(((2, 2),))
    with pytest.raises(SeparationError):
        DirectionSet(((0, -1),))
    with pytest.raises(SeparationError):
        parse_directions("diagonal", build_grid(2, 2))
    assert len(parse_directions("limit:2", build_grid(5, 5))) == 8


def test_separate_cycles_examples():
    g = build_grid(2, 2)
    assert separate_cycles(g, [0, 0, 0, 0]) == []
    cons = separate_cycles(g, [1, 0, 0, 0])
    assert len(cons) == 1 and len(cons[0].terms) == 4
    g = build_grid(3, 3)
    y = np.zeros(g.edge_count, dtype=int)
    e = g.edge_index(0, 1)
    y[e] = 1
    cons = separate_cycles(g, y)
    assert len(cons) == 1
    assert dict(cons[0].terms)[e] == -1
    assert len(cons[0].terms) == 4  # cut edge plus the 3-edge detour


def test_separate_cycles_iff_multicut(rng):
    g = build_grid(4, 3)
    for _ in range(300):
        y = (rng.random(g.edge_count) < 0.3).astype(int)
        cons = separate_cycles(g, y)
        assert (not cons) == is_multicut(g, y)
        assert all(not c.satisfied(y) for c in cons)


def test_scan_mc_examples():
    g = build_grid(3, 1)
    dirs = default_directions()
    assert scan_convexity_mc(g, Decomposition((0, 0, 0)), dirs) == []
    (v,) = scan_convexity_mc(g, Decomposition((0, 1, 0)), dirs)
    assert (v.i, v.z, v.j, v.direction) == (0, 1, 2, (1, 0))
    # an L-tromino on 2x2 has no lattice point between its nodes
    g = build_grid(2, 2)
    assert scan_convexity_mc(g, Decomposition((0, 0, 0, 1)), dirs) == []
    # an L of five nodes on 3x3 brackets the centre along the diagonal
    g = build_grid(3, 3)
    d = Decomposition((0, 0, 0, 1, 1, 0, 1, 1, 0))
    found = scan_convexity_mc(g, d, dirs)
    assert [(v.i, v.z, v.j, v.direction) for v in found] == [(0, 4, 8, (1, 1))]


def test_scan_mc_one_violation_per_sequence():
    g = build_grid(5, 1)
    found = scan_convexity_mc(g, Decomposition((0, 1, 0, 1, 0)), default_directions())
    assert [(v.i, v.z, v.j) for v in found] == [(0, 1, 2), (1, 2, 3)]


def test_scan_mcn_examples():
    g = build_grid(3, 2)
    dirs = default_directions()
    ls = LabelSpec.make(3, {0: {0}, 2: {1, 2}})
    assert scan_convexity_mcn(g, [0] * 6, ls, dirs) == []
    (v,) = scan_convexity_mcn(g, [0, 1, 0, 0, 0, 0], ls, dirs)
    assert (v.i, v.z, v.j, v.k, v.l, v.direction) == (0, 1, 2, 0, 1, (1, 0))
    assert scan_convexity_mcn(g, [2, 1, 2, 2, 2, 2], ls, dirs) == []


def test_scan_completeness_small(rng):
    for _ in range(200):
        g = build_grid(int(rng.integers(2, 6)), int(rng.integers(2, 6)))
        d = random_decomposition(g, rng)
        assert (not scan_convexity_mc(g, d, enumerate_directions(g))) == all_convex(g, d)


def test_coverage_of_sequences():
    g = build_grid(5, 4)
    for a, b in enumerate_directions(g):
        seen = []
        for v in range(g.node_count):
            x, y = g.coords(v)
            if g.contains(x - a, y - b):
                continue  # not a sequence start
            while g.contains(x, y):
                seen.append(g.node(x, y))
                x, y = x + a, y + b
        assert sorted(seen) == list(range(g.node_count))


def _all_simple_paths(g, allowed, s, t):
    out = []
    stack = [(s, [s])]
    while stack:
        u, path = stack.pop()
        if u == t:
            out.append(path)
            continue
        for w in g.neighbors(u):
            if allowed(w) and w not in path:
                stack.append((w, path + [w]))
    return out


def test_find_path_mc_examples():
    g = build_grid(3, 3)
    d = Decomposition((0, 0, 0, 0, 1, 0, 0, 0, 0))  # ring around the centre
    assert find_path_mc(g, d, 0, 1) == [g.edge_index(0, 1)]
    assert find_path_mc_nodes(g, d, 0, 2) == [0, 1, 2]
    path = find_path_mc_nodes(g, d, 3, 5)
    shortest = min(len(p) for p in _all_simple_paths(g, lambda w: d[w] == 0, 3, 5))
    assert len(path) == shortest == 5
    with pytest.raises(SeparationError):
        find_path_mc(g, d, 0, 4)


def test_find_path_mcn_cheap_corridor():
    g = build_grid(3, 3)
    labels = np.array([1, 1, 1, 1, 0, 1, 1, 1, 1])
    d = label_components(g, labels)
    unary = np.zeros((9, 2))
    unary[1, 1] = 5.0  # top corridor is expensive
    path = find_path_mcn_nodes(g, d, labels, unary, 1, 3, 5)
    assert path == [3, 6, 7, 8, 5]
    with pytest.raises(SeparationError):
        find_path_mcn_nodes(g, d, labels, unary, 0, 3, 5)


def test_find_path_mcn_uniform_matches_bfs(rng):
    g = build_grid(4, 4)
    for _ in range(50):
        labels = rng.integers(0, 2, g.node_count)
        d = label_components(g, labels)
        comp = d.as_array()
        v = int(rng.integers(g.node_count))
        members = np.nonzero(comp == comp[v])[0]
        w = int(rng.choice(members))
        if v == w:
            continue
        unary = np.full((g.node_count, 2), 0.3)
        p1 = find_path_mcn_nodes(g, d, labels, unary, int(labels[v]), v, w)
        assert len(p1) == len(find_path_mc_nodes(g, d, v, w))


def test_find_path_mcn_brute_force(rng):
    g = build_grid(3, 3)
    for _ in range(60):
        labels = (rng.random(9) < 0.8).astype(int)
        d = label_components(g, labels)
        ones = [v for v in range(9) if labels[v] == 1]
        if len(ones) < 2:
            continue
        v, w = ones[0], ones[-1]
        if d[v] != d[w]:
            continue
        unary = np.zeros((9, 2))
        unary[:, 1] = rng.integers(0, 5, 9)
        path = find_path_mcn_nodes(g, d, labels, unary, 1, v, w)
        cost = lambda p: sum(unary[u, 1] for u in p[1:-1])
        best = min(cost(p) for p in _all_simple_paths(g, lambda u: d[u] == d[v], v, w))
        assert cost(path) == pytest.approx(best)
        assert all(d[u] == d[v] for u in path)


def test_straight_line_adjacent_and_collinear():
    g = build_grid(4, 3)
    assert straight_line(g, [0, 1]) == [0, 1]
    assert straight_line(g, [0, 1, 2, 3]) == [0, 1, 2, 3]


def test_straight_line_staircase():
    g = build_grid(3, 3)
    path = [g.node(0, 0), g.node(1, 0), g.node(2, 0), g.node(2, 1), g.node(2, 2)]
    line = straight_line(g, path)
    assert [g.coords(v) for v in line] == [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]


def test_straight_line_not_bresenham():
    # the mirror path forces the staircase to the other side of the diagonal
    g = build_grid(3, 3)
    path = [g.node(0, 0), g.node(0, 1), g.node(0, 2), g.node(1, 2), g.node(2, 2)]
    line = straight_line(g, path)
    assert [g.coords(v) for v in line] == [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]


def test_inside_or_on():
    square = np.array([(0, 0), (2, 0), (2, 2), (0, 2)])
    pts = np.array([(1, 1), (0, 1), (3, 1), (2, 2)])
    assert _inside_or_on(square, pts).tolist() == [True, True, False, True]


def _loop_polygon(g, pp):
    return np.array([g.coords(v) for v in pp.path], dtype=np.int64)


def test_separate_convexity_mc_properties(rng):
    for _ in range(150):
        g = build_grid(int(rng.integers(3, 7)), int(rng.integers(3, 7)))
        d = random_decomposition(g, rng)
        _, vm = build_mc(g, np.zeros(g.edge_count))
        from convexcut.grid import multicut_of
        y = np.asarray(multicut_of(g, d).values)
        for s in separate_convexity_mc(g, d, enumerate_directions(g), vm):
            pp, v = s.pair, s.violation
            assert not s.constraint.satisfied(y)
            assert pp.path[0] == v.i and pp.path[-1] == v.j
            assert pp.line[0] == v.i and pp.line[-1] == v.j
            assert all(d[u] == d[v.i] for u in pp.path)
            assert v.z in pp.line
            inside = _inside_or_on(_loop_polygon(g, pp), np.array([g.coords(u) for u in pp.line]))
            assert inside.all()


def test_separate_convexity_mcn_properties(rng):
    for _ in range(150):
        g = build_grid(int(rng.integers(3, 6)), int(rng.integers(3, 6)))
        labels = rng.integers(0, 3, g.node_count)
        ls = LabelSpec.make(3, {0: {0}, 1: {0, 1}})
        unary = rng.random((g.node_count, 3))
        _, vm = build_mcn(g, np.zeros(g.edge_count), unary, ls)
        vals = np.zeros(vm.var_count)
        for v, l in enumerate(labels):
            vals[vm.node_label_var[v, l]] = 1
        ey = (labels[g.edges[:, 0]] != labels[g.edges[:, 1]]).astype(int)
        vals[vm.edge_var] = ey
        for s in separate_convexity_mcn(g, labels, unary, ls, enumerate_directions(g), vm):
            assert not s.constraint.satisfied(vals)
            assert all(labels[u] == s.violation.k for u in s.pair.nodes_p)


def test_serialize_debug_lines():
    g = build_grid(3, 2)
    d = Decomposition((0, 1, 0, 0, 0, 0))
    _, vm = build_mc(g, [0] * g.edge_count)
    (s,) = separate_convexity_mc(g, d, default_directions(), vm)
    assert s.violation.serialize() == "violation kind=mc dir=1,0 i=0 z=1 j=2"
    assert s.pair.serialize() == "pathpair path=0,3,4,5,2 line=0,1,2 sp=1"
