import itertools

import numpy as np
import pytest

from convexcut.grid import (Cycle, Decomposition, EdgeLabeling, GridError, build_grid,
                            components_from_edges, is_multicut, multicut_of)
from convexcut.oracle import cycle_condition, enumerate_cycles, enumerate_decompositions

from conftest import random_decomposition


@pytest.mark.parametrize("w,h,n,e", [(1, 1, 1, 0), (2, 2, 4, 4), (3, 3, 9, 12), (4, 2, 8, 10)])
def test_build_grid_counts(w, h, n, e):
    g = build_grid(w, h)
    assert g.node_count == n
    assert g.edge_count == e == w * (h - 1) + h * (w - 1)


@pytest.mark.parametrize("w,h", [(0, 3), (3, 0), (-1, 2)])
def test_build_grid_rejects_empty(w, h):
    with pytest.raises(GridError):
        build_grid(w, h)


def test_edge_order_horizontal_then_vertical():
    g = build_grid(3, 2)
    assert g.edges.tolist() == [[0, 1], [1, 2], [3, 4], [4, 5], [0, 3], [1, 4], [2, 5]]
    for u, v in g.edges.tolist():
        (x0, y0), (x1, y1) = g.coords(u), g.coords(v)
        assert abs(x0 - x1) + abs(y0 - y1) == 1


def test_edge_index_and_neighbors():
    g = build_grid(3, 3)
    assert g.edge_index(4, 1) == g.edge_index(1, 4)
    assert g.neighbors(4) == [1, 3, 5, 7]
    assert g.neighbors(0) == [1, 3]
    with pytest.raises(GridError):
        g.edge_index(0, 4)


def test_components_examples():
    g = build_grid(2, 2)
    assert components_from_edges(g, [0] * 4).component_count == 1
    assert components_from_edges(g, [1] * 4).component_count == 4
    for e in range(4):
        y = [0] * 4
        y[e] = 1
        assert components_from_edges(g, y).component_count == 1


def test_components_length_mismatch():
    with pytest.raises(GridError):
        components_from_edges(build_grid(2, 2), [0, 0, 0])


def test_is_multicut_examples():
    g = build_grid(2, 2)
    assert is_multicut(g, [0, 0, 0, 0])
    assert not is_multicut(g, [1, 0, 0, 0])
    # edges (0,1) and (0,2) isolate the corner
    y = [0] * 4
    y[g.edge_index(0, 1)] = y[g.edge_index(0, 2)] = 1
    assert is_multicut(g, y)


def test_multicut_of_examples():
    g = build_grid(3, 1)
    assert multicut_of(g, Decomposition((0, 1, 1))).values == (1, 0)
    assert multicut_of(g, Decomposition((0, 0, 0))).values == (0, 0)
    assert multicut_of(g, Decomposition((0, 1, 2))).values == (1, 1)


def test_multicut_of_rejects_disconnected_block():
    g = build_grid(2, 2)
    with pytest.raises(GridError):
        multicut_of(g, Decomposition((0, 1, 1, 0)))  # diagonal pair


def test_decomposition_canonical_ids():
    d = Decomposition((5, 5, 2, 7))
    assert d.component_of == (0, 0, 1, 2)
    assert d.component_count == 3
    assert Decomposition.parse(d.serialize()) == d
    assert d.serialize(width=2) == "0 0\n1 2"


def test_edge_labeling_serialization():
    y = EdgeLabeling.of([1, 0, 0, 1])
    assert y.serialize() == "1001"
    assert EdgeLabeling.parse("1001") == y
    assert y.cut_count() == 2
    with pytest.raises(GridError):
        EdgeLabeling.parse("10a1")
    with pytest.raises(GridError):
        EdgeLabeling.of([2])


def test_cycle_edges():
    g = build_grid(2, 2)
    assert sorted(Cycle((0, 1, 3, 2)).edges(g)) == [0, 1, 2, 3]


@pytest.mark.parametrize("w,h", [(2, 2), (3, 2), (2, 3)])
def test_multicut_cycle_equivalence_exhaustive(w, h):
    g = build_grid(w, h)
    cycles = enumerate_cycles(g)
    for y in itertools.product((0, 1), repeat=g.edge_count):
        assert is_multicut(g, y) == cycle_condition(cycles, y)


def test_round_trip_all_decompositions():
    g = build_grid(3, 3)
    for d in enumerate_decompositions(g):
        assert components_from_edges(g, multicut_of(g, d)) == d


def test_round_trip_random(rng):
    for _ in range(200):
        g = build_grid(int(rng.integers(1, 8)), int(rng.integers(1, 8)))
        d = random_decomposition(g, rng)
        assert components_from_edges(g, multicut_of(g, d)) == d


def test_idempotence(rng):
    g = build_grid(4, 4)
    for _ in range(200):
        y = rng.integers(0, 2, g.edge_count)
        y1 = multicut_of(g, components_from_edges(g, y))
        assert is_multicut(g, y1)
        assert multicut_of(g, components_from_edges(g, y1)) == y1
