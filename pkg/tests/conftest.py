import numpy as np
import pytest

from convexcut.grid import Decomposition, GridGraph


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_decomposition(g: GridGraph, rng, max_parts=5) -> Decomposition:
    """Random connected partition grown from random seeds."""
    k = int(rng.integers(1, max_parts + 1))
    seeds = rng.choice(g.node_count, size=min(k, g.node_count), replace=False)
    comp = -np.ones(g.node_count, dtype=int)
    frontier = []
    for c, s in enumerate(seeds):
        comp[s] = c
        frontier.append(int(s))
    while frontier:
        u = frontier.pop(int(rng.integers(len(frontier))))
        for w in g.neighbors(u):
            if comp[w] < 0:
                comp[w] = comp[u]
                frontier.append(w)
    return Decomposition(tuple(int(x) for x in comp))


# annulus fixtures: size -> (inner radius, outer radius, hole intensity); potts beta 0.2
ANNULUS = {7: (1.2, 3.2, 0.2), 15: (3.0, 6.3, 0.4)}
ANNULUS_BETA = 0.2


def annulus_image(size):
    from convexcut.costs import annulus
    inner, outer, hole = ANNULUS[size]
    return annulus(size, inner, outer, hole=hole)


def annulus_instance(img):
    """Grid, edge costs, unaries and label spec (foreground 1 convex) for an image."""
    from convexcut.costs import CostModel, edge_costs_from_image, grid_for, unary_costs_from_image
    from convexcut.models import LabelSpec
    cm = CostModel("potts", ANNULUS_BETA, 1.0, [0.0, 1.0])
    return (grid_for(img), edge_costs_from_image(img, cm), unary_costs_from_image(img, cm),
            LabelSpec.make(2, {1: {1}}))
