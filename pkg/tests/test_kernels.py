import numpy as np
import pytest

from convexcut import kernels
from convexcut.separation import enumerate_directions
from convexcut.grid import build_grid

IMPLS = kernels.implementations()


def test_backend_selected():
    assert kernels.BACKEND in IMPLS
    assert "python" in IMPLS


def _cases(rng, count):
    for _ in range(count):
        w, h = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        yield w, h


@pytest.mark.skipif("compiled" not in IMPLS, reason="extension not built")
def test_compiled_matches_python(rng):
    py, cy = IMPLS["python"], IMPLS["compiled"]
    for w, h in _cases(rng, 150):
        g = build_grid(w, h)
        dirs = enumerate_directions(g).as_array() if g.node_count > 1 else np.zeros((0, 2), np.int64)
        y = (rng.random(g.edge_count) < 0.35).astype(np.int8)
        comp_py = py.label_components(w, h, y)
        assert np.array_equal(comp_py, cy.label_components(w, h, y))
        assert np.array_equal(py.scan_mc(w, h, comp_py, dirs), cy.scan_mc(w, h, comp_py, dirs))
        labels = rng.integers(0, 3, g.node_count).astype(np.int32)
        lcomp = py.label_components(w, h, (labels[g.edges[:, 0]] != labels[g.edges[:, 1]]).astype(np.int8)) \
            if g.edge_count else np.zeros(g.node_count, np.int32)
        hull = rng.random((3, 3)) < 0.5
        np.fill_diagonal(hull, True)
        assert np.array_equal(py.scan_mcn(w, h, lcomp, labels, hull, dirs),
                              cy.scan_mcn(w, h, lcomp, labels, hull, dirs))
        seed = rng.choice(g.node_count, size=min(4, g.node_count), replace=False).astype(np.int64)
        for transitive in (True, False):
            assert np.array_equal(py.segment_closure(w, h, seed, transitive),
                                  cy.segment_closure(w, h, seed, transitive))


@pytest.mark.parametrize("impl", sorted(IMPLS))
def test_segment_closure_examples(impl):
    k = IMPLS[impl]
    seed = np.array([0, 2], dtype=np.int64)  # (0,0) and (2,0) on 3x3
    assert np.nonzero(k.segment_closure(3, 3, seed, False))[0].tolist() == [0, 1, 2]
    seed = np.array([0, 2, 6], dtype=np.int64)
    pair = set(np.nonzero(k.segment_closure(3, 3, seed, False))[0].tolist())
    full = set(np.nonzero(k.segment_closure(3, 3, seed, True))[0].tolist())
    assert pair == {0, 1, 2, 3, 4, 6}
    assert pair <= full


@pytest.mark.parametrize("impl", sorted(IMPLS))
def test_scan_rows(impl):
    k = IMPLS[impl]
    comp = np.array([0, 1, 0], dtype=np.int32)
    rows = k.scan_mc(3, 1, comp, np.array([[1, 0]], dtype=np.int64))
    assert rows.tolist() == [[0, 1, 2, 0]]


def test_env_forces_python_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, CONVEXCUT_PURE_PYTHON="1")
    res = subprocess.run([sys.executable, "-c", "import convexcut.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "python"
