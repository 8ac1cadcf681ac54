"""Compare the compiled and pure-Python kernels on random grids.

    python benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from convexcut.grid import build_grid
from convexcut.kernels import implementations
from convexcut.separation import enumerate_directions


def _inputs(size, rng):
    g = build_grid(size, size)
    # blocky labels so components are large, like real segmentations
    coarse = rng.integers(0, 3, (size // 4 + 1, size // 4 + 1))
    labels = np.kron(coarse, np.ones((4, 4), dtype=int))[:size, :size].ravel().astype(np.int32)
    y = (labels[g.edges[:, 0]] != labels[g.edges[:, 1]]).astype(np.int8)
    hull = np.eye(3, dtype=bool)
    seed = rng.choice(g.node_count, size=12, replace=False).astype(np.int64)
    return g, labels, y, hull, seed


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = implementations()
    rng = np.random.default_rng(0)
    names = sorted(impls)
    print(f"{'kernel':<18}{'size':>6}" + "".join(f"{n + ' ms':>14}" for n in names)
          + ("    speedup" if len(names) == 2 else ""))
    for size in args.sizes:
        g, labels, y, hull, seed = _inputs(size, rng)
        w = h = size
        dirs4 = enumerate_directions(limit=1).as_array()
        dirs = enumerate_directions(limit=3).as_array()
        comp = impls["python"].label_components(w, h, y)
        jobs = {
            "label_components": lambda k: k.label_components(w, h, y),
            "scan_mc (4 dirs)": lambda k: k.scan_mc(w, h, comp, dirs4),
            f"scan_mc ({len(dirs)} dirs)": lambda k: k.scan_mc(w, h, comp, dirs),
            f"scan_mcn ({len(dirs)} dirs)": lambda k: k.scan_mcn(w, h, comp, labels, hull, dirs),
            "segment_closure": lambda k: k.segment_closure(w, h, seed, True),
        }
        for name, job in jobs.items():
            times = {}
            for impl in names:
                mod = impls[impl]
                t = min(timeit.repeat(lambda: job(mod), number=1, repeat=args.repeat))
                times[impl] = t * 1e3
            row = f"{name:<18}{size:>6}" + "".join(f"{times[n]:>14.3f}" for n in names)
            if len(names) == 2:
                row += f"{times['python'] / max(times['compiled'], 1e-9):>10.1f}x"
            print(row)


if __name__ == "__main__":
    main()
