"""Command line interface.

Exit codes: 0 success, 1 oracle mismatch, 2 usage error, 3 solver timeout or
iteration cap (the incumbent is still written).
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import engine, netpbm
from .costs import CostModel, edge_costs_from_image, grid_for, render, unary_costs_from_image
from .grid import build_grid, components_from_edges
from .ilp import BACKENDS, export_lp
from .models import LabelSpec, build_mc, build_mcn
from .separation import SeparationError, parse_directions

EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3

COMMANDS = ("mc", "convex-mc", "mcn", "convex-mcn", "oracle")


def parse_hull_sets(text: str) -> dict[int, set[int]]:
    """``"k:l1,l2;k2:l3"`` into ``{k: {l1, l2}, k2: {l3}}``."""
    out: dict[int, set[int]] = {}
    for part in filter(None, (p.strip() for p in text.split(";"))):
        if ":" not in part:
            raise ValueError(f"hull set {part!r} lacks ':'")
        k, rest = part.split(":", 1)
        out[int(k)] = {int(tok) for tok in rest.split(",") if tok.strip()}
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convexcut", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--image", help="binary PGM (P5) or PPM (P6) input")
    p.add_argument("--labels", type=int, help="number of labels (mcn, convex-mcn)")
    p.add_argument("--label-means", help="comma separated reference intensity per label")
    p.add_argument("--beta", type=float, default=0.5, help="edge cost offset")
    p.add_argument("--sigma", type=float, default=1.0, help="contrast scale")
    p.add_argument("--gap", type=float, default=0.02, help="relative ILP gap (default 0.02)")
    p.add_argument("--directions", help="8 | all | limit:M (convex commands, default 8)")
    p.add_argument("--hull-sets", help='per-label hull sets, e.g. "1:1;2:1,2"')
    p.add_argument("--out", help="write the segmentation as a PPM image")
    p.add_argument("--report", help="write a report (.json for JSON, CSV otherwise)")
    p.add_argument("--export-lp", help="write the initial ILP in CPLEX-LP format and stop")
    p.add_argument("--time-limit", type=float, help="seconds for the whole cutting-plane loop")
    p.add_argument("--max-iterations", type=int, default=1000)
    p.add_argument("--backend", choices=BACKENDS, default="highs")
    p.add_argument("--timing", action="store_true", help="include wall time in reports")
    p.add_argument("--seed", type=int, default=0, help="seed for the oracle sweep")
    p.add_argument("--max-nodes", type=int, default=9, help="largest grid of the oracle sweep")
    p.add_argument("--draws", type=int, default=5, help="random cost draws per grid (oracle)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _validate(p, args):
    cmd = args.command
    labeled = cmd in ("mcn", "convex-mcn")
    convex = cmd.startswith("convex")
    if cmd == "oracle":
        if args.image or args.export_lp or args.out:
            p.error("oracle takes no image, output or LP options")
        if args.max_nodes < 1:
            p.error("--max-nodes must be positive")
        return
    if not args.image:
        p.error(f"{cmd} requires --image")
    if not labeled and (args.labels is not None or args.label_means or args.hull_sets):
        p.error("--labels, --label-means and --hull-sets apply to mcn/convex-mcn only")
    if labeled and args.labels is None and not args.label_means:
        p.error(f"{cmd} requires --labels or --label-means")
    if args.hull_sets and cmd != "convex-mcn":
        p.error("--hull-sets applies to convex-mcn only")
    if args.directions and not convex:
        p.error("--directions applies to convex commands only")
    if args.gap < 0:
        p.error("--gap must be nonnegative")
    if args.sigma <= 0:
        p.error("--sigma must be positive")
    if args.max_iterations < 1:
        p.error("--max-iterations must be positive")


def _label_spec(p, args):
    if args.label_means:
        means = [float(t) for t in args.label_means.split(",")]
        if args.labels is not None and args.labels != len(means):
            p.error("--labels disagrees with the number of --label-means")
    else:
        k = args.labels
        if k < 1:
            p.error("--labels must be positive")
        means = [0.5] if k == 1 else [i / (k - 1) for i in range(k)]
    try:
        hull = parse_hull_sets(args.hull_sets) if args.hull_sets else {}
        ls = LabelSpec.make(len(means), hull)
    except ValueError as exc:
        p.error(str(exc))
    return means, ls


def _write_report(path, report, timing):
    text = report.to_json(timing) if str(path).endswith(".json") else report.to_csv(timing)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _run_oracle(args) -> int:
    from .oracle import MAX_DECOMP_NODES, brute_force_convex_mc

    rng = np.random.default_rng(args.seed)
    limit = min(args.max_nodes, MAX_DECOMP_NODES)
    total = mismatches = 0
    for h in range(1, limit + 1):
        for w in range(1, limit + 1):
            if w * h > limit:
                continue
            g = build_grid(w, h)
            for _ in range(args.draws):
                c = rng.choice([-2.0, -1.0, 1.0, 2.0], g.edge_count)
                cfg = engine.SolverConfig(epsilon=0.0, directions="all", backend=args.backend)
                _, rep = engine.solve_convex_mc(g, c, cfg)
                best, _ = brute_force_convex_mc(g, c)
                total += 1
                if abs(best - rep.energy) > 1e-9:
                    mismatches += 1
                    print(f"MISMATCH {w}x{h} costs={c.tolist()} solver={rep.energy} oracle={best}")
    print(f"oracle sweep: {total - mismatches}/{total} instances agree")
    return 0 if mismatches == 0 else EXIT_MISMATCH


def main(argv=None) -> int:
    p = _parser()
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    _validate(p, args)
    if args.command == "oracle":
        return _run_oracle(args)

    try:
        img = netpbm.load_image(args.image)
    except (OSError, netpbm.NetpbmError) as exc:
        print(f"convexcut: cannot read image: {exc}", file=sys.stderr)
        return EXIT_USAGE
    g = grid_for(img)
    labeled = args.command in ("mcn", "convex-mcn")
    if labeled:
        means, ls = _label_spec(p, args)
        cm = CostModel("potts", args.beta, args.sigma, means)
        unary = unary_costs_from_image(img, cm)
    else:
        cm = CostModel("contrast", args.beta, args.sigma)
    c = edge_costs_from_image(img, cm)

    if args.export_lp:
        inst = build_mcn(g, c, unary, ls)[0] if labeled else build_mc(g, c)[0]
        export_lp(inst, args.export_lp)
        return 0

    try:
        dirs = parse_directions(args.directions or "8", g)
    except (SeparationError, ValueError) as exc:
        p.error(str(exc))
    cfg = engine.SolverConfig(args.gap, dirs, args.max_iterations, args.time_limit, args.backend)
    if args.command == "mc":
        y, report = engine.solve_mc(g, c, cfg)
    elif args.command == "convex-mc":
        y, report = engine.solve_convex_mc(g, c, cfg)
    elif args.command == "mcn":
        labels, y, report = engine.solve_mcn(g, c, unary, ls, cfg)
    else:
        labels, y, report = engine.solve_convex_mcn(g, c, unary, ls, cfg)

    if args.out and y is not None:
        ids = labels if labeled else components_from_edges(g, y).component_of
        netpbm.write_ppm(args.out, render(ids, g.width, g.height))
    if args.report:
        _write_report(args.report, report, args.timing)
    sys.stdout.write(report.to_csv(args.timing))
    if report.status in ("timeout", "iteration_cap"):
        return EXIT_TIMEOUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
