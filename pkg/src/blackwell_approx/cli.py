"""Command-line entry point: ``blackwell-approx {run,check,demo-vertex-cover,demo-negative}``."""
from __future__ import annotations

import argparse
import json
import sys

from .approachability import check_approachable
from .experiment import ExperimentSpec, build_instance, run_experiment
from .sets import UnsupportedOperation

STAR_EDGES = [[0, 1], [0, 2], [0, 3], [0, 4]]


def _common(p):
    p.add_argument("--seed", type=int, default=None, help="random seed (overrides the spec file)")
    p.add_argument("--stride", type=int, default=None, help="report distances every STRIDE rounds")
    p.add_argument("--out-dir", default=None, help="directory for CSV/JSON outputs")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms = 0 for byte-reproducible CSVs")


def build_parser():
    parser = argparse.ArgumentParser(prog="blackwell-approx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment spec")
    p.add_argument("--spec", required=True, help="JSON experiment spec")
    _common(p)

    p = sub.add_parser("check", help="test the approachability condition of a spec's instance")
    p.add_argument("--spec", required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("demo-vertex-cover", help="vertex-cover game on a star graph, x_only scenario")
    p.add_argument("--horizons", type=int, nargs="+", default=[64, 256])
    p.add_argument("--weight-bound", type=float, default=0.025)
    _common(p)

    p = sub.add_parser("demo-negative", help="bad-oracle example where S itself is not approached")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--horizons", type=int, nargs="+", default=[100])
    _common(p)
    return parser


def _run(spec, args):
    code = run_experiment(spec, out_dir=args.out_dir, seed=args.seed, stride=args.stride, timing=not args.no_timing)
    out = args.out_dir or spec.out_dir
    for T in spec.horizons:
        with open(f"{out}/{spec.run_id}_T{T}.json") as fh:
            s = json.load(fh)
        print(
            f"T={T:<6d} d_infeasible={s['final_distances']['d_infeasible']:.6g} "
            f"d_feasible_downward={s['final_distances']['d_feasible_downward']:.6g} "
            f"bound={s['certified_bounds']['value']:.6g} "
            f"ok={s['certified_bounds']['satisfied']} calls_x={s['oracle_calls']['x']} calls_y={s['oracle_calls']['y']}"
        )
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(ExperimentSpec.load(args.spec), args)
        if args.command == "check":
            spec = ExperimentSpec.load(args.spec)
            inst = build_instance(spec.instance, spec.base_dir)
            rep = check_approachable(inst, args.samples, args.tol, rng=args.seed)
            print(f"directions={args.samples} worst_slack={rep.worst_slack:.3e} tol={args.tol:g} "
                  f"approachable={rep.approachable}")
            return 0 if rep.approachable else 1
        if args.command == "demo-vertex-cover":
            b = args.weight_bound
            spec = ExperimentSpec.from_dict({
                "run_id": "vertex_cover",
                "instance": {"kind": "vertex_cover", "params": {
                    "n": 5, "edges": STAR_EDGES, "part1": [0], "part2": [1, 2, 3, 4],
                    "weight_bound": b, "S": {"kind": "box", "lo": [0, 0], "hi": [b, 0]}}},
                "scenario": {"mode": "x_only", "alpha_x": 2.0},
                "adversary": {"kind": "best_response"},
                "horizons": args.horizons,
                "out_dir": "results",
            })
            return _run(spec, args)
        if args.command == "demo-negative":
            spec = ExperimentSpec.from_dict({
                "run_id": "negative",
                "instance": {"kind": "negative", "params": {"alpha_x": args.alpha}},
                "scenario": {"mode": "x_only", "alpha_x": args.alpha},
                "adversary": {"kind": "best_response"},
                "horizons": args.horizons,
                "out_dir": "results",
            })
            return _run(spec, args)
    except (ValueError, OSError, UnsupportedOperation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
