"""Command-line entry point.

Subcommands: ``simulate`` (benchmark suite runner), ``cluster`` (K sweep on
one graph), ``airline`` (case study), ``rings`` (non-convex geometry demo),
``version``. Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
Every run is deterministic given its flags; seeds land in the output files.
"""

from __future__ import annotations

import argparse
import importlib.resources as resources
import json
import logging
import os
import sys

from . import __version__
from .airline import DEFAULT_AIRLINE_SEED, run_case_study
from .errors import ConfigurationError, NetsilError
from .graph import adjacency_from_points, distance_from_adjacency, generate_rings, read_edge_list
from .harness import ScenarioSpec, load_suite, run_suite, save_suite
from .metrics import silhouette
from .spectral import select_k

BUILTIN_SUITE_NAMES = (
    "table2_full", "table2_desk",
    "table3_full", "table3_desk",
    "weighted_full", "weighted_desk",
    "fully_connected_full", "fully_connected_desk",
    "rings_full", "rings_desk",
)


def _require_file(path: str) -> str:
    if not os.path.isfile(path):
        raise ConfigurationError(f"no such file: {path}")
    return path


def _write_curve_csv(curve: dict[int, float], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,silhouette\n")
        for k in sorted(curve):
            fh.write(f"{k},{curve[k]!r}\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.config:
        config_path = _require_file(args.config)
    else:
        if args.suite not in BUILTIN_SUITE_NAMES:
            raise ConfigurationError(
                f"unknown suite {args.suite!r}; choose from {', '.join(BUILTIN_SUITE_NAMES)}"
            )
        config_path = str(resources.files("netsil").joinpath(f"configs/{args.suite}.json"))
    if args.seed is not None:
        specs = [
            ScenarioSpec.from_dict({**s.to_dict(), "master_seed": args.seed})
            for s in load_suite(config_path)
        ]
        os.makedirs(args.out, exist_ok=True)
        config_path = os.path.join(args.out, "config_effective.json")
        save_suite(specs, config_path)
    result = run_suite(
        config_path, args.out, jobs=args.jobs, replicates_override=args.replicates
    )
    for summary in result.summaries:
        line = (
            f"{summary.scenario_id}: prop_correct={summary.proportion_correct:.3f} "
            f"ari_median={summary.ari_median:.3f} R={summary.r}"
        )
        if summary.failures:
            line += f" failures={summary.failures}"
        print(line)
    if result.failed:
        print("suite failed: a scenario exceeded the 1% replicate-failure budget", file=sys.stderr)
        return 1
    print(f"results written to {result.out_dir}")
    return 0


def cmd_cluster(args: argparse.Namespace) -> int:
    if args.kmax < 2:
        raise ConfigurationError(f"--kmax must be at least 2, got {args.kmax}")
    g = read_edge_list(_require_file(args.edges))
    result = select_k(g, k_max=args.kmax, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    _write_curve_csv(result.curve, os.path.join(args.out, "k_curve.csv"))
    ids = g.node_ids or tuple(str(i) for i in range(g.n))
    with open(os.path.join(args.out, "clusters.csv"), "w", encoding="utf-8") as fh:
        fh.write("node_id,cluster\n")
        for node, label in zip(ids, result.assignment.labels):
            fh.write(f"{node},{label}\n")
    if args.emit_silhouette:
        report = silhouette(distance_from_adjacency(g), result.assignment)
        with open(os.path.join(args.out, "silhouette.json"), "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    print(f"best_k={result.best_k}")
    return 0


def cmd_airline(args: argparse.Namespace) -> int:
    if args.kmax < 2:
        raise ConfigurationError(f"--kmax must be at least 2, got {args.kmax}")
    edges = _require_file(args.edges) if args.edges else None
    meta = _require_file(args.meta) if args.meta else None
    result, table = run_case_study(
        edge_path=edges, meta_path=meta, out_dir=args.out, k_max=args.kmax, seed=args.seed
    )
    print(f"best_k={result.best_k}")
    print(f"cluster_sizes={table.sizes}")
    print(f"within_densities_pct={[round(d, 1) for d in table.diagonal()]}")
    print(f"results written to {args.out}")
    return 0


def cmd_rings(args: argparse.Namespace) -> int:
    counts = tuple(int(c) for c in args.counts.split(","))
    radii = tuple(float(r) for r in args.radii.split(","))
    pc = generate_rings(counts, radii, seed=args.seed)
    g = adjacency_from_points(pc)
    result = select_k(g, k_max=args.kmax, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "rings_points.csv"), "w", encoding="utf-8") as fh:
        fh.write("x,y,ring,cluster\n")
        for (x, y), ring, cluster in zip(pc.points, pc.labels, result.assignment.labels):
            fh.write(f"{float(x)!r},{float(y)!r},{ring},{cluster}\n")
    _write_curve_csv(result.curve, os.path.join(args.out, "rings_curve.csv"))
    print(f"best_k={result.best_k} (true ring count: {len(counts)})")
    return 0


def cmd_version(args: argparse.Namespace) -> int:
    print(f"netsil {__version__}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsil",
        description="Silhouette-guided community detection toolkit and benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a benchmark suite and write results CSVs")
    group = p_sim.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", help=f"builtin suite name ({', '.join(BUILTIN_SUITE_NAMES)})")
    group.add_argument("--config", help="path to a JSON suite config")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="worker processes (default: available cores)")
    p_sim.add_argument("--replicates", type=int, default=None,
                       help="override the replicate count of every scenario")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="override the master seed of every scenario")
    p_sim.set_defaults(func=cmd_simulate)

    p_cluster = sub.add_parser("cluster", help="silhouette K sweep on one edge-list graph")
    p_cluster.add_argument("--edges", required=True, help="TSV edge list (src, dst, weight)")
    p_cluster.add_argument("--kmax", type=int, default=20, help="largest K to try (default 20)")
    p_cluster.add_argument("--seed", type=int, default=0, help="clustering seed (default 0)")
    p_cluster.add_argument("--out", required=True, help="output directory")
    p_cluster.add_argument("--emit-silhouette", action="store_true",
                           help="also write the per-node silhouette report as JSON")
    p_cluster.set_defaults(func=cmd_cluster)

    p_air = sub.add_parser("airline", help="run the airline reachability case study")
    p_air.add_argument("--edges", default=None, help="reachability edge list (default: bundled)")
    p_air.add_argument("--meta", default=None, help="city metadata CSV (default: bundled)")
    p_air.add_argument("--out", required=True, help="output directory")
    p_air.add_argument("--kmax", type=int, default=20, help="largest K to try (default 20)")
    p_air.add_argument("--seed", type=int, default=DEFAULT_AIRLINE_SEED,
                       help="clustering seed (default: pinned repo value)")
    p_air.set_defaults(func=cmd_airline)

    p_rings = sub.add_parser("rings", help="concentric-ring demo of silhouette overestimation")
    p_rings.add_argument("--out", required=True, help="output directory")
    p_rings.add_argument("--seed", type=int, default=7, help="point and clustering seed")
    p_rings.add_argument("--kmax", type=int, default=20, help="largest K to try (default 20)")
    p_rings.add_argument("--counts", default="200,200,200", help="points per ring")
    p_rings.add_argument("--radii", default="1,2,3", help="ring radii")
    p_rings.set_defaults(func=cmd_rings)

    p_version = sub.add_parser("version", help="print the package version")
    p_version.set_defaults(func=cmd_version)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NetsilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
