"""Command line interface.

Subcommands cover the full pipeline: generate a scale-free graph, inspect
one, rewire it to a clustering target, score candidate links, run a full
precision-versus-clustering experiment, and dump score-class
distributions.  Graphs travel as whitespace edge lists; tabular results
as CSV with a header row.  Figures are rendered next to the delimited
outputs unless disabled.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .ba import BaParams, generate_ba
from .edgelist import load_edge_list, save_edge_list
from .evaluate import (
    class_separation,
    distribution_rows,
    precision_at_n,
    score_distributions,
    split_edges,
    training_graph,
)
from .experiment import parse_plan, run_experiment, write_outputs
from .graph import graph_stats, triangle_count
from .predict import PredictorSpec, score_all
from .rewire import RewireConfig, rewire_to_target


def _cmd_generate(args: argparse.Namespace) -> int:
    g = generate_ba(BaParams(n=args.n, m=args.m, seed=args.seed))
    save_edge_list(g, args.out)
    stats = graph_stats(g)
    print(
        f"wrote {args.out}: {g.num_nodes} nodes, {g.num_edges} edges, "
        f"C={stats.avg_clustering:.4f}"
    )
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    g = load_edge_list(args.graph)
    stats = graph_stats(g, include_low_degree=args.include_low_degree)
    print(f"nodes = {g.num_nodes}")
    print(f"edges = {g.num_edges}")
    print(f"avg_degree = {stats.avg_degree:.4f}")
    print(f"avg_clustering = {stats.avg_clustering:.6f}")
    print(f"triangles = {triangle_count(g)}")
    print(f"gcc_fraction = {stats.gcc_fraction:.4f}")
    print(f"max_degree = {max(stats.degree_histogram)}")
    return 0


def _cmd_rewire(args: argparse.Namespace) -> int:
    g = load_edge_list(args.graph)
    cfg = RewireConfig(
        target_c=args.target_c,
        seed=args.seed,
        tolerance=args.tolerance,
        max_steps=args.max_steps,
        stall_limit=args.stall_limit,
        rule=args.rule,
    )
    outcome = rewire_to_target(g, cfg)
    save_edge_list(outcome.graph, args.out)
    traj_path = Path(args.trajectory) if args.trajectory else Path(args.out).with_suffix(
        ".trajectory.csv"
    )
    with open(traj_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "triangles", "avg_clustering"])
        for step, tri, c in outcome.trajectory:
            w.writerow([step, tri, repr(c)])
    state = "reached target" if outcome.reached_target else "target not reached"
    print(
        f"wrote {args.out}: C={outcome.achieved_c:.4f} after "
        f"{outcome.steps_taken} steps ({state}); trajectory in {traj_path}"
    )
    if args.plot:
        from .plots import plot_trajectory

        fig_path = plot_trajectory(outcome.trajectory, traj_path.with_suffix(".png"))
        print(f"wrote {fig_path}")
    return 0


def _make_spec(args: argparse.Namespace) -> PredictorSpec:
    return PredictorSpec(kind=args.method, beta=args.beta, steps=args.steps)


def _cmd_predict(args: argparse.Namespace) -> int:
    g = load_edge_list(args.graph)
    table = score_all(g, _make_spec(args))
    rows = table.top(args.top)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["node_a", "node_b", "score"])
        for (a, b), score in rows:
            w.writerow([g.labels[a], g.labels[b], repr(float(score))])
    finally:
        if args.out:
            out.close()
    if args.out:
        print(f"wrote {args.out}: top {len(rows)} of {len(table)} scored pairs")
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    plan_path = Path(args.plan)
    plan = parse_plan(plan_path.read_text(), source=str(plan_path))
    out_dir = args.out or plan.output_dir
    if not out_dir:
        raise ValueError("no output directory: pass --out or set output_dir in the plan")
    progress = None if args.quiet else lambda msg: print(msg, file=sys.stderr)
    result = run_experiment(plan, progress=progress)
    paths = write_outputs(result, out_dir)
    for key in ("trials", "report", "provenance"):
        print(f"wrote {paths[key]}")
    for path in paths["distributions"]:
        print(f"wrote {path}")
    if not args.no_plots:
        from .plots import (
            plot_precision_vs_clustering,
            plot_score_distribution,
            plot_separation_vs_clustering,
        )

        out = Path(out_dir)
        written = [
            plot_precision_vs_clustering(
                result.report, out / "precision_vs_clustering.png"
            ),
            plot_separation_vs_clustering(
                result.report, out / "separation_vs_clustering.png"
            ),
        ]
        written += [
            plot_score_distribution(
                item.dist, out / f"dist_{item.level}_{item.method}.png"
            )
            for item in result.distributions
        ]
        for path in written:
            print(f"wrote {path}")
    flagged = sum(1 for r in result.trials if r.flag)
    if flagged:
        print(f"note: {flagged} trial rows flagged; see the flag column", file=sys.stderr)
    return 0


def _cmd_score_dist(args: argparse.Namespace) -> int:
    g = load_edge_list(args.graph)
    spec = _make_spec(args)
    split = split_edges(g, seed=args.seed, test_fraction=args.test_fraction)
    train = training_graph(g, split)
    table = score_all(train, spec)
    res = precision_at_n(table, split.test_edges)
    sep = class_separation(table, split.test_edges)
    dist = score_distributions(
        table,
        split.test_edges,
        bin_width=args.bin_width,
        max_negative=args.max_negative,
        sample_seed=args.seed,
    )
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["class", "bin_lo", "bin_hi", "count"])
        for name, lo, hi, count in distribution_rows(dist):
            w.writerow([name, repr(lo), repr(hi), count])
    print(
        f"wrote {args.out}: precision={res.precision:.4f} "
        f"separation={sep:.4f} (n={res.n})"
    )
    if args.plot:
        from .plots import plot_score_distribution

        fig_path = plot_score_distribution(dist, Path(args.out).with_suffix(".png"))
        print(f"wrote {fig_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkclust",
        description="Link prediction benchmarks on graphs with tunable clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a scale-free graph")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--m", type=int, required=True, help="edges per new node")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="edge list output path")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("stats", help="summarize an edge list")
    p.add_argument("graph", help="edge list path")
    p.add_argument(
        "--include-low-degree",
        action="store_true",
        help="count degree <= 1 nodes as zero-clustering",
    )
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("rewire", help="rewire a graph to a clustering target")
    p.add_argument("--in", dest="graph", required=True, help="edge list path")
    p.add_argument("--target-c", type=float, required=True, help="clustering target")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--rule", choices=("clustering", "triangles"), default="clustering")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--stall-limit", type=int, default=None)
    p.add_argument("--out", required=True, help="edge list output path")
    p.add_argument(
        "--trajectory",
        default=None,
        help="trajectory CSV path (default: output path with .trajectory.csv)",
    )
    p.add_argument("--plot", action="store_true", help="also render the trajectory")
    p.set_defaults(func=_cmd_rewire)

    p = sub.add_parser("predict", help="rank non-adjacent pairs of a graph")
    p.add_argument("--in", dest="graph", required=True, help="edge list path")
    p.add_argument(
        "--method",
        required=True,
        choices=("cn", "aa", "ra", "katz", "pr", "srw"),
    )
    p.add_argument("--beta", type=float, default=None, help="katz / pr parameter")
    p.add_argument("--steps", type=int, default=None, help="srw walk length")
    p.add_argument("--top", type=int, default=100, help="rows to emit")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("experiment", help="run a plan file")
    p.add_argument("plan", help="plan file path")
    p.add_argument(
        "--out",
        default=None,
        help="output directory (default: the plan's output_dir)",
    )
    p.add_argument("--quiet", action="store_true", help="suppress progress messages")
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser(
        "score-dist", help="score-class distributions under one train/test split"
    )
    p.add_argument("--in", dest="graph", required=True, help="edge list path")
    p.add_argument(
        "--method",
        required=True,
        choices=("cn", "aa", "ra", "katz", "pr", "srw"),
    )
    p.add_argument("--beta", type=float, default=None, help="katz / pr parameter")
    p.add_argument("--steps", type=int, default=None, help="srw walk length")
    p.add_argument("--seed", type=int, required=True, help="split seed")
    p.add_argument("--test-fraction", type=float, default=0.1)
    p.add_argument("--bin-width", type=float, default=1.0)
    p.add_argument("--max-negative", type=int, default=1_000_000)
    p.add_argument("--out", required=True, help="distribution CSV path")
    p.add_argument("--plot", action="store_true", help="also render the histogram")
    p.set_defaults(func=_cmd_score_dist)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
