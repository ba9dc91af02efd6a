"""Command-line surface.

Subcommands: stats, discretize, split, edgebank, growth-labels,
bench-discretize. Exit codes: 0 success, 1 data/validation error, 2 usage
error. Timing lines are prefixed ``# time:`` so golden-output tests can
filter them; ``--plot`` flags render figures next to the delimited output.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from tgkit import __version__
from tgkit.baselines import evaluate_edgebank
from tgkit.dataset import (
    chronological_split,
    load_csv,
    load_negatives,
    parse_manifest,
    resolve_split,
    write_events_csv,
)
from tgkit.discretize import discretize, discretize_naive
from tgkit.exceptions import TemporalGraphError
from tgkit.granularity import ReductionOp, TimeGranularity
from tgkit.graph import graph_stats
from tgkit.loader import GraphView, iterate_by_time

_GRANULARITIES = ["second", "minute", "hour", "day", "week", "month", "year"]
_REDUCTIONS = [r.value for r in ReductionOp]


def _ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated ratios")
    try:
        r = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratios {text!r}")
    return r  # validated against sum in resolve_split


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgkit",
        description="Temporal graph engine: stats, discretization, splits, "
        "link-prediction baselines, and snapshot labels.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="print dataset statistics")
    p.add_argument("manifest")
    p.add_argument("--split", type=_ratios, default=None, metavar="R,R,R",
                   help="also print surprise at the resolved test boundary")
    p.add_argument("--plot", default=None, metavar="PATH",
                   help="write an event-rate figure")

    p = sub.add_parser("discretize", help="write a coarser-granularity CSV")
    p.add_argument("manifest")
    p.add_argument("--granularity", required=True, choices=_GRANULARITIES)
    p.add_argument("--reduce", default="last", choices=_REDUCTIONS)
    p.add_argument("--out", required=True)

    p = sub.add_parser("split", help="write chronological train/val/test CSVs")
    p.add_argument("manifest")
    p.add_argument("--ratios", type=_ratios, default=(0.70, 0.15, 0.15),
                   metavar="R,R,R")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("edgebank", help="link prediction with edge memorization")
    p.add_argument("manifest")
    p.add_argument("--ratios", type=_ratios, default=(0.70, 0.15, 0.15),
                   metavar="R,R,R")
    p.add_argument("--batch-size", type=int, default=200)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--negatives", default=None,
                       help="negatives file (one line per test positive); "
                       "defaults to the manifest's negatives entry")
    group.add_argument("--uniform-negatives", type=int, default=None,
                       metavar="Q", help="sample Q uniform negatives per positive")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("growth-labels",
                       help="per-snapshot edge counts and growth labels")
    p.add_argument("manifest")
    p.add_argument("--granularity", required=True, choices=_GRANULARITIES)
    p.add_argument("--plot", default=None, metavar="PATH",
                   help="write a snapshot-count figure")

    p = sub.add_parser("bench-discretize",
                       help="time the engine against the dictionary baseline")
    p.add_argument("manifest")
    p.add_argument("--granularity", required=True, choices=_GRANULARITIES)
    p.add_argument("--reduce", default="last", choices=_REDUCTIONS)
    p.add_argument("--plot", default=None, metavar="PATH",
                   help="write a timing comparison figure")
    return parser


def _load(manifest_path: str):
    manifest = parse_manifest(manifest_path)
    graph, ids = load_csv(manifest)
    return manifest, graph, ids


def _cmd_stats(args: argparse.Namespace) -> int:
    _, graph, _ = _load(args.manifest)
    split_time = None
    if args.split is not None:
        split_time = resolve_split(graph, args.split).test_start
    stats = graph_stats(graph, split_time=split_time)
    print(f"nodes: {stats.num_nodes}")
    print(f"edges: {stats.num_edges}")
    if stats.num_node_events:
        print(f"node_events: {stats.num_node_events}")
    print(f"unique_edges: {stats.num_unique_edges}")
    print(f"unique_steps: {stats.num_unique_steps}")
    if stats.surprise is not None:
        print(f"surprise: {stats.surprise:.3f}")
    if args.plot:
        from tgkit import report

        report.plot_event_rate(graph.edge_t, args.plot)
        print(f"figure: {args.plot}")
    return 0


def _cmd_discretize(args: argparse.Namespace) -> int:
    manifest, graph, ids = _load(args.manifest)
    coarse = TimeGranularity.from_string(args.granularity)
    reduce = ReductionOp.from_string(args.reduce)
    start = time.perf_counter()
    out = discretize(graph, coarse, reduce)
    elapsed = time.perf_counter() - start
    # Count reduction replaces features, so labels no longer map 1:1 for
    # every column; ids still do.
    write_events_csv(out, args.out, ids=ids,
                     src_col=manifest.src_col, dst_col=manifest.dst_col,
                     t_col=manifest.t_col)
    buckets = int(np.unique(out.edge_t).size) if out.num_edges else 0
    print(f"buckets: {buckets}")
    print(f"events: {out.num_edges}")
    print(f"out: {args.out}")
    print(f"# time: discretize {elapsed:.3f} s")
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    manifest, graph, ids = _load(args.manifest)
    train, val, test = chronological_split(graph, args.ratios)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, view in (("train", train), ("val", val), ("test", test)):
        n = write_events_csv(graph, out_dir / f"{name}.csv", view=view, ids=ids,
                             src_col=manifest.src_col, dst_col=manifest.dst_col,
                             t_col=manifest.t_col)
        print(f"{name}: {n} edges -> {out_dir / f'{name}.csv'}")
    with open(out_dir / "id_map.csv", "w", encoding="utf-8") as f:
        f.write("label,id\n")
        for i, label in enumerate(ids.labels):
            f.write(f"{label},{i}\n")
    print(f"id_map: {out_dir / 'id_map.csv'}")
    return 0


def _cmd_edgebank(args: argparse.Namespace) -> int:
    manifest, graph, ids = _load(args.manifest)
    train, val, test = chronological_split(graph, args.ratios)

    test_negatives = None
    uniform_q = args.uniform_negatives
    negatives_path = args.negatives or (
        str(manifest.negatives) if manifest.negatives and uniform_q is None else None
    )
    if negatives_path is not None:
        test_negatives = load_negatives(negatives_path, ids)
    if test_negatives is None and uniform_q is None:
        print("error: no negatives source; pass --negatives or "
              "--uniform-negatives Q", file=sys.stderr)
        return 2

    start = time.perf_counter()
    result = evaluate_edgebank(
        train, val, test,
        batch_size=args.batch_size,
        test_negatives=test_negatives,
        uniform_q=uniform_q,
        rng_seed=args.seed,
    )
    elapsed = time.perf_counter() - start
    print(f"val_mrr: {result.val_mrr:.4f}" if result.val_mrr is not None
          else "val_mrr: n/a")
    print(f"test_mrr: {result.test_mrr:.4f}")
    print(f"# time: edgebank {elapsed:.3f} s")
    return 0


def _cmd_growth_labels(args: argparse.Namespace) -> int:
    from tgkit.metrics import growth_labels

    _, graph, _ = _load(args.manifest)
    span = TimeGranularity.from_string(args.granularity)
    counts = np.array(
        [s.num_edges for s in iterate_by_time(GraphView.full(graph), span)],
        dtype=np.int64,
    )
    labels = growth_labels(counts)
    print("counts: " + " ".join(str(c) for c in counts))
    print("labels: " + " ".join(str(x) for x in labels))
    if args.plot:
        from tgkit import report

        report.plot_snapshot_counts(counts, labels, args.plot,
                                    title=f"{args.granularity} snapshots")
        print(f"figure: {args.plot}")
    return 0


def _cmd_bench_discretize(args: argparse.Namespace) -> int:
    _, graph, _ = _load(args.manifest)
    coarse = TimeGranularity.from_string(args.granularity)
    reduce = ReductionOp.from_string(args.reduce)

    start = time.perf_counter()
    engine_out = discretize(graph, coarse, reduce)
    engine_s = time.perf_counter() - start

    start = time.perf_counter()
    naive_out = discretize_naive(graph, coarse, reduce)
    naive_s = time.perf_counter() - start

    match = (
        np.array_equal(engine_out.edge_t, naive_out.edge_t)
        and np.array_equal(engine_out.edge_src, naive_out.edge_src)
        and np.array_equal(engine_out.edge_dst, naive_out.edge_dst)
    )
    print(f"events: {graph.num_edges} -> {engine_out.num_edges}")
    print(f"outputs_match: {'yes' if match else 'NO'}")
    print(f"# time: engine {engine_s:.3f} s")
    print(f"# time: naive {naive_s:.3f} s")
    print(f"speedup: {naive_s / engine_s:.2f}")
    if args.plot:
        from tgkit import report

        report.plot_bench({"engine": engine_s, "naive": naive_s}, args.plot)
        print(f"figure: {args.plot}")
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "discretize": _cmd_discretize,
    "split": _cmd_split,
    "edgebank": _cmd_edgebank,
    "growth-labels": _cmd_growth_labels,
    "bench-discretize": _cmd_bench_discretize,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TemporalGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
