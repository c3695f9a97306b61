"""Command-line experiment harness.

Subcommands: preprocess, stats, gen, extract-bench, augment-bench,
detect-bench. Exit codes: 0 success, 1 usage error, 2 data error,
3 algorithm failure on all cells.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import bench, synth
from .errors import AlgorithmError, DataError
from .extract import ExtractionSpec

USAGE_ERROR = 1
DATA_ERROR = 2
ALGORITHM_ERROR = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; this tool reserves 2
    # for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_common_flags(p):
    p.add_argument("--out", help="output file for records (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--sample", type=int, default=None,
                   help="cap seeds per community (default: every member)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for sampling")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true",
                   help="force serial execution for trustworthy timings")


def _add_extraction_flags(p):
    p.add_argument("--extract", default="ppr-d",
                   choices=("kwalk2", "kwalk3", "kwalk4", "ppr", "ppr-d"),
                   help="extraction method for subgraph-mode algorithms")
    p.add_argument("--target-nodes", type=int, default=3000)
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--deg-est", type=float, default=None,
                   help="estimated average community degree (default: 2m/n)")


def build_parser() -> _Parser:
    parser = _Parser(prog="localcd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="build a dataset bundle from raw files")
    p.add_argument("--edges", required=True)
    p.add_argument("--communities", required=True)
    p.add_argument("--out", required=True, help="bundle directory")
    p.add_argument("--name", default=None)
    p.add_argument("--min-size", type=int, default=10)

    p = sub.add_parser("stats", help="print the dataset summary table")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("--kind", required=True,
                   choices=("ring-of-cliques", "path-of-cliques", "planted"))
    p.add_argument("--out", required=True)
    p.add_argument("--cliques", type=int, default=30)
    p.add_argument("--clique-size", type=int, default=10)
    p.add_argument("--group", type=int, default=None,
                   help="cliques per community (path-of-cliques)")
    p.add_argument("--blocks", type=int, default=4)
    p.add_argument("--block-size", type=int, default=25)
    p.add_argument("--p-in", type=float, default=0.5)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("extract-bench", help="subgraph extraction recall experiment")
    p.add_argument("--dataset", required=True)
    p.add_argument("--methods", default="kwalk2,kwalk3,kwalk4,ppr,ppr-d")
    _add_extraction_flags(p)
    _add_common_flags(p)

    p = sub.add_parser("augment-bench", help="seed-set augmentation precision experiment")
    p.add_argument("--dataset", required=True)
    p.add_argument("--methods", default="ppr,hk,kwalk2,kwalk3,kwalk4")
    p.add_argument("--tau", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--t", type=float, default=4.0)
    _add_common_flags(p)

    p = sub.add_parser("detect-bench", help="ground-truth community recovery experiment")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algorithms", default="hk,ppr,hks,pprs,movs,lemoneasy")
    p.add_argument("--hk-t", type=float, default=4.0)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--mov-tol", type=float, default=1e-8)
    p.add_argument("--r", type=int, default=10)
    p.add_argument("--f", type=int, default=5)
    p.add_argument("--parent-sweep", action="store_true",
                   help="sweep subgraph orders with full-graph volumes")
    _add_extraction_flags(p)
    _add_common_flags(p)

    return parser


def _emit_results(records, args):
    aggregates = bench.aggregate_records(records)
    if args.format == "json" or (args.out and args.out.endswith(".json")):
        text = bench.results_to_json(records, aggregates)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            print(text)
    else:
        csv_text = bench.records_to_csv(records)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(csv_text)
            agg_path = os.path.splitext(args.out)[0] + ".aggregates.csv"
            with open(agg_path, "w") as fh:
                fh.write(bench.aggregates_to_csv(aggregates))
        else:
            print(csv_text, end="")
    # Human-readable summary on stderr so stdout stays machine-readable.
    for agg in aggregates:
        print(
            f"# {agg.dataset} {agg.algorithm} {agg.metric}: "
            f"{agg.mean:.4f} (+{agg.upper_semideviation:.4f}/"
            f"-{agg.lower_semideviation:.4f}, {agg.n_communities} communities)",
            file=sys.stderr,
        )


def _extraction_spec_from_args(args) -> ExtractionSpec:
    return ExtractionSpec.parse(
        args.extract,
        target_nodes=args.target_nodes,
        alpha=args.alpha,
        degree_estimate=args.deg_est,
    )


def _split_csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _cmd_preprocess(args) -> int:
    bundle = bench.preprocess_dataset(
        args.edges, args.communities, args.out, name=args.name, min_size=args.min_size
    )
    print(json.dumps(bundle.stats_report(), indent=2))
    return 0


def _cmd_stats(args) -> int:
    bundle = bench.load_bundle(args.dataset)
    report = bundle.stats_report()
    if args.format == "csv":
        cols = list(report)
        text = ",".join(cols) + "\n" + ",".join(str(report[c]) for c in cols) + "\n"
    else:
        text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "ring-of-cliques":
        edges, comms = synth.ring_of_cliques(args.cliques, args.clique_size)
    elif args.kind == "path-of-cliques":
        edges, comms = synth.path_of_cliques(args.cliques, args.clique_size, args.group)
    else:
        edges, comms = synth.planted_partition(
            args.blocks, args.block_size, args.p_in, args.p_out, args.seed
        )
    edge_path, cmty_path = synth.write_dataset(args.out, edges, comms)
    print(f"wrote {edge_path} and {cmty_path}")
    return 0


def _cmd_extract_bench(args) -> int:
    bundle = bench.load_bundle(args.dataset)
    records = bench.run_extract_bench(
        bundle,
        methods=_split_csv_list(args.methods),
        sample=args.sample,
        rng_seed=args.seed,
        threads=args.threads,
        timing=args.timing,
        target_nodes=args.target_nodes,
        alpha=args.alpha,
        degree_estimate=args.deg_est,
    )
    _emit_results(records, args)
    return 0


def _cmd_augment_bench(args) -> int:
    bundle = bench.load_bundle(args.dataset)
    records = bench.run_augment_bench(
        bundle,
        methods=_split_csv_list(args.methods),
        tau=args.tau,
        sample=args.sample,
        rng_seed=args.seed,
        threads=args.threads,
        timing=args.timing,
        alpha=args.alpha,
        epsilon=args.epsilon,
        t=args.t,
    )
    _emit_results(records, args)
    return 0


def _cmd_detect_bench(args) -> int:
    bundle = bench.load_bundle(args.dataset)
    opts = bench.DetectOptions(
        hk_t=args.hk_t,
        hk_epsilon=args.epsilon,
        ppr_alpha=args.alpha,
        ppr_epsilon=args.epsilon,
        extraction=_extraction_spec_from_args(args),
        gamma=args.gamma,
        mov_tol=args.mov_tol,
        r=args.r,
        f=args.f,
        parent_sweep=args.parent_sweep,
    )
    records = bench.run_detect_bench(
        bundle,
        algorithms=_split_csv_list(args.algorithms),
        opts=opts,
        sample=args.sample,
        rng_seed=args.seed,
        threads=args.threads,
        timing=args.timing,
    )
    _emit_results(records, args)
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "stats": _cmd_stats,
    "gen": _cmd_gen,
    "extract-bench": _cmd_extract_bench,
    "augment-bench": _cmd_augment_bench,
    "detect-bench": _cmd_detect_bench,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"localcd: data error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except AlgorithmError as exc:
        print(f"localcd: algorithm failure: {exc}", file=sys.stderr)
        return ALGORITHM_ERROR
    except ValueError as exc:
        print(f"localcd: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
