"""``rolpa`` command line: detect, eval, generate and bench.

Exit codes: 0 success, 1 data error (unreadable or malformed input, invalid
generator parameters), 2 usage error.  ``ROLPA_THREADS`` bounds the number
of worker threads used by ``detect --runs`` and ``bench``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from . import experiments
from .generators import GnSpec, gn_benchmark, ring_of_cliques
from .graph import GraphError
from .io import FormatError, read_edge_list, read_partition, write_edge_list, write_partition
from .propagation import RunConfig, TieRule, Variant, run_batch
from .quality import modularity, nmi, rnmi, rrnmi

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2

SUITE_RUNS = {"resolution": 100, "gn-sweep": 10, "lfr-dir": 10, "real-dir": 100}


class DataError(Exception):
    pass


def _emit(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_graph(path):
    g = read_edge_list(path)
    if g.loops_dropped or g.duplicates_dropped:
        print(f"{path}: dropped {g.loops_dropped} self-loop(s) and "
              f"{g.duplicates_dropped} duplicate edge(s)", file=sys.stderr)
    return g


def _graph_info(g) -> dict:
    return {"n": g.n, "m": g.m, "self_loops_dropped": g.loops_dropped,
            "duplicates_dropped": g.duplicates_dropped}


def cmd_detect(args) -> int:
    g = _load_graph(args.graph)
    cfg = RunConfig(variant=args.algo, delta=args.delta, seed=args.seed,
                    max_iterations=args.max_iters, tie_rule=args.tie_rule,
                    standard_constraint=args.standard_constraint)
    batch = run_batch(g, cfg, args.runs)
    best = batch.best
    if args.out:
        write_partition(args.out, g, best.partition)
    summary = {
        "schema": 1,
        "graph": _graph_info(g),
        "algorithm": cfg.variant.value,
        "delta": cfg.delta,
        "seed": cfg.seed,
        "runs": args.runs,
        "max_iterations": cfg.max_iterations,
        "best": {
            "seed": best.seed,
            "modularity": float(batch.modularities.max()),
            "communities": best.community_count,
            "iterations": best.iterations,
            "converged": best.converged,
            "phase_switch_iteration": best.phase_switch_iteration,
        },
        "modularity": {"mean": batch.mean_modularity, "std": batch.std_modularity},
        "communities": {"mean": batch.mean_communities, "std": batch.std_communities},
        "mean_iterations": batch.mean_iterations,
    }
    if not args.no_timing:
        walls = [r.wall_time for r in batch.results]
        summary["timing"] = {"total_wall_time": sum(walls), "mean_wall_time": sum(walls) / len(walls)}
    _emit(summary, args.summary)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = _load_graph(args.graph)
    p = read_partition(args.partition, g)
    out = {"schema": 1, "graph": _graph_info(g), "communities": p.community_count,
           "modularity": modularity(g, p)}
    if args.truth:
        truth = read_partition(args.truth, g)
        out["truth_communities"] = truth.community_count
        out["nmi"] = nmi(truth, p)
        out["rnmi"] = rnmi(truth, p, args.rnmi_samples, seed=args.seed)
        try:
            out["rrnmi"] = rrnmi(truth, p, args.rnmi_samples, seed=args.seed)
        except ValueError as exc:
            out["rrnmi"] = None
            print(f"warning: rrNMI undefined: {exc}", file=sys.stderr)
    _emit(out)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        if args.kind == "ring":
            g, truth = ring_of_cliques(args.cliques, args.size)
        else:
            g, truth = gn_benchmark(GnSpec(args.mu, args.n, args.blocks, args.avg_degree, args.seed))
    except ValueError as exc:
        raise DataError(str(exc)) from None
    prefix = Path(args.out_prefix)
    if prefix.parent != Path("."):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    edges = prefix.with_name(prefix.name + ".edges.txt")
    comms = prefix.with_name(prefix.name + ".truth.txt")
    write_edge_list(edges, g)
    write_partition(comms, g, truth)
    print(f"wrote {edges} (n={g.n}, m={g.m}) and {comms} ({truth.community_count} communities)",
          file=sys.stderr)
    return EXIT_OK


def _suite_cases(args):
    if args.suite == "resolution":
        return experiments.resolution_cases(args.max_cliques, args.clique_step, args.clique_size)
    if args.suite == "gn-sweep":
        return experiments.gn_cases(args.mus, args.networks, args.seed)
    if args.dir is None:
        raise argparse.ArgumentTypeError(f"suite {args.suite} needs --dir")
    try:
        if args.suite == "lfr-dir":
            return experiments.lfr_cases(args.dir)
        return experiments.real_cases(args.dir)
    except FileNotFoundError as exc:
        raise DataError(str(exc)) from None


def write_report(report, prefix) -> tuple[Path, Path, Path]:
    prefix = Path(prefix)
    if prefix.parent != Path("."):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    timing_path = prefix.with_name(prefix.name + ".timing.json")
    cols = experiments.BenchRow.columns()
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in report.rows:
            d = row.as_dict()
            w.writerow([experiments.csv_value(d[c]) for c in cols])
    _emit(report.to_json(), json_path)
    _emit(report.timing_json(), timing_path)
    return csv_path, json_path, timing_path


def cmd_bench(args) -> int:
    cases = _suite_cases(args)
    runs = args.runs if args.runs is not None else SUITE_RUNS[args.suite]
    report = experiments.run_suite(args.suite, cases, args.algos, runs, args.seed, args.delta,
                                   args.max_iters, args.rnmi_samples)
    paths = write_report(report, args.out)
    for row in report.rows:
        rr = "" if row.mean_rrnmi is None else f"  rrNMI {row.mean_rrnmi:.4f}"
        print(f"{row.algorithm:6s} {row.network:24s} Q {row.mean_modularity:.4f}  "
              f"communities {row.mean_communities:.2f}{rr}", file=sys.stderr)
    print("wrote " + ", ".join(map(str, paths)), file=sys.stderr)
    return EXIT_OK


def _algo_list(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in experiments.ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {a!r}")
    if not algos:
        raise argparse.ArgumentTypeError("no algorithm given")
    return algos


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rolpa", description="Role-based label propagation toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--delta", type=float, default=0.1, help="hop attenuation (default 0.1)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-iters", type=_positive_int, default=100)

    p = sub.add_parser("detect", help="detect communities in an edge list")
    p.add_argument("graph")
    p.add_argument("--algo", choices=[v.value for v in Variant], default="rolpa")
    add_run_flags(p)
    p.add_argument("--runs", type=_positive_int, default=1)
    p.add_argument("--out", help="write the best-modularity partition here")
    p.add_argument("--summary", help="write the JSON summary here instead of stdout")
    p.add_argument("--tie-rule", choices=[t.value for t in TieRule], default=TieRule.KEEP_CURRENT.value)
    p.add_argument("--standard-constraint", action="store_true",
                   help="order roLPA updates by the standard Burt constraint")
    p.add_argument("--no-timing", action="store_true", help="omit the timing field from the summary")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="score a partition, optionally against ground truth")
    p.add_argument("graph")
    p.add_argument("partition")
    p.add_argument("truth", nargs="?")
    p.add_argument("--rnmi-samples", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="write a synthetic benchmark graph and its ground truth")
    kinds = p.add_subparsers(dest="kind", required=True)
    r = kinds.add_parser("ring", help="ring of cliques")
    r.add_argument("--cliques", type=int, required=True)
    r.add_argument("--size", type=int, default=4)
    r.add_argument("--out-prefix", required=True)
    gn = kinds.add_parser("gn", help="planted four-block benchmark")
    gn.add_argument("--mu", type=float, required=True)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--n", type=int, default=128)
    gn.add_argument("--blocks", type=int, default=4)
    gn.add_argument("--avg-degree", type=float, default=16.0)
    gn.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a benchmark suite, write CSV and JSON")
    p.add_argument("suite", choices=list(SUITE_RUNS))
    p.add_argument("--algos", type=_algo_list, default=list(experiments.ALGORITHMS),
                   help="comma-separated subset of lpa,lpad,rolpa")
    add_run_flags(p)
    p.add_argument("--runs", type=_positive_int, default=None,
                   help="runs per network (default 100 for resolution/real-dir, 10 otherwise)")
    p.add_argument("--out", required=True, help="output prefix for .csv, .json and .timing.json")
    p.add_argument("--rnmi-samples", type=_positive_int, default=100)
    p.add_argument("--max-cliques", type=int, default=100)
    p.add_argument("--clique-step", type=_positive_int, default=4)
    p.add_argument("--clique-size", type=int, default=4)
    p.add_argument("--mus", type=_float_list, default=list(experiments.GN_MUS))
    p.add_argument("--networks", type=_positive_int, default=100)
    p.add_argument("--dir", help="input directory for lfr-dir and real-dir")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"rolpa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FormatError, GraphError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"rolpa: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
