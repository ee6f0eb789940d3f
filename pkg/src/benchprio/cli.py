"""Command-line entry point: ``benchprio <command> [flags]``.

Exit codes: 0 success, 2 usage error, 3 data or validation error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from benchprio import __version__
from benchprio.changes import detect_changes, load_measurements
from benchprio.errors import BenchprioError
from benchprio.evaluation import apfd_p, compare_strategies, top_n
from benchprio.ingestion import (
    load_coverage,
    load_diff,
    load_history,
    load_truth,
    ranking_ids,
    save_coverage,
    save_diff,
    save_history,
    save_truth,
)
from benchprio.model import ChangeHistory, Ranking, validate_suite
from benchprio.objectives import HIST_AGGREGATES, MODES, OVERLAP_MEASURES, build_context
from benchprio.pipeline import GREEDY, MOEAS, STRATEGIES, prioritize
from benchprio.search import SearchConfig
from benchprio.synthetic import SyntheticSpec, generate_synthetic

log = logging.getLogger("benchprio")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3


class UsageError(Exception):
    pass


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(path: Path, argv, inputs, seed, timings: dict, outputs) -> None:
    manifest = {
        "command": ["benchprio", *argv],
        "tool_version": __version__,
        "seed": seed,
        "inputs": {str(p): _sha256(p) for p in inputs if p},
        "outputs": [str(o) for o in outputs],
        "timings": timings,
    }
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def ranking_to_json(ranking: Ranking, objectives) -> str:
    doc = {
        "strategy": ranking.strategy,
        "seed": ranking.seed,
        "order": [{"method": b.method, "params": b.params_str} for b in ranking.order],
        "objectives": objectives.as_dict(),
    }
    return json.dumps(doc, indent=1) + "\n"


def load_ranking(path) -> Ranking:
    from benchprio.errors import ParseError

    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return Ranking(tuple(ranking_ids(doc["order"])), strategy=doc.get("strategy", ""), seed=doc.get("seed"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot read ranking {path}: {exc!r}") from exc


def _search_config(args) -> SearchConfig:
    try:
        return SearchConfig(
            population=args.population,
            archive=args.archive,
            max_evaluations=args.max_evaluations,
            seed=0,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_mode_inputs(args, needs_history: bool) -> None:
    if args.mode in ("cac", "car") and not args.diff:
        raise UsageError(f"--mode {args.mode} requires --diff")
    if needs_history and not args.history:
        raise UsageError("--history is required for MOEA strategies")


# --------------------------------------------------------------------- commands


def cmd_prioritize(args, argv) -> int:
    if args.select == "median" and not args.truth:
        raise UsageError("--select median requires --truth")
    _check_mode_inputs(args, args.algo in MOEAS)
    config = _search_config(args)

    t0 = time.perf_counter()
    cov = load_coverage(args.coverage)
    hist = load_history(args.history, absolute=args.abs) if args.history else ChangeHistory({})
    diff = load_diff(args.diff) if args.diff else None
    truth = load_truth(args.truth) if args.truth else None
    report = validate_suite(cov, hist)
    for note in report.notes:
        log.info(note)
    ctx = build_context(cov, hist, diff, args.mode, overlap=args.overlap, hist_agg=args.hist_agg)
    result = prioritize(args.algo, cov, hist, diff, args.mode, args.seed, args.select, truth, config, ctx)
    analysis = time.perf_counter() - t0

    out = Path(args.out)
    _write_atomic(out, ranking_to_json(result.ranking, result.objectives))
    _write_manifest(
        Path(str(out) + ".manifest.json"),
        argv,
        [args.coverage, args.history, args.diff, args.truth],
        args.seed,
        {"prioritization_s": result.prioritization_time, "analysis_s": max(analysis, result.prioritization_time)},
        [out],
    )
    return EXIT_OK


def _metric_columns(metrics: list[str], n: int) -> list[str]:
    cols = []
    for m in metrics:
        if m == "apfdp":
            cols.append("apfdp")
        elif m == "topn":
            cols.append(f"top{n}")
        else:
            raise UsageError(f"unknown metric {m!r} (choose apfdp, topn)")
    return cols


def cmd_evaluate(args, argv) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    cols = _metric_columns(metrics, args.n)
    truth = load_truth(args.truth)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["strategy", "seed", *cols])
    for path in args.ranking:
        ranking = load_ranking(path)
        row = [ranking.strategy, "" if ranking.seed is None else ranking.seed]
        for m in metrics:
            row.append(repr(apfd_p(ranking, truth)) if m == "apfdp" else repr(top_n(ranking, truth, args.n)))
        writer.writerow(row)
    _emit(args.out, buf.getvalue())
    return EXIT_OK


def cmd_detect_changes(args, argv) -> int:
    old = load_measurements(args.old)
    new = load_measurements(args.new)
    rows = detect_changes(old, new, args.iterations, args.confidence, args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["version", "method", "params", "change_percent", "ci_low", "ci_high", "significant"])
    for bid, res in rows:
        writer.writerow(
            [args.version, bid.method, bid.params_str, repr(res.change_percent),
             repr(res.ratio_ci_low), repr(res.ratio_ci_high), str(res.significant).lower()]
        )
    _emit(args.out, buf.getvalue())
    return EXIT_OK


def _experiment_job(job):
    strategy, seed, inputs, opts = job
    cov, hist, diff, truth = inputs
    config = SearchConfig(population=opts["population"], archive=opts["archive"],
                          max_evaluations=opts["max_evaluations"], seed=0)
    ctx = build_context(cov, hist, diff, opts["mode"], overlap=opts["overlap"], hist_agg=opts["hist_agg"])
    t0 = time.perf_counter()
    res = prioritize(strategy, cov, hist, diff, opts["mode"], seed, opts["select"], truth, config, ctx)
    analysis = time.perf_counter() - t0
    return (strategy, seed, apfd_p(res.ranking, truth), top_n(res.ranking, truth, opts["n"]),
            res.prioritization_time, max(analysis, res.prioritization_time))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BENCHPRIO_THREADS", "1")))
    except ValueError:
        return 1


def cmd_experiment(args, argv) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algos if a not in STRATEGIES]
    if unknown or len(algos) < 2:
        raise UsageError(f"--algos needs >= 2 of {','.join(STRATEGIES)}; got {args.algos!r}")
    if args.repetitions < 1:
        raise UsageError("--repetitions must be >= 1")
    _check_mode_inputs(args, any(a in MOEAS for a in algos))
    _search_config(args)

    t_load = time.perf_counter()
    cov = load_coverage(args.coverage)
    hist = load_history(args.history, absolute=args.abs) if args.history else ChangeHistory({})
    diff = load_diff(args.diff) if args.diff else None
    truth = load_truth(args.truth)
    load_time = time.perf_counter() - t_load

    opts = {k: getattr(args, k) for k in ("population", "archive", "max_evaluations", "mode", "overlap", "hist_agg", "select", "n")}
    jobs = []
    for algo in algos:
        seeds = [args.seed_base] if algo in GREEDY else [args.seed_base + r for r in range(args.repetitions)]
        jobs += [(algo, s, (cov, hist, diff, truth), opts) for s in seeds]
    threads = _threads()
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_experiment_job, jobs))
    else:
        results = [_experiment_job(j) for j in jobs]

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    top_col = f"top{args.n}"
    writer.writerow(["strategy", "seed", "apfdp", top_col])
    for strategy, seed, a, t, _, _ in results:
        writer.writerow([strategy, seed, repr(a), repr(t)])
    _write_atomic(out_dir / "runs.csv", buf.getvalue())

    reports = {}
    text = []
    for key, col in (("apfdp", 2), (top_col, 3)):
        grouped = {algo: [r[col] for r in results if r[0] == algo] for algo in algos}
        report = compare_strategies(grouped, alpha=args.alpha)
        reports[key] = report.to_dict()
        text.append(f"== {key} ==\n" + report.table())
    _write_atomic(out_dir / "report.json", json.dumps(reports, indent=1) + "\n")
    _write_atomic(out_dir / "report.txt", "\n".join(text))
    sys.stdout.write("\n".join(text))

    timing = {}
    for algo in algos:
        prio = [r[4] for r in results if r[0] == algo]
        anal = [r[5] + load_time for r in results if r[0] == algo]
        entry = {"prioritization_s_median": float(np.median(prio)), "analysis_s_median": float(np.median(anal))}
        if args.suite_runtime:
            entry["prioritization_overhead_pct"] = 100.0 * entry["prioritization_s_median"] / args.suite_runtime
            entry["analysis_overhead_pct"] = 100.0 * entry["analysis_s_median"] / args.suite_runtime
        timing[algo] = entry
    _write_manifest(
        out_dir / "manifest.json",
        argv,
        [args.coverage, args.history, args.diff, args.truth],
        args.seed_base,
        timing,
        [out_dir / "runs.csv", out_dir / "report.json", out_dir / "report.txt"],
    )
    return EXIT_OK


def cmd_synth(args, argv) -> int:
    try:
        spec = SyntheticSpec(
            n_benchmarks=args.n_benchmarks,
            n_methods=args.n_methods,
            coverage_density=args.density,
            change_correlation=args.correlation,
            n_versions=args.versions,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cov, hist, diff, truth = generate_synthetic(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_coverage(cov, out / "coverage.json")
    save_history(hist, out / "history.csv")
    save_diff(diff, out / "diff.txt")
    save_truth(truth, out / "truth.csv")
    return EXIT_OK


def _emit(out, text: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        _write_atomic(Path(out), text)


# ----------------------------------------------------------------------- parser


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES, default="nca")
    p.add_argument("--diff", help="changed-method list (required for cac/car)")
    p.add_argument("--overlap", choices=OVERLAP_MEASURES, default="jaccard")
    p.add_argument("--hist-agg", choices=HIST_AGGREGATES, default="mean")
    p.add_argument("--abs", action="store_true", help="take |change| of signed history rows")
    p.add_argument("--population", type=int, default=250)
    p.add_argument("--archive", type=int, default=500)
    p.add_argument("--max-evaluations", type=int, default=25000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="benchprio", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prioritize", help="rank a benchmark suite")
    p.add_argument("--coverage", required=True)
    p.add_argument("--history")
    p.add_argument("--algo", choices=STRATEGIES, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--select", choices=("ideal", "median"), default="ideal")
    p.add_argument("--truth")
    p.add_argument("--out", default="ranking.json")
    _add_search_flags(p)
    p.set_defaults(func=cmd_prioritize)

    p = sub.add_parser("evaluate", help="APFD-P / Top-N of ranking files")
    p.add_argument("--ranking", nargs="+", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--metrics", default="apfdp,topn")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("detect-changes", help="bootstrap change sizes between two measurement files")
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--version", dest="version", default="new", help="version label for the emitted rows")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_detect_changes)

    p = sub.add_parser("experiment", help="repeated runs plus statistical comparison")
    p.add_argument("--coverage", required=True)
    p.add_argument("--history")
    p.add_argument("--truth", required=True)
    p.add_argument("--algos", required=True, help="comma list, e.g. ibea,total,random")
    p.add_argument("--repetitions", type=int, default=30)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--select", choices=("ideal", "median"), default="ideal")
    p.add_argument("--suite-runtime", type=float, help="suite runtime in seconds, for overhead percentages")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--out-dir", required=True)
    _add_search_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("synth", help="write a synthetic instance")
    p.add_argument("--n-benchmarks", type=int, default=50)
    p.add_argument("--n-methods", type=int, default=200)
    p.add_argument("--density", type=float, default=0.1)
    p.add_argument("--correlation", type=float, default=0.5)
    p.add_argument("--versions", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"benchprio: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BenchprioError as exc:
        print(f"benchprio: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
