"""Batch command-line front end.

Subcommands:
  evaluate   score one series file and write a JSON report
  compare    print a metric comparison table alongside the report
  scenarios  run or export the synthetic scenario suite
  bench      time the metrics on synthetic series

Exit codes: 0 success, 2 usage or input validation error, 1 internal error
(or a failed scenario ordering assertion). Set PATE_LOG_LEVEL=debug|info to
raise log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, baselines, io as data_io, metrics, scenarios
from .series import threshold_grid
from .zones import BufferConfig

logger = logging.getLogger("pate")

_BENCH_E_MAX = 20  # buffer range for the timing harness; see README
_BENCH_EVENT_LENGTH = 500


def entry_point() -> None:
    sys.exit(main(sys.argv[1:]))


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:  # noqa: BLE001 - report and map to the internal-error code
        logging.exception("internal error")
        return 1


def _configure_logging() -> None:
    level = os.environ.get("PATE_LOG_LEVEL", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(message)s")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pate", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"pate {__version__}")
    sub = parser.add_subparsers(dest="command")

    def add_io(p):
        p.add_argument("--input", help="score,label CSV file")
        p.add_argument("--scores", help="single-column scores file (with --labels)")
        p.add_argument("--labels", help="single-column labels file (with --scores)")
        p.add_argument("--out", help="report output path (default: stdout)")
        p.add_argument("--config", help="flat key=value config file; flags win on conflict")

    def add_buffers(p):
        p.add_argument("--e-max", type=int, default=None, help="pre-buffer range maximum (default 100)")
        p.add_argument("--d-max", type=int, default=None, help="post-buffer range maximum (default 100)")
        p.add_argument("--ed", type=int, default=None,
                       help="sweep only the diagonal e = d = 0..ED instead of the full grid")
        p.add_argument("--grid", type=int, default=None, metavar="N",
                       help="downsample thresholds to N score quantiles (default: all unique scores)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for the combo sweep (default: all cores); "
                            "results are independent of this setting")

    p_eval = sub.add_parser("evaluate", help="compute the proximity-weighted score for one input")
    add_io(p_eval)
    add_buffers(p_eval)
    p_eval.add_argument("--pate-f1", action="store_true",
                        help="also compute the binary-prediction variant (requires 0/1 scores)")
    p_eval.add_argument("--curves", action="store_true", help="include PR-curve points in the report")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_cmp = sub.add_parser("compare", help="print a metric comparison table")
    add_io(p_cmp)
    add_buffers(p_cmp)
    p_cmp.add_argument("--threshold", type=float, default=None,
                       help="threshold for the point-wise metrics (default: 99th score percentile)")
    p_cmp.add_argument("--metrics", default="all",
                       help="comma list of metrics to compute (default: all)")
    p_cmp.set_defaults(func=_cmd_compare)

    p_scen = sub.add_parser("scenarios", help="run or export the synthetic scenario suite")
    p_scen.add_argument("action", choices=("run", "export"))
    p_scen.add_argument("--suite", choices=("S", "p", "both"), default="both")
    p_scen.add_argument("--dir", default="scenarios_out", help="output directory for export")
    p_scen.add_argument("--perturb", type=float, default=0.0,
                        help="self-test knob: offset suite scores to demonstrate a FAIL")
    p_scen.set_defaults(func=_cmd_scenarios)

    p_bench = sub.add_parser("bench", help="time the metrics on synthetic series")
    p_bench.add_argument("--length", "-T", type=int, default=100_000, help="series length (>= 1000)")
    p_bench.add_argument("--ratios", default="2,5,10", help="anomaly ratios in percent, comma list")
    p_bench.add_argument("--repeats", type=int, default=3, help="timing repetitions (median reported)")
    p_bench.add_argument("--e-max", type=int, default=None, help=f"buffer range (default {_BENCH_E_MAX})")
    p_bench.add_argument("--d-max", type=int, default=None)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument("--out", default="bench.json", help="JSON output path")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file; explicit flags win."""
    if not getattr(args, "config", None):
        return
    file_cfg = data_io.read_config_file(args.config)
    casts = {
        "e_max": int, "d_max": int, "ed": int, "grid": int, "threads": int,
        "threshold": float, "out": str, "input": str, "scores": str, "labels": str,
    }
    for key, raw in file_cfg.items():
        attr = key.replace("-", "_")
        if attr not in casts:
            raise ValueError(f"{args.config}: unknown config key {key!r}")
        if getattr(args, attr, None) is None:
            setattr(args, attr, casts[attr](raw))


def _load_series(args) -> tuple[np.ndarray, np.ndarray]:
    if args.input and (args.scores or args.labels):
        raise ValueError("use either --input or --scores/--labels, not both")
    if args.input:
        return data_io.read_series_csv(args.input)
    if args.scores and args.labels:
        return data_io.read_series_split(args.scores, args.labels)
    raise ValueError("an input is required: --input FILE or --scores FILE --labels FILE")


def _run_config(args, metrics_wanted: tuple[str, ...] = ("pate",)) -> tuple[data_io.RunConfig, str]:
    """Resolve flags into a validated RunConfig plus the combo-selection mode."""
    if args.ed is not None:
        if args.e_max is not None or args.d_max is not None:
            raise ValueError("--ed replaces --e-max/--d-max; give one or the other")
        e_max = d_max = args.ed
        combos = "diagonal"
    else:
        e_max = args.e_max if args.e_max is not None else 100
        d_max = args.d_max if args.d_max is not None else 100
        combos = "grid"
    quantile = getattr(args, "grid", None) is not None
    threads = getattr(args, "threads", None)
    cfg = data_io.RunConfig(
        e_max=e_max,
        d_max=d_max,
        combos=combos,
        grid_policy="quantile" if quantile else "exhaustive",
        grid_n=args.grid if quantile else None,
        metrics=metrics_wanted,
        threshold=getattr(args, "threshold", None),
        threads=max(1, threads) if threads is not None else max(1, os.cpu_count() or 1),
        curves=bool(getattr(args, "curves", False)),
    )
    return cfg, combos


def _emit_report(report: metrics.MetricReport, out: str | None) -> None:
    if out:
        data_io.write_report(report, out)
        logger.info("report written to %s", out)
    else:
        sys.stdout.write(data_io.report_to_json(report))


def _cmd_evaluate(args) -> int:
    _merge_config(args)
    scores, labels = _load_series(args)
    run, combos = _run_config(args, ("pate", "pate_f1") if args.pate_f1 else ("pate",))
    buffers = BufferConfig(run.e_max, run.d_max)
    report = metrics.pate(scores, labels, buffers, combos=combos, threads=run.threads,
                          curves=run.curves, grid_policy=run.grid_policy, grid_n=run.grid_n)
    if args.pate_f1:
        if not np.all(np.isin(scores, (0.0, 1.0))):
            raise ValueError("binary predictions required for --pate-f1 (scores must be 0 or 1)")
        f1_report = metrics.pate_f1(scores.astype(np.int8), labels, buffers, combos=combos)
        report.pate_f1 = f1_report.pate_f1
    _emit_report(report, args.out)
    return 0


_COMPARE_METRICS = ("pate", "pa_f1", "standard_f1", "pa_auc_roc", "auc_roc", "auc_pr")


def _cmd_compare(args) -> int:
    _merge_config(args)
    scores, labels = _load_series(args)
    wanted = _COMPARE_METRICS if args.metrics == "all" else tuple(args.metrics.split(","))
    unknown = set(wanted) - set(_COMPARE_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {', '.join(sorted(unknown))}")
    run, combos = _run_config(args, wanted)
    buffers = BufferConfig(run.e_max, run.d_max)

    report = metrics.MetricReport(
        config={"e_max": run.e_max, "d_max": run.d_max, "combos": combos}
    )
    grid = threshold_grid(scores, policy=run.grid_policy, n=run.grid_n)
    rows: list[tuple[str, float]] = []
    if "pate" in wanted:
        pate_report = metrics.pate(scores, labels, buffers, combos=combos,
                                   threads=run.threads, grid_policy=run.grid_policy,
                                   grid_n=run.grid_n)
        report.pate = pate_report.pate
        report.per_combo = pate_report.per_combo
        rows.append(("pate", report.pate))

    threshold = run.threshold
    if threshold is None:
        threshold = float(np.quantile(scores, 0.99))
    report.config["threshold"] = threshold
    preds = (scores >= threshold).astype(np.int8)

    if "pa_f1" in wanted:
        report.baselines["pa_f1"] = baselines.pa_f1(preds, labels)
        rows.append(("pa_f1", report.baselines["pa_f1"]))
    if "standard_f1" in wanted:
        precision, recall, f1 = baselines.standard_prf(preds, labels)
        report.baselines["standard_precision"] = precision
        report.baselines["standard_recall"] = recall
        report.baselines["standard_f1"] = f1
        rows.append(("standard_f1", f1))
    if "pa_auc_roc" in wanted:
        report.baselines["pa_auc_roc"] = baselines.pa_auc_roc(scores, labels, grid)
        rows.append(("pa_auc_roc", report.baselines["pa_auc_roc"]))
    if "auc_roc" in wanted:
        report.baselines["auc_roc"] = baselines.auc_roc(scores, labels, grid)
        rows.append(("auc_roc", report.baselines["auc_roc"]))
    if "auc_pr" in wanted:
        report.baselines["auc_pr"] = baselines.auc_pr(scores, labels, grid)
        rows.append(("auc_pr", report.baselines["auc_pr"]))

    width = max(len(name) for name, _ in rows)
    print(f"{'metric':<{width}}  score")
    for name, value in rows:
        print(f"{name:<{width}}  {value:.4f}")
    if args.out:
        data_io.write_report(report, args.out)
    return 0


def _cmd_scenarios(args) -> int:
    if args.action == "export":
        out_dir = Path(args.dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name in scenarios.scenario_names():
            sc = scenarios.scenario(name)
            data_io.write_series_csv(out_dir / f"{name}.csv", sc.scores.values, sc.labels.values)
        print(f"wrote {len(scenarios.scenario_names())} scenario files to {out_dir}")
        return 0

    suites = ("S", "p") if args.suite == "both" else (args.suite,)
    all_ok = True
    for which in suites:
        results = scenarios.evaluate_suite(which, perturb=args.perturb)
        metric_name = "PATE" if which == "S" else "PATE-F1"
        if which == "p":
            # same geometry as the score suite, so PATE is shown alongside
            pate_column = scenarios.evaluate_suite("S", perturb=args.perturb)
            print(f"{'scenario':<10}{'PATE':<10}PATE-F1")
            for name, value in results.items():
                print(f"{name:<10}{pate_column['S' + name[1:]]:<10.4f}{value:.4f}")
        else:
            print(f"{'scenario':<10}{metric_name}")
            for name, value in results.items():
                print(f"{name:<10}{value:.4f}")
        orderings = scenarios.PATE_ORDERINGS if which == "S" else scenarios.PATE_F1_ORDERINGS
        for hi, lo, ok in scenarios.check_orderings(results, orderings):
            status = "PASS" if ok else "FAIL"
            print(f"{metric_name} ordering {hi} > {lo}: {status}")
            all_ok = all_ok and ok
        print()
    print(f"OVERALL: {'PASS' if all_ok else 'FAIL'}")
    return 0 if all_ok else 1


def _bench_series(length: int, ratio: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Synthetic series: uniform random scores, evenly spaced anomaly events."""
    positives = max(1, int(round(length * ratio)))
    n_events = max(1, round(positives / _BENCH_EVENT_LENGTH))
    event_len = positives // n_events
    labels = np.zeros(length, dtype=np.int8)
    gap = length // n_events
    for k in range(n_events):
        start = k * gap + gap // 4
        labels[start : min(length, start + event_len)] = 1
    scores = np.random.default_rng(seed).random(length)
    return scores, labels


def _cmd_bench(args) -> int:
    if args.length < 1000:
        raise ValueError("bench requires --length >= 1000")
    e_max = args.e_max if args.e_max is not None else _BENCH_E_MAX
    d_max = args.d_max if args.d_max is not None else e_max
    cfg = BufferConfig(e_max, d_max)
    ratios = [float(r) / 100.0 for r in args.ratios.split(",")]

    results = []
    for ratio in ratios:
        scores, labels = _bench_series(args.length, ratio, args.seed)
        grid = threshold_grid(scores)
        threshold = float(np.quantile(scores, 0.99))
        preds = (scores >= threshold).astype(np.int8)
        timed = {
            "pate": lambda: metrics.pate(scores, labels, cfg, threads=args.threads).pate,
            "auc_pr": lambda: baselines.auc_pr(scores, labels, grid),
            "auc_roc": lambda: baselines.auc_roc(scores, labels, grid),
            "pa_auc_roc": lambda: baselines.pa_auc_roc(scores, labels, grid),
            "pa_f1": lambda: baselines.pa_f1(preds, labels),
            "standard_f1": lambda: baselines.standard_prf(preds, labels)[2],
        }
        for name, fn in timed.items():
            times = []
            value = None
            for _ in range(max(1, args.repeats)):
                start = time.perf_counter()
                value = fn()
                times.append(time.perf_counter() - start)
            results.append({
                "metric": name,
                "T": args.length,
                "ratio": ratio,
                "median_s": statistics.median(times),
                "value": float(value),
            })

    width = max(len(r["metric"]) for r in results)
    print(f"{'metric':<{width}}  {'T':>8}  {'ratio':>6}  {'median_s':>9}  value")
    for r in results:
        print(f"{r['metric']:<{width}}  {r['T']:>8}  {r['ratio']:>6.2f}  {r['median_s']:>9.3f}  {r['value']:.4f}")

    payload = {
        "config": {"length": args.length, "ratios": ratios, "repeats": args.repeats,
                   "e_max": cfg.e_max, "d_max": cfg.d_max, "seed": args.seed,
                   "threads": args.threads},
        "results": results,
        "version": __version__,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"timings written to {args.out}")
    return 0
