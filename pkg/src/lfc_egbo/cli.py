"""Command-line interface: ``lfc-egbo {simulate,tune,benchmark,stats,report}``.

Exit codes: 0 success, 2 usage or configuration error, 3 numeric failure
(divergent simulation, or every benchmark cell failed).
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from pathlib import Path

from . import __version__
from .config import Settings, load_settings
from .harness import (
    CONVERGENCE_COLUMNS,
    convergence_report,
    convergence_series,
    read_convergence_csv,
    read_runs_csv,
    run_cell,
    run_experiment,
    summarize,
    write_convergence_report,
    write_convergence_series,
    write_summary,
)
from .optimizers import LABELS, ConfigError, get_algorithm
from .plant import PidGains, closed_loop_matrix
from .reference import PUBLISHED
from .simulator import DivergenceError, integrate, itae, settling_metrics, write_trajectory_csv
from .statistics import StatisticsError, build_report, write_report

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
OUT_ENV = "LFC_EGBO_OUT"

log = logging.getLogger("lfc_egbo")


class UsageError(Exception):
    pass


def _default_out() -> Path:
    return Path(os.environ.get(OUT_ENV, "results"))


def _settings(args) -> Settings:
    return load_settings(args.config, profile=getattr(args, "profile", None), overrides=args.set or ())


def _parse_gains(text: str) -> PidGains:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"gains must be numbers, got {text!r}") from None
    try:
        return PidGains.from_sequence(values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gains_from_runs(path: str, row: int) -> PidGains:
    records = read_runs_csv(path)
    if not 1 <= row <= len(records):
        raise UsageError(f"{path} has {len(records)} data rows; --row {row} is out of range")
    return PidGains.from_sequence(records[row - 1].gains)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


# simulate ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    s = _settings(args)
    case = s.case(args.case)
    sources = [args.gains is not None, args.runs is not None, args.published is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --gains, --runs/--row or --published")
    if args.gains is not None:
        gains = _parse_gains(args.gains)
    elif args.runs is not None:
        gains = _gains_from_runs(args.runs, args.row)
    else:
        key = (case.id, args.published.lower())
        if key not in PUBLISHED:
            raise UsageError(f"no published gains for {args.published!r} on {case.label}")
        gains = PidGains.from_sequence(PUBLISHED[key].gains)

    matrix = closed_loop_matrix(s.plant, gains)
    try:
        traj = integrate(matrix, case, s.sim, params=s.plant)
    except DivergenceError as exc:
        print(f"error: simulation diverged at t = {exc.time:.4g} s (unstable closed loop)", file=sys.stderr)
        return EXIT_NUMERIC
    out = Path(args.out) if args.out else _default_out() / f"trajectory_{case.label}.csv"
    write_trajectory_csv(traj, out)
    print(f"case     {case.label} (w1={case.w1:g}, w2={case.w2:g})")
    print(f"gains    {' '.join(_fmt(g) for g in gains.as_array())}")
    print(f"ITAE     {itae(traj):.6f}")
    print(f"{'signal':<8}{'peak':>14}{'overshoot':>14}{'settling_s':>12}")
    for name, m in settling_metrics(traj, args.band).items():
        ts = f"{m.settling_time:.3f}" + ("" if m.settled else "+")
        if not m.defined:
            ts += " (zero)"
        print(f"{name:<8}{m.peak:>14.6g}{m.overshoot:>14.6g}{ts:>12}")
    print(f"wrote    {out}")
    return EXIT_OK


# tune -------------------------------------------------------------------

def cmd_tune(args) -> int:
    get_algorithm(args.algorithm)
    s = _settings(args)
    case = s.case(args.case)
    plan = s.plan()
    record, curve = run_cell(plan, args.algorithm.lower(), case, args.seed)
    out = Path(args.out) if args.out else _default_out() / f"tune_{args.algorithm.lower()}_{case.label}_seed{args.seed}"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "convergence.csv"
    with path.open("w") as fh:
        fh.write(",".join(CONVERGENCE_COLUMNS) + "\n")
        for k, v in enumerate(curve, start=1):
            fh.write(f"{record.algorithm},{case.id},{record.seed},{k},{float(v)!r}\n")
    print(f"algorithm {LABELS[record.algorithm]}  {case.label}  seed {record.seed}  "
          f"N={s.optimizer.population} iterations={s.optimizer.max_iterations}")
    print("gains     " + " ".join(f"{g:.4f}" for g in record.gains))
    print(f"ITAE      {record.best_itae:.6f}")
    print(f"wrote     {path}")
    log.info("wall time %.2f s, %d evaluations", record.wall_time, record.evaluations)
    return EXIT_OK


# benchmark --------------------------------------------------------------

def cmd_benchmark(args) -> int:
    s = _settings(args)
    if args.workers is not None:
        s.workers = args.workers
    plan = s.plan()
    out = Path(args.out) if args.out else _default_out() / "benchmark"

    def progress(done, total, record):
        if record is None:
            log.warning("[%d/%d] cell failed", done, total)
        else:
            log.info("[%d/%d] %s %s seed %d  ITAE %.6f  (%.1f s)", done, total, LABELS[record.algorithm],
                     f"case-{record.case}", record.seed, record.best_itae, record.wall_time)

    result = run_experiment(plan, out, workers=s.workers, progress=progress)
    print(f"{len(result.records)} records in {out} ({result.new_records} new, {len(result.failures)} failed)")
    if result.failures and not result.records:
        return EXIT_NUMERIC
    return EXIT_OK


# stats ------------------------------------------------------------------

def cmd_stats(args) -> int:
    try:
        records = read_runs_csv(args.runs)
    except OSError as exc:
        raise UsageError(f"cannot read {args.runs}: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        rep = build_report(records)
    except StatisticsError as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out) if args.out else Path(args.runs).parent / "stats"
    write_report(rep, out)
    if rep.friedman is not None:
        f = rep.friedman
        print(f"Friedman  N={f.n_blocks}  chi2={f.chi_square:.4f}  df={f.df}  p={f.p_value:.4g}  "
              f"Kendall W={f.kendalls_w:.4f}")
        print("mean ranks  " + "  ".join(f"{LABELS.get(a, a)} {r:.2f}" for a, r in zip(f.labels, f.mean_ranks)))
    if rep.pairwise is not None:
        print(f"pairwise std. error {rep.pairwise.std_error:.3f} ({rep.pairwise.n_pairs} pairs, Bonferroni)")
    for lev in rep.levene:
        print(f"Levene ({lev.center})  F={lev.statistic:.4f}  df=({lev.df1}, {lev.df2})  p={lev.p_value:.4g}")
    for (a, b), w in rep.wilcoxon.items():
        print(f"Wilcoxon {LABELS.get(a, a)}-{LABELS.get(b, b)}  neg={w.n_negative} pos={w.n_positive} "
              f"ties={w.n_ties}  z={w.z:.3f}  p={w.p_two_tailed:.4g}")
    for name, message in rep.errors.items():
        print(f"skipped {name}: {message}", file=sys.stderr)
    print(f"wrote {out}")
    return EXIT_OK


# report -----------------------------------------------------------------

def cmd_report(args) -> int:
    for p in (args.runs, args.convergence):
        if not Path(p).is_file():
            raise UsageError(f"missing input {p}")
    try:
        records = read_runs_csv(args.runs)
        curves = read_convergence_csv(args.convergence)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out) if args.out else Path(args.runs).parent / "report"
    out.mkdir(parents=True, exist_ok=True)

    summary = summarize(records)
    write_summary(summary, out)
    write_convergence_series(convergence_series(curves), out / "convergence_series.csv")
    cases = [args.case] if args.case is not None else sorted({r.case for r in records})
    after_k = [row for c in cases for row in convergence_report(records, curves, c, args.first_k)]
    write_convergence_report(after_k, out / f"after_{args.first_k}.csv")

    lines = [f"{'case':<7}{'algorithm':<10}{'runs':>5}{'best':>10}{'worst':>10}{'mean':>10}"]
    for c in summary:
        lines.append(f"case-{c.case:<2}{LABELS.get(c.algorithm, c.algorithm):<10}{c.runs:>5}"
                     f"{c.best:>10.4f}{c.worst:>10.4f}{c.mean:>10.4f}")
    lines.append("")
    lines.append(f"after {args.first_k} iterations (best run per algorithm)")
    lines.append(f"{'case':<7}{'algorithm':<10}{'fitness':>10}{'final':>10}{'time_s':>10}")
    for r in after_k:
        flag = " (curve shorter than first_k)" if r.truncated else ""
        lines.append(f"case-{r.case:<2}{LABELS.get(r.algorithm, r.algorithm):<10}{r.fitness_at_k:>10.4f}"
                     f"{r.final_fitness:>10.4f}{r.time_to_k:>10.2f}{flag}")
    text = "\n".join(lines) + "\n"
    (out / "summary.txt").write_text(text)
    print(text, end="")
    print(f"wrote {out}")
    return EXIT_OK


# parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, profile: bool = False) -> None:
    p.add_argument("--config", "-c", help="TOML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config value, e.g. sim.t_final=20 (repeatable)")
    if profile:
        p.add_argument("--profile", choices=("desk", "full"), help="optimizer budget profile")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lfc-egbo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one gain vector and print ITAE and settling metrics")
    p.add_argument("--case", default="case-1", help="load case id or label (default case-1)")
    p.add_argument("--gains", help="six gains kp1,ki1,kd1,kp2,ki2,kd2")
    p.add_argument("--runs", help="take the gains from a runs.csv file")
    p.add_argument("--row", type=int, default=1, help="1-based data row of --runs (default 1)")
    p.add_argument("--published", metavar="ALGORITHM", help="use the published gains of ALGORITHM for --case")
    p.add_argument("--band", type=float, default=0.02, help="settling band as a fraction of the peak")
    p.add_argument("--out", "-o", help="trajectory CSV path")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tune", help="run one seeded optimization")
    p.add_argument("algorithm", help=f"one of {', '.join(sorted(LABELS))}")
    p.add_argument("case", help="load case id or label")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", help="output directory")
    _common(p, profile=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("benchmark", help="run the full plan with resume")
    p.add_argument("--out", "-o", help=f"output directory (default ${OUT_ENV}/benchmark or results/benchmark)")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    _common(p, profile=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("stats", help="statistical tests over a runs.csv")
    p.add_argument("runs", help="runs.csv from a benchmark")
    p.add_argument("--out", "-o", help="output directory (default: stats/ next to runs.csv)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("report", help="summary tables and plot-ready convergence data")
    p.add_argument("runs", help="runs.csv from a benchmark")
    p.add_argument("convergence", help="convergence.csv from a benchmark")
    p.add_argument("--first-k", type=int, default=50, help="iteration for the early-fitness comparison")
    p.add_argument("--case", type=int, help="restrict the early-fitness comparison to one case id")
    p.add_argument("--out", "-o", help="output directory (default: report/ next to runs.csv)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
