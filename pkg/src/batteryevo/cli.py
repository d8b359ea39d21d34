"""Command line entry point: ``batteryevo <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .harness.calibrate import CalibrationError, calibrate_cstart
from .harness.config import ConfigError, load_config
from .harness.plotting import emit_pareto_plot, emit_svg_plot
from .harness.records import read_rows, write_pareto, write_robots, write_rows, write_summary
from .harness.stats import (
    METRICS,
    SummaryStats,
    extract_pareto,
    final_generation,
    generation_summaries,
    size_speed_table,
    welch_t,
)
from .moea.experiment import run_experiment

log = logging.getLogger("batteryevo")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve_cstart(cfg) -> float:
    if cfg.c_start is not None:
        return cfg.c_start
    c = calibrate_cstart(cfg.sim(1.0), cfg.calibration_samples, cfg.seed,
                         cfg.rewrite(), cfg.max_joints, cfg.max_bricks)
    log.info("calibrated c_start = %r", c)
    return c


def cmd_run(args):
    cfg = load_config(args.config, args.set)
    out = Path(cfg.output_dir)
    c_start = _resolve_cstart(cfg)
    rows = []
    for mode in cfg.modes:
        log.info("running %s: %d repetitions x %d generations", mode, cfg.repetitions, cfg.generations)
        result = run_experiment(cfg.evolution(mode), cfg.sim(c_start), cfg.repetitions,
                                cfg.rewrite(), cfg.max_joints, cfg.max_bricks, cfg.workers)
        rows.extend(result.rows)
    write_robots(out / "robots.csv", rows)
    resolved = cfg.dump().replace("c_start = auto", f"c_start = {c_start!r}")
    (out / "run_config.txt").write_text(resolved, encoding="utf-8")
    print(f"wrote {len(rows)} rows to {out / 'robots.csv'}")


def cmd_calibrate(args):
    cfg = load_config(args.config, args.set)
    c = calibrate_cstart(cfg.sim(1.0), args.samples, cfg.seed, cfg.rewrite(),
                         cfg.max_joints, cfg.max_bricks)
    print(repr(c))


def _robots(directory) -> list[dict]:
    path = Path(directory) / "robots.csv"
    if not path.exists():
        raise UsageError(f"{path} not found")
    return read_rows(path)


def cmd_stats(args):
    rows = _robots(args.input)
    summary = generation_summaries(rows)
    write_summary(Path(args.input) / "summary.csv", summary)
    for metric in METRICS:
        emit_svg_plot(summary, Path(args.input) / f"{metric}.svg", metric)

    table = []
    for cmp in size_speed_table(final_generation(rows), args.speed_threshold, args.joints_threshold):
        print(cmp.label)
        for exp, s in cmp.groups.items():
            print(f"  {exp:<9} n={s.n:<5} mean={_fmt(s.mean)} sd={_fmt(s.sd)}")
            table.append({"comparison": cmp.label, "experiment": exp, "n": s.n,
                          "mean": _fmt(s.mean), "sd": _fmt(s.sd), "t": _fmt(cmp.t),
                          "df": _fmt(cmp.df), "p": _fmt(cmp.p)})
        if cmp.p is not None:
            print(f"  Welch t={cmp.t:.3f} df={cmp.df:.1f} p={cmp.p:.3g}")
    write_rows(Path(args.input) / "tables.csv", table,
               ("comparison", "experiment", "n", "mean", "sd", "t", "df", "p"))


def _fmt(v):
    return "" if v is None else f"{v:.6g}"


def cmd_pareto(args):
    rows = [r for r in final_generation(_robots(args.input)) if r["experiment"] == "battery"]
    if not rows:
        raise UsageError("robots.csv has no battery-experiment rows")
    flagged = extract_pareto(rows)
    write_pareto(Path(args.input) / "pareto.csv", flagged)
    emit_pareto_plot(flagged, Path(args.input) / "pareto.svg")
    n = sum(r["nondominated"] for r in flagged)
    print(f"{n} non-dominated of {len(flagged)} robots")


def cmd_ttest(args):
    a = SummaryStats(args.n_a, args.mean_a, args.sd_a)
    b = SummaryStats(args.n_b, args.mean_b, args.sd_b)
    try:
        t, df, p = welch_t(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"t = {t:.6g}\ndf = {df:.6g}\np = {p:.6g}")


def cmd_plot(args):
    path = Path(args.input) / "summary.csv"
    summary = read_rows(path) if path.exists() else generation_summaries(_robots(args.input))
    out = emit_svg_plot(summary, Path(args.input) / f"{args.metric}.svg", args.metric)
    print(f"wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="batteryevo", description="Battery-aware evolution of modular robots.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("run", help="evolve robots and write robots.csv")
    s.add_argument("--config", required=True)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("calibrate", help="estimate the initial battery charge")
    s.add_argument("--config", required=True)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("stats", help="per-generation summaries, tables and figures")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--speed-threshold", type=float, default=7.0)
    s.add_argument("--joints-threshold", type=int, default=9)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("pareto", help="flag the final battery population's Pareto set")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_pareto)

    s = sub.add_parser("ttest", help="Welch's t-test from summary statistics")
    for g in ("a", "b"):
        s.add_argument(f"--mean-{g}", type=float, required=True)
        s.add_argument(f"--sd-{g}", type=float, required=True)
        s.add_argument(f"--n-{g}", type=int, required=True)
    s.set_defaults(func=cmd_ttest)

    s = sub.add_parser("plot", help="median/quartile figure for one metric")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--metric", choices=sorted(METRICS), required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ConfigError, UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CalibrationError, RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
