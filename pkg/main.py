#!/usr/bin/env python3
"""
Hierarchical Scale-Free Graph Toolkit - Main Entry Point

Builds the star-seeded, wheel-seeded and rim-deleted hierarchical graph
families, evaluates their closed forms, measures built instances, runs
the trapping problem and reproduces the data behind the result figures.

Usage:
    python main.py generate --variant base -m 2 -t 1 --format edgelist
    python main.py analyze --variant wheel -m 3 -t 0
    python main.py walk --variant base -m 2 -t 2 --exact
    python main.py sweep --figure 4 --out fig4.csv
    python main.py verify --fast

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification failure.
"""

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Ensure project root is in path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from config.settings import Settings, get_settings
from core.exceptions import ConfigurationError, HierarchyToolkitError, InvalidParametersError
from core.logger import get_logger, setup_logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2
EXIT_VERIFICATION = 3

FORMAT_SUFFIX = {"edgelist": "txt", "dot": "dot", "json": "json"}


class ToolkitArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def setup_environment(log_level: Optional[str] = None) -> Settings:
    """Initialize the application environment."""
    settings = get_settings()
    setup_logger(
        level=log_level or settings.LOG_LEVEL,
        log_to_file=settings.LOG_TO_FILE,
        log_dir=settings.LOG_DIR,
    )
    return settings


def _params_from_args(args: argparse.Namespace):
    from model.params import ModelParams, Variant

    variant = Variant(args.variant)
    stochastic = variant is Variant.WHEEL_DELETED
    if stochastic and (args.p is None or args.seed is None):
        raise InvalidParametersError("variant 'deleted' needs -p and --seed")
    return ModelParams.create(
        variant=variant,
        m=args.m,
        t=args.t,
        p=args.p if stochastic else None,
        seed=args.seed if stochastic else None,
    )


def _fmt(value: float, settings: Settings) -> str:
    return f"{value:.{settings.FLOAT_SIGNIFICANT_DIGITS}g}"


def _emit(payload: Dict[str, Any], out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, default=str) + "\n"
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_csv(rows: List[Dict[str, Any]], columns, out: Optional[str], settings: Settings) -> None:
    def cell(v: Any) -> Any:
        return _fmt(v, settings) if isinstance(v, float) else ("" if v is None else v)

    handle = open(out, "w", encoding="ascii", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: cell(row.get(k)) for k in columns})
    finally:
        if out:
            handle.close()


# =============================================================================
# COMMANDS
# =============================================================================

def run_generate(args: argparse.Namespace, settings: Settings) -> int:
    """
    Build an instance and write it.

    Prints |V|, |E| and the closed-form header to standard output.
    """
    from analytic.report import closed_form_report
    from model.builders import build
    from model.io import ExportFormat, export_edges, write_instance

    params = _params_from_args(args)
    g = build(params)
    fmt = ExportFormat(args.format)

    if args.out == "-":
        sys.stdout.buffer.write(export_edges(g, fmt))
        sys.stdout.flush()
        return EXIT_OK

    out = write_instance(
        g,
        args.out or Path(settings.OUTPUT_DIR) / f"{params.label}.{FORMAT_SUFFIX[fmt.value]}",
        fmt,
    )

    report = closed_form_report(params.variant, params.m, params.t, params.p)
    print("=" * 60)
    print(f"Generated {params.label}")
    print("=" * 60)
    print(f"|V| = {g.n}")
    print(f"|E| = {g.num_edges}")
    print(report.header())
    print(f"Written to {out}")
    return EXIT_OK


def run_analyze(args: argparse.Namespace, settings: Settings) -> int:
    """Closed forms, measurements, agreement and discrepancy blocks."""
    from empirical.measures import DiameterMode
    from evaluation.comparison import AnalysisReport, analyze
    from model.builders import build
    from model.io import read_instance

    if args.input:
        params = _params_from_args(args) if args.m is not None and args.t is not None else None
        g = read_instance(args.input, params=params)
    else:
        if args.m is None or args.t is None:
            raise InvalidParametersError("analyze needs --input or -m and -t")
        g = build(_params_from_args(args))

    report = analyze(
        g,
        include_diameter=not args.no_diameter,
        diameter_mode=DiameterMode(args.diameter_mode),
    )
    if args.format == "csv":
        _emit_csv(report.csv_rows(), AnalysisReport.CSV_COLUMNS, args.out, settings)
    else:
        _emit(report.to_dict(), args.out)
    return EXIT_OK


def run_walk(args: argparse.Namespace, settings: Settings) -> int:
    """Closed forms, linear solve and optional Monte Carlo for the trap at the hub."""
    from model.builders import build
    from model.params import Variant
    from walk.generating import closed_form_summary, hitting_distribution
    from walk.simulate import simulate_walks
    from walk.solvers import exact_hitting_solve, level_collapsed_solve
    from walk.types import HittingSummary, TrapSpec

    params = _params_from_args(args)
    g = build(params)
    spec = TrapSpec.create(g, trap=args.trap)

    summaries: List[HittingSummary] = []
    if params.variant is Variant.BASE and spec.at_hub:
        summaries.append(closed_form_summary(params.m, params.t))
        if args.exact:
            summaries.append(level_collapsed_solve(spec))
    summaries.append(exact_hitting_solve(spec))
    if args.trials:
        summaries.append(simulate_walks(
            spec,
            trials=args.trials,
            seed=args.walk_seed,
            max_steps=args.max_steps,
            source=args.source,
        ))

    distribution = None
    if args.horizon:
        if args.source is not None:
            distribution = hitting_distribution(spec, source=args.source, horizon=args.horizon)
        else:
            distribution = hitting_distribution(spec, level=params.t + 1, horizon=args.horizon)

    if args.format == "csv":
        rows = [row for s in summaries for row in s.csv_rows()]
        _emit_csv(rows, HittingSummary.CSV_COLUMNS, args.out, settings)
    else:
        payload: Dict[str, Any] = {
            "params": params.to_dict(),
            "trap": spec.trap,
            "summaries": [s.to_dict() for s in summaries],
        }
        if distribution is not None:
            payload["distribution"] = distribution.to_dict()
        _emit(payload, args.out)
    return EXIT_OK


def run_sweep_command(args: argparse.Namespace, settings: Settings) -> int:
    """Evaluate a parameter grid and write one CSV row per cell and quantity."""
    from sweep.runner import run_sweep
    from sweep.spec import SweepSpec, figure_preset

    if args.figure:
        spec = figure_preset(
            args.figure,
            m_values=args.m_values,
            t_values=args.t_values,
            seeds=args.seeds,
            output=args.out,
            measure=False if args.closed_only else None,
        )
    else:
        if not (args.m_values and args.t_values and args.quantities):
            raise InvalidParametersError("sweep needs --figure or --variant, -m, -t and --quantities")
        spec = SweepSpec.create(
            variant=args.variant,
            m_values=args.m_values,
            t_values=args.t_values,
            p_values=args.p_values,
            seeds=args.seeds or [0],
            quantities=args.quantities,
            measure=not args.closed_only,
            output=args.out,
        )

    result = run_sweep(spec, workers=args.workers, show_progress=not args.quiet)
    result.write_csv(spec.output)
    if result.total_failure:
        get_logger(__name__).error("Every sweep cell failed")
        return EXIT_COMPUTATION
    return EXIT_OK


def run_verify(args: argparse.Namespace, settings: Settings) -> int:
    """Run the acceptance suite and print per-criterion status."""
    from evaluation.acceptance import AcceptanceSuite, VerifyLevel

    level = VerifyLevel.FULL if args.full else VerifyLevel.FAST
    summary = AcceptanceSuite(level, show_progress=not args.quiet).run(only=args.criteria)

    print("=" * 60)
    print(f"Acceptance suite ({level.value})")
    print("=" * 60)
    for result in summary.results:
        print(f"[{result.status:6}] {result.number:2d}. {result.name} "
              f"({result.checks} checks, {result.elapsed:.1f}s)")
        for failure in result.failures:
            print(f"           - {failure}")
    flagged = [d for d in summary.discrepancies if d.flagged]
    print("-" * 60)
    print(f"Reported discrepancies: {len(summary.discrepancies)} ({len(flagged)} flagged)")

    report_path = args.report
    if report_path is None and level is VerifyLevel.FULL:
        report_path = str(Path(settings.OUTPUT_DIR) / "discrepancy_report.json")
    if report_path:
        summary.write_report(Path(report_path))
        print(f"Discrepancy report: {report_path}")

    print("=" * 60)
    print("PASSED" if summary.passed else "FAILED")
    return EXIT_OK if summary.passed else EXIT_VERIFICATION


# =============================================================================
# ARGUMENTS
# =============================================================================

def _add_params(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--variant", choices=["base", "wheel", "deleted"], default="base",
                        help="Graph family (default: base)")
    parser.add_argument("-m", type=int, required=required, help="Branching count (m >= 2)")
    parser.add_argument("-t", type=int, required=required, help="Generation index (t >= 0)")
    parser.add_argument("-p", type=float, help="Rim deletion probability (deleted only)")
    parser.add_argument("--seed", type=int, help="64-bit RNG seed (deleted only)")


def build_parser() -> argparse.ArgumentParser:
    parser = ToolkitArgumentParser(
        description="Hierarchical Scale-Free Graph Toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py generate --variant deleted -m 3 -t 2 -p 0.5 --seed 7
  python main.py analyze --variant base -m 2 -t 3
  python main.py walk -m 2 -t 1 --trials 100000 --walk-seed 1
  python main.py sweep --figure 3 --out fig3.csv
  python main.py verify --full
        """,
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", parser_class=ToolkitArgumentParser)

    gen = sub.add_parser("generate", help="Build an instance and write it")
    _add_params(gen)
    gen.add_argument("--format", choices=["edgelist", "dot", "json"], default="edgelist")
    gen.add_argument("--out", help="Output file ('-' for stdout; default OUTPUT_DIR/<label>.<ext>)")

    ana = sub.add_parser("analyze", help="Closed forms against measurements")
    _add_params(ana, required=False)
    ana.add_argument("--input", help="Instance file to analyze instead of building one")
    ana.add_argument("--format", choices=["json", "csv"], default="json")
    ana.add_argument("--out", help="Output file (default stdout)")
    ana.add_argument("--no-diameter", action="store_true", help="Skip the BFS diameter")
    ana.add_argument("--diameter-mode", choices=["exact", "bounded", "sampled"], default="exact")

    wlk = sub.add_parser("walk", help="Trapping problem with the trap at the hub")
    _add_params(wlk)
    wlk.add_argument("--trap", type=int, help="Trap vertex (default: hub)")
    wlk.add_argument("--exact", action="store_true", help="Add the rational level-collapsed solve")
    wlk.add_argument("--trials", type=int, default=0, help="Monte-Carlo walks (0 disables)")
    wlk.add_argument("--walk-seed", type=int, default=0, help="Monte-Carlo seed")
    wlk.add_argument("--max-steps", type=int, help="Per-walk step cut-off (default 100(2t+2))")
    wlk.add_argument("--source", type=int, help="Fixed start vertex")
    wlk.add_argument("--horizon", type=int, default=0, help="Also emit P(H=l) for l <= horizon")
    wlk.add_argument("--format", choices=["json", "csv"], default="json")
    wlk.add_argument("--out", help="Output file (default stdout)")

    swp = sub.add_parser("sweep", help="Evaluate a parameter grid to CSV")
    swp.add_argument("--figure", type=int, choices=[2, 3, 4, 5], help="Use a figure preset")
    swp.add_argument("--variant", choices=["base", "wheel", "deleted"], default="base")
    swp.add_argument("-m", dest="m_values", type=int, nargs="+", help="Branching counts")
    swp.add_argument("-t", dest="t_values", type=int, nargs="+", help="Generation indices")
    swp.add_argument("-p", dest="p_values", type=float, nargs="+", help="Deletion probabilities")
    swp.add_argument("--seeds", type=int, nargs="+", help="Seeds per cell")
    swp.add_argument("--quantities", nargs="+",
                     choices=["vertices", "edges", "average_degree", "diameter",
                              "clustering", "assortativity", "mean_hitting"])
    swp.add_argument("--closed-only", action="store_true", help="Skip building instances")
    swp.add_argument("--workers", type=int, help="Worker processes")
    swp.add_argument("--out", help="CSV path (default stdout)")
    swp.add_argument("--quiet", action="store_true", help="No progress bar")

    ver = sub.add_parser("verify", help="Run the acceptance suite")
    depth = ver.add_mutually_exclusive_group()
    depth.add_argument("--fast", action="store_true", help="Reduced grids (default)")
    depth.add_argument("--full", action="store_true", help="Full grids, writes the discrepancy report")
    ver.add_argument("--criteria", type=int, nargs="+", help="Run only these criteria")
    ver.add_argument("--report", help="Discrepancy report path")
    ver.add_argument("--quiet", action="store_true", help="No progress bar")
    return parser


COMMANDS = {
    "generate": run_generate,
    "analyze": run_analyze,
    "walk": run_walk,
    "sweep": run_sweep_command,
    "verify": run_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    try:
        settings = setup_environment(args.log_level)
    except ConfigurationError as e:
        sys.stderr.write(f"Configuration error: {e}\n")
        return EXIT_USAGE
    logger = get_logger(__name__)
    try:
        return COMMANDS[args.command](args, settings)
    except InvalidParametersError as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_USAGE
    except HierarchyToolkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_COMPUTATION
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
