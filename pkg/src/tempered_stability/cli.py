"""
Command-line entry point ``tfs``.

    tfs check --config PATH --criterion {delay-dependent|delay-independent|both} [--grid N] --out DIR [--plot]
    tfs simulate --config PATH [--step H] [--method {tempered|exp-transform}] --out DIR
    tfs verify --config PATH --criterion ... [--step H] --out DIR
    tfs reproduce {example1|example2} --out DIR [--no-plots]

Exit codes: 0 stable/success, 2 inconclusive, 1 error. Every command writes
``manifest.json`` into its output directory.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import ToleranceProfile
from .criteria.bounds import c2_printed_curve
from .criteria.evaluate import (
    Criterion,
    CriterionReport,
    evaluate_criterion,
    first_crossing_time,
)
from .exceptions import ConfigurationError, TemperedStabilityError
from .model.serialization import EXAMPLES, load_example, load_system
from .model.system import SystemDocument
from .report import (
    RunManifest,
    curve_frame,
    plot_curves,
    relative_outputs,
    write_audit,
    write_curve_csv,
    write_json,
    write_trajectory_csv,
)
from .solver.diagnostics import verify_bound
from .solver.methods import solve
from .solver.trajectory import SolverConfig, Trajectory

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

CRITERION_CHOICES = ("delay-dependent", "delay-independent", "both")
METHOD_CHOICES = ("tempered", "exp-transform")

# figure number per (example, criterion), as in the published figures
FIGURES: Dict[str, Tuple[Tuple[str, Criterion], ...]] = {
    "example1": (
        ("figure1", Criterion.DELAY_DEPENDENT),
        ("figure2", Criterion.DELAY_INDEPENDENT),
    ),
    "example2": (
        ("figure3", Criterion.DELAY_INDEPENDENT),
        ("figure4", Criterion.DELAY_DEPENDENT),
    ),
}


def _criteria(selector: str) -> List[Criterion]:
    if selector == "both":
        return [Criterion.DELAY_DEPENDENT, Criterion.DELAY_INDEPENDENT]
    return [Criterion.parse(selector)]


def _parse_overrides(pairs: Optional[Sequence[str]]) -> Dict[str, str]:
    overrides: Dict[str, str] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"--tolerance expects KEY=VALUE, got {pair!r}")
        overrides[key.strip()] = value.strip()
    return overrides


def _set_verbosity(verbose: bool, quiet: bool) -> None:
    package_logger = logging.getLogger(__package__)
    if verbose:
        package_logger.setLevel(logging.DEBUG)
    elif quiet:
        package_logger.setLevel(logging.WARNING)


def _report_error(error: Exception) -> None:
    diagnostics = getattr(error, "diagnostics", None)
    if diagnostics:
        print(f"error: {type(error).__name__}", file=sys.stderr)
        for diagnostic in diagnostics:
            print(f"  {diagnostic}", file=sys.stderr)
    else:
        print(f"error: {error}", file=sys.stderr)


def _evaluate(
    doc: SystemDocument,
    criteria: Sequence[Criterion],
    grid: Optional[int],
    profile: ToleranceProfile,
) -> List[CriterionReport]:
    return [
        evaluate_criterion(doc.spec, doc.query, c, grid, doc.printed, profile)
        for c in criteria
    ]


def _write_reports(
    out: Path, reports: Sequence[CriterionReport], plot: bool = False
) -> Tuple[List[Path], List[dict]]:
    written, payload = [], []
    for report in reports:
        name = report.criterion.value
        csv_path = write_curve_csv(report.to_frame(), out / f"{name}_curve.csv")
        written.append(csv_path)
        payload.append(report.to_dict(curve_csv_path=csv_path.name))
        if plot:
            label = "C1" if report.criterion is Criterion.DELAY_DEPENDENT else "C2"
            written.append(
                plot_curves(
                    out / f"{name}.png",
                    f"{label}(t) on [0, {report.horizon:g}]",
                    [(label, report.times, report.bounds)],
                    report.threshold,
                )
            )
    return written, payload


def _write_trajectory(out: Path, traj: Trajectory) -> Path:
    return write_trajectory_csv(traj.to_frame(), out / "trajectory.csv")


def _trajectory_summary(traj: Trajectory) -> dict:
    return {
        "method": traj.method.value,
        "h": traj.h,
        "lag": traj.lag,
        "steps": len(traj) - 1,
        "final_time": float(traj.times[-1]),
        "max_norm": traj.max_norm,
        "trajectory_csv_path": "trajectory.csv",
    }


def cmd_check(args: argparse.Namespace, profile: ToleranceProfile, manifest: RunManifest) -> int:
    """Evaluate the selected criteria; 0 if any is finite-time stable, else 2."""
    out = Path(args.out)
    doc = load_system(args.config)
    reports = _evaluate(doc, _criteria(args.criterion), args.grid, profile)

    written, payload = _write_reports(out, reports, plot=args.plot)
    written.append(write_json(out / "report.json", {"name": doc.name, "reports": payload}))
    manifest.outputs.extend(relative_outputs(out, written))

    for report in reports:
        print(f"{report.criterion.value}: {report.verdict.value}")
    return EXIT_OK if any(r.is_stable for r in reports) else EXIT_INCONCLUSIVE


def cmd_simulate(
    args: argparse.Namespace, profile: ToleranceProfile, manifest: RunManifest
) -> int:
    """Solve the delay system and write the trajectory."""
    out = Path(args.out)
    doc = load_system(args.config)
    cfg = SolverConfig.from_profile(profile, args.step, args.method)
    traj = solve(doc.spec, cfg)

    written = [_write_trajectory(out, traj)]
    summary = _trajectory_summary(traj)
    written.append(write_json(out / "report.json", {"name": doc.name, "trajectory": summary}))
    manifest.outputs.extend(relative_outputs(out, written))

    print(f"max norm {traj.max_norm:.6g} over {len(traj)} grid points")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, profile: ToleranceProfile, manifest: RunManifest) -> int:
    """Criterion, simulation, then the trajectory checks.

    0 only if every criterion is stable, its hypothesis holds and the
    trajectory passes; 1 if the trajectory contradicts a guaranteed bound;
    2 otherwise.
    """
    out = Path(args.out)
    doc = load_system(args.config)
    reports = _evaluate(doc, _criteria(args.criterion), None, profile)
    written, payload = _write_reports(out, reports)

    cfg = SolverConfig.from_profile(profile, args.step, args.method)
    traj = solve(doc.spec, cfg)
    written.append(_write_trajectory(out, traj))

    results = [verify_bound(traj, doc.query, report, profile) for report in reports]
    for entry, result in zip(payload, results):
        entry["verification"] = result.to_dict()
    written.append(
        write_json(
            out / "report.json",
            {"name": doc.name, "reports": payload, "trajectory": _trajectory_summary(traj)},
        )
    )
    manifest.outputs.extend(relative_outputs(out, written))

    for report, result in zip(reports, results):
        print(
            f"{report.criterion.value}: {report.verdict.value}, "
            f"trajectory check {'passed' if result.passed else 'FAILED'}"
        )
        for note in result.notes:
            print(f"  {note}")

    if any(result.contradiction for result in results):
        logger.error("Trajectory violates a bound the criterion guarantees")
        return EXIT_ERROR
    if all(r.is_stable and v.hypothesis_met and v.passed for r, v in zip(reports, results)):
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def _printed_c2(
    doc: SystemDocument, report: CriterionReport, grid: int, profile: ToleranceProfile
) -> Optional[Tuple[np.ndarray, np.ndarray, dict]]:
    printed = doc.printed
    if printed is None or printed.c2_coefficient is None or printed.c2_rate is None:
        return None
    alpha, policy = doc.spec.alpha, profile.ml_policy
    times = np.linspace(0.0, doc.query.J_end, grid)
    bounds = c2_printed_curve(times, printed.c2_coefficient, printed.c2_rate, alpha, policy)
    stable = bool(np.all(np.isfinite(bounds)) and np.all(bounds <= report.threshold))

    def bound_fn(t: float) -> float:
        return float(
            c2_printed_curve([t], printed.c2_coefficient, printed.c2_rate, alpha, policy)[0]
        )

    summary = {
        "criterion": report.criterion.value,
        "coefficient": printed.c2_coefficient,
        "rate": printed.c2_rate,
        "threshold": report.threshold,
        "verdict": "finite_time_stable" if stable else "inconclusive",
        "max_bound": float(np.max(bounds)),
        "first_crossing_time": (
            None if stable else first_crossing_time(bound_fn, times, bounds, report.threshold)
        ),
    }
    return times, bounds, summary


def cmd_reproduce(
    args: argparse.Namespace, profile: ToleranceProfile, manifest: RunManifest
) -> int:
    """Figure-data CSVs from formula and printed constants, plus ``audit.txt``."""
    out = Path(args.out)
    doc = load_example(args.example)
    spec, query, grid = doc.spec, doc.query, profile.grid_points

    written: List[Path] = []
    figures: Dict[str, dict] = {}
    sections = []
    for figure, criterion in FIGURES[args.example]:
        label = "C1" if criterion is Criterion.DELAY_DEPENDENT else "C2"
        formula = evaluate_criterion(spec, query, criterion, grid, None, profile)
        printed = evaluate_criterion(spec, query, criterion, grid, doc.printed, profile)

        stem = f"{figure}_{criterion.value}"
        formula_csv = write_curve_csv(formula.to_frame(), out / f"{stem}_formula.csv")
        written.append(formula_csv)
        entry = {"formula": formula.to_dict(curve_csv_path=formula_csv.name)}
        curves = [(f"{label} (formula constants)", formula.times, formula.bounds)]

        if criterion is Criterion.DELAY_DEPENDENT:
            if printed.uses_printed:
                printed_csv = write_curve_csv(printed.to_frame(), out / f"{stem}_printed.csv")
                written.append(printed_csv)
                entry["printed"] = printed.to_dict(curve_csv_path=printed_csv.name)
                curves.append((f"{label} (printed constants)", printed.times, printed.bounds))
        else:
            redrawn = _printed_c2(doc, printed, grid, profile)
            if redrawn is not None:
                times, bounds, summary = redrawn
                printed_csv = write_curve_csv(
                    curve_frame(times, bounds, printed.threshold), out / f"{stem}_printed.csv"
                )
                written.append(printed_csv)
                summary["curve_csv_path"] = printed_csv.name
                entry["printed"] = summary
                curves.append((f"{label} (printed constants)", times, bounds))

        sections.append((f"{figure} {label} {criterion.value}", printed.audit))
        figures[figure] = entry
        if not args.no_plots:
            written.append(
                plot_curves(
                    out / f"{figure}.png",
                    f"{args.example}: {label}(t) on [0, {query.J_end:g}]",
                    curves,
                    query.threshold,
                )
            )

    written.append(write_audit(out / "audit.txt", sections))
    written.append(write_json(out / "report.json", {"example": args.example, "figures": figures}))
    manifest.outputs.extend(relative_outputs(out, written))
    print(f"Wrote {len(written)} files to {out}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, ToleranceProfile, RunManifest], int]] = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfs",
        description=(
            "Finite-time stability criteria and delay solvers for tempered "
            "fractional systems."
        ),
    )
    parser.add_argument(
        "--tolerance",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a tolerance profile field (repeatable)",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Evaluate stability criteria")
    check.add_argument("--config", required=True, help="System configuration (JSON)")
    check.add_argument("--criterion", required=True, choices=CRITERION_CHOICES)
    check.add_argument("--grid", type=int, default=None, help="Curve samples (default 1000)")
    check.add_argument("--out", required=True, help="Output directory")
    check.add_argument("--plot", action="store_true", help="Also write PNG curves")

    simulate = sub.add_parser("simulate", help="Solve the delay system")
    simulate.add_argument("--config", required=True, help="System configuration (JSON)")
    simulate.add_argument("--step", type=float, default=None, help="Time step h")
    simulate.add_argument("--method", choices=METHOD_CHOICES, default="tempered")
    simulate.add_argument("--out", required=True, help="Output directory")

    verify = sub.add_parser("verify", help="Check a simulated trajectory against a criterion")
    verify.add_argument("--config", required=True, help="System configuration (JSON)")
    verify.add_argument("--criterion", required=True, choices=CRITERION_CHOICES)
    verify.add_argument("--step", type=float, default=None, help="Time step h")
    verify.add_argument("--method", choices=METHOD_CHOICES, default="tempered")
    verify.add_argument("--out", required=True, help="Output directory")

    reproduce = sub.add_parser("reproduce", help="Regenerate the worked-example figure data")
    reproduce.add_argument("example", choices=EXAMPLES)
    reproduce.add_argument("--out", required=True, help="Output directory")
    reproduce.add_argument("--no-plots", action="store_true", help="Skip PNG generation")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run ``tfs``; returns the process exit code."""
    args = build_parser().parse_args(argv)
    _set_verbosity(args.verbose, args.quiet)

    input_path = args.example if args.command == "reproduce" else args.config
    manifest = RunManifest(command=args.command, input_path=input_path, output_dir=args.out)

    try:
        manifest.tolerance_overrides = _parse_overrides(args.tolerance)
        profile = ToleranceProfile.from_overrides(manifest.tolerance_overrides)
        code = COMMANDS[args.command](args, profile, manifest)
    except TemperedStabilityError as e:
        logger.debug(f"{args.command} failed: {e!r}")
        _report_error(e)
        code = EXIT_ERROR
    except OSError as e:
        _report_error(e)
        code = EXIT_ERROR

    manifest.exit_code = code
    try:
        manifest.write()
    except OSError as e:
        logger.error(f"Could not write manifest: {e}")
    return code


if __name__ == "__main__":
    sys.exit(main())
