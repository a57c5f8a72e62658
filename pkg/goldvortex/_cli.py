#!/usr/bin/env python3
"""goldvortex - Golden-ratio bifurcations of point vortices.

This module provides the command-line tool.
"""

from __future__ import annotations

import argparse
import importlib.util
import shlex
import sys
import time
from pathlib import Path
from typing import Sequence

from goldvortex._bifurcation import (
    BifurcationResult,
    UnresolvedRegimeError,
    classify_regime,
    critical_W,
    cross_ratio,
    encounter_trajectory,
    find_cusp_by_simulation,
)
from goldvortex._integrate import (
    IntegratorConfig,
    InvalidConfigError,
    SimulationError,
    integrate,
)
from goldvortex._io import (
    ConfigSchemaError,
    RunInputs,
    RunManifest,
    read_config,
    read_trajectory_csv,
    write_manifest_json,
    write_trajectory_csv,
)
from goldvortex._plot import plot_svg
from goldvortex._scenarios import VALID_SUITES, run_suite
from goldvortex._version import __version__
from goldvortex.definitions import VALID_DOMAINS, VortexState, VortexSystem
from goldvortex.utils import (
    DomainViolationError,
    UsageError,
    get_package_version,
    parse_float_list,
    parse_grid,
    parse_positions,
)

try:  # pragma: no cover
    from rich_argparse import RichHelpFormatter

    class _HelpFormatter(RichHelpFormatter):
        def _get_help_string(self, action: argparse.Action) -> str | None:
            # escapes "[" in text, otherwise e.g., [0.1, 0.4] is removed
            if action.help is not None:
                return action.help.replace("[", r"\[")
            return None
except ImportError:  # pragma: no cover
    from argparse import HelpFormatter as _HelpFormatter  # type: ignore[assignment]

# Errors caused by what the user asked for, as opposed to numerical failures
_USAGE_ERRORS = (
    UsageError,
    ConfigSchemaError,
    InvalidConfigError,
    DomainViolationError,
)


class _ArgumentParser(argparse.ArgumentParser):
    """Exits with code 1 on bad arguments."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        sys.exit(1)


def _add_integrator_args(sub_parser: argparse.ArgumentParser) -> None:
    defaults = IntegratorConfig()
    sub_parser.add_argument(
        "--rel-tol",
        type=float,
        default=None,
        help=f"Relative tolerance of the integrator, by default {defaults.rel_tol:g}",
    )
    sub_parser.add_argument(
        "--abs-tol",
        type=float,
        default=None,
        help=f"Absolute tolerance of the integrator, by default {defaults.abs_tol:g}",
    )
    sub_parser.add_argument(
        "--output-interval",
        type=float,
        default=None,
        help=f"Time between samples, by default {defaults.output_interval:g}",
    )
    sub_parser.add_argument(
        "--collision-guard",
        type=float,
        default=None,
        help="Stop when two vortices (or a vortex and the wall) come closer"
        f" than this, by default {defaults.collision_guard:g}",
    )
    sub_parser.add_argument(
        "--method",
        choices=("DOP853", "RK45"),
        default=None,
        help=f"Embedded Runge-Kutta pair, by default `{defaults.method}`",
    )


def _parse_args(argv: Sequence[str] | None) -> argparse.Namespace:  # noqa: PLR0915
    parser = _ArgumentParser(
        description="Point-vortex simulations and golden-ratio bifurcations.",
        formatter_class=_HelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Subcommands")

    # Subparser for the 'simulate' command
    simulate_help = "Integrate a system of point vortices and write its trajectory."
    simulate_example = (
        " Example usage: `goldvortex simulate --domain half-plane --gamma 1,-1"
        " --pos 0:0.5,0:1 --t-end 50 --out traj.csv --manifest run.json`."
        " Values that start with a minus sign need the `--pos=-1:0.5,1:1` form."
    )
    parser_simulate = subparsers.add_parser(
        "simulate",
        help=simulate_help,
        description=simulate_help + simulate_example,
        formatter_class=_HelpFormatter,
    )
    parser_simulate.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Run configuration (JSON, YAML or TOML) or a manifest to replay."
        " Command-line options override its integrator settings.",
    )
    parser_simulate.add_argument(
        "--domain",
        choices=VALID_DOMAINS,
        default=None,
        help="`plane` or `half-plane`, by default `plane`",
    )
    parser_simulate.add_argument(
        "--gamma",
        type=str,
        default=None,
        help="Comma separated vortex strengths, e.g. `1,-1`",
    )
    parser_simulate.add_argument(
        "--pos",
        type=str,
        default=None,
        help="Initial positions as `x:y` pairs, e.g. `0:0.5,0:1`",
    )
    parser_simulate.add_argument(
        "--t-end",
        type=float,
        default=None,
        help=f"Duration of the run, by default {IntegratorConfig().t_end:g}",
    )
    _add_integrator_args(parser_simulate)
    parser_simulate.add_argument(
        "-o",
        "--out",
        type=Path,
        default=Path("trajectory.csv"),
        help="Output CSV file, by default `trajectory.csv`",
    )
    parser_simulate.add_argument(
        "--manifest",
        type=Path,
        default=None,
        help="Also write a JSON run manifest that `--config` can replay",
    )
    parser_simulate.add_argument(
        "--plot",
        type=Path,
        default=None,
        help="Also draw the trajectory to this SVG file",
    )
    parser_simulate.add_argument(
        "--require-completion",
        action="store_true",
        help="Exit with code 2 if the run stops before `--t-end`",
    )

    # Subparser for the 'bifurcate' command
    bifurcate_help = "Compute the critical interaction parameter W* of two vortices."
    bifurcate_example = (
        " Example usage: `goldvortex bifurcate --lambda -1 --method algebraic`"
        " prints the golden ratio."
    )
    parser_bifurcate = subparsers.add_parser(
        "bifurcate",
        help=bifurcate_help,
        description=bifurcate_help + bifurcate_example,
        formatter_class=_HelpFormatter,
    )
    parser_bifurcate.add_argument(
        "--lambda",
        dest="lambdas",
        type=float,
        action="append",
        required=True,
        help="Strength ratio λ = Γ2/Γ1; may be repeated",
    )
    parser_bifurcate.add_argument(
        "--method",
        choices=("algebraic", "simulation", "simulate"),
        default="algebraic",
        help="Closed form or bisection over simulated encounters, by default"
        " `algebraic`",
    )
    parser_bifurcate.add_argument(
        "--bracket",
        type=str,
        default=None,
        help="Height-ratio bracket `lo,hi` for `--method simulation`, by default"
        " [0.1, 0.4] for λ = -1 and [3, 6] for λ = 1",
    )

    # Subparser for the 'sweep' command
    sweep_help = "Classify the encounter regime over a grid of W values."
    parser_sweep = subparsers.add_parser(
        "sweep",
        help=sweep_help,
        description=sweep_help
        + " Example usage: `goldvortex sweep --lambda -1 --w-grid 1.2:2.0:5`.",
        formatter_class=_HelpFormatter,
    )
    parser_sweep.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=-1.0,
        help="Strength ratio, -1 (dipole) or 1 (pair), by default -1",
    )
    parser_sweep.add_argument(
        "--w-grid",
        type=str,
        required=True,
        help="W values as `a,b,c` or `start:stop:num`",
    )
    parser_sweep.add_argument(
        "-j",
        "--jobs",
        type=int,
        default=1,
        help="Number of parallel processes, by default 1",
    )

    # Subparser for the 'verify' command
    verify_help = "Run verification suites against analytic results."
    parser_verify = subparsers.add_parser(
        "verify",
        help=verify_help,
        description=verify_help
        + " Example usage: `goldvortex verify --suite all --jobs 4`.",
        formatter_class=_HelpFormatter,
    )
    parser_verify.add_argument(
        "--suite",
        choices=VALID_SUITES,
        default="all",
        help="Which checks to run, by default `all`",
    )
    parser_verify.add_argument(
        "-j",
        "--jobs",
        type=int,
        default=1,
        help="Number of parallel processes, by default 1",
    )

    # Subparser for the 'plot' command
    plot_help = "Draw a trajectory CSV as an SVG picture."
    parser_plot = subparsers.add_parser(
        "plot",
        help=plot_help,
        description=plot_help
        + " Example usage:"
        " `goldvortex plot traj.csv --manifest run.json --out traj.svg`.",
        formatter_class=_HelpFormatter,
    )
    parser_plot.add_argument("csv", type=Path, help="Trajectory CSV file")
    parser_plot.add_argument(
        "--manifest",
        type=Path,
        required=True,
        help="Manifest or configuration that describes the system",
    )
    parser_plot.add_argument(
        "-o",
        "--out",
        type=Path,
        default=None,
        help="Output SVG file, by default the CSV name with `.svg`",
    )

    # Subparser for the 'cross-ratio' command
    parser_cross = subparsers.add_parser(
        "cross-ratio",
        help="Print the cross-ratio (a-d)(b-c)/((a-b)(c-d)) of four numbers.",
        formatter_class=_HelpFormatter,
    )
    for name in "abcd":
        parser_cross.add_argument(name, type=float)

    # Subparser for the 'version' command
    subparsers.add_parser(
        "version",
        help="Print version information of goldvortex.",
        formatter_class=_HelpFormatter,
    )

    args = parser.parse_args(argv)

    if args.command is None:  # pragma: no cover
        parser.print_help()
        sys.exit(1)

    return args


def _config_from_args(
    args: argparse.Namespace,
    base: IntegratorConfig,
) -> IntegratorConfig:
    overrides = {
        "t_end": getattr(args, "t_end", None),
        "rel_tol": args.rel_tol,
        "abs_tol": args.abs_tol,
        "output_interval": args.output_interval,
        "collision_guard": args.collision_guard,
        "method": args.method,
    }
    cfg = base._replace(**{k: v for k, v in overrides.items() if v is not None})
    cfg.validate()
    return cfg


def _inputs_from_args(args: argparse.Namespace) -> RunInputs:
    if args.config is not None:
        inputs = read_config(args.config)
        return inputs._replace(config=_config_from_args(args, inputs.config))
    if args.gamma is None or args.pos is None:
        msg = "Give either `--config` or both `--gamma` and `--pos`."
        raise UsageError(msg)
    strengths = parse_float_list(args.gamma, name="strength")
    positions = parse_positions(args.pos)
    if len(positions) != len(strengths):
        msg = f"Got {len(strengths)} strengths but {len(positions)} positions."
        raise UsageError(msg)
    system = VortexSystem.create(strengths, args.domain or "plane")
    return RunInputs(
        system,
        VortexState.from_positions(positions),
        _config_from_args(args, IntegratorConfig()),
    )


def _simulate_command(args: argparse.Namespace, argv: Sequence[str]) -> int:
    inputs = _inputs_from_args(args)
    print(
        f"🌀 Integrating {inputs.system.n} vortices in the {inputs.system.domain}"
        f" up to t = {inputs.config.t_end:g}",
    )
    start = time.perf_counter()
    traj = integrate(
        inputs.system,
        inputs.initial,
        inputs.config,
        watch_pairs=inputs.watch_pairs,
    )
    wall_time = time.perf_counter() - start
    write_trajectory_csv(traj, args.out)
    print(f"📝 Wrote {traj.n_samples} samples to `{args.out}`")
    if args.manifest is not None:
        command = shlex.join(["goldvortex", *argv])
        manifest = RunManifest.from_trajectory(traj, inputs, command, wall_time)
        write_manifest_json(manifest, args.manifest)
        print(f"📝 Wrote manifest to `{args.manifest}`")
    if args.plot is not None:
        plot_svg(traj, args.plot)
        print(f"📝 Wrote plot to `{args.plot}`")
    for name, drift in traj.invariant_drift.items():
        print(f"   max |Δ{name}| = {drift:.3e}")
    if traj.terminated_by != "time-end":
        print(f"❌ Run stopped early at t = {traj.times[-1]:g} ({traj.terminated_by})")
        return 2 if args.require_completion else 0
    print(f"✅ Completed in {wall_time:.2f} s")
    return 0


_DEFAULT_BRACKETS = {-1.0: (0.1, 0.4), 1.0: (3.0, 6.0)}


def _print_result(result: BifurcationResult) -> None:
    print(f"λ = {result.lam:g} ({result.method})")
    print(f"W* = {result.critical_W:.17g}")
    print(f"stop ratio y1/y2 = {result.stop_ratio:.17g}")
    print(f"cross-ratio at stop = {result.cross_ratio_at_stop:.17g}")
    if result.method == "simulation":
        print(f"residual |ẋ1| = {result.residual:.3e}")


def _bifurcate_command(args: argparse.Namespace) -> int:
    method = "simulation" if args.method == "simulate" else args.method
    for lam in args.lambdas:
        if method == "algebraic":
            result = critical_W(lam)
        else:
            if args.bracket is not None:
                bracket = parse_float_list(args.bracket, name="bracket")
                if len(bracket) != 2:  # noqa: PLR2004
                    msg = f"A bracket has two numbers, got `{args.bracket}`"
                    raise UsageError(msg)
            elif lam in _DEFAULT_BRACKETS:
                bracket = list(_DEFAULT_BRACKETS[lam])
            else:
                msg = f"No default bracket for λ = {lam}; only -1 and 1 are simulated."
                raise UsageError(msg)
            print(f"🔍 Bisecting height ratios in {bracket} for λ = {lam:g}")
            result = find_cusp_by_simulation(lam, (bracket[0], bracket[1]))
        _print_result(result)
    return 0


def _classify_one(lam: float, w: float) -> tuple[float, str, float]:
    try:
        regime = classify_regime(encounter_trajectory(lam, w), lam)
    except (UnresolvedRegimeError, SimulationError):
        return w, "unresolved", float("nan")
    return w, regime.tag, regime.evidence["reversals"]


def _sweep_command(args: argparse.Namespace) -> int:
    grid = parse_grid(args.w_grid).values
    print(f"🔍 Classifying {len(grid)} encounters for λ = {args.lam:g}")
    if args.lam not in (-1, 1):
        msg = f"Sweeps need λ = -1 or 1, got {args.lam}"
        raise UsageError(msg)
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as executor:
            rows = list(executor.map(_classify_one, [args.lam] * len(grid), grid))
    else:
        rows = [_classify_one(args.lam, w) for w in grid]
    w_star = critical_W(args.lam).critical_W
    lines = [f"W* (λ={args.lam:g}): {w_star:.12g}"]
    lines += [f"W = {w:.12g}: {tag} (ẋ reversals {rev:g})" for w, tag, rev in rows]
    _print_table(lines)
    return 0


def _verify_command(args: argparse.Namespace) -> int:
    print(f"🔍 Running the `{args.suite}` suite")
    reports = run_suite(args.suite, jobs=args.jobs)
    failed = 0
    for report in reports:
        if report.passed:
            print(f"✅ {report.name}")
        else:
            failed += 1
            print(f"❌ {report.name}")
            for key in report.failures():
                print(
                    f"     {key}: measured {report.measured[key]:.12g},"
                    f" expected {report.expected[key]:.12g}"
                    f" ± {report.tolerance_for(key):g}",
                )
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 2 if failed else 0


def _plot_command(args: argparse.Namespace) -> int:
    inputs = read_config(args.manifest)
    traj = read_trajectory_csv(args.csv, inputs.system, inputs.config)
    out = args.out or args.csv.with_suffix(".svg")
    plot_svg(traj, out)
    print(f"📝 Wrote plot to `{out}`")
    return 0


def _print_versions() -> None:  # pragma: no cover
    """Print version information."""
    path = Path(__file__).parent
    txt = [
        f"goldvortex version: {__version__}",
        f"goldvortex location: {path}",
        f"Python version: {sys.version}",
        f"Python executable: {sys.executable}",
    ]
    extra_packages = [
        "numpy",
        "scipy",
        "matplotlib",
        "ruamel.yaml",
        "packaging",
        "rich_argparse",
        "rich",
        "tomli",
    ]
    for package in extra_packages:
        version = get_package_version(package)
        if version is not None:
            txt.append(f"{package} version: {version}")
    _print_table(txt)


def _print_table(lines: list[str]) -> None:
    if importlib.util.find_spec("rich") is not None:
        _print_with_rich(lines)
    else:
        print("\n".join(lines))


def _print_with_rich(data: list) -> None:
    """Print data as a table using rich, if it's installed."""
    from rich.console import Console
    from rich.table import Table

    console = Console()
    table = Table(show_header=False)
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="magenta")
    for line in data:
        prop, value = line.split(":", 1)
        table.add_row(prop, value.strip())
    console.print(table)


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the command-line tool."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) if not isinstance(e.code, str) else 1
    try:
        if args.command == "simulate":
            return _simulate_command(args, argv)
        if args.command == "bifurcate":
            return _bifurcate_command(args)
        if args.command == "sweep":
            return _sweep_command(args)
        if args.command == "verify":
            return _verify_command(args)
        if args.command == "plot":
            return _plot_command(args)
        if args.command == "cross-ratio":
            print(f"CR = {cross_ratio(args.a, args.b, args.c, args.d):.17g}")
            return 0
        if args.command == "version":
            _print_versions()
            return 0
    except _USAGE_ERRORS as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1
    except SimulationError as e:
        print(f"❌ {e}", file=sys.stderr)
        if e.diagnostics:
            print(f"   diagnostics: {e.diagnostics}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1
    return 1  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
