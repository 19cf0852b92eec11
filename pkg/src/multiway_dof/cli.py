"""Command-line interface: dof, plan, simulate and sweep."""

import argparse
import logging
import os
import sys
from collections.abc import Callable, Iterable
from multiprocessing.pool import ThreadPool

import pandas as pd
from pydantic import ValidationError

from .analyzers.catalog import classify
from .errors import (
    AlignmentDimensionError,
    ConfigValidationError,
    DegenerateChannelError,
    PlanError,
    PreconditionError,
    ShapeError,
    SweepTooLargeError,
    VerificationError,
)
from .generators.scheme import build_scheme_resampling
from .generators.simulation import (
    estimate_dof_slope,
    sum_rate,
    verify_scheme,
    verify_sweep_cell,
)
from .models import DoFReport, OptimalityStatus
from .parsers.config import expand_sweep, load_network_config, load_sweep_spec
from .utils.formatting import format_rate, format_rational

logger = logging.getLogger(__name__)

THREADS_ENV = "MULTIWAY_DOF_THREADS"

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NO_SCHEME = 3
EXIT_PRECONDITION = 4
EXIT_TOO_LARGE = 5


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ConfigValidationError(THREADS_ENV, f"expected an integer, got {raw!r}") from None
    if count < 1:
        raise ConfigValidationError(THREADS_ENV, f"must be >= 1, got {count}")
    return count


def _ordered_map(func: Callable, items: Iterable) -> list:
    """Map over items on a thread pool, keeping input order."""
    items = list(items)
    threads = min(_thread_count(), max(1, len(items)))
    if threads == 1:
        return [func(item) for item in items]
    with ThreadPool(threads) as pool:
        return pool.map(func, items)


def _headline(report: DoFReport) -> str:
    verdict = (
        "OPTIMAL" if report.optimal is OptimalityStatus.OPTIMAL else "UNKNOWN optimality"
    )
    return (
        f"bound {format_rational(report.upper_bound)}, "
        f"achievable {format_rational(report.achievable)}, "
        f"regime {report.regime}, {verdict}"
    )


def _require_strategy(report: DoFReport):
    if report.strategy is None:
        raise PlanError(f"no constructive scheme in catalog for regime {report.regime}")
    return report.strategy


def cmd_dof(args: argparse.Namespace) -> int:
    config = load_network_config(args.config)
    report = classify(config)
    b = report.breakdown

    print(_headline(report))
    print(
        f"upper bound terms: sum of antennas {b.term_sum_all}, "
        f"weak users {b.term_weak_users}, relay {b.term_relay}, "
        f"per-cluster cut {b.cluster_cut}"
    )
    print(f"canonical clusters: {[list(c) for c in report.config.clusters]}")
    if report.strategy is not None:
        print(f"strategy: {report.strategy.summary()}")
    for note in report.notes:
        print(f"note: {note}")
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    config = load_network_config(args.config)
    report = classify(config)
    descriptor = _require_strategy(report)
    scheme, _ = build_scheme_resampling(report.config, descriptor, args.seed)

    print(_headline(report))
    print(f"strategy: {descriptor.summary()}")
    print(f"channel seed: {scheme.seed}")
    print(
        f"relay slots: {len(scheme.slots)} of {descriptor.relay_dimensions} dimensions, "
        f"stream DoF {format_rational(scheme.stream_dof)}"
    )
    print(f"alignment residual: {scheme.alignment_residual:.3e}")
    print(f"filter residual: {scheme.filter_residual:.3e}")
    print(f"relay decode condition: {scheme.decode_condition:.3e}")
    print(f"relay precode condition: {scheme.precode_condition:.3e}")

    permutation = report.permutation
    for stream in scheme.streams:
        message = stream.message
        if permutation is not None:
            message = permutation.to_original(message)
        kind = scheme.slots[stream.slot].kind
        print(f"  stream {stream.index}: {message.label()} on {kind} slot {stream.slot}")

    if args.verify:
        try:
            verification = verify_scheme(scheme, seed=args.seed)
        except VerificationError as e:
            print(f"FAIL: {e}")
            return EXIT_FAIL
        print(f"PASS: max residual {verification.max_residual:.3e}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.snr_lo <= 0 or args.snr_hi < 100 * args.snr_lo:
        raise PreconditionError(
            f"need 0 < snr-lo and snr-hi >= 100 x snr-lo, got {args.snr_lo} and {args.snr_hi}"
        )
    config = load_network_config(args.config)
    report = classify(config)
    descriptor = _require_strategy(report)
    predicted = format_rational(report.achievable)

    def run(seed: int) -> dict:
        scheme, channels = build_scheme_resampling(report.config, descriptor, seed)
        return {
            "seed": seed,
            "rate_lo": format_rate(sum_rate(scheme, channels, args.snr_lo)),
            "rate_hi": format_rate(sum_rate(scheme, channels, args.snr_hi)),
            "slope": format_rate(estimate_dof_slope(scheme, channels, args.snr_lo, args.snr_hi)),
            "predicted_dof": predicted,
        }

    rows = _ordered_map(run, range(args.seed, args.seed + args.seeds))
    frame = pd.DataFrame(rows, columns=["seed", "rate_lo", "rate_hi", "slope", "predicted_dof"])
    _emit(frame, args.output)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = load_sweep_spec(args.sweep)
    cells = list(expand_sweep(spec))
    logger.info("sweeping %d cells", len(cells))

    def run(cell) -> dict:
        env, config = cell
        report = classify(config)
        row = dict(env)
        row["upper_bound"] = format_rational(report.upper_bound)
        row["achievable"] = format_rational(report.achievable)
        row["regime"] = report.regime
        row["optimal"] = report.optimal.value
        if spec.verify:
            verdict, slope = verify_sweep_cell(report, spec)
            row["slope"] = "n/a" if slope is None else format_rate(slope)
            row["verified"] = verdict
        return row

    columns = [*spec.ranges, "upper_bound", "achievable", "regime", "optimal"]
    if spec.verify:
        columns.extend(["slope", "verified"])
    frame = pd.DataFrame(_ordered_map(run, cells), columns=columns)
    _emit(frame, args.output)
    return 0


def _emit(frame: pd.DataFrame, output: str | None) -> None:
    if output:
        frame.to_csv(output, index=False, lineterminator="\n")
        print(f"wrote {len(frame)} rows to {output}", file=sys.stderr)
    else:
        sys.stdout.write(frame.to_csv(index=False, lineterminator="\n"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiway-dof",
        description="DoF bounds, regime catalog and alignment schemes for MIMO multi-way relay networks",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="Log INFO to stderr; repeat for DEBUG",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to run")

    dof_parser = subparsers.add_parser("dof", help="Upper bound, regime and achievable DoF")
    dof_parser.add_argument("config", help="Network configuration JSON file")
    dof_parser.set_defaults(func=cmd_dof)

    plan_parser = subparsers.add_parser("plan", help="Build the regime's transmission scheme")
    plan_parser.add_argument("config", help="Network configuration JSON file")
    plan_parser.add_argument("--seed", type=int, default=0, help="Channel seed")
    plan_parser.add_argument(
        "--verify",
        action="store_true",
        help="Run a noiseless round trip and print PASS/FAIL",
    )
    plan_parser.set_defaults(func=cmd_plan)

    sim_parser = subparsers.add_parser("simulate", help="Finite-SNR DoF slope per seed")
    sim_parser.add_argument("config", help="Network configuration JSON file")
    sim_parser.add_argument("--snr-lo", type=float, default=1e4, help="Lower linear transmit power")
    sim_parser.add_argument("--snr-hi", type=float, default=1e6, help="Upper linear transmit power")
    sim_parser.add_argument("--seeds", type=int, default=10, help="Number of channel seeds")
    sim_parser.add_argument("--seed", type=int, default=0, help="First channel seed")
    sim_parser.add_argument("-o", "--output", help="Output CSV file (default: stdout)")
    sim_parser.set_defaults(func=cmd_simulate)

    sweep_parser = subparsers.add_parser("sweep", help="Regime map over a configuration grid")
    sweep_parser.add_argument("sweep", help="Sweep specification JSON file")
    sweep_parser.add_argument("-o", "--output", help="Output CSV file (default: stdout)")
    sweep_parser.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point for the multiway-dof command."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )

    try:
        return args.func(args)
    except SweepTooLargeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (PlanError, DegenerateChannelError, AlignmentDimensionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_SCHEME
    except (ConfigValidationError, ShapeError, ValidationError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
