"""
Command line for the verifier: verify, sweep, exponents and subspace.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for configuration and budget errors.
"""
import argparse
import logging
import sys

from pydantic import ValidationError

from config.settings import (
    DEFAULT_MAX_AMBIENT_POINTS,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_MAX_PAIR_EVALUATIONS,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    LOG_LEVEL,
)
from ffharmonic.errors import FiniteFieldError, IdentityViolation, SearchFailed
from ffharmonic.logging_config import configure_logging, get_logger
from ffharmonic.models import SearchClass
from models.run_config import JRule, OutputFormat, RunConfig
from services.exponent_service import ExponentService
from services.report_writer import ReportWriter
from services.subspace_service import SubspaceService
from services.sweep_service import SweepService
from services.verification_service import VerificationService

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


def parse_int_list(text: str) -> list[int]:
    """Parse "3,5,7" or "2-6" or a mix like "2,4-6"."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            low, high = part.split("-", 1)
            values.extend(range(int(low), int(high) + 1))
        else:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return values


def _int_list(text: str) -> list[int]:
    try:
        return parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from exc


def _tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid tolerance value in {text!r}") from exc


def _add_common_arguments(parser: argparse.ArgumentParser, default_ds: str) -> None:
    parser.add_argument("--q", type=_int_list, default=[3, 5], help="Odd primes, e.g. 3,5,7 (default: 3,5)")
    parser.add_argument("--d", type=_int_list, default=parse_int_list(default_ds), help=f"Dimensions, e.g. 2,3 or 2-6 (default: {default_ds})")
    parser.add_argument("--j-rule", choices=[rule.value for rule in JRule], default=None, help="Which j in F_q^* to visit (default: all)")
    parser.add_argument("--j", type=_int_list, default=None, help="Explicit j values; implies --j-rule explicit")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Master seed (default: {DEFAULT_SEED})")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help=f"Seeded trials per cell (default: {DEFAULT_TRIALS})")
    parser.add_argument("--max-ambient-points", type=int, default=DEFAULT_MAX_AMBIENT_POINTS, help="Largest grid enumerated")
    parser.add_argument("--max-evaluations", type=int, default=DEFAULT_MAX_EVALUATIONS, help="Ratio evaluations per sweep cell")
    parser.add_argument("--max-pair-evaluations", type=int, default=DEFAULT_MAX_PAIR_EVALUATIONS, help="Pair sums for the Omega kernel check")
    parser.add_argument("--output", default=None, help="Report path (default: stdout)")
    parser.add_argument("--format", choices=[fmt.value for fmt in OutputFormat], default=OutputFormat.JSON.value, help="Report format (default: json)")
    parser.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="KEY=VALUE", help="Override a tolerance")
    parser.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    parser.add_argument("--timing", action="store_true", help="Include wall-clock times in the report")
    parser.add_argument(
        "--log-level",
        default=LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help=f"Logging level (default: {LOG_LEVEL})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ff-restriction-verifier",
        description="Verify restriction identities and estimates over finite fields",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    verify = subparsers.add_parser("verify", help="Run every identity suite")
    _add_common_arguments(verify, "2,3")
    verify.add_argument("--brute-force", action="store_true", help="Confirm affine maximality in every cell")

    sweep = subparsers.add_parser("sweep", help="Search for large restriction ratios")
    _add_common_arguments(sweep, "2")
    sweep.add_argument("--p", default="auto", help="Source exponent: rational, inf or auto (default: auto)")
    sweep.add_argument("--r", default="2", help="Target exponent (default: 2)")
    sweep.add_argument("--class", dest="search_class", choices=[c.value for c in SearchClass], default=SearchClass.ALL.value, help="Function class (default: all)")

    exponents = subparsers.add_parser("exponents", help="Tabulate critical exponents")
    _add_common_arguments(exponents, "2-12")

    subspace = subparsers.add_parser("subspace", help="Build affine subspaces inside spheres")
    _add_common_arguments(subspace, "2-6")
    subspace.add_argument("--brute-force", action="store_true", help="Confirm maximality by exhaustive search")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Translate parsed flags into a validated RunConfig.

    Raises:
        ValidationError: If a value fails validation
    """
    if args.j is not None:
        j_rule = JRule.EXPLICIT
    else:
        j_rule = JRule(args.j_rule or JRule.ALL.value)
    return RunConfig(
        subcommand=args.subcommand,
        qs=args.q,
        ds=args.d,
        j_rule=j_rule,
        js=args.j or [],
        p=getattr(args, "p", "auto"),
        r=getattr(args, "r", "2"),
        search_class=getattr(args, "search_class", SearchClass.ALL.value),
        seed=args.seed,
        trials=args.trials,
        budget={
            "max_ambient_points": args.max_ambient_points,
            "max_evaluations": args.max_evaluations,
            "max_pair_evaluations": args.max_pair_evaluations,
        },
        output=args.output,
        format=args.format,
        tolerances=dict(args.tol),
        workers=args.workers,
        timing=args.timing,
        brute_force=getattr(args, "brute_force", False),
    )


def _dispatch(config: RunConfig) -> int:
    if config.subcommand == "verify":
        report = VerificationService.run(config)
        passed = report.all_passed
    elif config.subcommand == "sweep":
        report = SweepService.run(config)
        passed = True
    elif config.subcommand == "exponents":
        report = ExponentService.build_report(config)
        passed = all(row.consistent for row in report.rows)
    else:
        report = SubspaceService.run(config)
        passed = all(row.passed for row in report.rows)

    ReportWriter.write(report, config.format, config.output)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def main(argv: list[str] | None = None) -> int:
    """Parse flags, run one subcommand and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # reports may go to stdout, so logs go to stderr
    configure_logging(level=getattr(logging, args.log_level), stream=sys.stderr)

    try:
        config = config_from_args(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        return _dispatch(config)
    except (IdentityViolation, SearchFailed) as e:
        logger.error(f"Check failed: {type(e).__name__}: {e}")
        return EXIT_CHECK_FAILED
    except (FiniteFieldError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception:
        logger.exception("Run failed")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
