# cli.py

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from arrangement import raise_for_violations, validate_arrangement
from blowup_engine import principalize_many
from chart_oracle import verify_trace
from constants import (
    DEFAULT_MAX_STEPS,
    ENV_LOG_LEVEL,
    ENV_MAX_STEPS,
    EXIT_ENGINE_ERROR,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERIFICATION_ERROR,
    LOG_FORMAT,
)
from dot_export import export_dot
from errors import EngineError, InputError, OracleError, OracleScopeError
from instance_io import (
    load_instance,
    load_trace,
    serialize_report,
    serialize_trace,
    write_text,
)
from models import BlowupState

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    level_name = "DEBUG" if verbose else os.getenv(ENV_LOG_LEVEL, "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def default_max_steps() -> int:
    raw = os.getenv(ENV_MAX_STEPS)
    if not raw:
        return DEFAULT_MAX_STEPS
    try:
        return int(raw)
    except ValueError:
        logger.error(f"{ENV_MAX_STEPS} must be an integer, got '{raw}'.")
        raise ValueError(f"{ENV_MAX_STEPS} must be an integer, got '{raw}'.")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_run(path: str, out: Optional[str] = None, max_steps: Optional[int] = None) -> int:
    """
    Principalizes the divisors of an instance file and writes the trace.

    Returns:
        int: 0 on success, 2 on input errors, 3 on engine failures.
    """
    try:
        instance = load_instance(path)
        arrangement = instance.to_arrangement()
        divisors = instance.to_divisors()
        report = validate_arrangement(arrangement, divisors)
        if not report.ok:
            for violation in report.violations:
                logger.error(f"{violation.code.value}: {violation.message}")
            raise_for_violations(report)
        state = BlowupState(arrangement=arrangement, divisors=tuple(divisors))
        cap = max_steps if max_steps is not None else default_max_steps()
        if cap < 0:
            raise ValueError(f"--max-steps must be nonnegative, got {cap}.")
    except (InputError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INPUT_ERROR

    try:
        _, trace = principalize_many(state, max_steps=cap)
    except EngineError as e:
        logger.error(f"Principalization failed: {e}")
        return EXIT_ENGINE_ERROR

    try:
        _emit(serialize_trace(trace), out)
    except InputError as e:
        logger.error(f"Cannot write trace: {e}")
        return EXIT_INPUT_ERROR
    logger.info(f"Run finished: {trace.blowup_count} blow-up(s), certificate {trace.certificate.value}.")
    return EXIT_OK


def cmd_verify(instance_path: str, trace_path: str, report_path: Optional[str] = None) -> int:
    """
    Replays a trace through the toric charts of its instance.

    Returns:
        int: 0 when every leaf chart is principal, 2 on input or scope errors,
        4 on verification failures.
    """
    try:
        instance = load_instance(instance_path)
        if not instance.toric or not instance.is_full_nerve:
            logger.error("verify only supports toric instances with nerve \"full\".")
            return EXIT_INPUT_ERROR
        trace = load_trace(trace_path)
        n = len(instance.divisor_names)
        report = verify_trace(n, instance.coefficient_matrix(), trace)
    except (InputError, OracleScopeError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INPUT_ERROR
    except OracleError as e:
        logger.error(f"Verification failed: {e}")
        return EXIT_VERIFICATION_ERROR

    try:
        write_text(report_path or f"{trace_path}.report.json", serialize_report(report))
    except InputError as e:
        logger.error(f"Cannot write report: {e}")
        return EXIT_INPUT_ERROR
    if not report.ok:
        logger.error(
            f"Verification failed: {len(report.failures)} non-principal leaf chart(s), "
            f"{len(report.pullback_mismatches)} pullback mismatch(es), "
            f"{len(report.nerve_violations)} nerve violation(s)."
        )
        return EXIT_VERIFICATION_ERROR
    logger.info(f"All {report.leaf_count} leaf chart(s) are principal.")
    return EXIT_OK


def cmd_export_dot(trace_path: str, out: Optional[str] = None) -> int:
    try:
        trace = load_trace(trace_path)
        dot = export_dot(trace)
    except (InputError, EngineError) as e:
        logger.error(f"Cannot export trace: {e}")
        return EXIT_INPUT_ERROR
    try:
        _emit(dot, out)
    except InputError as e:
        logger.error(f"Cannot write DOT graph: {e}")
        return EXIT_INPUT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="principalize",
        description="Principalize c.i. monomial ideal sums by codimension-2 blow-ups.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log every blow-up step.")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Principalize an instance and write its trace.")
    run.add_argument("instance")
    run.add_argument("--out", help="Trace file (standard output when omitted).")
    run.add_argument("--max-steps", type=int, default=None, help="Blow-up cap.")

    verify = commands.add_parser("verify", help="Check a trace in explicit toric charts.")
    verify.add_argument("instance")
    verify.add_argument("trace")
    verify.add_argument("--report", help="Report file (default: <trace>.report.json).")

    dot = commands.add_parser("export-dot", help="Write the blow-up tower as a DOT graph.")
    dot.add_argument("trace")
    dot.add_argument("--out", help="DOT file (standard output when omitted).")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_OK
    configure_logging(args.verbose)

    if args.command == "run":
        return cmd_run(args.instance, out=args.out, max_steps=args.max_steps)
    if args.command == "verify":
        return cmd_verify(args.instance, args.trace, report_path=args.report)
    return cmd_export_dot(args.trace, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
