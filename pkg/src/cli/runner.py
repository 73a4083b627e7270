"""
runner.py

Runs one `chasekit` invocation: parses the arguments, loads the program, dispatches to the
command handler, writes the formatted output and journals the run.

Exit codes:
    0: Success (including "unknown" reasoning outcomes).
    1: The theory fails (an EGD equates two constants).
    2: Usage, I/O or parse errors; the message goes to stderr.
"""

import asyncio
import sys
import time
from typing import Sequence

from cli.cli_init import build_parser
from cli.formatters import formatter_manager
from cli.inputs import load_program
from cli.schemas import CommandResult
from config import config
from db.run_journal import add_run, init_db, trim_old_records
from logging_config import get_logger
from reasoning.errors import ChasekitError

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


async def _journal(command: str, source: str, result: CommandResult, elapsed_ms: int) -> None:
    now = int(time.time())
    await init_db()
    await add_run(command, source, result.status, result.steps, elapsed_ms, now)
    await trim_old_records(now, config.JOURNAL_RETENTION_DAYS)


def _record_run(command: str, source: str, result: CommandResult, elapsed_ms: int) -> None:
    try:
        asyncio.run(_journal(command, source, result, elapsed_ms))
    except Exception as e:
        logger.error(f"Failed to journal the {command} run: {e}", exc_info=True)


def run_cli(argv: Sequence[str]) -> int:
    """
    Runs the command line on `argv` (without the program name).

    Returns:
        int: The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.command is None:
        parser.print_usage(sys.stderr)
        print("chasekit: error: a command is required", file=sys.stderr)
        return EXIT_USAGE

    source = None
    started = time.perf_counter()
    try:
        formatter = formatter_manager.get_formatter(args.format)
        program = None
        if args.needs_input:
            program, source = load_program(args)
        logger.info(f"Running {args.command} on {source or 'journal'}")
        result = args.handler(args, program)
    except (ChasekitError, OSError) as e:
        logger.warning(f"{args.command} rejected: {e}")
        print(f"chasekit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        print(f"chasekit: internal error: {e}", file=sys.stderr)
        return EXIT_USAGE
    elapsed_ms = int((time.perf_counter() - started) * 1000)

    sys.stdout.write(result.raw_text if result.raw_text is not None else formatter.format(result.output))
    logger.info(f"{args.command} finished: {result.status} after {result.steps} steps in {elapsed_ms} ms")

    if args.needs_input and config.JOURNAL_ENABLED:
        _record_run(args.command, source, result, elapsed_ms)
    return result.exit_code
