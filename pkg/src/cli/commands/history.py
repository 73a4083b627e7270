"""
history.py

`chasekit history`: lists the latest runs from the run journal.
"""

import asyncio

from cli.inputs import positive_int
from cli.menu import COMMANDS
from cli.schemas import CommandResult, HistoryOutput, RunOutput
from db.run_journal import get_recent_runs, init_db


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("history", help=COMMANDS["history"], parents=parents)
    parser.add_argument("--limit", type=positive_int, default=20)
    parser.set_defaults(handler=handle, needs_input=False)


async def _recent_runs(limit: int) -> list[dict]:
    await init_db()
    return await get_recent_runs(limit)


def handle(args, program=None) -> CommandResult:
    rows = asyncio.run(_recent_runs(args.limit))
    output = HistoryOutput(runs=[RunOutput(**row) for row in rows])
    return CommandResult(output, status="listed")
