"""
cli_init.py

Builds the argparse parser of the `chasekit` command line.

This module sets up:
- A shared parent parser carrying `--format` for every subcommand.
- One subparser per command module in `cli.commands`; each module registers its own arguments
  and its handler through `set_defaults`.
"""

import argparse

from cli.commands import COMMAND_MODULES
from cli.formatters import formatter_manager


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chasekit",
        description="Chase-based query answering under tuple- and equality-generating dependencies.",
    )

    # Options every subcommand accepts.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=formatter_manager.names, default="text",
                        help="output format (default: text)")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for module in COMMAND_MODULES:
        module.add_parser(subparsers, [common])
    return parser
