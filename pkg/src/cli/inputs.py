"""
inputs.py

Argument helpers shared by the subcommands: the input source (FILE or --builtin), positive
budgets and program loading.
"""

import argparse
from pathlib import Path

from program_io.parser import Program, parse_program
from reasoning.analysis import TGD, normalize_heads
from reasoning.errors import UsageError
from rulesets.builtin_programs import builtin_names, load_builtin


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def add_input_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", nargs="?", type=Path, metavar="FILE", help="program file")
    parser.add_argument("--builtin", choices=builtin_names(), metavar="NAME",
                        help=f"built-in program: {', '.join(builtin_names())}")


def load_program(args: argparse.Namespace) -> tuple[Program, str]:
    """
    Loads the program named by the parsed arguments.

    Returns:
        tuple[Program, str]: The program and its source label (file path or `builtin:<name>`).

    Raises:
        UsageError: When neither or both of FILE and --builtin are given.
        OSError: When the file cannot be read.
        ProgramSyntaxError: When the file does not parse.
    """
    if (args.file is None) == (args.builtin is None):
        raise UsageError("give exactly one of FILE or --builtin")
    if args.builtin is not None:
        return load_builtin(args.builtin), f"builtin:{args.builtin}"
    text = args.file.read_text(encoding="utf-8")
    return parse_program(text), str(args.file)


def single_head_tgds(program: Program) -> list[TGD]:
    return normalize_heads(program.tgds, {p.name for p in program.schema()})
