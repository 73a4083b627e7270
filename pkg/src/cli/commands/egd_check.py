"""
egd_check.py

`chasekit egd-check`: decides whether the EGDs make the chase fail, and reports whether the
interleaved chase applied them innocuously.
"""

from cli.inputs import add_input_arguments, positive_int
from cli.menu import COMMANDS
from cli.schemas import CommandResult, EgdCheckOutput
from program_io.parser import Program
from reasoning.default_settings import DEFAULT_MAX_STEPS
from reasoning.egd_sep import egd_failure_check


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("egd-check", help=COMMANDS["egd-check"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--max-steps", type=positive_int, default=DEFAULT_MAX_STEPS)
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    verdict = egd_failure_check(program.facts, program.tgds, program.egds, args.max_steps, monitor=True)
    witness = None
    if verdict.witness is not None:
        _, trigger = verdict.witness
        witness = f"EGD {trigger.rule_index} with {trigger}"
    output = EgdCheckOutput(
        outcome=verdict.outcome.value,
        witness=witness,
        all_applications_innocuous=verdict.all_applications_innocuous,
    )
    return CommandResult(output, status=verdict.outcome.value, exit_code=1 if verdict.failed else 0)
