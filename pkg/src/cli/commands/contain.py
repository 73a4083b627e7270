"""
contain.py

`chasekit contain`: containment of two named queries under the program's TGDs.
"""

from cli.inputs import add_input_arguments, positive_int
from cli.menu import COMMANDS
from cli.schemas import CommandResult, ContainOutput
from program_io.parser import Program
from reasoning.default_settings import DEFAULT_MAX_STEPS
from reasoning.query import check_containment, check_equivalence


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("contain", help=COMMANDS["contain"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--q1", required=True, metavar="NAME")
    parser.add_argument("--q2", required=True, metavar="NAME")
    parser.add_argument("--budget", type=positive_int, default=DEFAULT_MAX_STEPS,
                        help="chase steps spent on the frozen query")
    parser.add_argument("--equivalent", action="store_true", help="check both directions")
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    q1 = program.query(args.q1)
    q2 = program.query(args.q2)
    if args.equivalent:
        result = check_equivalence(q1, q2, program.tgds, args.budget, program.egds)
    else:
        result = check_containment(q1, q2, program.tgds, args.budget, program.egds)
    output = ContainOutput(
        q1=q1.name,
        q2=q2.name,
        relation="equivalence" if args.equivalent else "containment",
        result=result.value,
    )
    return CommandResult(output, status=result.value)
