"""
answer.py

`chasekit answer`: certain answers of a named query.
"""

from cli.inputs import add_input_arguments, positive_int
from cli.menu import COMMANDS
from cli.schemas import AnswerOutput, CommandResult
from program_io.parser import Program
from reasoning.default_settings import DEFAULT_BOUNDED_DEPTH, DEFAULT_EGD_MODE, DEFAULT_MAX_STEPS
from reasoning.egd_sep import separated_answer
from reasoning.query import AnswerStatus, certain_answers, parse_strategy


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("answer", help=COMMANDS["answer"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--query", required=True, metavar="NAME", help="name of the query to answer")
    parser.add_argument("--strategy", default=f"bounded:{DEFAULT_BOUNDED_DEPTH}",
                        help="terminate, blocked-atomic or bounded:N")
    parser.add_argument("--egd", choices=["interleave", "separate"], default=DEFAULT_EGD_MODE)
    parser.add_argument("--max-steps", type=positive_int, default=DEFAULT_MAX_STEPS)
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    query = program.query(args.query)
    strategy = parse_strategy(args.strategy)

    if args.egd == "separate":
        report = separated_answer(program.facts, program.tgds, program.egds, query, strategy, args.max_steps)
    else:
        report = certain_answers(program.facts, program.tgds, query, strategy, program.egds, args.max_steps)

    output = AnswerOutput(
        query=report.query,
        status=report.json_status,
        answers=[[str(term) for term in row] for row in report.answers],
        budget_exhausted=report.budget_exhausted,
        note=report.note,
    )
    failed = report.status is AnswerStatus.FAILED
    return CommandResult(output, status=report.json_status, steps=report.steps, exit_code=1 if failed else 0)
