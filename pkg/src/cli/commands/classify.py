"""
classify.py

`chasekit classify`: per-rule class, guards and the affected positions of the program's TGDs.
"""

from cli.inputs import add_input_arguments
from cli.menu import COMMANDS
from cli.schemas import ClassifyOutput, CommandResult, RuleOutput
from program_io.parser import Program
from reasoning.analysis import classify


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("classify", help=COMMANDS["classify"], parents=parents)
    add_input_arguments(parser)
    parser.set_defaults(handler=handle, needs_input=True)


def _one_based(index: int | None) -> int | None:
    return None if index is None else index + 1


def handle(args, program: Program) -> CommandResult:
    result = classify(program.tgds)
    rules = [
        RuleOutput(
            index=i,
            rule=str(rule),
            rule_class=report.rule_class.value,
            guard_class=report.guard_class.value,
            full=report.full,
            guard=_one_based(report.guard_index),
            weak_guard=_one_based(report.weak_guard_index),
        )
        for i, (rule, report) in enumerate(zip(program.tgds, result.per_rule), start=1)
    ]
    output = ClassifyOutput(
        overall=result.overall.value,
        guarded=result.is_guarded,
        weakly_guarded=result.is_weakly_guarded,
        rules=rules,
        affected=[str(p) for p in sorted(result.affected, key=lambda p: p.sort_key)],
        egds=len(program.egds),
    )
    return CommandResult(output, status=result.overall.value)

