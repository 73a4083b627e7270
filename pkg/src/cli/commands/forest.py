"""
forest.py

`chasekit forest`: the guarded chase forest of a run, optionally restricted and optionally as DOT.
"""

from cli.inputs import add_input_arguments, positive_int, single_head_tgds
from cli.menu import COMMANDS
from cli.schemas import CommandResult, ForestOutput, NodeOutput
from program_io.parser import Program
from reasoning.chase import ChaseMode, ChaseOptions, ChaseStatus, forest_to_dot, restricted_gcf, run_chase
from reasoning.default_settings import DEFAULT_CHASE_MODE, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STEPS


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("forest", help=COMMANDS["forest"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--restricted", action="store_true",
                        help="drop subtrees rooted at atoms that label an earlier node")
    parser.add_argument("--dot", action="store_true", help="print Graphviz DOT instead")
    parser.add_argument("--mode", choices=[m.value for m in ChaseMode], default=DEFAULT_CHASE_MODE)
    parser.add_argument("--max-steps", type=positive_int, default=DEFAULT_MAX_STEPS)
    parser.add_argument("--max-depth", type=positive_int, default=DEFAULT_MAX_DEPTH)
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    options = ChaseOptions(mode=ChaseMode(args.mode), max_steps=args.max_steps, max_depth=args.max_depth)
    result = run_chase(program.facts, [*single_head_tgds(program), *program.egds], options)
    nodes = restricted_gcf(result.forest) if args.restricted else list(result.forest)

    output = ForestOutput(
        status=result.status.value,
        restricted=args.restricted,
        forest_complete=result.forest_complete,
        nodes=[
            NodeOutput(id=n.id, atom=str(n.atom), parent=n.parent, rule=n.rule_index, depth=n.depth)
            for n in nodes
        ],
    )
    raw_text = forest_to_dot(nodes) if args.dot else None
    failed = result.status is ChaseStatus.FAILED
    return CommandResult(output, status=result.status.value, steps=len(result.steps),
                         exit_code=1 if failed else 0, raw_text=raw_text)
