"""
store_stats.py

`chasekit store-stats`: runs blocked saturation and reports the cloud store it built.
"""

from cli.inputs import add_input_arguments, positive_int, single_head_tgds
from cli.menu import COMMANDS
from cli.schemas import CommandResult, StoreStatsOutput
from program_io.parser import Program
from reasoning.clouds import blocked_saturate, cloud_size_bound
from reasoning.default_settings import DEFAULT_MAX_ROUNDS, DEFAULT_MAX_STEPS, DEFAULT_MAX_STORE_SIZE


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("store-stats", help=COMMANDS["store-stats"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--force", action="store_true", help="run on rules that are not weakly guarded")
    parser.add_argument("--max-rounds", type=positive_int, default=DEFAULT_MAX_ROUNDS)
    parser.add_argument("--max-store-size", type=positive_int, default=DEFAULT_MAX_STORE_SIZE)
    parser.add_argument("--max-steps", type=positive_int, default=DEFAULT_MAX_STEPS,
                        help="chase steps per round")
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    tgds = single_head_tgds(program)
    report = blocked_saturate(program.facts, tgds, args.max_rounds, args.max_store_size, args.max_steps,
                              force=args.force)
    output = StoreStatsOutput(
        status=report.status.value,
        entries=len(report.store),
        max_cloud_size=report.store.max_cloud_size(),
        cloud_size_bound=cloud_size_bound(program.facts, tgds),
        rounds=report.rounds,
        steps=report.steps,
        ground_atoms=len(report.ground_atoms),
        blocked=report.blocked,
    )
    return CommandResult(output, status=report.status.value, steps=report.steps)
