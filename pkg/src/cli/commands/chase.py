"""
chase.py

`chasekit chase`: runs the chase and prints the step log, the status and the final instance.

With `--egd separate` the EGD failure check runs first; when it finds no failure the chase runs
under the TGDs alone.
"""

from cli.inputs import add_input_arguments, positive_int, single_head_tgds
from cli.menu import COMMANDS
from cli.schemas import ChaseOutput, CommandResult
from program_io.parser import Program
from reasoning.chase import ChaseMode, ChaseOptions, ChaseStatus, run_chase
from reasoning.default_settings import DEFAULT_CHASE_MODE, DEFAULT_EGD_MODE, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STEPS
from reasoning.egd_sep import egd_failure_check


def add_parser(subparsers, parents) -> None:
    parser = subparsers.add_parser("chase", help=COMMANDS["chase"], parents=parents)
    add_input_arguments(parser)
    parser.add_argument("--mode", choices=[m.value for m in ChaseMode], default=DEFAULT_CHASE_MODE)
    parser.add_argument("--max-steps", type=positive_int, default=DEFAULT_MAX_STEPS)
    parser.add_argument("--max-depth", type=positive_int, default=DEFAULT_MAX_DEPTH)
    parser.add_argument("--egd", choices=["interleave", "separate"], default=DEFAULT_EGD_MODE)
    parser.set_defaults(handler=handle, needs_input=True)


def handle(args, program: Program) -> CommandResult:
    tgds = single_head_tgds(program)
    interleave = args.egd == "interleave"

    if not interleave and program.egds:
        verdict = egd_failure_check(program.facts, program.tgds, program.egds, args.max_steps)
        if verdict.failed:
            _, trigger = verdict.witness
            output = ChaseOutput(
                status=ChaseStatus.FAILED.value,
                step_count=0,
                atom_count=len(program.facts),
                cut_triggers=0,
                forest_complete=True,
                failure=f"EGD {trigger.rule_index} with {trigger}",
                steps=[],
                atoms=[str(atom) for atom in program.facts],
            )
            return CommandResult(output, status=ChaseStatus.FAILED.value, exit_code=1)

    options = ChaseOptions(
        mode=ChaseMode(args.mode),
        max_steps=args.max_steps,
        max_depth=args.max_depth,
        egd_interleave=interleave,
    )
    result = run_chase(program.facts, [*tgds, *program.egds], options)

    failure = None
    if result.failure_witness is not None:
        _, trigger = result.failure_witness
        failure = f"EGD {trigger.rule_index} with {trigger}"

    output = ChaseOutput(
        status=result.status.value,
        stop_reason=result.stop_reason,
        step_count=len(result.steps),
        atom_count=len(result.instance),
        cut_triggers=result.cut_triggers,
        forest_complete=result.forest_complete,
        failure=failure,
        steps=[str(step) for step in result.steps],
        atoms=[str(atom) for atom in result.instance],
    )
    failed = result.status is ChaseStatus.FAILED
    return CommandResult(output, status=result.status.value, steps=len(result.steps),
                         exit_code=1 if failed else 0)
