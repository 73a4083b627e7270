"""
egd_sep.py

Answering under TGDs and innocuous EGDs by separating the two.

When every EGD application is innocuous (it only removes atoms), the EGDs can be dropped for query
answering as long as the chase does not fail. Failure is detected without EGDs: with a fresh binary
predicate holding every pair of distinct database values, an EGD can equate two database
constants iff its body extended with neq(lhs, rhs) is entailed under the TGDs alone.

Functions:
    egd_failure_check(database, tgds, egds, ...): FAILED, NO_FAILURE or UNKNOWN.
    separated_answer(database, tgds, egds, query, ...): Certain answers through separation.
    blocking_chase(database, tgds, egds, ...): Chase that keeps atoms lost to EGDs in a blocked set.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from reasoning.analysis import TGD, normalize_heads
from reasoning.chase import (
    EGD,
    ChaseMode,
    ChaseOptions,
    ChaseResult,
    ChaseStatus,
    EgdStep,
    StepRecord,
    TgdStep,
    Trigger,
    run_chase,
)
from reasoning.default_settings import DEFAULT_MAX_STEPS, NEQ_PREDICATE_NAME
from reasoning.errors import NonInnocuousEgdError
from reasoning.homomorphism import homomorphisms
from reasoning.model import Atom, Instance, Predicate, term_sort_key
from reasoning.query import CQ, AnswerReport, AnswerStatus, Strategy, certain_answers
from logging_config import get_logger

logger = get_logger(__name__)


class FailureCheck(str, Enum):
    FAILED = "failed"
    NO_FAILURE = "no_failure"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SeparationVerdict:
    """
    Attributes:
        outcome (FailureCheck): Result of the check.
        witness (tuple[EGD, Trigger] | None): EGD with a homomorphism equating two database values.
        all_applications_innocuous (bool | None): Whether every EGD application of the monitored
            interleaved run was innocuous; None when no run was monitored.
    """
    outcome: FailureCheck
    witness: tuple[EGD, Trigger] | None = None
    all_applications_innocuous: bool | None = None

    @property
    def failed(self) -> bool:
        return self.outcome is FailureCheck.FAILED


def _neq_predicate(database: Instance, tgds: Sequence[TGD], egds: Sequence[EGD]) -> Predicate:
    used = {p.name for p in database.predicates()}
    for rule in tgds:
        used |= {p.name for p in rule.predicates()}
    for egd in egds:
        used |= {a.name for a in egd.body}
    name = NEQ_PREDICATE_NAME
    while name in used:
        name += "_"
    return Predicate(name, 2)


def egd_failure_check(database: Instance,
                      tgds: Sequence[TGD],
                      egds: Sequence[EGD],
                      max_steps: int = DEFAULT_MAX_STEPS,
                      monitor: bool = False) -> SeparationVerdict:
    """
    Decides whether the chase of `database` under `tgds` and `egds` fails, using the TGDs only.

    Args:
        database (Instance): Ground database.
        tgds (Sequence[TGD]): The TGDs.
        egds (Sequence[EGD]): The EGDs.
        max_steps (int): Step budget of the TGD chase.
        monitor (bool): Also run the interleaved chase and report whether its EGD applications
            were all innocuous.

    Returns:
        SeparationVerdict: FAILED with a witness, NO_FAILURE once the chase saturated, else UNKNOWN.
    """
    if not egds:
        return SeparationVerdict(FailureCheck.NO_FAILURE, all_applications_innocuous=True if monitor else None)

    neq = _neq_predicate(database, tgds, egds)
    domain = sorted(database.domain(), key=term_sort_key)
    extended = database.copy()
    for left in domain:
        for right in domain:
            if left != right:
                extended.add(Atom(neq, (left, right)))

    rules = normalize_heads(tgds, {p.name for p in extended.predicates()})
    result = run_chase(extended, rules, ChaseOptions(mode=ChaseMode.RESTRICTED, max_steps=max_steps,
                                                     max_depth=max_steps))
    witness = None
    for index, egd in enumerate(egds, start=1):
        pattern = (*egd.body, Atom(neq, (egd.lhs, egd.rhs)))
        mapping = next(homomorphisms(pattern, result.instance), None)
        if mapping is not None:
            witness = (egd, Trigger.build(egd, mapping, index))
            break

    innocuous = None
    if monitor:
        interleaved = run_chase(database, [*rules, *egds], ChaseOptions(max_steps=max_steps))
        innocuous = all(step.innocuous for step in interleaved.egd_steps)

    if witness is not None:
        logger.info(f"EGD failure detected: EGD {witness[1].rule_index} with {witness[1]}")
        return SeparationVerdict(FailureCheck.FAILED, witness, innocuous)
    if result.status is ChaseStatus.SATURATED:
        return SeparationVerdict(FailureCheck.NO_FAILURE, None, innocuous)
    logger.warning("EGD failure check inconclusive: the TGD chase did not saturate")
    return SeparationVerdict(FailureCheck.UNKNOWN, None, innocuous)


def separated_answer(database: Instance,
                     tgds: Sequence[TGD],
                     egds: Sequence[EGD],
                     query: CQ,
                     strategy: Strategy | None = None,
                     max_steps: int = DEFAULT_MAX_STEPS) -> AnswerReport:
    """
    Answers `query` assuming the EGDs are innocuous: first the failure check, then the TGDs alone.

    A failing theory entails every Boolean query; for other queries the report carries status
    FAILED with a note instead of an answer set. An inconclusive failure check downgrades the
    answers to a sound lower bound.
    """
    verdict = egd_failure_check(database, tgds, egds, max_steps)
    if verdict.failed:
        egd, trigger = verdict.witness
        note = f"the chase fails: EGD {trigger.rule_index} equates database values with {trigger}"
        if not query.is_boolean:
            note += "; every tuple is a certain answer and none are listed"
        return AnswerReport(
            query=query.name,
            arity=query.arity,
            answers=((),) if query.is_boolean else (),
            status=AnswerStatus.FAILED,
            note=note,
        )

    report = certain_answers(database, tgds, query, strategy, max_steps=max_steps)
    if verdict.outcome is FailureCheck.UNKNOWN and report.status is AnswerStatus.EXACT:
        return AnswerReport(
            query=report.query,
            arity=report.arity,
            answers=report.answers,
            status=AnswerStatus.SOUND_LOWER_BOUND,
            steps=report.steps,
            budget_exhausted=True,
            note="the EGD failure check did not finish; answers hold only if the chase does not fail",
        )
    return report


@dataclass(frozen=True)
class BlockingChaseResult:
    """
    Attributes:
        unblocked (Instance): A: the database plus every atom a TGD step produced, in order.
        blocked (Instance): C: atoms removed by EGD applications.
        survivors (Instance): A − C.
        status (ChaseStatus): Status of the underlying run.
        chase (ChaseResult): The underlying interleaved run.
    """
    unblocked: Instance
    blocked: Instance
    survivors: Instance
    status: ChaseStatus
    chase: ChaseResult


def blocking_chase(database: Instance,
                   tgds: Sequence[TGD],
                   egds: Sequence[EGD],
                   max_steps: int = DEFAULT_MAX_STEPS) -> BlockingChaseResult:
    """
    Runs the interleaved chase and keeps, instead of deleting, every atom an EGD application
    removes: such atoms move to the blocked set and the survivors are the unblocked atoms minus
    the blocked ones.

    Raises:
        NonInnocuousEgdError: On the first EGD application that is not innocuous.
    """
    unblocked = database.copy()
    blocked = Instance()

    def watch(step: StepRecord) -> None:
        if isinstance(step, TgdStep):
            unblocked.add(step.atom)
        elif isinstance(step, EgdStep):
            if not step.innocuous:
                logger.error(f"non-innocuous EGD application: {step}")
                raise NonInnocuousEgdError(step)
            for atom in step.removed:
                blocked.add(atom)

    rules = normalize_heads(tgds, {p.name for p in database.predicates()})
    chase = run_chase(database, [*rules, *egds], ChaseOptions(max_steps=max_steps), on_step=watch)
    survivors = Instance(atom for atom in unblocked if atom not in blocked)
    return BlockingChaseResult(unblocked, blocked, survivors, chase.status, chase)
