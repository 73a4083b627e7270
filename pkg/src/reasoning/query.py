"""
query.py

Conjunctive queries: evaluation, certain answers, the CQ-to-BCQ reduction and containment.

Certain answers are read off a chase of the database. Three strategies are offered:
    terminate       Restricted chase to saturation; exact if it saturates within the step budget.
    blocked-atomic  Cloud-store-blocked saturation; exact for atomic queries once it stabilizes.
    bounded:N       Oblivious chase cut at forest depth N; a sound lower bound unless it saturates.

Classes:
    CQ: Conjunctive query.
    AnswerStatus, AnswerReport: Certain-answer results.
    StrategyKind, Strategy: Answering strategies.
    Containment: Outcome of a containment check.

Functions:
    eval_cq(instance, query): Answers of a query over one instance.
    certain_answers(database, tgds, query, strategy, ...): Certain answers.
    cq_to_bcq(query, answer): Reduction of tuple membership to a Boolean query.
    check_tuple(database, tgds, query, answer, ...): Decides one candidate answer.
    check_containment(q1, q2, tgds, ...): Containment under TGDs via freezing.
    check_equivalence(q1, q2, tgds, ...): Containment in both directions.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from reasoning.analysis import TGD, normalize_heads
from reasoning.chase import EGD, ChaseMode, ChaseOptions, ChaseStatus, run_chase
from reasoning.clouds import SaturationStatus, blocked_saturate
from reasoning.default_settings import DEFAULT_BOUNDED_DEPTH, DEFAULT_MAX_STEPS
from reasoning.errors import UsageError
from reasoning.homomorphism import homomorphisms
from reasoning.model import Atom, Constant, Instance, LabeledNull, Predicate, Term, Variable, term_sort_key
from logging_config import get_logger

logger = get_logger(__name__)

AnswerTuple = tuple[Term, ...]


@dataclass(frozen=True)
class CQ:
    """
    A conjunctive query name(head) :- body. An empty head makes the query Boolean.
    """
    name: str
    head: tuple[Variable, ...]
    body: tuple[Atom, ...]

    def __post_init__(self):
        body_vars = {t for atom in self.body for t in atom.args if isinstance(t, Variable)}
        for var in self.head:
            if var not in body_vars:
                raise UsageError(f"head variable {var} of query {self.name} does not occur in its body")

    @property
    def arity(self) -> int:
        return len(self.head)

    @property
    def is_boolean(self) -> bool:
        return not self.head

    @property
    def is_atomic(self) -> bool:
        return len(self.body) == 1

    def variables(self) -> tuple[Variable, ...]:
        return tuple(dict.fromkeys(t for atom in self.body for t in atom.args if isinstance(t, Variable)))

    def predicates(self) -> set[Predicate]:
        return {atom.predicate for atom in self.body}

    def __str__(self) -> str:
        head = f"{self.name}({','.join(str(v) for v in self.head)})"
        return f"{head} :- {', '.join(str(a) for a in self.body)}"


class AnswerStatus(str, Enum):
    EXACT = "exact"
    SOUND_LOWER_BOUND = "sound_lower_bound"
    FAILED = "failed"


@dataclass(frozen=True)
class AnswerReport:
    """
    Attributes:
        query (str): Query name.
        arity (int): Query arity.
        answers (tuple[AnswerTuple, ...]): Constant tuples, sorted.
        status (AnswerStatus): Exact, sound lower bound, or failed theory.
        steps (int): Chase steps spent.
        budget_exhausted (bool): A budget stopped the underlying chase.
        note (str | None): Explanation attached to non-exact reports.
    """
    query: str
    arity: int
    answers: tuple[AnswerTuple, ...]
    status: AnswerStatus
    steps: int = 0
    budget_exhausted: bool = False
    note: str | None = None

    @property
    def holds(self) -> bool:
        """For Boolean queries: the empty tuple is an answer."""
        return bool(self.answers)

    @property
    def json_status(self) -> str:
        """`failed`, `sat`, `unsat` (exact and empty) or `unknown` (lower bound and empty)."""
        if self.status is AnswerStatus.FAILED:
            return "failed"
        if self.answers:
            return "sat"
        return "unsat" if self.status is AnswerStatus.EXACT else "unknown"


class StrategyKind(str, Enum):
    TERMINATE = "terminate"
    BLOCKED_ATOMIC = "blocked-atomic"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind = StrategyKind.BOUNDED
    depth: int = DEFAULT_BOUNDED_DEPTH

    def __post_init__(self):
        if self.depth <= 0:
            raise UsageError("the bounded strategy needs a positive depth")

    def __str__(self) -> str:
        return f"bounded:{self.depth}" if self.kind is StrategyKind.BOUNDED else self.kind.value


_BOUNDED = re.compile(r"bounded(?::(\d+))?")


def parse_strategy(text: str) -> Strategy:
    """
    Parses `terminate`, `blocked-atomic`, `bounded` or `bounded:N`.

    Raises:
        UsageError: For any other text.
    """
    text = text.strip()
    if text == StrategyKind.TERMINATE.value:
        return Strategy(StrategyKind.TERMINATE)
    if text == StrategyKind.BLOCKED_ATOMIC.value:
        return Strategy(StrategyKind.BLOCKED_ATOMIC)
    match = _BOUNDED.fullmatch(text)
    if match:
        return Strategy(StrategyKind.BOUNDED, int(match.group(1) or DEFAULT_BOUNDED_DEPTH))
    raise UsageError(f"unknown strategy {text!r}; use terminate, blocked-atomic or bounded:N")


def sort_answers(answers: Iterable[AnswerTuple]) -> tuple[AnswerTuple, ...]:
    return tuple(sorted(set(answers), key=lambda row: tuple(term_sort_key(t) for t in row)))


def eval_cq(instance: Instance, query: CQ) -> set[AnswerTuple]:
    """
    Evaluates `query` over `instance`.

    Returns:
        set[AnswerTuple]: Images of the head over all homomorphisms of the body; nulls included.
    """
    return {tuple(h[v] for v in query.head) for h in homomorphisms(query.body, instance)}


def _constant_rows(rows: Iterable[AnswerTuple]) -> tuple[AnswerTuple, ...]:
    return sort_answers(row for row in rows if all(isinstance(t, Constant) for t in row))


def _reserved_names(database: Instance, query: CQ) -> set[str]:
    return {p.name for p in database.predicates() | query.predicates()}


def certain_answers(database: Instance,
                    tgds: Sequence[TGD],
                    query: CQ,
                    strategy: Strategy | None = None,
                    egds: Sequence[EGD] = (),
                    max_steps: int = DEFAULT_MAX_STEPS) -> AnswerReport:
    """
    Computes the certain answers of `query` over `database` under the dependencies.

    Args:
        database (Instance): Ground database.
        tgds (Sequence[TGD]): TGDs; multi-head rules are normalized first.
        query (CQ): The query.
        strategy (Strategy | None): Defaults to bounded with the default depth.
        egds (Sequence[EGD]): EGDs, interleaved with the TGDs (not supported by blocked-atomic).
        max_steps (int): Step budget of the chase.

    Returns:
        AnswerReport: Sorted constant answers with their status.

    Raises:
        UsageError: blocked-atomic with a non-atomic query or with EGDs.
    """
    strategy = strategy or Strategy()
    rules = normalize_heads(tgds, _reserved_names(database, query))

    if strategy.kind is StrategyKind.BLOCKED_ATOMIC:
        if not query.is_atomic:
            raise UsageError("blocked-atomic answers atomic queries only")
        if egds:
            raise UsageError("blocked-atomic does not support EGDs; use --egd separate")
        report = blocked_saturate(database, rules, max_steps=max_steps)
        exact = report.status is SaturationStatus.STABILIZED
        return AnswerReport(
            query=query.name,
            arity=query.arity,
            answers=_constant_rows(eval_cq(report.instance, query)),
            status=AnswerStatus.EXACT if exact else AnswerStatus.SOUND_LOWER_BOUND,
            steps=report.steps,
            budget_exhausted=not exact,
        )

    if strategy.kind is StrategyKind.TERMINATE:
        options = ChaseOptions(mode=ChaseMode.RESTRICTED, max_steps=max_steps, max_depth=max_steps)
    else:
        options = ChaseOptions(mode=ChaseMode.OBLIVIOUS, max_steps=max_steps, max_depth=strategy.depth)
    result = run_chase(database, [*rules, *egds], options)

    if result.status is ChaseStatus.FAILED:
        egd, trigger = result.failure_witness
        return AnswerReport(
            query=query.name,
            arity=query.arity,
            answers=((),) if query.is_boolean else (),
            status=AnswerStatus.FAILED,
            steps=len(result.steps),
            note=f"the chase fails: EGD {trigger.rule_index} equates constants with {trigger}",
        )

    saturated = result.status is ChaseStatus.SATURATED
    return AnswerReport(
        query=query.name,
        arity=query.arity,
        answers=_constant_rows(eval_cq(result.instance, query)),
        status=AnswerStatus.EXACT if saturated else AnswerStatus.SOUND_LOWER_BOUND,
        steps=len(result.steps),
        budget_exhausted=not saturated,
    )


def cq_to_bcq(query: CQ, answer: Sequence[Term], reserved_names: Iterable[str] = ()) -> tuple[CQ, Atom]:
    """
    Reduces "is `answer` a certain answer of `query`" to a Boolean query over an extended database.

    The Boolean query adds q'(head) to the body, q' a fresh predicate; the extra fact is q'(answer).
    An arity-0 query keeps its body and gets the fact q'. The name of q' avoids the query's
    predicates and `reserved_names` (those of the database and rules the query is asked against).

    Raises:
        UsageError: If the tuple length differs from the query arity.
    """
    if len(answer) != query.arity:
        raise UsageError(f"query {query.name} has arity {query.arity}, got a tuple of length {len(answer)}")
    used = {atom.name for atom in query.body} | set(reserved_names)
    name = f"{query.name}_answer"
    while name in used:
        name += "_"
    marker = Predicate(name, query.arity)
    fact = Atom(marker, tuple(answer))
    if query.is_boolean:
        return CQ(query.name, (), query.body), fact
    return CQ(query.name, (), (*query.body, Atom(marker, query.head))), fact


def check_tuple(database: Instance,
                tgds: Sequence[TGD],
                query: CQ,
                answer: Sequence[Term],
                strategy: Strategy | None = None,
                max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """True when the Boolean reduction of (query, answer) is entailed under the strategy."""
    reserved = {p.name for p in database.predicates()}
    for rule in tgds:
        reserved.update(p.name for p in rule.predicates())
    boolean, fact = cq_to_bcq(query, answer, reserved)
    extended = database.copy()
    extended.add(fact)
    return certain_answers(extended, tgds, boolean, strategy, max_steps=max_steps).holds


class Containment(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def freeze(query: CQ) -> tuple[Instance, dict[Term, Term]]:
    """Maps every distinct query variable to a distinct fresh null."""
    freezing: dict[Term, Term] = {v: LabeledNull(i) for i, v in enumerate(query.variables(), start=1)}
    return Instance(atom.substitute(freezing) for atom in query.body), freezing


def check_containment(q1: CQ,
                      q2: CQ,
                      tgds: Sequence[TGD],
                      max_steps: int = DEFAULT_MAX_STEPS,
                      egds: Sequence[EGD] = ()) -> Containment:
    """
    Decides whether `q1` is contained in `q2` under `tgds`.

    The body of `q1` is frozen and chased; containment holds iff the frozen head of `q1` is an
    answer of `q2` over the chase, with frozen nulls rigid.

    Returns:
        Containment: YES, NO (saturated without a witness) or UNKNOWN (budget exhausted).

    Raises:
        UsageError: If the arities differ.
    """
    if q1.arity != q2.arity:
        raise UsageError(f"queries {q1.name} and {q2.name} have different arities")
    if egds:
        logger.warning("containment ignores EGDs; checking under the TGDs only")

    frozen, freezing = freeze(q1)
    rules = normalize_heads(tgds, {p.name for p in q1.predicates() | q2.predicates()})
    result = run_chase(frozen, rules, ChaseOptions(mode=ChaseMode.RESTRICTED, max_steps=max_steps,
                                                   max_depth=max_steps))
    target = tuple(freezing[v] for v in q1.head)
    binding: dict[Term, Term] = {}
    consistent = all(binding.setdefault(v, t) == t for v, t in zip(q2.head, target))
    if consistent and next(homomorphisms(q2.body, result.instance, binding), None) is not None:
        return Containment.YES
    if result.status is ChaseStatus.SATURATED:
        return Containment.NO
    return Containment.UNKNOWN


def check_equivalence(q1: CQ,
                      q2: CQ,
                      tgds: Sequence[TGD],
                      max_steps: int = DEFAULT_MAX_STEPS,
                      egds: Sequence[EGD] = ()) -> Containment:
    """YES when both containments hold, NO when either fails, UNKNOWN otherwise. EGDs are ignored."""
    if egds:
        logger.warning("equivalence ignores EGDs; checking under the TGDs only")
    forward = check_containment(q1, q2, tgds, max_steps)
    if forward is Containment.NO:
        return Containment.NO
    backward = check_containment(q2, q1, tgds, max_steps)
    if backward is Containment.NO:
        return Containment.NO
    if forward is Containment.YES and backward is Containment.YES:
        return Containment.YES
    return Containment.UNKNOWN
