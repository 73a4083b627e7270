"""
chase.py

TGD and EGD chase steps, fair chase runs with budgets, and the guarded chase forest.

A run keeps a FIFO queue of triggers in discovery order. Triggers are discovered semi-naively:
whenever an atom enters the instance, every rule body is matched with that atom at one body position
and the rest of the body over the whole instance. A (rule, homomorphism) pair is queued at most
once. With interleaved EGDs, the EGDs are drained to a fixpoint after each TGD step; after every
merge the instance, forest and applied-trigger keys are rewritten and the queue is rebuilt.

Every derived atom gets a forest node whose parent is the earliest node labelled with the image of
the rule's guard (weak guard for weakly guarded rules). Rules without any guard produce parentless
nodes and the result is flagged `forest_complete = False`.

Classes:
    ChaseMode, ChaseStatus: Run parameters and outcome.
    EGD: Equality-generating dependency.
    Trigger: A rule with a homomorphism of its body.
    ForestNode, ChaseForest: Guarded chase forest.
    TgdStep, EgdStep: Step-log records.
    Unified, EgdFailure: Outcomes of an EGD application.
    ChaseOptions: Budgets and modes of a run.
    ChaseResult: Final instance, forest, status and step log.
    TriggerGate: Hook for parking triggers (used by blocked saturation).
    ChaseEngine: One chase run.

Functions:
    find_triggers(rule, instance, mode): All active triggers of one rule.
    apply_tgd(rule, trigger, instance, alloc): One TGD step.
    apply_egd(egd, trigger, instance): One EGD step.
    run_chase(database, dependencies, options): A fair chase run.
    restricted_gcf(forest): Removes duplicate-labelled subtrees.
    split_ground(instance, database): Null-free part and null part.
    subtree_closure(result, atom, atoms): Closure under subtree derivations.
    violations(instance, tgds, egds): Model check.
    forest_to_dot(nodes): DOT rendering of a forest.
"""

from __future__ import annotations

import resource
from collections import deque
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, Union

from config import config
from reasoning.analysis import TGD, classify
from reasoning.default_settings import DEFAULT_MAX_DEPTH, DEFAULT_MAX_STEPS, MEMORY_CHECK_INTERVAL
from reasoning.errors import StaleTriggerError, UnsafeRuleError, UsageError
from reasoning.homomorphism import extend_match, homomorphisms
from reasoning.model import (
    Atom,
    Constant,
    Instance,
    NullAllocator,
    Ordering,
    Term,
    Variable,
    compare_terms,
)
from logging_config import get_logger

logger = get_logger(__name__)


class ChaseMode(str, Enum):
    OBLIVIOUS = "oblivious"
    RESTRICTED = "restricted"


class ChaseStatus(str, Enum):
    SATURATED = "saturated"
    BUDGET_EXHAUSTED = "budget_exhausted"
    FAILED = "failed"


@dataclass(frozen=True)
class EGD:
    """An equality-generating dependency body -> lhs = rhs."""
    body: tuple[Atom, ...]
    lhs: Variable
    rhs: Variable

    def __post_init__(self):
        if not self.body:
            raise UnsafeRuleError("an EGD needs a non-empty body")
        body_vars = set(self.body_variables)
        for var in (self.lhs, self.rhs):
            if var not in body_vars:
                raise UnsafeRuleError(f"EGD variable {var} does not occur in the body")

    @property
    def body_variables(self) -> tuple[Variable, ...]:
        return tuple(dict.fromkeys(t for a in self.body for t in a.args if isinstance(t, Variable)))

    def __str__(self) -> str:
        return f"{', '.join(str(a) for a in self.body)} -> {self.lhs} = {self.rhs}"


Dependency = Union[TGD, EGD]


@dataclass(frozen=True)
class Trigger:
    """
    A rule together with a homomorphism of its body, stored in body-variable order.

    Attributes:
        rule: The TGD or EGD.
        hom: (variable, value) pairs.
        rule_index: 1-based number of the rule among the rules of its kind.
    """
    rule: TGD | EGD
    hom: tuple[tuple[Variable, Term], ...]
    rule_index: int = 1

    @classmethod
    def build(cls, rule: TGD | EGD, mapping: dict[Term, Term], rule_index: int = 1) -> Trigger:
        return cls(rule, tuple((v, mapping[v]) for v in rule.body_variables), rule_index)

    @property
    def mapping(self) -> dict[Term, Term]:
        return dict(self.hom)

    @property
    def key(self) -> tuple[bool, int, tuple[Term, ...]]:
        return isinstance(self.rule, EGD), self.rule_index, tuple(value for _, value in self.hom)

    def body_image(self) -> tuple[Atom, ...]:
        mapping = self.mapping
        return tuple(atom.substitute(mapping) for atom in self.rule.body)

    def rewrite(self, mapping: dict[Term, Term]) -> Trigger:
        return Trigger(self.rule, tuple((v, mapping.get(t, t)) for v, t in self.hom), self.rule_index)

    def __str__(self) -> str:
        return "{" + ",".join(f"{v}->{t}" for v, t in self.hom) + "}"


@dataclass
class ForestNode:
    """
    Node of the guarded chase forest. Database atoms are roots (no rule); derived atoms record the
    rule, trigger and parent node. `generation` is the creation order.
    """
    id: int
    atom: Atom
    parent: int | None = None
    rule: TGD | None = None
    rule_index: int | None = None
    trigger: Trigger | None = None
    generation: int = 0
    depth: int = 0

    @property
    def is_root(self) -> bool:
        return self.rule is None


class ChaseForest:
    """Forest under construction; maps every atom to the earliest node labelled with it."""

    def __init__(self):
        self.nodes: list[ForestNode] = []
        self._first: dict[Atom, int] = {}

    @classmethod
    def from_instance(cls, instance: Instance) -> ChaseForest:
        forest = cls()
        for atom in instance:
            forest.add_root(atom)
        return forest

    def first_node(self, atom: Atom) -> ForestNode | None:
        node_id = self._first.get(atom)
        return None if node_id is None else self.nodes[node_id]

    def add_root(self, atom: Atom) -> ForestNode:
        return self._add(ForestNode(len(self.nodes), atom, generation=len(self.nodes)))

    def child_depth(self, parent_atom: Atom | None, level: int) -> int:
        parent = self.first_node(parent_atom) if parent_atom is not None else None
        return parent.depth + 1 if parent is not None else level

    def add_derived(self, atom: Atom, parent_atom: Atom | None, rule: TGD, rule_index: int,
                    trigger: Trigger, level: int) -> ForestNode:
        parent = self.first_node(parent_atom) if parent_atom is not None else None
        node = ForestNode(
            id=len(self.nodes),
            atom=atom,
            parent=parent.id if parent is not None else None,
            rule=rule,
            rule_index=rule_index,
            trigger=trigger,
            generation=len(self.nodes),
            depth=parent.depth + 1 if parent is not None else level,
        )
        return self._add(node)

    def _add(self, node: ForestNode) -> ForestNode:
        self.nodes.append(node)
        self._first.setdefault(node.atom, node.id)
        return node

    def rewrite(self, mapping: dict[Term, Term]) -> None:
        self._first.clear()
        for node in self.nodes:
            node.atom = node.atom.substitute(mapping)
            if node.trigger is not None:
                node.trigger = node.trigger.rewrite(mapping)
            self._first.setdefault(node.atom, node.id)


@dataclass(frozen=True)
class TgdStep:
    atom: Atom
    rule_index: int
    trigger: Trigger
    node_id: int
    new: bool

    def __str__(self) -> str:
        return f"+ {self.atom} BY {self.rule_index} WITH {self.trigger}"


@dataclass(frozen=True)
class EgdStep:
    kept: Term
    replaced: Term
    rule_index: int
    innocuous: bool
    removed: tuple[Atom, ...]

    def __str__(self) -> str:
        suffix = " innocuous" if self.innocuous else ""
        return f"= {self.kept}<-{self.replaced} BY {self.rule_index}{suffix}"


StepRecord = Union[TgdStep, EgdStep]


@dataclass(frozen=True)
class Unified:
    instance: Instance
    kept: Term
    replaced: Term
    innocuous: bool
    removed: tuple[Atom, ...]


@dataclass(frozen=True)
class EgdFailure:
    egd: EGD
    trigger: Trigger


EgdOutcome = Union[Unified, EgdFailure]


@dataclass(frozen=True)
class ChaseOptions:
    """
    Attributes:
        mode (ChaseMode): Oblivious or restricted applicability.
        max_steps (int): Budget on TGD plus EGD steps.
        max_depth (int): Triggers whose node would be deeper are dropped.
        egd_interleave (bool): Drain EGDs after each TGD step; otherwise EGDs are ignored.
        memory_cap_mb (int | None): Soft cap on peak memory.
    """
    mode: ChaseMode = ChaseMode.RESTRICTED
    max_steps: int = DEFAULT_MAX_STEPS
    max_depth: int = DEFAULT_MAX_DEPTH
    egd_interleave: bool = True
    memory_cap_mb: int | None = field(default_factory=lambda: config.MAX_MEMORY_MB)

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_depth <= 0:
            raise UsageError("chase budgets must be positive")
        object.__setattr__(self, "mode", ChaseMode(self.mode))


@dataclass(frozen=True)
class ChaseResult:
    """
    Outcome of a chase run.

    Attributes:
        instance (Instance): Final instance.
        forest (tuple[ForestNode, ...]): Guarded chase forest, in generation order.
        status (ChaseStatus): Saturated, budget exhausted or failed.
        steps (tuple[StepRecord, ...]): Step log.
        failure_witness (tuple[EGD, Trigger] | None): EGD trigger equating two constants.
        database (Instance): The input database.
        tgds (tuple[TGD, ...]): TGDs of the run.
        egds (tuple[EGD, ...]): EGDs of the run.
        forest_complete (bool): False when an unguarded rule produced parentless nodes.
        cut_triggers (int): Triggers dropped by the depth budget.
        stop_reason (str | None): "max_steps", "max_depth" or "memory" on budget exhaustion.
    """
    instance: Instance
    forest: tuple[ForestNode, ...]
    status: ChaseStatus
    steps: tuple[StepRecord, ...]
    failure_witness: tuple[EGD, Trigger] | None
    database: Instance
    tgds: tuple[TGD, ...]
    egds: tuple[EGD, ...]
    forest_complete: bool = True
    cut_triggers: int = 0
    stop_reason: str | None = None

    @property
    def tgd_steps(self) -> list[TgdStep]:
        return [s for s in self.steps if isinstance(s, TgdStep)]

    @property
    def egd_steps(self) -> list[EgdStep]:
        return [s for s in self.steps if isinstance(s, EgdStep)]

    def node_of(self, atom: Atom) -> ForestNode | None:
        """Earliest forest node labelled with `atom`."""
        return next((node for node in self.forest if node.atom == atom), None)

    def children(self) -> dict[int, list[int]]:
        result: dict[int, list[int]] = {}
        for node in self.forest:
            if node.parent is not None:
                result.setdefault(node.parent, []).append(node.id)
        return result

    def subtree_nodes(self, node_id: int) -> list[ForestNode]:
        children = self.children()
        collected, stack = [], [node_id]
        while stack:
            current = stack.pop()
            collected.append(self.forest[current])
            stack.extend(reversed(children.get(current, [])))
        return sorted(collected, key=lambda n: n.generation)

    def subtree_atoms(self, atom: Atom) -> set[Atom]:
        node = self.node_of(atom)
        if node is None:
            raise UsageError(f"{atom} is not in the chase forest")
        return {n.atom for n in self.subtree_nodes(node.id)}

    def atoms_by_depth(self) -> dict[int, list[Atom]]:
        result: dict[int, list[Atom]] = {}
        for node in self.forest:
            result.setdefault(node.depth, []).append(node.atom)
        return result


def head_satisfied(rule: TGD, mapping: dict[Term, Term], instance: Instance) -> bool:
    """True when the frontier part of `mapping` extends to a map of the head into `instance`."""
    frontier = {v: mapping[v] for v in rule.frontier}
    return next(homomorphisms(rule.head, instance, frontier), None) is not None


def _generation_key(trigger: Trigger, order: dict[Atom, int]) -> tuple:
    return tuple(order[a] for a in trigger.body_image()), trigger.key


def find_triggers(rule: TGD | EGD,
                  instance: Instance,
                  mode: ChaseMode = ChaseMode.OBLIVIOUS,
                  rule_index: int = 1) -> list[Trigger]:
    """
    Lists the triggers of `rule` on `instance`.

    Oblivious mode returns every homomorphism of the body. Restricted mode (TGDs only) drops
    triggers whose head is already satisfied. EGD triggers are those equating distinct values.

    Args:
        rule (TGD | EGD): The rule.
        instance (Instance): The instance.
        mode (ChaseMode): Applicability mode.
        rule_index (int): Number recorded in the triggers.

    Returns:
        list[Trigger]: Triggers ordered by the generation order of their body images.

    Raises:
        UsageError: Restricted mode requested for an EGD.
    """
    mode = ChaseMode(mode)
    if isinstance(rule, EGD) and mode is ChaseMode.RESTRICTED:
        raise UsageError("restricted applicability is only defined for TGDs")

    triggers: dict[tuple, Trigger] = {}
    for mapping in homomorphisms(rule.body, instance):
        if isinstance(rule, EGD):
            if mapping[rule.lhs] == mapping[rule.rhs]:
                continue
        elif mode is ChaseMode.RESTRICTED and head_satisfied(rule, mapping, instance):
            continue
        trigger = Trigger.build(rule, mapping, rule_index)
        triggers.setdefault(trigger.key, trigger)

    order = {atom: i for i, atom in enumerate(instance)}
    return sorted(triggers.values(), key=lambda t: _generation_key(t, order))


def _head_image(rule: TGD, trigger: Trigger, alloc: NullAllocator) -> Atom:
    mapping = trigger.mapping
    for var in rule.existentials:
        mapping[var] = alloc.fresh()
    return rule.head[0].substitute(mapping)


def _check_live(trigger: Trigger, instance: Instance) -> tuple[Atom, ...]:
    image = trigger.body_image()
    if any(atom not in instance for atom in image):
        raise StaleTriggerError(f"body image of {trigger} is no longer in the instance")
    return image


def apply_tgd(rule: TGD,
              trigger: Trigger,
              instance: Instance,
              alloc: NullAllocator,
              forest: ChaseForest | None = None,
              guard_index: int | None = None) -> tuple[Instance, Atom, ForestNode]:
    """
    Applies one TGD trigger.

    Existential variables receive fresh nulls, newer than every null of `instance`. The head image
    is added to `instance` (in place) and a forest node is created whose parent is the earliest node
    labelled with the guard image.

    Args:
        rule (TGD): A single-head TGD.
        trigger (Trigger): A trigger of `rule` on `instance`.
        instance (Instance): The instance; extended in place.
        alloc (NullAllocator): Null source.
        forest (ChaseForest | None): Forest to extend; a forest of roots for `instance` otherwise.
        guard_index (int | None): Body index of the guard; classified from the rule alone if None.

    Returns:
        tuple[Instance, Atom, ForestNode]: The instance, the head image and its node.

    Raises:
        UsageError: If the rule has several head atoms.
        StaleTriggerError: If the body image is not in `instance`.
    """
    if not rule.is_single_head:
        raise UsageError("normalize heads before chasing")
    image = _check_live(trigger, instance)
    if forest is None:
        forest = ChaseForest.from_instance(instance)
    alloc.next_index = max(alloc.next_index, instance.max_null_index() + 1)

    guard = guard_index if guard_index is not None else classify([rule]).per_rule[0].forest_guard
    atom = _head_image(rule, trigger, alloc)
    instance.add(atom)
    node = forest.add_derived(
        atom, image[guard] if guard is not None else None, rule, trigger.rule_index, trigger, level=1
    )
    return instance, atom, node


def apply_egd(egd: EGD, trigger: Trigger, instance: Instance) -> EgdOutcome:
    """
    Applies one EGD trigger.

    Two distinct constants make the chase fail. Otherwise the larger value (in the term order) is
    replaced by the smaller one everywhere. The application is innocuous when the rewritten instance
    is a proper subset of `instance`.

    Args:
        egd (EGD): The EGD.
        trigger (Trigger): A trigger of `egd` on `instance` equating distinct values.
        instance (Instance): The instance; left untouched.

    Returns:
        EgdOutcome: `Unified` with the rewritten instance, or `EgdFailure`.
    """
    _check_live(trigger, instance)
    mapping = trigger.mapping
    left, right = mapping[egd.lhs], mapping[egd.rhs]
    if left == right:
        raise UsageError(f"{trigger} does not violate the EGD")
    if isinstance(left, Constant) and isinstance(right, Constant):
        return EgdFailure(egd, trigger)

    if compare_terms(left, right) is Ordering.LESS:
        kept, replaced = left, right
    else:
        kept, replaced = right, left
    rewritten = instance.substitute({replaced: kept})
    removed = tuple(atom for atom in instance if atom not in rewritten)
    innocuous = len(rewritten) < len(instance) and all(atom in instance for atom in rewritten)
    return Unified(rewritten, kept, replaced, innocuous, removed)


class TriggerGate(Protocol):
    """Hook that may park triggers and release them when the queue runs dry."""

    def on_new_atom(self, atom: Atom) -> None: ...

    def admit(self, trigger: Trigger, guard_atom: Atom | None) -> bool: ...

    def release(self) -> list[Trigger]: ...


class ChaseEngine:
    """
    One chase run over a database and single-head dependencies.

    Attributes:
        instance (Instance): Current instance.
        forest (ChaseForest): Forest built alongside.
        steps (list[StepRecord]): Step log.
    """

    def __init__(self,
                 database: Instance,
                 tgds: Sequence[TGD],
                 egds: Sequence[EGD] = (),
                 options: ChaseOptions | None = None,
                 on_step: Callable[[StepRecord], None] | None = None,
                 gate: TriggerGate | None = None):
        if any(not rule.is_single_head for rule in tgds):
            raise UsageError("normalize heads before chasing")
        self.database = database.copy()
        self.tgds = tuple(tgds)
        self.egds = tuple(egds)
        self.options = options or ChaseOptions()
        self.on_step = on_step
        self.gate = gate

        self.guards = [report.forest_guard for report in classify(self.tgds).per_rule]
        self.instance = Instance()
        self.forest = ChaseForest()
        self.alloc = NullAllocator.for_instance(database)
        self.steps: list[StepRecord] = []

        self._queue: deque[Trigger] = deque()
        self._known: set[tuple] = set()
        self._applied: set[tuple] = set()
        self._levels: dict[Atom, int] = {}
        self._status: ChaseStatus | None = None
        self._stop_reason: str | None = None
        self._witness: tuple[EGD, Trigger] | None = None
        self._cut = 0

    @property
    def use_egds(self) -> bool:
        return self.options.egd_interleave and bool(self.egds)

    def guard_atom(self, trigger: Trigger) -> Atom | None:
        guard = self.guards[trigger.rule_index - 1]
        return None if guard is None else trigger.body_image()[guard]

    def _enqueue(self, trigger: Trigger) -> None:
        if trigger.key in self._known:
            return
        self._known.add(trigger.key)
        if self.gate is not None and not self.gate.admit(trigger, self.guard_atom(trigger)):
            return
        self._queue.append(trigger)

    def _discover(self, atom: Atom) -> None:
        for index, rule in enumerate(self.tgds, start=1):
            for trigger in self._triggers_with(rule, index, atom):
                self._enqueue(trigger)

    def _triggers_with(self, rule: TGD | EGD, index: int, atom: Atom) -> Iterator[Trigger]:
        for position, pattern in enumerate(rule.body):
            seed = extend_match(pattern, atom, {})
            if seed is None:
                continue
            rest = rule.body[:position] + rule.body[position + 1:]
            for mapping in homomorphisms(rest, self.instance, seed):
                yield Trigger.build(rule, mapping, index)

    def _add_atom(self, atom: Atom) -> bool:
        if not self.instance.add(atom):
            return False
        if self.gate is not None:
            self.gate.on_new_atom(atom)
        self._discover(atom)
        return True

    def _stop(self, status: ChaseStatus, reason: str | None = None) -> None:
        self._status = status
        self._stop_reason = reason

    def _memory_exceeded(self) -> bool:
        cap = self.options.memory_cap_mb
        if cap is None or len(self.steps) % MEMORY_CHECK_INTERVAL:
            return False
        peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
        return peak_mb > cap

    def _record(self, step: StepRecord) -> None:
        self.steps.append(step)
        logger.debug(str(step))
        if self.on_step is not None:
            self.on_step(step)

    def _fire(self, trigger: Trigger) -> Atom | None:
        rule = trigger.rule
        image = _check_live(trigger, self.instance)
        level = 1 + max(self._levels.get(a, 0) for a in image)
        atom = _head_image(rule, trigger, self.alloc)
        guard = self.guards[trigger.rule_index - 1]
        node = self.forest.add_derived(
            atom, image[guard] if guard is not None else None, rule, trigger.rule_index, trigger, level
        )
        self._applied.add(trigger.key)
        self._levels.setdefault(atom, level)
        is_new = atom not in self.instance
        self._record(TgdStep(atom, trigger.rule_index, trigger, node.id, is_new))
        if is_new:
            self._add_atom(atom)
            return atom
        return None

    def _first_egd_violation(self, seed: Atom | None) -> tuple[EGD, Trigger] | None:
        for index, egd in enumerate(self.egds, start=1):
            if seed is None:
                candidates = (Trigger.build(egd, m, index) for m in homomorphisms(egd.body, self.instance))
            else:
                candidates = self._triggers_with(egd, index, seed)
            for trigger in candidates:
                mapping = trigger.mapping
                if mapping[egd.lhs] != mapping[egd.rhs]:
                    return egd, trigger
        return None

    def _merge(self, outcome: Unified) -> None:
        mapping = {outcome.replaced: outcome.kept}
        self.instance = outcome.instance
        self.forest.rewrite(mapping)
        self._applied = {
            (is_egd, index, tuple(mapping.get(v, v) for v in values))
            for is_egd, index, values in self._applied
        }
        levels: dict[Atom, int] = {}
        for atom, level in self._levels.items():
            rewritten = atom.substitute(mapping)
            levels[rewritten] = min(level, levels.get(rewritten, level))
        self._levels = levels

        self._queue.clear()
        self._known = set(self._applied)
        for atom in list(self.instance):
            self._discover(atom)

    def _drain_egds(self, seed: Atom | None) -> None:
        while True:
            violation = self._first_egd_violation(seed)
            if violation is None:
                return
            if len(self.steps) >= self.options.max_steps:
                self._stop(ChaseStatus.BUDGET_EXHAUSTED, "max_steps")
                return
            egd, trigger = violation
            outcome = apply_egd(egd, trigger, self.instance)
            if isinstance(outcome, EgdFailure):
                self._witness = (egd, trigger)
                self._stop(ChaseStatus.FAILED)
                logger.info(f"chase failed: EGD {trigger.rule_index} equates constants {trigger}")
                return
            self._merge(outcome)
            self._record(EgdStep(outcome.kept, outcome.replaced, trigger.rule_index,
                                 outcome.innocuous, outcome.removed))
            seed = None

    def _is_applicable(self, trigger: Trigger) -> bool:
        image = trigger.body_image()
        if any(atom not in self.instance for atom in image):
            return False
        if self.options.mode is ChaseMode.RESTRICTED:
            return not head_satisfied(trigger.rule, trigger.mapping, self.instance)
        return True

    def _next_trigger(self) -> Trigger | None:
        while True:
            if not self._queue and self.gate is not None:
                self._queue.extend(self.gate.release())
            if not self._queue:
                return None
            trigger = self._queue.popleft()
            if not self._is_applicable(trigger):
                continue
            level = 1 + max(self._levels.get(a, 0) for a in trigger.body_image())
            depth = self.forest.child_depth(self.guard_atom(trigger), level)
            if depth > self.options.max_depth:
                self._cut += 1
                continue
            return trigger

    def run(self) -> ChaseResult:
        """
        Runs the chase to saturation, failure or budget exhaustion.

        Returns:
            ChaseResult: The frozen outcome.
        """
        logger.info(
            f"chase started: {len(self.database)} facts, {len(self.tgds)} TGDs, {len(self.egds)} EGDs, "
            f"mode={self.options.mode.value}"
        )
        for atom in self.database:
            if self.instance.add(atom):
                self.forest.add_root(atom)
                self._levels[atom] = 0
                if self.gate is not None:
                    self.gate.on_new_atom(atom)
        for atom in list(self.instance):
            self._discover(atom)
        if self.use_egds:
            self._drain_egds(None)

        while self._status is None:
            trigger = self._next_trigger()
            if trigger is None:
                break
            if len(self.steps) >= self.options.max_steps:
                self._stop(ChaseStatus.BUDGET_EXHAUSTED, "max_steps")
                break
            if self._memory_exceeded():
                logger.warning(f"memory cap of {self.options.memory_cap_mb} MB reached, stopping the chase")
                self._stop(ChaseStatus.BUDGET_EXHAUSTED, "memory")
                break
            new_atom = self._fire(trigger)
            if new_atom is not None and self.use_egds:
                self._drain_egds(new_atom)

        if self._status is None:
            if self._cut:
                self._stop(ChaseStatus.BUDGET_EXHAUSTED, "max_depth")
            else:
                self._stop(ChaseStatus.SATURATED)
        if self._status is ChaseStatus.BUDGET_EXHAUSTED:
            logger.warning(f"chase budget exhausted ({self._stop_reason}) after {len(self.steps)} steps")
        logger.info(f"chase finished: {self._status.value}, {len(self.steps)} steps, {len(self.instance)} atoms")

        return ChaseResult(
            instance=self.instance,
            forest=tuple(self.forest.nodes),
            status=self._status,
            steps=tuple(self.steps),
            failure_witness=self._witness,
            database=self.database,
            tgds=self.tgds,
            egds=self.egds,
            forest_complete=all(g is not None for g in self.guards),
            cut_triggers=self._cut,
            stop_reason=self._stop_reason,
        )


def split_dependencies(dependencies: Iterable[Dependency]) -> tuple[list[TGD], list[EGD]]:
    tgds: list[TGD] = []
    egds: list[EGD] = []
    for rule in dependencies:
        (egds if isinstance(rule, EGD) else tgds).append(rule)
    return tgds, egds


def run_chase(database: Instance,
              dependencies: Iterable[Dependency],
              options: ChaseOptions | None = None,
              on_step: Callable[[StepRecord], None] | None = None) -> ChaseResult:
    """
    Runs a fair chase of `database` under `dependencies`.

    Args:
        database (Instance): Input database (nulls allowed, e.g. frozen queries).
        dependencies (Iterable[Dependency]): Single-head TGDs and EGDs, numbered per kind in order.
        options (ChaseOptions | None): Budgets and modes; defaults when None.
        on_step (Callable | None): Called after every step; may raise to abort the run.

    Returns:
        ChaseResult: Final instance, forest, status and step log.
    """
    tgds, egds = split_dependencies(dependencies)
    return ChaseEngine(database, tgds, egds, options, on_step).run()


def restricted_gcf(forest: Sequence[ForestNode]) -> list[ForestNode]:
    """
    Removes every subtree rooted at a node whose atom labels an earlier node.

    Args:
        forest (Sequence[ForestNode]): Forest of a chase run.

    Returns:
        list[ForestNode]: Surviving nodes in generation order; each atom labels at most one node.
    """
    seen: set[Atom] = set()
    removed: set[int] = set()
    kept: list[ForestNode] = []
    for node in sorted(forest, key=lambda n: n.generation):
        if node.parent is not None and node.parent in removed or node.atom in seen:
            removed.add(node.id)
            continue
        seen.add(node.atom)
        kept.append(node)
    return kept


def split_ground(instance: Instance, database: Instance) -> tuple[Instance, Instance]:
    """
    Splits `instance` into atoms over dom(database) and the rest.

    Returns:
        tuple[Instance, Instance]: (ground part, null part).
    """
    domain = database.domain()
    ground, rest = Instance(), Instance()
    for atom in instance:
        (ground if atom.dom() <= domain else rest).add(atom)
    return ground, rest


def subtree_closure(result: ChaseResult, atom: Atom, atoms: Iterable[Atom]) -> set[Atom]:
    """
    Closes `atoms ∪ {atom}` under the recorded derivations of the nodes below `atom`.

    A node of the subtree contributes its atom once its whole body image is in the closure.

    Raises:
        UsageError: If `atom` is not in the forest.
    """
    node = result.node_of(atom)
    if node is None:
        raise UsageError(f"{atom} is not in the chase forest")
    derivations = [
        (n.atom, set(n.trigger.body_image()))
        for n in result.subtree_nodes(node.id)
        if n.trigger is not None and n.id != node.id
    ]
    closure = set(atoms) | {atom}
    changed = True
    while changed:
        changed = False
        for derived, body in derivations:
            if derived not in closure and body <= closure:
                closure.add(derived)
                changed = True
    return closure


def violations(instance: Instance,
               tgds: Sequence[TGD],
               egds: Sequence[EGD] = ()) -> list[tuple[Dependency, dict[Term, Term]]]:
    """
    Lists the dependencies `instance` does not satisfy, with a witnessing homomorphism each.
    """
    found: list[tuple[Dependency, dict[Term, Term]]] = []
    for rule in tgds:
        for mapping in homomorphisms(rule.body, instance):
            if not head_satisfied(rule, mapping, instance):
                found.append((rule, mapping))
    for egd in egds:
        for mapping in homomorphisms(egd.body, instance):
            if mapping[egd.lhs] != mapping[egd.rhs]:
                found.append((egd, mapping))
    return found


def _dot_label(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def forest_to_dot(nodes: Sequence[ForestNode], name: str = "forest") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    kept = {node.id for node in nodes}
    for node in nodes:
        label = _dot_label(str(node.atom))
        if node.rule_index is not None:
            label += f"\\n[tgd {node.rule_index}]"
        lines.append(f'  n{node.id} [label="{label}"];')
    for node in nodes:
        if node.parent is not None and node.parent in kept:
            lines.append(f"  n{node.parent} -> n{node.id};")
    lines.append("}")
    return "\n".join(lines) + "\n"
