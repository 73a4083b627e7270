"""
analysis.py

Static analysis of TGD sets: affected positions, guardedness classification and head
normalization.

A position p[k] is affected when some chase may put a null there: existential head positions are
affected, and a head position receives a variable that only occurs at affected body positions
becomes affected too.

A rule is guarded when one body atom contains every body variable, and weakly guarded when one body
atom contains every variable whose body occurrences are all at affected positions. The first
qualifying atom in body order is chosen, so forests are reproducible.

Classes:
    TGD: Tuple-generating dependency.
    Position: Argument slot of a predicate.
    RuleClass: Per-rule and overall labels.
    RuleReport: Classification of one rule.
    Classification: Classification of a rule set.

Functions:
    affected_positions(tgds): Least fixpoint of affected positions.
    classify(tgds): Per-rule classes, overall class and affected positions.
    normalize_heads(tgds, reserved_names): Rewrites multi-head rules into single-head rules.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from reasoning.errors import UnsafeRuleError, UsageError
from reasoning.model import Atom, Constant, Predicate, Variable
from logging_config import get_logger

logger = get_logger(__name__)


def _ordered_variables(atoms: Iterable[Atom]) -> tuple[Variable, ...]:
    return tuple(dict.fromkeys(t for atom in atoms for t in atom.args if isinstance(t, Variable)))


def _ordered_constants(atoms: Iterable[Atom]) -> tuple[Constant, ...]:
    return tuple(dict.fromkeys(t for atom in atoms for t in atom.args if isinstance(t, Constant)))


@dataclass(frozen=True)
class TGD:
    """
    A tuple-generating dependency body -> exists Z: head.

    `existentials` is normalized to head-occurrence order. Construction fails with UnsafeRuleError
    when a head variable is neither bound by the body nor declared existential, when a head
    constant is missing from the body, or when an existential variable also occurs in the body.
    """
    body: tuple[Atom, ...]
    head: tuple[Atom, ...]
    existentials: tuple[Variable, ...] = ()

    def __post_init__(self):
        if not self.body:
            raise UnsafeRuleError("a TGD needs a non-empty body")
        if not self.head:
            raise UnsafeRuleError("a TGD needs a non-empty head")

        body_vars = set(_ordered_variables(self.body))
        head_vars = _ordered_variables(self.head)
        declared = set(self.existentials)

        for var in declared:
            if var in body_vars:
                raise UnsafeRuleError(f"existential variable {var} also occurs in the body")
            if var not in head_vars:
                raise UnsafeRuleError(f"existential variable {var} does not occur in the head")
        for var in head_vars:
            if var not in body_vars and var not in declared:
                raise UnsafeRuleError(f"head variable {var} is neither in the body nor existential")
        body_consts = set(_ordered_constants(self.body))
        for const in _ordered_constants(self.head):
            if const not in body_consts:
                raise UnsafeRuleError(f"head constant {const} does not occur in the body")

        object.__setattr__(self, "existentials", tuple(v for v in head_vars if v in declared))

    @property
    def body_variables(self) -> tuple[Variable, ...]:
        return _ordered_variables(self.body)

    @property
    def head_variables(self) -> tuple[Variable, ...]:
        return _ordered_variables(self.head)

    @property
    def frontier(self) -> tuple[Variable, ...]:
        """Body variables that also occur in the head."""
        head_vars = set(self.head_variables)
        return tuple(v for v in self.body_variables if v in head_vars)

    @property
    def is_full(self) -> bool:
        return not self.existentials

    @property
    def is_single_head(self) -> bool:
        return len(self.head) == 1

    def predicates(self) -> set[Predicate]:
        return {atom.predicate for atom in self.body + self.head}

    def __str__(self) -> str:
        body = ", ".join(str(a) for a in self.body)
        head = ", ".join(str(a) for a in self.head)
        if self.existentials:
            head = f"exists {', '.join(str(v) for v in self.existentials)}: {head}"
        return f"{body} -> {head}"


@dataclass(frozen=True)
class Position:
    """Argument slot `predicate[slot]`, 1-based."""
    predicate: Predicate
    slot: int

    def __post_init__(self):
        if not 1 <= self.slot <= self.predicate.arity:
            raise UsageError(f"slot {self.slot} outside {self.predicate}")

    @property
    def sort_key(self) -> tuple[str, int, int]:
        return self.predicate.name, self.predicate.arity, self.slot

    def __str__(self) -> str:
        return f"{self.predicate.name}[{self.slot}]"


class RuleClass(str, Enum):
    """
    Labels ordered from strongest to weakest. A rule without existential variables is FULL; its
    guard class is still one of the other four.
    """
    FULL = "full"
    LINEAR = "linear"
    GUARDED = "guarded"
    WEAKLY_GUARDED = "weakly-guarded"
    UNGUARDED = "unguarded"


_LADDER = [RuleClass.FULL, RuleClass.LINEAR, RuleClass.GUARDED, RuleClass.WEAKLY_GUARDED, RuleClass.UNGUARDED]


@dataclass(frozen=True)
class RuleReport:
    """
    Classification of one rule.

    Attributes:
        rule_class (RuleClass): FULL for rules without existential variables, else `guard_class`.
        guard_class (RuleClass): Strongest of LINEAR, GUARDED, WEAKLY_GUARDED, UNGUARDED.
        full (bool): The rule has no existential variables.
        guard_index (int | None): 0-based body index of the guard.
        weak_guard_index (int | None): 0-based body index of the weak guard; set whenever a guard is.
    """
    rule_class: RuleClass
    guard_class: RuleClass
    full: bool
    guard_index: int | None
    weak_guard_index: int | None

    @property
    def forest_guard(self) -> int | None:
        """Body atom whose image becomes the parent node in the chase forest."""
        return self.guard_index if self.guard_index is not None else self.weak_guard_index


@dataclass(frozen=True)
class Classification:
    per_rule: tuple[RuleReport, ...]
    overall: RuleClass
    affected: frozenset[Position]

    @property
    def is_linear(self) -> bool:
        return all(r.guard_class is RuleClass.LINEAR for r in self.per_rule)

    @property
    def is_guarded(self) -> bool:
        return all(r.guard_index is not None for r in self.per_rule)

    @property
    def is_weakly_guarded(self) -> bool:
        return all(r.weak_guard_index is not None for r in self.per_rule)

    @property
    def supports_blocking(self) -> bool:
        """Blocked saturation is complete for these sets."""
        return self.overall is RuleClass.FULL or self.is_weakly_guarded


def _body_positions(rule: TGD) -> dict[Variable, list[Position]]:
    occurrences: dict[Variable, list[Position]] = {}
    for atom in rule.body:
        for slot, term in enumerate(atom.args, start=1):
            if isinstance(term, Variable):
                occurrences.setdefault(term, []).append(Position(atom.predicate, slot))
    return occurrences


def affected_positions(tgds: Sequence[TGD]) -> frozenset[Position]:
    """
    Computes the affected positions of a TGD set. Multi-head rules are handled per head atom.

    Args:
        tgds (Sequence[TGD]): The rules.

    Returns:
        frozenset[Position]: Positions that may hold a null in some chase.
    """
    affected: set[Position] = set()
    for rule in tgds:
        existentials = set(rule.existentials)
        for atom in rule.head:
            for slot, term in enumerate(atom.args, start=1):
                if term in existentials:
                    affected.add(Position(atom.predicate, slot))

    occurrences = [_body_positions(rule) for rule in tgds]
    changed = True
    while changed:
        changed = False
        for rule, body_positions in zip(tgds, occurrences):
            for atom in rule.head:
                for slot, term in enumerate(atom.args, start=1):
                    if not isinstance(term, Variable) or term not in body_positions:
                        continue
                    position = Position(atom.predicate, slot)
                    if position in affected:
                        continue
                    if all(p in affected for p in body_positions[term]):
                        affected.add(position)
                        changed = True
    return frozenset(affected)


def _classify_rule(rule: TGD, affected: frozenset[Position]) -> RuleReport:
    body_positions = _body_positions(rule)
    universal = set(body_positions)
    needs_cover = {v for v, positions in body_positions.items() if all(p in affected for p in positions)}

    guard_index = next(
        (i for i, atom in enumerate(rule.body) if universal <= set(atom.args)), None
    )
    weak_guard_index = next(
        (i for i, atom in enumerate(rule.body) if needs_cover <= set(atom.args)), None
    )

    if len(rule.body) == 1:
        guard_class = RuleClass.LINEAR
    elif guard_index is not None:
        guard_class = RuleClass.GUARDED
    elif weak_guard_index is not None:
        guard_class = RuleClass.WEAKLY_GUARDED
    else:
        guard_class = RuleClass.UNGUARDED
    rule_class = RuleClass.FULL if rule.is_full else guard_class
    return RuleReport(rule_class, guard_class, rule.is_full, guard_index, weak_guard_index)


def classify(tgds: Sequence[TGD]) -> Classification:
    """
    Classifies every rule and the set as a whole.

    The overall class is FULL when no rule has existential variables; otherwise it is the weakest
    per-rule guard class. A set is weakly guarded iff every rule has a weak guard with respect to the
    affected positions of the whole set.

    Args:
        tgds (Sequence[TGD]): The rules.

    Returns:
        Classification: Per-rule reports aligned with `tgds`, overall class, affected positions.
    """
    affected = affected_positions(tgds)
    reports = tuple(_classify_rule(rule, affected) for rule in tgds)
    if all(rule.is_full for rule in tgds):
        overall = RuleClass.FULL
    else:
        overall = max((r.guard_class for r in reports), key=_LADDER.index)
    logger.debug(f"classified {len(tgds)} rules as {overall.value}")
    return Classification(reports, overall, affected)


def _fresh_name(base: str, used: set[str]) -> str:
    counter = 1
    while f"{base}{counter}" in used:
        counter += 1
    name = f"{base}{counter}"
    used.add(name)
    return name


def normalize_heads(tgds: Sequence[TGD], reserved_names: Iterable[str] = ()) -> list[TGD]:
    """
    Rewrites rules so that every head has a single atom.

    Full multi-head rules are split per head atom. Multi-head rules with existential variables go
    through a fresh predicate V: body -> exists Z: V(Y, c), then V(Y, c) -> head_i for every head
    atom, where Y are the head variables and c the head constants.

    Args:
        tgds (Sequence[TGD]): The rules.
        reserved_names (Iterable[str]): Predicate names the fresh predicates must avoid
            (e.g. those of the database and queries).

    Returns:
        list[TGD]: Single-head rules; single-head input rules are kept as they are.
    """
    used = set(reserved_names)
    for rule in tgds:
        used.update(p.name for p in rule.predicates())

    result: list[TGD] = []
    for rule in tgds:
        if rule.is_single_head:
            result.append(rule)
        elif rule.is_full:
            result.extend(TGD(rule.body, (atom,)) for atom in rule.head)
        else:
            args = rule.head_variables + _ordered_constants(rule.head)
            bridge = Atom(Predicate(_fresh_name("v", used), len(args)), args)
            result.append(TGD(rule.body, (bridge,), rule.existentials))
            result.extend(TGD((bridge,), (atom,)) for atom in rule.head)
    return result
