"""
schemas.py

pydantic models of every command's output. JSON output is `model_dump_json` of these models;
text output is built from `text_lines()`.

Terms are rendered as strings: constants by name, nulls as `_:n<k>`.
"""

from __future__ import annotations

from dataclasses import dataclass

from pydantic import BaseModel


class CommandOutput(BaseModel):
    def text_lines(self) -> list[str]:
        raise NotImplementedError


def _flag(value: bool | None) -> str:
    return "unknown" if value is None else str(value).lower()


class RuleOutput(BaseModel):
    index: int
    rule: str
    rule_class: str
    guard_class: str
    full: bool
    guard: int | None = None
    weak_guard: int | None = None


class ClassifyOutput(CommandOutput):
    overall: str
    guarded: bool
    weakly_guarded: bool
    rules: list[RuleOutput]
    affected: list[str]
    egds: int

    def text_lines(self) -> list[str]:
        lines = []
        for rule in self.rules:
            guard = f" guard={rule.guard}" if rule.guard is not None else ""
            weak = f" weak-guard={rule.weak_guard}" if rule.weak_guard is not None and rule.guard is None else ""
            shape = f" {rule.guard_class}" if rule.guard_class != rule.rule_class else ""
            lines.append(f"tgd {rule.index}: {rule.rule_class}{shape}{guard}{weak}  {rule.rule}")
        lines.append(f"overall: {self.overall}")
        lines.append(f"affected: {', '.join(self.affected) if self.affected else '(none)'}")
        if self.egds:
            lines.append(f"egds: {self.egds}")
        return lines


class ChaseOutput(CommandOutput):
    status: str
    stop_reason: str | None = None
    step_count: int
    atom_count: int
    cut_triggers: int
    forest_complete: bool
    failure: str | None = None
    steps: list[str]
    atoms: list[str]

    def text_lines(self) -> list[str]:
        lines = list(self.steps)
        status = self.status if self.stop_reason is None else f"{self.status} ({self.stop_reason})"
        lines.append(f"status: {status}")
        if self.failure:
            lines.append(f"failure: {self.failure}")
        lines.append(f"steps: {self.step_count}")
        if not self.forest_complete:
            lines.append("forest: incomplete (unguarded rules)")
        lines.append(f"atoms ({self.atom_count}):")
        lines.extend(f"  {atom}" for atom in self.atoms)
        return lines


class AnswerOutput(CommandOutput):
    query: str
    status: str
    answers: list[list[str]]
    budget_exhausted: bool
    note: str | None = None

    def text_lines(self) -> list[str]:
        lines = [f"query: {self.query}", f"status: {self.status}"]
        if self.answers and self.answers != [[]]:
            lines.append("answers:")
            lines.extend(f"  ({', '.join(row)})" for row in self.answers)
        lines.append(f"budget_exhausted: {_flag(self.budget_exhausted)}")
        if self.note:
            lines.append(f"note: {self.note}")
        return lines


class ContainOutput(CommandOutput):
    q1: str
    q2: str
    relation: str
    result: str

    def text_lines(self) -> list[str]:
        symbol = "==" if self.relation == "equivalence" else "<="
        return [f"{self.q1} {symbol} {self.q2}: {self.result}"]


class EgdCheckOutput(CommandOutput):
    outcome: str
    witness: str | None = None
    all_applications_innocuous: bool | None = None

    def text_lines(self) -> list[str]:
        lines = [f"outcome: {self.outcome}"]
        if self.witness:
            lines.append(f"witness: {self.witness}")
        lines.append(f"all applications innocuous: {_flag(self.all_applications_innocuous)}")
        return lines


class NodeOutput(BaseModel):
    id: int
    atom: str
    parent: int | None = None
    rule: int | None = None
    depth: int


class ForestOutput(CommandOutput):
    status: str
    restricted: bool
    forest_complete: bool
    nodes: list[NodeOutput]

    def text_lines(self) -> list[str]:
        lines = []
        for node in self.nodes:
            origin = "root" if node.rule is None else f"tgd {node.rule}"
            parent = "" if node.parent is None else f" <- n{node.parent}"
            lines.append(f"{'  ' * node.depth}n{node.id} {node.atom} [{origin}]{parent}")
        lines.append(f"status: {self.status}")
        if not self.forest_complete:
            lines.append("forest: incomplete (unguarded rules)")
        return lines


class StoreStatsOutput(CommandOutput):
    status: str
    entries: int
    max_cloud_size: int
    cloud_size_bound: int
    rounds: int
    steps: int
    ground_atoms: int
    blocked: int

    def text_lines(self) -> list[str]:
        return [
            f"status: {self.status}",
            f"entries: {self.entries}",
            f"max cloud size: {self.max_cloud_size} (bound {self.cloud_size_bound})",
            f"rounds: {self.rounds}",
            f"steps: {self.steps}",
            f"ground atoms: {self.ground_atoms}",
            f"blocked atoms: {self.blocked}",
        ]


class RunOutput(BaseModel):
    id: int
    command: str
    source: str
    status: str
    steps: int
    elapsed_ms: int
    timestamp: int


class HistoryOutput(CommandOutput):
    runs: list[RunOutput]

    def text_lines(self) -> list[str]:
        if not self.runs:
            return ["no runs recorded"]
        return [
            f"{run.id}  {run.timestamp}  {run.command:<12} {run.status:<18} {run.steps:>7} steps  "
            f"{run.elapsed_ms} ms  {run.source}"
            for run in self.runs
        ]


@dataclass(frozen=True)
class CommandResult:
    """What a command handler hands back to the runner. `raw_text` bypasses the formatter."""
    output: CommandOutput
    status: str
    steps: int = 0
    exit_code: int = 0
    raw_text: str | None = None
