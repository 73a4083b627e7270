"""
parser.py

Parsing and rendering of programs: facts, TGDs, EGDs and named conjunctive queries.

The text is parsed with parglare into raw statements, which are then checked (arity consistency,
rule safety, null placement) and turned into model objects. Errors carry the line and column of
the offending atom or statement.

Classes:
    Program: Database, dependencies and queries of one problem instance.

Functions:
    parse_program(text, allow_nulls): Parses a whole program.
    parse_atom(text, allow_nulls): Parses one ground atom.
    render_program(program): Renders a program back to text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from parglare import Grammar, ParseError, Parser

from program_io.grammar import PROGRAM_GRAMMAR
from reasoning.analysis import TGD
from reasoning.chase import EGD
from reasoning.errors import ArityMismatchError, ProgramSyntaxError, UnsafeRuleError, UsageError
from reasoning.model import Atom, Constant, Instance, LabeledNull, Predicate, Term, Variable
from reasoning.query import CQ
from logging_config import get_logger

logger = get_logger(__name__)


@dataclass
class Program:
    """
    Attributes:
        facts (Instance): The database.
        tgds (list[TGD]): TGDs in declaration order.
        egds (list[EGD]): EGDs in declaration order.
        queries (dict[str, CQ]): Queries by name, in declaration order.
    """
    facts: Instance = field(default_factory=Instance)
    tgds: list[TGD] = field(default_factory=list)
    egds: list[EGD] = field(default_factory=list)
    queries: dict[str, CQ] = field(default_factory=dict)

    def query(self, name: str) -> CQ:
        try:
            return self.queries[name]
        except KeyError:
            known = ", ".join(self.queries) or "none"
            raise UsageError(f"no query named {name!r} (known: {known})") from None

    def schema(self) -> set[Predicate]:
        predicates = self.facts.predicates()
        for rule in self.tgds:
            predicates |= rule.predicates()
        for egd in self.egds:
            predicates |= {atom.predicate for atom in egd.body}
        for query in self.queries.values():
            predicates |= query.predicates()
        return predicates

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return (self.facts == other.facts and self.tgds == other.tgds and self.egds == other.egds
                and list(self.queries.items()) == list(other.queries.items()))


class _RawAtom(NamedTuple):
    name: str
    args: tuple[str, ...]
    position: int


class _RawStatement(NamedTuple):
    kind: str
    position: int
    parts: tuple


def _single(_, nodes):
    return nodes[0]


def _atom(context, nodes):
    args = tuple(nodes[2]) if len(nodes) == 4 else ()
    return _RawAtom(nodes[0], args, context.start_position)


def _head(_, nodes):
    if len(nodes) == 1:
        return (), nodes[0]
    return tuple(nodes[1]), nodes[3]


def _query_head(_, nodes):
    if len(nodes) == 3:
        return tuple(nodes[1])
    return ()


def _query_body(_, nodes):
    return nodes[1] if nodes else []


_ACTIONS = {
    "Program": lambda _, nodes: list(nodes[0] or []),
    "Statement": _single,
    "Fact": lambda context, nodes: _RawStatement("fact", context.start_position, (nodes[1],)),
    "Tgd": lambda context, nodes: _RawStatement("tgd", context.start_position, (nodes[1], nodes[3])),
    "Egd": lambda context, nodes: _RawStatement("egd", context.start_position, (nodes[1], nodes[3], nodes[5])),
    "Query": lambda context, nodes: _RawStatement("query", context.start_position,
                                                  (nodes[1], nodes[2], nodes[3])),
    "Head": _head,
    "QueryHead": _query_head,
    "QueryBody": _query_body,
    "Atoms": _single,
    "Atom": _atom,
    "Vars": _single,
    "Terms": _single,
    "Term": _single,
}

_parser: Parser | None = None


def _get_parser() -> Parser:
    global _parser
    if _parser is None:
        _parser = Parser(Grammar.from_string(PROGRAM_GRAMMAR), actions=_ACTIONS)
    return _parser


def _line_column(text: str, position: int) -> tuple[int, int]:
    line = text.count("\n", 0, position) + 1
    column = position - (text.rfind("\n", 0, position) + 1) + 1
    return line, column


class _Builder:
    """Turns raw statements into a Program, enforcing arity consistency and null placement."""

    def __init__(self, text: str, allow_nulls: bool):
        self.text = text
        self.allow_nulls = allow_nulls
        self.arities: dict[str, int] = {}
        self.program = Program()

    def fail(self, error_type: type[ProgramSyntaxError], message: str, position: int):
        line, column = _line_column(self.text, position)
        raise error_type(message, line, column)

    def term(self, text: str, position: int, nulls_allowed: bool) -> Term:
        if text[0].isupper():
            return Variable(text)
        if text.startswith("_:n"):
            if not nulls_allowed:
                self.fail(ProgramSyntaxError, f"labeled null {text} is only allowed in inspected instances",
                          position)
            index = int(text[3:])
            if index < 1:
                self.fail(ProgramSyntaxError, f"null indexes start at 1, got {text}", position)
            return LabeledNull(index)
        return Constant(text)

    def atom(self, raw: _RawAtom, nulls_allowed: bool = False) -> Atom:
        known = self.arities.setdefault(raw.name, len(raw.args))
        if known != len(raw.args):
            self.fail(ArityMismatchError,
                      f"predicate {raw.name} used with arity {len(raw.args)} after arity {known}", raw.position)
        args = tuple(self.term(arg, raw.position, nulls_allowed) for arg in raw.args)
        return Atom(Predicate(raw.name, len(args)), args)

    def unsafe(self, error: Exception, position: int):
        line, column = _line_column(self.text, position)
        raise UnsafeRuleError(f"{error} at line {line}, column {column}") from error

    def add(self, statement: _RawStatement) -> None:
        kind, position, parts = statement
        if kind == "fact":
            atom = self.atom(parts[0], nulls_allowed=self.allow_nulls)
            if not atom.is_ground:
                self.fail(ProgramSyntaxError, f"fact {atom} contains variables", position)
            self.program.facts.add(atom)
        elif kind == "tgd":
            body = tuple(self.atom(a) for a in parts[0])
            existentials, head_atoms = parts[1]
            head = tuple(self.atom(a) for a in head_atoms)
            try:
                self.program.tgds.append(TGD(body, head, tuple(Variable(v) for v in existentials)))
            except UnsafeRuleError as e:
                self.unsafe(e, position)
        elif kind == "egd":
            body = tuple(self.atom(a) for a in parts[0])
            try:
                self.program.egds.append(EGD(body, Variable(parts[1]), Variable(parts[2])))
            except UnsafeRuleError as e:
                self.unsafe(e, position)
        else:
            name, head, body_atoms = parts
            if name in self.program.queries:
                self.fail(ProgramSyntaxError, f"query {name} is declared twice", position)
            body = tuple(self.atom(a) for a in body_atoms)
            try:
                self.program.queries[name] = CQ(name, tuple(Variable(v) for v in head), body)
            except UsageError as e:
                self.unsafe(e, position)


def parse_program(text: str, allow_nulls: bool = False) -> Program:
    """
    Parses a program.

    Args:
        text (str): Program text.
        allow_nulls (bool): Accept labeled nulls `_:n<k>` in facts (instances loaded for inspection).

    Returns:
        Program: The parsed program.

    Raises:
        ProgramSyntaxError: On grammar violations, with line and column.
        ArityMismatchError: When a predicate is used with two arities.
        UnsafeRuleError: For unsafe TGDs, EGDs or queries.
    """
    try:
        statements = _get_parser().parse(text)
    except ParseError as e:
        position = e.location.start_position
        expected = ", ".join(sorted({str(s.name) for s in e.symbols_expected}))
        line, column = _line_column(text, position)
        raise ProgramSyntaxError(f"unexpected input, expected one of: {expected}", line, column) from None

    builder = _Builder(text, allow_nulls)
    for statement in statements:
        builder.add(statement)
    program = builder.program
    logger.debug(
        f"parsed {len(program.facts)} facts, {len(program.tgds)} TGDs, {len(program.egds)} EGDs, "
        f"{len(program.queries)} queries"
    )
    return program


def parse_atom(text: str, allow_nulls: bool = True) -> Atom:
    """
    Parses one ground atom such as `r(a,_:n1)`.

    Raises:
        ProgramSyntaxError: If `text` is not a single ground atom.
    """
    program = parse_program(f"fact {text}.", allow_nulls=allow_nulls)
    return next(iter(program.facts))


def _render_query(query: CQ) -> str:
    head = f"{query.name}({','.join(str(v) for v in query.head)})"
    if not query.body:
        return f"query {head}."
    return f"query {head} :- {', '.join(str(a) for a in query.body)}."


def render_program(program: Program) -> str:
    """
    Renders a program: facts, then TGDs, EGDs and queries, each group in declaration order.
    The empty program renders as the empty string.
    """
    lines = [f"fact {atom}." for atom in program.facts]
    lines += [f"tgd {rule}." for rule in program.tgds]
    lines += [f"egd {egd}." for egd in program.egds]
    lines += [_render_query(query) for query in program.queries.values()]
    return "".join(line + "\n" for line in lines)
