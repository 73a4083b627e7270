import random

import pytest

from my_tests.generators import atom, null, random_program
from program_io.parser import parse_atom, parse_program, render_program
from reasoning.errors import ArityMismatchError, ProgramSyntaxError, UnsafeRuleError, UsageError
from reasoning.model import Variable

PROGRAM = """\
% a small program
fact r1(a,b).
fact r2(b).
tgd r1(X,Y) -> exists Z: r3(Y,Z).
tgd r3(X,Y), r2(X) -> r2(Y), r4(X).
egd r1(X,Y), r1(X,Z) -> Y = Z.
query q(X) :- r1(X,Y), r2(Y).
query b() :- r4(X).
query empty.
"""


def test_parse_program_reads_every_statement_kind():
    program = parse_program(PROGRAM)

    assert program.facts == {atom("r1", "a", "b"), atom("r2", "b")}
    assert len(program.tgds) == 2
    assert program.tgds[0].existentials == (Variable("Z"),)
    assert program.tgds[1].head == (atom("r2", "Y"), atom("r4", "X"))
    assert len(program.egds) == 1
    assert program.egds[0].lhs == Variable("Y") and program.egds[0].rhs == Variable("Z")
    assert list(program.queries) == ["q", "b", "empty"]
    assert program.query("q").head == (Variable("X"),)
    assert program.query("b").is_boolean
    assert program.query("empty").body == ()


def test_unknown_query_name():
    with pytest.raises(UsageError):
        parse_program(PROGRAM).query("missing")


def test_render_then_parse_gives_the_same_program():
    program = parse_program(PROGRAM)
    assert parse_program(render_program(program)) == program


def test_random_programs_survive_rendering():
    rng = random.Random(7)
    for _ in range(500):
        program = random_program(rng)
        assert parse_program(render_program(program)) == program


def test_empty_program():
    program = parse_program("% nothing here\n")
    assert len(program.facts) == 0
    assert render_program(program) == ""


def test_syntax_error_reports_the_line():
    with pytest.raises(ProgramSyntaxError) as info:
        parse_program("fact r(a,b).\ntgd r(X,Y) -> .\n")
    assert info.value.line == 2
    assert info.value.column >= 1


def test_arity_mismatch():
    with pytest.raises(ArityMismatchError) as info:
        parse_program("fact r(a).\nfact r(a,b).\n")
    assert info.value.line == 2


def test_unsafe_rules_are_rejected():
    with pytest.raises(UnsafeRuleError):
        parse_program("tgd r(X) -> s(Y).")
    with pytest.raises(UnsafeRuleError):
        parse_program("tgd r(X) -> exists X: s(X).")
    with pytest.raises(UnsafeRuleError):
        parse_program("egd r(X) -> X = Y.")
    with pytest.raises(UnsafeRuleError):
        parse_program("query q(Y) :- r(X).")


def test_duplicate_query_names():
    with pytest.raises(ProgramSyntaxError):
        parse_program("query q :- r(X).\nquery q :- s(X).\n")


def test_nulls_only_when_allowed():
    with pytest.raises(ProgramSyntaxError):
        parse_program("fact r(a,_:n1).")
    program = parse_program("fact r(a,_:n1).", allow_nulls=True)
    assert program.facts == {atom("r", "a", null(1))}


def test_nulls_never_in_rules():
    with pytest.raises(ProgramSyntaxError):
        parse_program("tgd r(X,_:n1) -> s(X).", allow_nulls=True)


def test_parse_atom():
    assert parse_atom("r(a,_:n2)") == atom("r", "a", null(2))
    assert str(parse_atom("flag")) == "flag"
