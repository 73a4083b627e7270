import random

import pytest

from my_tests.generators import atom, null, random_fll_facts
from program_io.parser import parse_program
from reasoning.chase import ChaseStatus
from reasoning.egd_sep import FailureCheck, blocking_chase, egd_failure_check, separated_answer
from reasoning.errors import NonInnocuousEgdError
from reasoning.model import Constant
from reasoning.query import AnswerStatus, certain_answers, parse_strategy
from rulesets.builtin_programs import FLL_PROGRAM

KEY = "egd s(X,Y), s(X,Z) -> Y = Z.\n"

INNOCUOUS = parse_program(KEY + """\
fact r(a).
fact q(a).
tgd r(X) -> exists Y: s(X,Y).
tgd q(X) -> s(X,X).
query linked(X) :- s(X,Y).
""")

HARMFUL = parse_program(KEY + """\
fact r(a).
fact s(a,b).
tgd r(X) -> exists Y: t(X,Y).
tgd t(X,Y) -> s(X,Y).
""")


def test_database_violation_fails():
    program = parse_program(KEY + "fact s(a,b).\nfact s(a,c).\n")
    verdict = egd_failure_check(program.facts, program.tgds, program.egds)
    assert verdict.failed
    egd, trigger = verdict.witness
    assert egd == program.egds[0]
    assert trigger.rule_index == 1


def test_derived_violation_fails():
    program = parse_program(KEY + "fact p(a,c).\nfact s(a,b).\ntgd p(X,Y) -> s(X,Y).\n")
    assert egd_failure_check(program.facts, program.tgds, program.egds).outcome is FailureCheck.FAILED


def test_innocuous_program_passes_the_check():
    verdict = egd_failure_check(INNOCUOUS.facts, INNOCUOUS.tgds, INNOCUOUS.egds, monitor=True)
    assert verdict.outcome is FailureCheck.NO_FAILURE
    assert verdict.all_applications_innocuous is True


def test_monitor_reports_harmful_applications():
    verdict = egd_failure_check(HARMFUL.facts, HARMFUL.tgds, HARMFUL.egds, monitor=True)
    assert verdict.outcome is FailureCheck.NO_FAILURE
    assert verdict.all_applications_innocuous is False


def test_no_egds_never_fail():
    verdict = egd_failure_check(INNOCUOUS.facts, INNOCUOUS.tgds, [])
    assert verdict.outcome is FailureCheck.NO_FAILURE
    assert verdict.all_applications_innocuous is None


def test_unfinished_check_is_unknown():
    program = parse_program(KEY + "fact r(a,b).\ntgd r(X,Y) -> exists Z: r(Y,Z).\n")
    verdict = egd_failure_check(program.facts, program.tgds, program.egds, max_steps=10)
    assert verdict.outcome is FailureCheck.UNKNOWN


def test_separated_answer_ignores_innocuous_egds():
    report = separated_answer(INNOCUOUS.facts, INNOCUOUS.tgds, INNOCUOUS.egds, INNOCUOUS.query("linked"),
                              parse_strategy("terminate"))
    assert report.status is AnswerStatus.EXACT
    assert report.answers == ((Constant("a"),),)


def test_separated_answer_on_a_failing_theory():
    program = parse_program(KEY + "fact s(a,b).\nfact s(a,c).\nquery any :- t(X).\nquery keys(X) :- s(X,Y).\n")
    boolean = separated_answer(program.facts, program.tgds, program.egds, program.query("any"))
    assert boolean.status is AnswerStatus.FAILED
    assert boolean.holds
    listed = separated_answer(program.facts, program.tgds, program.egds, program.query("keys"))
    assert listed.answers == ()
    assert "none are listed" in listed.note


def test_blocking_chase_keeps_removed_atoms_aside():
    result = blocking_chase(INNOCUOUS.facts, INNOCUOUS.tgds, INNOCUOUS.egds)
    assert result.status is ChaseStatus.SATURATED
    assert result.blocked == {atom("s", "a", null(1))}
    assert result.unblocked == {atom("r", "a"), atom("q", "a"), atom("s", "a", null(1)), atom("s", "a", "a")}
    assert result.survivors == result.chase.instance


def test_blocking_chase_stops_on_harmful_applications():
    with pytest.raises(NonInnocuousEgdError) as info:
        blocking_chase(HARMFUL.facts, HARMFUL.tgds, HARMFUL.egds)
    assert not info.value.step.innocuous


FLL_CASES = [
    "fact member(o1,c1).\nfact mandatory(att,c1).\nfact funct(att,c1).\nfact data(o1,att,v1).\n",
    "fact member(o1,c1).\nfact mandatory(att,c1).\nfact funct(att,c1).\n",
    "fact member(o1,c1).\nfact type(c1,att,t1).\nfact data(o1,att,v1).\n",
    "fact sub(c1,c2).\nfact sub(c2,c3).\nfact member(o1,c1).\nfact mandatory(att,c3).\nfact funct(att,c2).\n",
    "fact member(o1,c1).\nfact sub(c1,c2).\nfact type(c2,att,t1).\nfact mandatory(att,c2).\nfact funct(att,c1).\n",
]

FLL_QUERIES = """\
query members(X,C) :- member(X,C).
query values(O,A) :- data(O,A,V).
query types(O,T) :- type(O,A,T).
"""


@pytest.mark.parametrize("facts", FLL_CASES)
def test_separation_agrees_with_interleaving_on_fll(facts):
    program = parse_program(FLL_PROGRAM + facts + FLL_QUERIES)
    strategy = parse_strategy("terminate")
    assert egd_failure_check(program.facts, program.tgds, program.egds).outcome is FailureCheck.NO_FAILURE
    for name in program.queries:
        query = program.query(name)
        separated = separated_answer(program.facts, program.tgds, program.egds, query, strategy)
        interleaved = certain_answers(program.facts, program.tgds, query, strategy, program.egds)
        assert separated.status is AnswerStatus.EXACT
        assert separated.answers == interleaved.answers


def test_fll_functional_attribute_with_two_values_fails():
    program = parse_program(FLL_PROGRAM + "fact funct(att,o1).\nfact data(o1,att,v1).\nfact data(o1,att,v2).\n")
    assert egd_failure_check(program.facts, program.tgds, program.egds).failed


def test_separation_agrees_with_interleaving_on_random_fll_databases():
    rng = random.Random(51)
    strategy = parse_strategy("terminate")
    outcomes = set()
    for _ in range(12):
        program = parse_program(FLL_PROGRAM + random_fll_facts(rng, rng.randint(3, 9)) + FLL_QUERIES)
        outcome = egd_failure_check(program.facts, program.tgds, program.egds).outcome
        assert outcome is not FailureCheck.UNKNOWN
        outcomes.add(outcome)
        for name in program.queries:
            query = program.query(name)
            separated = separated_answer(program.facts, program.tgds, program.egds, query, strategy)
            interleaved = certain_answers(program.facts, program.tgds, query, strategy, program.egds)
            if outcome is FailureCheck.FAILED:
                assert separated.status is AnswerStatus.FAILED
                assert interleaved.status is AnswerStatus.FAILED
            else:
                assert separated.status is AnswerStatus.EXACT
                assert interleaved.status is AnswerStatus.EXACT
                assert separated.answers == interleaved.answers
    assert FailureCheck.NO_FAILURE in outcomes
