import random

import pytest

from my_tests.generators import atom, instance, weakly_guarded_programs
from program_io.parser import parse_program
from reasoning.errors import UsageError
from reasoning.model import Variable
from reasoning.query import CQ
from reasoning.squids import SquidDecomposition, enumerate_squids, squid_to_dot, verify_squid_lemma

OCTOPUS = parse_program("""\
query octopus :- r(X,Y), r(X,Z), r(Y,Z),
    r(Z,V1), r(V1,V2), r(V2,V3), r(V3,V4), r(V4,V5),
    r(V1,V6), r(V6,V5), r(V5,V7),
    r(Z,U1), s(U1,U2,U3),
    r(U3,U4), r(U3,U5), r(U4,U5).
""").query("octopus")

FOLDING = {Variable("V6"): Variable("V2"), Variable("V4"): Variable("V3"),
           Variable("V5"): Variable("V3"), Variable("V7"): Variable("V3")}
HEAD_VARIABLES = {Variable("X"), Variable("Y"), Variable("Z")}


def test_cover_with_an_extra_atom_gives_a_squid():
    cover = (*OCTOPUS.body, atom("s", "U3", "U4", "U5"))
    squid = SquidDecomposition.build(OCTOPUS.body, cover, FOLDING, HEAD_VARIABLES)
    assert squid.validate() == []
    assert set(squid.head) == {atom("r", "X", "Y"), atom("r", "X", "Z"), atom("r", "Y", "Z")}
    assert atom("r", "V3", "V3") in squid.tentacles
    assert len(squid.folded()) == 13
    assert len(squid.tentacles) == 10


def test_without_the_extra_atom_the_tentacles_are_cyclic():
    squid = SquidDecomposition.build(OCTOPUS.body, OCTOPUS.body, FOLDING, HEAD_VARIABLES)
    assert any("acyclic" in problem for problem in squid.validate())


def test_oversized_cover_is_rejected():
    query = (atom("r", "X", "Y"),)
    cover = (*query, atom("r", "W1", "W2"), atom("r", "W3", "W4"))
    squid = SquidDecomposition.build(query, cover, {}, set())
    assert not squid.is_valid()


def test_enumeration_starts_from_the_identity():
    query = parse_program("query q :- r(X,Y).").query("q")
    first = next(iter(enumerate_squids(query)))
    assert first.head == (atom("r", "X", "Y"),)
    assert first.tentacles == ()
    assert first.folding == ()


def test_enumeration_is_truncated_by_the_candidate_budget():
    query = parse_program("query q :- r(X,Y).").query("q")
    stream = enumerate_squids(query, max_candidates=3)
    found = list(stream)
    assert stream.truncated
    assert stream.examined == 4
    assert len(found) == 3


def test_squid_lemma_on_a_terminating_chase():
    program = parse_program("""\
fact r(a,b).
tgd r(X,Y) -> exists Z: s(Y,Z).
query q :- r(X,Y), s(Y,Z).
query missing :- s(X,Y), r(Y,Z).
""")
    verdict = verify_squid_lemma(program.facts, program.tgds, program.query("q"))
    assert verdict.holds and verdict.entailed
    assert verdict.witness.head == (atom("r", "X", "Y"),)
    assert verdict.witness.tentacles == (atom("s", "Y", "Z"),)

    negative = verify_squid_lemma(program.facts, program.tgds, program.query("missing"))
    assert negative.holds and negative.entailed is False


def test_squid_lemma_needs_a_boolean_query():
    program = parse_program("query q(X) :- r(X,Y).")
    with pytest.raises(UsageError):
        verify_squid_lemma(instance(atom("r", "a", "b")), [], program.query("q"))


def test_squid_lemma_is_inconclusive_without_saturation():
    program = parse_program("""\
fact r(a,b).
tgd r(X,Y) -> exists Z: r(Y,Z).
query q :- r(X,Y), s(Y).
""")
    verdict = verify_squid_lemma(program.facts, program.tgds, program.query("q"), max_steps=20)
    assert verdict.inconclusive
    assert verdict.holds is None


def test_squid_dot():
    cover = (*OCTOPUS.body, atom("s", "U3", "U4", "U5"))
    dot = squid_to_dot(SquidDecomposition.build(OCTOPUS.body, cover, FOLDING, HEAD_VARIABLES))
    assert "subgraph cluster_head" in dot
    assert dot.count(" -- ") == 8


@pytest.mark.parametrize("text, entailed", [
    ("fact r(a,b).\ntgd r(X,Y) -> exists Z: s(Y,Z).\nquery q :- r(X,Y), s(Y,Z).\n", True),
    ("fact r(a,b).\ntgd r(X,Y) -> exists Z: s(Y,Z).\nquery q :- s(X,Y), r(Y,Z).\n", False),
    ("fact p(a).\ntgd p(X) -> exists Y: e(X,Y).\ntgd e(X,Y) -> exists Z: f(Y,Z).\n"
     "query q :- e(X,Y), f(Y,Z).\n", True),
    ("fact r(a,b).\nfact r(b,c).\nfact r(c,a).\nquery q :- r(X,Y), r(Y,Z), r(Z,X).\n", True),
    ("fact r(a,b).\nfact r(b,c).\nquery q :- r(X,Y), r(Y,Z), r(Z,X).\n", False),
    ("fact p(a).\ntgd p(X) -> exists Y: e(X,Y).\ntgd e(X,Y) -> e(Y,X).\nquery q :- e(X,Y), e(Y,X).\n", True),
])
def test_squid_lemma_harness(text, entailed):
    program = parse_program(text)
    verdict = verify_squid_lemma(program.facts, program.tgds, program.query("q"))
    assert verdict.holds is True
    assert verdict.entailed is entailed
    assert (verdict.witness is not None) is entailed


def test_squid_lemma_on_generated_programs():
    cases = conclusive = 0
    for program, rules in weakly_guarded_programs(random.Random(41), 200):
        if not program.queries:
            continue
        query = next(iter(program.queries.values()))
        boolean = CQ(query.name, (), query.body)
        verdict = verify_squid_lemma(program.facts, rules, boolean, max_steps=300)
        assert verdict.holds is not False
        if not verdict.inconclusive:
            conclusive += 1
            assert (verdict.witness is not None) is verdict.entailed
        cases += 1
        if cases == 50:
            break
    assert cases == 50
    assert conclusive >= 10
