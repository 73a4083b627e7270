import random
from itertools import combinations, product

import pytest

from program_io.parser import parse_program, render_program
from reasoning.analysis import RuleClass, classify
from reasoning.errors import UsageError
from reasoning.query import AnswerStatus, certain_answers
from rulesets.builtin_programs import builtin_names, fll_rules, load_builtin
from rulesets.coloring import COLOR_QUERY_NAME, GraphSpec, color_database, encode_three_colorability


def test_fll_has_eleven_tgds_and_one_egd():
    program = fll_rules()
    assert len(program.tgds) == 11
    assert len(program.egds) == 1
    assert len(program.facts) == 0


def test_every_builtin_renders_back_to_itself():
    for name in builtin_names():
        program = load_builtin(name)
        assert parse_program(render_program(program)) == program


def test_unknown_builtin():
    with pytest.raises(UsageError):
        load_builtin("nope")


def test_color_database_lists_distinct_pairs():
    assert len(color_database()) == 6


def test_graph_encoding():
    _, query = encode_three_colorability(GraphSpec(("a", "b"), (("a", "b"),)))
    assert query.is_boolean
    assert [str(atom) for atom in query.body] == ["data(X,V1,V2)", "data(X,V2,V1)"]


@pytest.mark.parametrize("name, colorable", [("3col-k3", True), ("3col-k4", False), ("3col-c5", True)])
def test_three_colorability(name, colorable):
    program = load_builtin(name)
    report = certain_answers(program.facts, program.tgds, program.query(COLOR_QUERY_NAME), egds=program.egds)
    assert report.status is AnswerStatus.EXACT
    assert report.holds is colorable
    assert report.json_status == ("sat" if colorable else "unsat")


def test_coloring_runs_under_weakly_guarded_rules():
    program = load_builtin("3col")
    assert classify(program.tgds).overall is RuleClass.WEAKLY_GUARDED


@pytest.mark.parametrize("vertices, edges", [
    (("a",), (("a", "a"),)),
    (("a",), (("a", "b"),)),
])
def test_graph_spec_rejects_bad_edges(vertices, edges):
    with pytest.raises(UsageError):
        GraphSpec(vertices, edges)


def _colorable(graph):
    for colors in product(range(3), repeat=len(graph.vertices)):
        assignment = dict(zip(graph.vertices, colors))
        if all(assignment[a] != assignment[b] for a, b in graph.edges):
            return True
    return False


def _random_graph(rng):
    vertices = tuple(f"v{i}" for i in range(1, rng.randint(1, 6) + 1))
    pairs = list(combinations(vertices, 2))
    return GraphSpec(vertices, tuple(p for p in pairs if rng.random() < 0.6))


def test_encoding_agrees_with_brute_force_coloring():
    rng = random.Random(5)
    for _ in range(40):
        graph = _random_graph(rng)
        database, query = encode_three_colorability(graph)
        report = certain_answers(database, [], query)
        assert report.holds is _colorable(graph)
