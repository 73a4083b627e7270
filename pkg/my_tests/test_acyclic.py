import random

import pytest

from my_tests.generators import atom, random_atom_set, random_fll_facts, weakly_guarded_programs
from program_io.parser import parse_program
from reasoning.acyclic import is_alpha_acyclic, join_forest_from_gcf, join_forest_to_dot, s_join_forest
from reasoning.chase import ChaseOptions, restricted_gcf, run_chase
from reasoning.model import Constant, Variable
from rulesets.builtin_programs import FLL_PROGRAM, load_builtin

TRIANGLE = [atom("r", "X", "Y"), atom("r", "Y", "Z"), atom("r", "Z", "X")]
PATH = [atom("r", "X", "Y"), atom("r", "Y", "Z"), atom("r", "Z", "W")]


def test_path_is_acyclic():
    forest, decomposition = s_join_forest(PATH)
    assert forest.validate(PATH) == []
    assert decomposition.validate(PATH) == []
    assert decomposition.width == 1


def test_triangle_is_cyclic():
    assert s_join_forest(TRIANGLE) is None
    assert not is_alpha_acyclic([a.dom() for a in TRIANGLE])


def test_hiding_a_value_breaks_the_cycle():
    forest, decomposition = s_join_forest(TRIANGLE, {Variable("X")})
    assert forest.validate(TRIANGLE) == []
    assert decomposition.validate(TRIANGLE) == []
    assert decomposition.width <= 1 + 2 - 1


def test_covering_edge_makes_the_triangle_acyclic():
    atoms = TRIANGLE + [atom("s", "X", "Y", "Z")]
    forest, _ = s_join_forest(atoms)
    assert forest.validate(atoms) == []


def test_validation_reports_broken_forests():
    forest, _ = s_join_forest(PATH)
    detached = type(forest)(forest.labels, (None,) * len(forest.labels), forest.hidden)
    problems = detached.validate(PATH)
    assert any("not connected" in p for p in problems)
    assert any("not onto" in p for p in forest.validate(PATH[:2]))


def test_gyo_and_ear_removal_agree_on_random_atom_sets():
    rng = random.Random(11)
    for _ in range(300):
        atoms = list(dict.fromkeys(random_atom_set(rng, rng.randint(1, 6))))
        joined = s_join_forest(atoms)
        assert (joined is not None) == is_alpha_acyclic([a.dom() for a in atoms])
        if joined is not None:
            forest, decomposition = joined
            assert forest.validate(atoms) == []
            assert decomposition.validate(atoms) == []


def test_restricted_chase_forest_is_a_join_forest():
    program = parse_program("""\
fact p(a).
tgd p(X) -> exists Y: e(X,Y).
tgd e(X,Y) -> exists Z: f(Y,Z).
tgd e(X,Y) -> g(Y).
""")
    result = run_chase(program.facts, program.tgds)
    forest = join_forest_from_gcf(restricted_gcf(result.forest), {Constant("a")})
    assert forest.validate(result.instance) == []
    assert forest.parent[1] == 0


def test_join_forest_dot():
    forest, _ = s_join_forest(PATH[:2])
    dot = join_forest_to_dot(forest)
    assert dot.startswith("graph join_forest {")
    assert "--" in dot
    assert 'label="r(X,Y)"' in dot


def test_terminating_chase_is_acyclic_modulo_the_database_domain():
    program = parse_program("""\
fact p(a).
fact p(b).
tgd p(X) -> exists Y: e(X,Y).
tgd e(X,Y) -> exists Z: f(Y,Z).
tgd e(X,Y), f(Y,Z) -> g(X,Z).
""")
    result = run_chase(program.facts, program.tgds)
    domain = program.facts.domain()
    forest, decomposition = s_join_forest(result.instance, domain)
    assert forest.validate(result.instance) == []
    assert decomposition.validate(result.instance) == []
    assert decomposition.width <= len(domain) + 2


def _check_forest_and_width(result, database):
    domain = database.domain()
    forest = join_forest_from_gcf(restricted_gcf(result.forest), domain)
    assert forest.validate(result.instance) == []
    joined = s_join_forest(result.instance, domain)
    assert joined is not None
    s_forest, decomposition = joined
    assert s_forest.validate(result.instance) == []
    assert decomposition.validate(result.instance) == []
    width = max((a.arity for a in result.instance), default=0)
    assert decomposition.width <= len(domain) + width - 1


@pytest.mark.parametrize("name", ["3col", "3col-k3", "3col-k4", "3col-c5"])
def test_builtin_chase_forests_are_join_forests(name):
    program = load_builtin(name)
    result = run_chase(program.facts, program.tgds, ChaseOptions(max_steps=400))
    _check_forest_and_width(result, program.facts)


def test_fll_chase_forests_are_join_forests():
    rng = random.Random(61)
    for _ in range(10):
        program = parse_program(FLL_PROGRAM + random_fll_facts(rng, rng.randint(3, 9)))
        result = run_chase(program.facts, program.tgds, ChaseOptions(max_steps=400))
        _check_forest_and_width(result, program.facts)


def test_random_weakly_guarded_chase_forests_are_join_forests():
    for program, rules in weakly_guarded_programs(random.Random(62), 60):
        result = run_chase(program.facts, rules, ChaseOptions(max_steps=300, max_depth=6))
        _check_forest_and_width(result, program.facts)
