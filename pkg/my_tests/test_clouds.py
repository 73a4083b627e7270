import itertools
import random

import pytest

from my_tests.generators import atom, instance, null, random_anchored_set, weakly_guarded_programs
from program_io.parser import parse_program
from reasoning.chase import ChaseMode, ChaseOptions, ChaseStatus, run_chase, split_ground
from reasoning.clouds import (
    SaturationStatus,
    blocked_saturate,
    canonical_null,
    canonicalize,
    cloud_of,
    cloud_size_bound,
    d_isomorphic,
)
from reasoning.default_settings import CANONICAL_NULL_BASE
from reasoning.errors import CloudError, UsageError
from reasoning.model import Constant, LabeledNull
from rulesets.builtin_programs import grid_rules

SUCCESSOR = parse_program("tgd r(X,Y) -> exists Z: r(Y,Z).").tgds
DATABASE = instance(atom("r", "a", "b"))


def test_cloud_keeps_atoms_over_the_anchor_and_database():
    inst = instance(atom("r", "a", "b"), atom("s", "a", null(1)), atom("t", null(1), null(2)), atom("u", null(1)))
    cloud = cloud_of(inst, DATABASE, atom("s", "a", null(1)))
    assert cloud.atoms == {atom("r", "a", "b"), atom("s", "a", null(1)), atom("u", null(1))}
    assert len(cloud) == 3


def test_cloud_of_a_missing_atom():
    with pytest.raises(UsageError):
        cloud_of(DATABASE, DATABASE, atom("s", "a", null(1)))


def test_canonical_renaming_follows_the_anchor():
    key = canonicalize(atom("r", null(7), null(3)), [atom("r", "b", null(7)), atom("r", "a", "b")], DATABASE)
    xi1, xi2 = canonical_null(1), canonical_null(2)
    assert xi1.index == CANONICAL_NULL_BASE + 1
    assert key == (atom("r", xi1, xi2), frozenset({atom("r", "b", xi1), atom("r", "a", "b")}))


def test_canonicalize_rejects_foreign_nulls():
    with pytest.raises(CloudError):
        canonicalize(atom("s", "a", null(1)), [atom("t", null(1), null(2))], DATABASE)


def test_d_isomorphism_on_clouds():
    x = (atom("r", "b", null(1)), [atom("r", "a", "b"), atom("r", "b", null(1))])
    y = (atom("r", "b", null(9)), [atom("r", "a", "b"), atom("r", "b", null(9))])
    z = (atom("r", "a", null(9)), [atom("r", "a", "b"), atom("r", "a", null(9))])
    assert d_isomorphic(x, y, DATABASE)
    assert not d_isomorphic(x, z, DATABASE)


def test_d_isomorphism_falls_back_to_injective_renaming():
    x = (atom("s", "a", null(1)), [atom("t", null(1), null(2))])
    y = (atom("s", "a", null(3)), [atom("t", null(3), null(4))])
    collapsed = (atom("s", "a", null(3)), [atom("t", null(3), null(3))])
    assert d_isomorphic(x, y, DATABASE)
    assert not d_isomorphic(x, collapsed, DATABASE)


def test_d_isomorphism_never_sends_a_null_to_a_constant():
    database = instance(atom("r", "c"))
    x = (atom("p", null(1)), [atom("q", null(2))])
    y = (atom("p", null(1)), [atom("q", "c")])
    assert not d_isomorphic(x, y, database)
    assert not d_isomorphic(y, x, database)


def _isomorphic_by_search(x, y, database) -> bool:
    domain = database.domain()

    def movable(pair):
        terms = {t for a in (pair[0], *pair[1]) for t in a.args}
        return sorted((t for t in terms if isinstance(t, LabeledNull) and t not in domain), key=lambda n: n.index)

    source, target = movable(x), movable(y)
    if len(source) != len(target):
        return False
    for image in itertools.permutations(target):
        renaming = dict(zip(source, image))
        if x[0].substitute(renaming) == y[0] and {a.substitute(renaming) for a in x[1]} == set(y[1]):
            return True
    return False


def test_d_isomorphism_matches_exhaustive_search():
    rng = random.Random(17)
    nulls = [null(1), null(2), null(3)]
    renamed = {n: null(n.index + 10) for n in nulls}
    constants = [Constant("a"), Constant("c")]
    for _ in range(300):
        anchor, atoms = random_anchored_set(rng, nulls, constants, rng.randint(1, 4))
        x = (anchor, atoms)
        copy = (anchor.substitute(renamed), frozenset(a.substitute(renamed) for a in atoms))
        assert d_isomorphic(x, copy, DATABASE)

        kind = rng.choice(("copy", "grounded", "independent"))
        if kind == "copy":
            y = copy
        elif kind == "grounded":
            victim = rng.choice(nulls)
            y = (anchor.substitute({victim: Constant("a")}),
                 frozenset(a.substitute({victim: Constant("a")}) for a in atoms))
        else:
            y = random_anchored_set(rng, nulls, constants, rng.randint(1, 4))
        assert d_isomorphic(x, y, DATABASE) == _isomorphic_by_search(x, y, DATABASE)
        assert d_isomorphic(y, x, DATABASE) == _isomorphic_by_search(y, x, DATABASE)


def test_blocked_saturation_agrees_with_a_bounded_chase_on_random_programs():
    checked = exact = 0
    for program, rules in weakly_guarded_programs(random.Random(5), 100):
        report = blocked_saturate(program.facts, rules)
        if report.status is not SaturationStatus.STABILIZED:
            continue
        chase = run_chase(program.facts, rules, ChaseOptions(mode=ChaseMode.OBLIVIOUS, max_steps=1500, max_depth=8))
        ground, _ = split_ground(chase.instance, program.facts)
        checked += 1
        assert set(ground) <= set(report.ground_atoms)
        if chase.status is ChaseStatus.SATURATED:
            exact += 1
            assert set(ground) == set(report.ground_atoms)
    assert checked >= 20
    assert exact >= 5


def test_cloud_size_bound():
    assert cloud_size_bound(DATABASE, SUCCESSOR) == 16


def test_blocked_saturation_stabilizes_on_an_infinite_chase():
    report = blocked_saturate(DATABASE, SUCCESSOR)
    assert report.status is SaturationStatus.STABILIZED
    assert report.rounds == 2
    assert report.blocked == 1
    assert len(report.store) == 4
    assert report.store.max_cloud_size() == 3
    assert report.ground_atoms == {atom("r", "a", "b")}


def test_blocked_saturation_derives_ground_atoms():
    rules = parse_program(
        "tgd p(X) -> exists Y: e(X,Y).\n"
        "tgd e(X,Y) -> exists Z: e(Y,Z).\n"
        "tgd e(X,Y), p(X) -> q(X).\n"
    ).tgds
    report = blocked_saturate(instance(atom("p", "a")), rules)
    assert report.status is SaturationStatus.STABILIZED
    assert report.ground_atoms == {atom("p", "a"), atom("q", "a")}


def test_unguarded_rules_need_force():
    program = grid_rules()
    with pytest.raises(UsageError):
        blocked_saturate(program.facts, program.tgds)


def test_budgets_must_be_positive():
    with pytest.raises(UsageError):
        blocked_saturate(DATABASE, SUCCESSOR, max_rounds=0)


def test_canonical_renaming_of_a_repeated_null():
    anchor = atom("g", "d", null(1), null(2), null(1))
    cloud = [atom("p", null(1)), atom("r", null(2), null(2)), atom("s", null(1), null(2), "b")]
    xi1, xi2 = canonical_null(1), canonical_null(2)
    assert canonicalize(anchor, cloud, instance(atom("h", "d", "b"))) == (
        atom("g", "d", xi1, xi2, xi1),
        frozenset({atom("p", xi1), atom("r", xi2, xi2), atom("s", xi1, xi2, "b")}),
    )


def test_store_clouds_stay_within_the_bound():
    program = parse_program(
        "fact p(a).\n"
        "tgd p(X) -> exists Y: e(X,Y).\n"
        "tgd e(X,Y) -> exists Z: e(Y,Z).\n"
        "tgd e(X,Y), p(X) -> q(X).\n"
    )
    report = blocked_saturate(program.facts, program.tgds)
    bound = cloud_size_bound(program.facts, program.tgds)
    assert all(len(entry.cloud) <= bound for entry in report.store)
