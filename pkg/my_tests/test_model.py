import pytest

from my_tests.generators import atom, null
from reasoning.errors import UsageError
from reasoning.homomorphism import find_homomorphism, homomorphisms
from reasoning.model import (
    Atom,
    Constant,
    Instance,
    NullAllocator,
    Ordering,
    Predicate,
    Variable,
    compare_terms,
    term_sort_key,
)


def test_constants_come_before_nulls():
    assert compare_terms(Constant("a"), Constant("b")) is Ordering.LESS
    assert compare_terms(Constant("zz"), null(1)) is Ordering.LESS
    assert compare_terms(null(3), null(2)) is Ordering.GREATER
    assert compare_terms(null(2), null(2)) is Ordering.EQUAL


def test_constant_order_is_bytewise():
    assert sorted([Constant("b"), Constant("B"), Constant("a")], key=term_sort_key) == [
        Constant("B"), Constant("a"), Constant("b")
    ]


def test_variables_have_no_order():
    with pytest.raises(UsageError):
        compare_terms(Variable("X"), Constant("a"))


def test_atom_arity_is_checked():
    with pytest.raises(UsageError):
        Atom(Predicate("r", 2), (Constant("a"),))


def test_atom_rendering():
    assert str(atom("r", "a", null(4))) == "r(a,_:n4)"
    assert str(Atom(Predicate("flag", 0), ())) == "flag"


def test_instance_is_a_set_in_insertion_order():
    inst = Instance()
    assert inst.add(atom("r", "a", "b"))
    assert not inst.add(atom("r", "a", "b"))
    inst.add(atom("s", "b"))
    assert list(inst) == [atom("r", "a", "b"), atom("s", "b")]
    assert inst == {atom("s", "b"), atom("r", "a", "b")}


def test_instances_reject_variables():
    with pytest.raises(UsageError):
        Instance([atom("r", "X")])


def test_term_index_tracks_additions_and_removals():
    inst = Instance([atom("r", "a", "b"), atom("r", "b", null(1)), atom("s", null(1))])
    inst.discard(atom("s", null(1)))
    inst.add(atom("t", "a", null(2)))
    inst.discard(atom("r", "a", "b"))

    assert inst.domain_index == inst.rebuild_index()
    assert set(inst.atoms_with(Constant("a"))) == {atom("t", "a", null(2))}
    assert inst.nulls() == [null(1), null(2)]
    assert inst.max_null_index() == 2


def test_substitute_merges_atoms():
    inst = Instance([atom("r", "a", null(1)), atom("r", "a", "b")])
    merged = inst.substitute({null(1): Constant("b")})
    assert merged == {atom("r", "a", "b")}


def test_null_allocator_skips_existing_nulls():
    alloc = NullAllocator.for_instance(Instance([atom("r", null(5))]))
    assert alloc.fresh() == null(6)
    alloc.observe(null(10))
    assert alloc.fresh() == null(11)


def test_homomorphisms_enumerate_all_matches():
    inst = Instance([atom("e", "a", "b"), atom("e", "b", "c"), atom("e", "c", "a")])
    paths = list(homomorphisms([atom("e", "X", "Y"), atom("e", "Y", "Z")], inst))
    assert len(paths) == 3
    assert {(h[Variable("X")], h[Variable("Z")]) for h in paths} == {
        (Constant("a"), Constant("c")), (Constant("b"), Constant("a")), (Constant("c"), Constant("b"))
    }


def test_homomorphisms_respect_initial_binding():
    inst = Instance([atom("e", "a", "b"), atom("e", "b", "c")])
    found = list(homomorphisms([atom("e", "X", "Y")], inst, {Variable("X"): Constant("b")}))
    assert found == [{Variable("X"): Constant("b"), Variable("Y"): Constant("c")}]


def test_find_homomorphism_keeps_constants_rigid():
    target = Instance([atom("r", "a", "b")])
    assert find_homomorphism([atom("r", "a", null(1))], target) == {null(1): Constant("b")}
    assert find_homomorphism([atom("r", "b", null(1))], target) is None


def test_injective_search():
    target = Instance([atom("r", "a", "a")])
    patterns = [atom("r", "X", "Y")]
    assert list(homomorphisms(patterns, target))
    assert not list(homomorphisms(patterns, target, injective=True))
