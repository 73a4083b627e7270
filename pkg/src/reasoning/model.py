"""
model.py

Core data model shared by every reasoning module: terms, predicates, atoms, instances and the
fresh-null allocator.

Terms are constants, labeled nulls or variables. Constants and nulls are totally ordered with every
constant before every null; variables never take part in that order.

Classes:
    Constant, LabeledNull, Variable: The three kinds of terms.
    Predicate: A relation name with its arity.
    Atom: A predicate applied to a tuple of terms.
    Instance: A finite set of variable-free atoms with predicate and term indexes.
    NullAllocator: Hands out fresh labeled nulls for one chase run.

Functions:
    compare_terms(a, b): Total order on constants and nulls.
    term_sort_key(term): Sort key realizing `compare_terms`.
    fresh_null(alloc): Returns the next fresh null of an allocator.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, KeysView, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Union

from reasoning.errors import UsageError


@dataclass(frozen=True, slots=True)
class Constant:
    """A constant symbol; rendered by its name."""
    name: str

    def __post_init__(self):
        if not self.name:
            raise UsageError("constant names must be non-empty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class LabeledNull:
    """A labeled null; rendered as `_:n<index>`."""
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise UsageError(f"null indexes are positive, got {self.index}")

    def __str__(self) -> str:
        return f"_:n{self.index}"


@dataclass(frozen=True, slots=True)
class Variable:
    """A variable of a rule or query."""
    name: str

    def __post_init__(self):
        if not self.name:
            raise UsageError("variable names must be non-empty")

    def __str__(self) -> str:
        return self.name


Term = Union[Constant, LabeledNull, Variable]
Substitution = dict[Term, Term]


def is_variable(term: Term) -> bool:
    return isinstance(term, Variable)


def is_null(term: Term) -> bool:
    return isinstance(term, LabeledNull)


def is_constant(term: Term) -> bool:
    return isinstance(term, Constant)


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def term_sort_key(term: Term) -> tuple[int, bytes, int]:
    """
    Returns a sort key that orders constants byte-lexicographically by name, followed by nulls
    in ascending index order.

    Args:
        term (Term): A constant or a labeled null.

    Returns:
        tuple[int, bytes, int]: The sort key.

    Raises:
        UsageError: If `term` is a variable.
    """
    if isinstance(term, Constant):
        return 0, term.name.encode("utf-8"), 0
    if isinstance(term, LabeledNull):
        return 1, b"", term.index
    raise UsageError(f"variables have no position in the term order: {term}")


def compare_terms(a: Term, b: Term) -> Ordering:
    """
    Compares two constants or nulls.

    Args:
        a (Term): Left operand.
        b (Term): Right operand.

    Returns:
        Ordering: LESS, EQUAL or GREATER.

    Raises:
        UsageError: If either operand is a variable.
    """
    key_a, key_b = term_sort_key(a), term_sort_key(b)
    if key_a < key_b:
        return Ordering.LESS
    if key_a > key_b:
        return Ordering.GREATER
    return Ordering.EQUAL


@dataclass(frozen=True, slots=True)
class Predicate:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise UsageError("predicate names must be non-empty")
        if self.arity < 0:
            raise UsageError(f"negative arity for {self.name}")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, slots=True)
class Atom:
    """
    A predicate applied to terms. Arity-0 atoms render without parentheses.
    """
    predicate: Predicate
    args: tuple[Term, ...]

    def __post_init__(self):
        if len(self.args) != self.predicate.arity:
            raise UsageError(
                f"{self.predicate} applied to {len(self.args)} arguments"
            )

    @classmethod
    def of(cls, name: str, *args: Term) -> Atom:
        return cls(Predicate(name, len(args)), tuple(args))

    @property
    def name(self) -> str:
        return self.predicate.name

    @property
    def arity(self) -> int:
        return self.predicate.arity

    @property
    def is_ground(self) -> bool:
        """True when the atom has no variables."""
        return not any(isinstance(t, Variable) for t in self.args)

    @property
    def is_null_free(self) -> bool:
        return not any(isinstance(t, LabeledNull) for t in self.args)

    def dom(self) -> frozenset[Term]:
        return frozenset(self.args)

    def variables(self) -> tuple[Variable, ...]:
        """Distinct variables in first-occurrence order."""
        return tuple(dict.fromkeys(t for t in self.args if isinstance(t, Variable)))

    def nulls(self) -> tuple[LabeledNull, ...]:
        """Distinct nulls in first-occurrence order."""
        return tuple(dict.fromkeys(t for t in self.args if isinstance(t, LabeledNull)))

    def substitute(self, mapping: Mapping[Term, Term]) -> Atom:
        return Atom(self.predicate, tuple(mapping.get(t, t) for t in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate.name
        return f"{self.predicate.name}({','.join(str(t) for t in self.args)})"


class Instance:
    """
    A finite set of variable-free atoms.

    Atoms keep their insertion order, which is the generation order of a chase run. Two indexes are
    maintained alongside: atoms per predicate and atoms per term (the domain index).
    """

    __slots__ = ("_atoms", "_by_predicate", "_by_term")

    def __init__(self, atoms: Iterable[Atom] = ()):
        self._atoms: dict[Atom, None] = {}
        self._by_predicate: dict[Predicate, dict[Atom, None]] = {}
        self._by_term: dict[Term, dict[Atom, None]] = {}
        for atom in atoms:
            self.add(atom)

    def add(self, atom: Atom) -> bool:
        """
        Adds an atom.

        Returns:
            bool: True if the atom was not present before.

        Raises:
            UsageError: If the atom contains variables.
        """
        if atom in self._atoms:
            return False
        if not atom.is_ground:
            raise UsageError(f"instances hold no variables: {atom}")
        self._atoms[atom] = None
        self._by_predicate.setdefault(atom.predicate, {})[atom] = None
        for term in dict.fromkeys(atom.args):
            self._by_term.setdefault(term, {})[atom] = None
        return True

    def discard(self, atom: Atom) -> bool:
        if atom not in self._atoms:
            return False
        del self._atoms[atom]
        bucket = self._by_predicate[atom.predicate]
        del bucket[atom]
        if not bucket:
            del self._by_predicate[atom.predicate]
        for term in dict.fromkeys(atom.args):
            bucket = self._by_term[term]
            del bucket[atom]
            if not bucket:
                del self._by_term[term]
        return True

    def __contains__(self, atom: object) -> bool:
        return atom in self._atoms

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Instance):
            return self._atoms.keys() == other._atoms.keys()
        if isinstance(other, (set, frozenset)):
            return self._atoms.keys() == other
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return "Instance({" + ", ".join(str(a) for a in self._atoms) + "})"

    def atoms_of(self, predicate: Predicate) -> KeysView[Atom]:
        """Atoms of one predicate, in generation order."""
        return self._by_predicate.get(predicate, {}).keys()

    def atoms_with(self, term: Term) -> KeysView[Atom]:
        """Atoms mentioning `term`, in generation order."""
        return self._by_term.get(term, {}).keys()

    def count_of(self, predicate: Predicate) -> int:
        return len(self._by_predicate.get(predicate, ()))

    def count_with(self, term: Term) -> int:
        return len(self._by_term.get(term, ()))

    def predicates(self) -> set[Predicate]:
        return set(self._by_predicate)

    def domain(self) -> set[Term]:
        return set(self._by_term)

    def nulls(self) -> list[LabeledNull]:
        return sorted((t for t in self._by_term if isinstance(t, LabeledNull)), key=lambda n: n.index)

    def constants(self) -> set[Constant]:
        return {t for t in self._by_term if isinstance(t, Constant)}

    def max_null_index(self) -> int:
        return max((t.index for t in self._by_term if isinstance(t, LabeledNull)), default=0)

    @property
    def domain_index(self) -> dict[Term, frozenset[Atom]]:
        """Snapshot of the maintained term index."""
        return {term: frozenset(atoms) for term, atoms in self._by_term.items()}

    def rebuild_index(self) -> dict[Term, frozenset[Atom]]:
        """Term index recomputed from the atoms alone."""
        index: dict[Term, set[Atom]] = {}
        for atom in self._atoms:
            for term in atom.args:
                index.setdefault(term, set()).add(atom)
        return {term: frozenset(atoms) for term, atoms in index.items()}

    def copy(self) -> Instance:
        return Instance(self._atoms)

    def substitute(self, mapping: Mapping[Term, Term]) -> Instance:
        """Applies a term map to every atom; the result keeps generation order."""
        return Instance(atom.substitute(mapping) for atom in self._atoms)


@dataclass
class NullAllocator:
    """
    Hands out labeled nulls with strictly increasing indexes. One allocator per chase run.
    """
    next_index: int = 1

    def __post_init__(self):
        if self.next_index < 1:
            raise UsageError("null allocation starts at index 1 or later")

    @classmethod
    def for_instance(cls, instance: Instance) -> NullAllocator:
        """Allocator whose first null is newer than every null of `instance`."""
        return cls(instance.max_null_index() + 1)

    def observe(self, term: Term) -> None:
        """Moves the counter past an externally created null."""
        if isinstance(term, LabeledNull) and term.index >= self.next_index:
            self.next_index = term.index + 1

    def fresh(self) -> LabeledNull:
        null = LabeledNull(self.next_index)
        self.next_index += 1
        return null


def fresh_null(alloc: NullAllocator) -> LabeledNull:
    return alloc.fresh()
