"""
homomorphism.py

Backtracking homomorphism search from a list of pattern atoms into an instance.

Which pattern terms may be bound is decided by a `flexible` predicate: variables for query
evaluation and trigger finding, nulls when checking that one chase result maps into another.
Every other term is rigid and must match itself.

At each level the search expands the pattern atom with the fewest candidate facts, estimated from the
predicate and term indexes of the instance. Candidates are tried in generation order, so the
enumeration is deterministic.

Functions:
    extend_match(pattern, fact, binding, flexible): Unifies one pattern atom with one fact.
    homomorphisms(patterns, instance, binding, flexible, injective): Streams all extensions.
    find_homomorphism(source, target, flexible): First homomorphism or None.
"""

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

from reasoning.model import Atom, Instance, Term, is_null, is_variable

TermFilter = Callable[[Term], bool]


def extend_match(pattern: Atom,
                 fact: Atom,
                 binding: Mapping[Term, Term],
                 flexible: TermFilter = is_variable) -> dict[Term, Term] | None:
    """
    Extends `binding` so that it maps `pattern` onto `fact`.

    Args:
        pattern (Atom): Atom with flexible terms.
        fact (Atom): Target atom.
        binding (Mapping[Term, Term]): Bindings fixed so far; left untouched.
        flexible (TermFilter): Selects the bindable terms of `pattern`.

    Returns:
        dict[Term, Term] | None: The extended binding, or None when the atoms do not unify.
    """
    if pattern.predicate != fact.predicate:
        return None
    extended = dict(binding)
    for term, value in zip(pattern.args, fact.args):
        if flexible(term):
            bound = extended.get(term)
            if bound is None:
                extended[term] = value
            elif bound != value:
                return None
        elif term != value:
            return None
    return extended


def _anchor_term(pattern: Atom, instance: Instance, binding: Mapping[Term, Term],
                 flexible: TermFilter) -> tuple[Term | None, int]:
    best_term, best_count = None, instance.count_of(pattern.predicate)
    for term in pattern.args:
        value = binding.get(term) if flexible(term) else term
        if value is None:
            continue
        count = instance.count_with(value)
        if count < best_count or best_term is None and count <= best_count:
            best_term, best_count = value, count
    return best_term, best_count


def _candidates(pattern: Atom, instance: Instance, anchor: Term | None) -> list[Atom]:
    if anchor is None:
        return list(instance.atoms_of(pattern.predicate))
    return [fact for fact in instance.atoms_with(anchor) if fact.predicate == pattern.predicate]


def _search(remaining: list[Atom],
            instance: Instance,
            binding: dict[Term, Term],
            flexible: TermFilter,
            injective: bool) -> Iterator[dict[Term, Term]]:
    if not remaining:
        yield binding
        return

    best_index, best_anchor, best_count = 0, None, -1
    for i, pattern in enumerate(remaining):
        anchor, count = _anchor_term(pattern, instance, binding, flexible)
        if best_count < 0 or count < best_count:
            best_index, best_anchor, best_count = i, anchor, count
        if count == 0:
            return

    pattern = remaining[best_index]
    rest = remaining[:best_index] + remaining[best_index + 1:]
    for fact in _candidates(pattern, instance, best_anchor):
        extended = extend_match(pattern, fact, binding, flexible)
        if extended is None:
            continue
        if injective and len(set(extended.values())) < len(extended):
            continue
        yield from _search(rest, instance, extended, flexible, injective)


def homomorphisms(patterns: Sequence[Atom],
                  instance: Instance,
                  binding: Mapping[Term, Term] | None = None,
                  flexible: TermFilter = is_variable,
                  injective: bool = False) -> Iterator[dict[Term, Term]]:
    """
    Streams every homomorphism from `patterns` into `instance` that extends `binding`.

    Args:
        patterns (Sequence[Atom]): Atoms to map.
        instance (Instance): Target instance.
        binding (Mapping[Term, Term] | None): Fixed initial bindings.
        flexible (TermFilter): Selects the bindable terms; defaults to variables.
        injective (bool): Only yield maps that send distinct flexible terms to distinct values.

    Returns:
        Iterator[dict[Term, Term]]: Bindings of the flexible terms occurring in `patterns`
            (plus the initial bindings).
    """
    start = dict(binding or {})
    if injective and len(set(start.values())) < len(start):
        return iter(())
    return _search(list(dict.fromkeys(patterns)), instance, start, flexible, injective)


def find_homomorphism(source: Iterable[Atom],
                      target: Instance,
                      flexible: TermFilter = is_null) -> dict[Term, Term] | None:
    """
    Finds a homomorphism from `source` into `target`; by default nulls of the source are
    flexible and constants rigid, which is the universality check between chase results.

    Returns:
        dict[Term, Term] | None: The homomorphism, or None if there is none.
    """
    return next(homomorphisms(list(source), target, flexible=flexible), None)
