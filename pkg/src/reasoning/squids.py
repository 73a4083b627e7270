"""
squids.py

R-covers, squid decompositions and an exhaustive check of the squid characterization of query
entailment on terminating chases.

A cover of a Boolean query Q extends Q with at most |Q| extra atoms over fresh variables. A folding
h identifies variables of the cover; a squid decomposition then splits h(cover) into a head H (atoms
whose variables all lie in a chosen set Vδ) and tentacles T (the rest) such that T is
[Vδ ∪ constants]-acyclic. Q is entailed iff some decomposition maps H into the ground part of the
chase and T into its null part.

Foldings are enumerated as set partitions (each variable maps to the first variable of its block),
which covers every folding up to renaming of the image.

Classes:
    SquidDecomposition: Cover, folding, Vδ with the derived head and tentacles.
    SquidStream: Truncation-aware stream of decompositions.
    SquidVerdict: Outcome of the entailment check.

Functions:
    enumerate_squids(query, schema, ...): Valid decompositions of a query.
    verify_squid_lemma(database, tgds, query, ...): Compares entailment with the squid witness search.
    squid_to_dot(decomposition): DOT rendering.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

from reasoning.acyclic import s_join_forest
from reasoning.analysis import TGD, normalize_heads
from reasoning.chase import ChaseMode, ChaseOptions, ChaseStatus, run_chase, split_ground
from reasoning.default_settings import DEFAULT_MAX_SQUID_CANDIDATES, DEFAULT_MAX_STEPS
from reasoning.errors import UsageError
from reasoning.homomorphism import homomorphisms
from reasoning.model import Atom, Constant, Instance, Predicate, Term, Variable
from reasoning.query import CQ
from logging_config import get_logger

logger = get_logger(__name__)


def _variables(atoms: Iterable[Atom]) -> tuple[Variable, ...]:
    return tuple(dict.fromkeys(t for atom in atoms for t in atom.args if isinstance(t, Variable)))


@dataclass(frozen=True)
class SquidDecomposition:
    """
    Attributes:
        query (tuple[Atom, ...]): Body of the decomposed query.
        cover (tuple[Atom, ...]): The cover, query atoms first.
        folding (tuple[tuple[Variable, Variable], ...]): Non-identity pairs of the folding.
        v_delta (frozenset[Variable]): Head variables.
        head (tuple[Atom, ...]): Folded atoms over Vδ and constants.
        tentacles (tuple[Atom, ...]): The other folded atoms.
    """
    query: tuple[Atom, ...]
    cover: tuple[Atom, ...]
    folding: tuple[tuple[Variable, Variable], ...]
    v_delta: frozenset[Variable]
    head: tuple[Atom, ...] = ()
    tentacles: tuple[Atom, ...] = ()

    @classmethod
    def build(cls,
              query: Sequence[Atom],
              cover: Sequence[Atom],
              folding: Mapping[Variable, Variable],
              v_delta: Iterable[Variable]) -> SquidDecomposition:
        """Derives the head and tentacles from a cover, a folding and Vδ."""
        v_delta = frozenset(v_delta)
        pairs = tuple((v, w) for v, w in folding.items() if v != w)
        folded = tuple(dict.fromkeys(atom.substitute(folding) for atom in cover))
        head = tuple(a for a in folded if set(a.variables()) <= v_delta)
        tentacles = tuple(a for a in folded if not set(a.variables()) <= v_delta)
        return cls(tuple(query), tuple(cover), pairs, v_delta, head, tentacles)

    @property
    def mapping(self) -> dict[Variable, Variable]:
        return dict(self.folding)

    def folded(self) -> tuple[Atom, ...]:
        return self.head + self.tentacles

    def validate(self) -> list[str]:
        """
        Checks the cover bounds, the head/tentacle split and the acyclicity of the tentacles.

        Returns:
            list[str]: Violations; empty for a squid decomposition.
        """
        problems: list[str] = []
        if not set(self.query) <= set(self.cover):
            problems.append("the cover does not contain the query")
        if len(set(self.cover)) > 2 * len(set(self.query)):
            problems.append("the cover has more than twice the query's atoms")

        folding = self.mapping
        folded = tuple(dict.fromkeys(atom.substitute(folding) for atom in self.cover))
        image = set(_variables(folded))
        if not self.v_delta <= image:
            problems.append("Vδ contains variables outside the folded cover")
        head = {a for a in folded if set(a.variables()) <= self.v_delta}
        if head != set(self.head) or set(folded) - head != set(self.tentacles):
            problems.append("head and tentacles do not split the folded cover by Vδ")

        constants = {t for a in self.tentacles for t in a.args if isinstance(t, Constant)}
        if s_join_forest(self.tentacles, self.v_delta | constants) is None:
            problems.append("the tentacles are not [Vδ]-acyclic")
        return problems

    def is_valid(self) -> bool:
        return not self.validate()


def _partitions(items: Sequence[Variable],
                initial: Sequence[Sequence[Variable]] = ()) -> Iterator[list[list[Variable]]]:
    """Set partitions of `items` extending `initial`, the identity (all new blocks) first."""
    def extend(i: int, blocks: list[list[Variable]]) -> Iterator[list[list[Variable]]]:
        if i == len(items):
            yield blocks
            return
        yield from extend(i + 1, blocks + [[items[i]]])
        for b in range(len(blocks)):
            yield from extend(i + 1, blocks[:b] + [blocks[b] + [items[i]]] + blocks[b + 1:])

    yield from extend(0, [list(block) for block in initial])


def _folding(blocks: Sequence[Sequence[Variable]]) -> dict[Variable, Variable]:
    return {v: block[0] for block in blocks for v in block}


def _extra_atoms(predicates: Sequence[Predicate], taken: set[str]) -> list[Atom]:
    atoms, counter = [], 0
    for predicate in predicates:
        args = []
        for _ in range(predicate.arity):
            counter += 1
            while f"W{counter}" in taken:
                counter += 1
            args.append(Variable(f"W{counter}"))
        atoms.append(Atom(predicate, tuple(args)))
    return atoms


def _folded_covers(query: Sequence[Atom],
                   schema: Sequence[Predicate],
                   max_cover_atoms: int,
                   accept_core=None) -> Iterator[tuple[tuple[Atom, ...], dict[Variable, Variable]]]:
    """
    Yields (cover, folding) pairs: covers by number of extra atoms, then foldings of the query
    variables, then extensions to the extra variables. `accept_core` may reject a folding of the
    query variables before its extensions are generated.
    """
    query = tuple(dict.fromkeys(query))
    query_vars = _variables(query)
    taken = {v.name for v in query_vars}
    max_extra = max(0, min(len(query), max_cover_atoms - len(query)))

    for extra_count in range(max_extra + 1):
        for predicates in combinations_with_replacement(schema, extra_count):
            extras = _extra_atoms(predicates, taken)
            cover = query + tuple(extras)
            extra_vars = _variables(extras)
            for core in _partitions(query_vars):
                if accept_core is not None and not accept_core(_folding(core)):
                    continue
                for blocks in _partitions(extra_vars, core):
                    yield cover, _folding(blocks)


def _schema(query: Sequence[Atom], extra: Iterable[Predicate] = ()) -> list[Predicate]:
    predicates = {atom.predicate for atom in query} | set(extra)
    return sorted(predicates, key=lambda p: (p.name, p.arity))


class SquidStream:
    """
    Iterable over squid decompositions that stops after `max_candidates` candidates and records
    whether it had to.
    """

    def __init__(self, candidates: Iterator[SquidDecomposition], max_candidates: int):
        self._candidates = candidates
        self.max_candidates = max_candidates
        self.truncated = False
        self.examined = 0

    def __iter__(self) -> Iterator[SquidDecomposition]:
        for candidate in self._candidates:
            self.examined += 1
            if self.examined > self.max_candidates:
                self.truncated = True
                logger.warning(f"squid enumeration truncated after {self.max_candidates} candidates")
                return
            if candidate.is_valid():
                yield candidate


def enumerate_squids(query: CQ,
                     schema: Iterable[Predicate] | None = None,
                     max_cover_atoms: int | None = None,
                     max_candidates: int = DEFAULT_MAX_SQUID_CANDIDATES) -> SquidStream:
    """
    Enumerates the squid decompositions of a query.

    Args:
        query (CQ): The query; its head is ignored.
        schema (Iterable[Predicate] | None): Predicates available for extra cover atoms; the
            query's own predicates when None.
        max_cover_atoms (int | None): Cover size cap; 2|Q| when None.
        max_candidates (int): Candidates examined before the stream is truncated.

    Returns:
        SquidStream: Valid decompositions; covers grow, then foldings, then Vδ shrinks.
    """
    body = tuple(dict.fromkeys(query.body))
    cap = 2 * len(body) if max_cover_atoms is None else max_cover_atoms
    if max_candidates <= 0:
        raise UsageError("max_candidates must be positive")

    def candidates() -> Iterator[SquidDecomposition]:
        for cover, folding in _folded_covers(body, _schema(body, schema or ()), cap):
            image = _variables(atom.substitute(folding) for atom in cover)
            for size in range(len(image), -1, -1):
                for chosen in combinations(image, size):
                    yield SquidDecomposition.build(body, cover, folding, chosen)

    return SquidStream(candidates(), max_candidates)


@dataclass(frozen=True)
class SquidVerdict:
    """
    Attributes:
        holds (bool | None): Entailment and witness existence agree; None when inconclusive.
        entailed (bool | None): The chase satisfies the query.
        witness (SquidDecomposition | None): A decomposition with a split homomorphism.
        theta (dict[Term, Term]): That homomorphism.
        inconclusive (bool): The chase did not saturate or the search was truncated.
    """
    holds: bool | None
    entailed: bool | None
    witness: SquidDecomposition | None = None
    theta: dict[Term, Term] = field(default_factory=dict)
    inconclusive: bool = False


def verify_squid_lemma(database: Instance,
                       tgds: Sequence[TGD],
                       query: CQ,
                       max_steps: int = DEFAULT_MAX_STEPS,
                       max_candidates: int = DEFAULT_MAX_SQUID_CANDIDATES) -> SquidVerdict:
    """
    Checks, on a terminating instance, that the chase satisfies `query` iff some squid
    decomposition maps its head into the ground part and its tentacles into the null part.

    The witness search folds covers, keeps foldings of the query that still map into the chase,
    and for every homomorphism θ of the folded cover takes Vδ to be the variables θ sends to
    constants; the decomposition then only needs acyclic tentacles.

    Raises:
        UsageError: If the query is not Boolean.
    """
    if not query.is_boolean:
        raise UsageError("the squid check applies to Boolean queries")
    rules = normalize_heads(tgds, {p.name for p in database.predicates() | query.predicates()})
    result = run_chase(database, rules, ChaseOptions(mode=ChaseMode.RESTRICTED, max_steps=max_steps,
                                                     max_depth=max_steps))
    if result.status is not ChaseStatus.SATURATED:
        logger.warning("squid check skipped: the chase did not saturate")
        return SquidVerdict(None, None, inconclusive=True)

    chase = result.instance
    ground, _ = split_ground(chase, database)
    entailed = next(homomorphisms(query.body, chase), None) is not None
    body = tuple(dict.fromkeys(query.body))
    schema = _schema(body, chase.predicates())

    core_cache: dict[frozenset[Atom], bool] = {}

    def maps_into_chase(folding: dict[Variable, Variable]) -> bool:
        core = frozenset(atom.substitute(folding) for atom in body)
        if core not in core_cache:
            core_cache[core] = next(homomorphisms(list(core), chase), None) is not None
        return core_cache[core]

    examined = 0
    for cover, folding in _folded_covers(body, schema, 2 * len(body), maps_into_chase):
        folded = tuple(dict.fromkeys(atom.substitute(folding) for atom in cover))
        tried: set[frozenset[Variable]] = set()
        for theta in homomorphisms(folded, chase):
            v_delta = frozenset(v for v in _variables(folded) if isinstance(theta[v], Constant))
            if v_delta in tried:
                continue
            tried.add(v_delta)
            examined += 1
            if examined > max_candidates:
                logger.warning(f"squid witness search truncated after {max_candidates} candidates")
                return SquidVerdict(None, entailed, inconclusive=True)
            decomposition = SquidDecomposition.build(body, cover, folding, v_delta)
            if not decomposition.is_valid():
                continue
            head_image = {a.substitute(theta) for a in decomposition.head}
            if head_image <= set(ground):
                logger.debug(f"squid witness with Vδ={sorted(v.name for v in v_delta)}")
                return SquidVerdict(entailed, entailed, decomposition, dict(theta))

    return SquidVerdict(not entailed, entailed)


def squid_to_dot(decomposition: SquidDecomposition, name: str = "squid") -> str:
    """Head atoms in one cluster; tentacle atoms joined along their [Vδ]-join forest."""
    lines = [f"graph {name} {{", "  node [shape=box];", "  subgraph cluster_head {", '    label="head";']
    for i, atom in enumerate(decomposition.head):
        lines.append(f'    h{i} [label="{atom}"];')
    lines.append("  }")
    for i, atom in enumerate(decomposition.tentacles):
        lines.append(f'  t{i} [label="{atom}"];')
    constants = {t for a in decomposition.tentacles for t in a.args if isinstance(t, Constant)}
    joined = s_join_forest(decomposition.tentacles, decomposition.v_delta | constants)
    if joined is not None:
        forest, _ = joined
        index = {atom: i for i, atom in enumerate(decomposition.tentacles)}
        for i, p in enumerate(forest.parent):
            if p is not None:
                lines.append(f"  t{index[forest.labels[p]]} -- t{index[forest.labels[i]]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
