"""
clouds.py

Clouds, canonical renaming, D-isomorphism and cloud-store-blocked saturation.

The cloud of an atom a in an instance B over a database D is the set of atoms of B whose terms all
lie in dom(a) ∪ dom(D). Under weakly guarded rules the subtree of a in the guarded chase forest is
determined by a and its cloud up to renaming of nulls. Blocked saturation exploits that: an atom
whose canonical (atom, cloud) key is already held by an expanded atom is blocked, and the triggers
guarded by it are parked. Clouds grow while the chase goes on, so whenever the queue runs dry all
keys are recomputed and blocked atoms that lost their twin are released. Outer rounds restart from
D plus the ground atoms found so far until a round changes neither the ground atoms nor the key set.

Classes:
    Cloud: An anchor with its cloud.
    CloudStore: Canonical (atom, cloud) keys with one representative each.
    SaturationStatus, SaturationReport: Outcome of blocked saturation.
    CloudBlocker: Trigger gate implementing the blocking.

Functions:
    cloud_of(instance, database, anchor): The cloud of an atom.
    canonicalize(anchor, atoms, database): Canonical renaming of an (atom, atom set) pair.
    d_isomorphic(x, y, database): D-isomorphism of two (atom, atom set) pairs.
    cloud_size_bound(database, tgds): Upper bound on cloud sizes.
    blocked_saturate(database, tgds, ...): Cloud-store-blocked saturation.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import Enum

from reasoning.analysis import TGD, classify
from reasoning.chase import ChaseEngine, ChaseMode, ChaseOptions, ChaseStatus, Trigger, split_ground
from reasoning.default_settings import (
    CANONICAL_NULL_BASE,
    DEFAULT_MAX_ROUNDS,
    DEFAULT_MAX_STEPS,
    DEFAULT_MAX_STORE_SIZE,
)
from reasoning.errors import CloudBoundViolation, CloudError, UsageError
from reasoning.homomorphism import homomorphisms
from reasoning.model import Atom, Instance, LabeledNull, Term
from logging_config import get_logger

logger = get_logger(__name__)

CloudKey = tuple[Atom, frozenset[Atom]]


@dataclass(frozen=True)
class Cloud:
    anchor: Atom
    atoms: frozenset[Atom]

    def __len__(self) -> int:
        return len(self.atoms)


def canonical_null(position: int) -> LabeledNull:
    """The canonical null ξ<position>, 1-based."""
    return LabeledNull(CANONICAL_NULL_BASE + position)


def _cloud_members(instance: Instance, anchor: Atom, allowed: set[Term],
                   ground: Iterable[Atom]) -> frozenset[Atom]:
    members = set(ground)
    for null in anchor.nulls():
        members.update(atom for atom in instance.atoms_with(null) if atom.dom() <= allowed)
    return frozenset(members)


def cloud_of(instance: Instance, database: Instance, anchor: Atom) -> Cloud:
    """
    Returns the atoms of `instance` over dom(anchor) ∪ dom(database).

    Args:
        instance (Instance): Chase instance (or prefix) containing `database`.
        database (Instance): The database D.
        anchor (Atom): An atom of `instance`.

    Returns:
        Cloud: The anchor with its cloud.

    Raises:
        UsageError: If `anchor` is not in `instance`.
    """
    if anchor not in instance:
        raise UsageError(f"{anchor} is not in the instance")
    domain = database.domain()
    allowed = domain | anchor.dom()
    ground = (atom for atom in instance if atom.dom() <= domain)
    return Cloud(anchor, _cloud_members(instance, anchor, allowed, ground))


def canonicalize(anchor: Atom, atoms: Iterable[Atom], database: Instance) -> CloudKey:
    """
    Renames the nulls of `anchor`, in first-occurrence order, to ξ1, ξ2, … and applies the
    renaming to the anchor and to `atoms`. Constants and nulls of the database are kept.

    Returns:
        CloudKey: (renamed anchor, renamed atom set).

    Raises:
        CloudError: If `atoms` mention a null that is in neither the anchor nor the database.
    """
    renaming: dict[Term, Term] = {}
    for term in anchor.args:
        if isinstance(term, LabeledNull) and term not in renaming:
            renaming[term] = canonical_null(len(renaming) + 1)
    domain = database.domain()
    renamed = set()
    for atom in atoms:
        for term in atom.args:
            if isinstance(term, LabeledNull) and term not in renaming and term not in domain:
                raise CloudError(f"{atom} mentions {term}, which is outside the anchor {anchor}")
        renamed.add(atom.substitute(renaming))
    return anchor.substitute(renaming), frozenset(renamed)


def d_isomorphic(x: tuple[Atom, Iterable[Atom]],
                 y: tuple[Atom, Iterable[Atom]],
                 database: Instance) -> bool:
    """
    Decides whether a bijection fixing dom(database) maps the pair `x` onto the pair `y`.

    Pairs whose sets only use the anchor's nulls are compared through their canonical forms.
    Other pairs fall back to a search for an injective renaming that sends nulls outside the
    database to nulls outside the database.
    """
    (anchor_x, atoms_x), (anchor_y, atoms_y) = (x[0], frozenset(x[1])), (y[0], frozenset(y[1]))
    try:
        return canonicalize(anchor_x, atoms_x, database) == canonicalize(anchor_y, atoms_y, database)
    except CloudError:
        pass

    if len(atoms_x) != len(atoms_y) or anchor_x.predicate != anchor_y.predicate:
        return False
    domain = database.domain()
    target = Instance([anchor_y, *atoms_y])
    flexible = lambda term: isinstance(term, LabeledNull) and term not in domain
    for mapping in homomorphisms([anchor_x, *atoms_x], target, flexible=flexible, injective=True):
        if not all(isinstance(value, LabeledNull) and value not in domain
                   for term, value in mapping.items() if flexible(term)):
            continue
        if anchor_x.substitute(mapping) == anchor_y and {a.substitute(mapping) for a in atoms_x} == atoms_y:
            return True
    return False


def cloud_size_bound(database: Instance, tgds: Sequence[TGD]) -> int:
    """
    |R| · (|dom(D)| + w)^w, where R are the predicates of D and the rules and w the largest arity.
    """
    predicates = database.predicates()
    for rule in tgds:
        predicates |= rule.predicates()
    width = max((p.arity for p in predicates), default=0)
    return max(len(predicates), 1) * (len(database.domain()) + width) ** width


@dataclass(frozen=True)
class StoreEntry:
    entry_id: int
    anchor: Atom
    cloud: Cloud
    key: CloudKey


class CloudStore:
    """Canonical (atom, cloud) keys, each with the first representative that produced it."""

    def __init__(self):
        self._entries: dict[CloudKey, StoreEntry] = {}

    def add(self, anchor: Atom, cloud: Cloud, key: CloudKey) -> StoreEntry:
        entry = self._entries.get(key)
        if entry is None:
            entry = StoreEntry(len(self._entries) + 1, anchor, cloud, key)
            self._entries[key] = entry
        return entry

    def get(self, key: CloudKey) -> StoreEntry | None:
        return self._entries.get(key)

    def __contains__(self, key: object) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[StoreEntry]:
        return iter(self._entries.values())

    def keys(self) -> frozenset[CloudKey]:
        return frozenset(self._entries)

    def max_cloud_size(self) -> int:
        return max((len(entry.cloud) for entry in self._entries.values()), default=0)


class SaturationStatus(str, Enum):
    STABILIZED = "stabilized"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SaturationReport:
    """
    Attributes:
        store (CloudStore): Keys of the last round, ground atoms included.
        ground_atoms (Instance): Derived atoms over dom(D).
        instance (Instance): Final instance of the last round, blocked atoms included.
        status (SaturationStatus): Stabilized or budget exhausted.
        rounds (int): Outer rounds run.
        steps (int): Chase steps over all rounds.
        blocked (int): Atoms blocked at the end of the last round.
    """
    store: CloudStore
    ground_atoms: Instance
    instance: Instance
    status: SaturationStatus
    rounds: int
    steps: int
    blocked: int


class _StoreOverflow(Exception):
    pass


class CloudBlocker:
    """
    Trigger gate of blocked saturation. Atoms over dom(D) are always expanded; a null-carrying
    atom is blocked while an expanded atom has the same canonical key.
    """

    def __init__(self, database: Instance, bound: int, max_store_size: int):
        self.database = database
        self.bound = bound
        self.max_store_size = max_store_size
        self.engine: ChaseEngine | None = None
        self._domain = database.domain()
        self._ground: dict[Atom, None] = {}
        self.expanded: dict[Atom, None] = {}
        self.blocked: dict[Atom, None] = {}
        self.parked: dict[Atom, list[Trigger]] = {}
        self._keys: dict[CloudKey, Atom] = {}

    @property
    def instance(self) -> Instance:
        return self.engine.instance

    def cloud(self, atom: Atom) -> Cloud:
        allowed = self._domain | atom.dom()
        cloud = Cloud(atom, _cloud_members(self.instance, atom, allowed, self._ground))
        if len(cloud) > self.bound:
            logger.error(f"cloud of {atom} has {len(cloud)} atoms, above the bound {self.bound}")
            raise CloudBoundViolation(f"cloud of {atom} exceeds {self.bound} atoms")
        return cloud

    def key_of(self, atom: Atom) -> CloudKey:
        return canonicalize(atom, self.cloud(atom).atoms, self.database)

    def on_new_atom(self, atom: Atom) -> None:
        if atom.dom() <= self._domain:
            self._ground[atom] = None
            self.expanded[atom] = None
            return
        key = self.key_of(atom)
        if key in self._keys:
            self.blocked[atom] = None
            return
        self._keys[key] = atom
        self.expanded[atom] = None
        if len(self._keys) > self.max_store_size:
            raise _StoreOverflow()

    def admit(self, trigger: Trigger, guard_atom: Atom | None) -> bool:
        if guard_atom is not None and guard_atom in self.blocked:
            self.parked.setdefault(guard_atom, []).append(trigger)
            return False
        return True

    def release(self) -> list[Trigger]:
        keys: dict[CloudKey, Atom] = {}
        for atom in self.expanded:
            if atom not in self._ground:
                keys.setdefault(self.key_of(atom), atom)
        released: list[Trigger] = []
        for atom in list(self.blocked):
            key = self.key_of(atom)
            if key in keys:
                continue
            keys[key] = atom
            del self.blocked[atom]
            self.expanded[atom] = None
            released.extend(self.parked.pop(atom, []))
            logger.debug(f"released {atom}")
        self._keys = keys
        if len(keys) > self.max_store_size:
            raise _StoreOverflow()
        return released

    def build_store(self) -> CloudStore:
        store = CloudStore()
        ground = frozenset(self._ground)
        for atom in self._ground:
            store.add(atom, Cloud(atom, ground), canonicalize(atom, ground, self.database))
        for key, atom in self._keys.items():
            store.add(atom, self.cloud(atom), key)
        return store


def blocked_saturate(database: Instance,
                     tgds: Sequence[TGD],
                     max_rounds: int = DEFAULT_MAX_ROUNDS,
                     max_store_size: int = DEFAULT_MAX_STORE_SIZE,
                     max_steps: int = DEFAULT_MAX_STEPS,
                     force: bool = False) -> SaturationReport:
    """
    Saturates `database` under `tgds` with cloud-store blocking.

    Args:
        database (Instance): Ground database D.
        tgds (Sequence[TGD]): Single-head TGDs.
        max_rounds (int): Outer rounds before giving up.
        max_store_size (int): Store entries allowed in one round.
        max_steps (int): Chase steps allowed in one round.
        force (bool): Run on rule sets that are not weakly guarded (results are then only sound).

    Returns:
        SaturationReport: Store, ground atoms, last instance and status.

    Raises:
        UsageError: For rules that are not weakly guarded (without `force`) or multi-head rules.
    """
    if max_rounds <= 0 or max_store_size <= 0 or max_steps <= 0:
        raise UsageError("saturation budgets must be positive")
    if not classify(tgds).supports_blocking and not force:
        raise UsageError("blocked saturation needs weakly guarded rules (use force to override)")

    bound = cloud_size_bound(database, tgds)
    options = ChaseOptions(mode=ChaseMode.OBLIVIOUS, max_steps=max_steps, max_depth=max_steps)
    ground = database.copy()
    previous_keys: frozenset[CloudKey] | None = None
    status = SaturationStatus.BUDGET_EXHAUSTED
    total_steps = 0
    rounds = 0
    blocker = CloudBlocker(database, bound, max_store_size)
    instance = ground

    logger.info(f"blocked saturation started: {len(database)} facts, {len(tgds)} rules, cloud bound {bound}")
    while rounds < max_rounds:
        rounds += 1
        blocker = CloudBlocker(database, bound, max_store_size)
        engine = ChaseEngine(ground, tgds, options=options, gate=blocker)
        blocker.engine = engine
        try:
            result = engine.run()
        except _StoreOverflow:
            logger.warning(f"cloud store exceeded {max_store_size} entries in round {rounds}")
            instance = engine.instance
            total_steps += len(engine.steps)
            break
        instance = result.instance
        total_steps += len(result.steps)
        if result.status is not ChaseStatus.SATURATED:
            logger.warning(f"blocked saturation ran out of steps in round {rounds}")
            break

        new_ground, _ = split_ground(result.instance, database)
        keys = frozenset(blocker._keys)
        logger.debug(f"round {rounds}: {len(new_ground)} ground atoms, {len(keys)} keys")
        if new_ground == ground and keys == previous_keys:
            status = SaturationStatus.STABILIZED
            break
        ground, previous_keys = new_ground, keys

    ground_atoms, _ = split_ground(instance, database)
    store = blocker.build_store() if blocker.engine is not None else CloudStore()
    logger.info(
        f"blocked saturation finished: {status.value} after {rounds} rounds, "
        f"{len(store)} store entries, {len(ground_atoms)} ground atoms"
    )
    return SaturationReport(
        store=store,
        ground_atoms=ground_atoms,
        instance=instance,
        status=status,
        rounds=rounds,
        steps=total_steps,
        blocked=len(blocker.blocked),
    )
