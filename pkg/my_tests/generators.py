"""
generators.py

Term builders and seeded random generators of programs and atom sets for the tests.
"""

import random

from program_io.parser import Program
from reasoning.analysis import TGD, classify, normalize_heads
from reasoning.chase import EGD
from reasoning.model import Atom, Constant, Instance, LabeledNull, Predicate, Variable
from reasoning.query import CQ


def atom(name: str, *args) -> Atom:
    """Builds an atom; uppercase-initial strings are variables, other strings constants."""
    terms = []
    for arg in args:
        if isinstance(arg, str):
            terms.append(Variable(arg) if arg[0].isupper() else Constant(arg))
        else:
            terms.append(arg)
    return Atom.of(name, *terms)


def null(index: int) -> LabeledNull:
    return LabeledNull(index)


def instance(*atoms: Atom) -> Instance:
    return Instance(atoms)


PREDICATES = [Predicate("p0", 1), Predicate("p1", 2), Predicate("p2", 2), Predicate("p3", 3)]
CONSTANTS = [Constant("a"), Constant("b"), Constant("c"), Constant("d1")]
VARIABLES = [Variable("X"), Variable("Y"), Variable("Z"), Variable("W")]
EXISTENTIALS = [Variable("E1"), Variable("E2")]


def _random_atom(rng: random.Random, terms: list) -> Atom:
    predicate = rng.choice(PREDICATES)
    return Atom(predicate, tuple(rng.choice(terms) for _ in range(predicate.arity)))


def _body(rng: random.Random, size: int) -> tuple[Atom, ...]:
    return tuple(dict.fromkeys(_random_atom(rng, VARIABLES + CONSTANTS[:1]) for _ in range(size)))


def _body_variables(body) -> list[Variable]:
    return list(dict.fromkeys(t for a in body for t in a.args if isinstance(t, Variable)))


def random_query(rng: random.Random, name: str = "q") -> CQ:
    body = _body(rng, rng.randint(1, 3))
    variables = _body_variables(body)
    return CQ(name, tuple(rng.sample(variables, rng.randint(0, len(variables)))), body)


def random_instance(rng: random.Random, size: int, nulls: int = 3) -> Instance:
    """Atoms over the fixed schema with the fixed constants and nulls 1..`nulls`."""
    terms = CONSTANTS + [LabeledNull(i) for i in range(1, nulls + 1)]
    return Instance(_random_atom(rng, terms) for _ in range(size))


def random_program(rng: random.Random) -> Program:
    """A random well-formed program over a fixed schema: facts, TGDs, EGDs and queries."""
    facts = Instance(_random_atom(rng, CONSTANTS) for _ in range(rng.randint(0, 6)))

    tgds = []
    for _ in range(rng.randint(0, 4)):
        body = _body(rng, rng.randint(1, 2))
        frontier = _body_variables(body) or [CONSTANTS[0]]
        head_terms = frontier + EXISTENTIALS[: rng.randint(0, 2)]
        head = tuple(dict.fromkeys(_random_atom(rng, head_terms) for _ in range(rng.randint(1, 2))))
        used = {t for a in head for t in a.args}
        body_constants = {t for a in body for t in a.args if isinstance(t, Constant)}
        if any(isinstance(t, Constant) and t not in body_constants for t in used):
            continue
        tgds.append(TGD(body, head, tuple(e for e in EXISTENTIALS if e in used)))

    egds = []
    for _ in range(rng.randint(0, 2)):
        body = _body(rng, rng.randint(1, 2))
        variables = _body_variables(body)
        if variables:
            egds.append(EGD(body, rng.choice(variables), rng.choice(variables)))

    queries = {f"q{i}": random_query(rng, f"q{i}") for i in range(rng.randint(0, 2))}

    return Program(facts=facts, tgds=tgds, egds=egds, queries=queries)


def random_atom_set(rng: random.Random, size: int, variables: int = 5) -> list[Atom]:
    """Atoms over r/2 and s/3 with variables V1..V<variables>."""
    pool = [Variable(f"V{i}") for i in range(1, variables + 1)]
    atoms = []
    for _ in range(size):
        arity = rng.choice((2, 3))
        atoms.append(Atom(Predicate("r" if arity == 2 else "s", arity),
                          tuple(rng.choice(pool) for _ in range(arity))))
    return atoms


def weakly_guarded_programs(rng: random.Random, count: int, max_draws: int = 5000):
    """
    Yields `count` (program, single-head rules) pairs whose rules support blocked saturation.
    Programs without facts are skipped; EGDs of the drawn programs are left out of the rules.
    """
    found = 0
    for _ in range(max_draws):
        program = random_program(rng)
        if not program.facts:
            continue
        rules = normalize_heads(program.tgds, {p.name for p in program.schema()})
        if not classify(rules).supports_blocking:
            continue
        yield program, rules
        found += 1
        if found == count:
            return


CLOUD_PREDICATES = [Predicate("p", 1), Predicate("q", 2)]


def random_anchored_set(rng: random.Random,
                        nulls: list[LabeledNull],
                        constants: list[Constant],
                        size: int) -> tuple[Atom, frozenset[Atom]]:
    """An anchor g(null, term) with up to `size` p/q atoms over `nulls` and `constants`."""
    terms = [*nulls, *constants]
    anchor = Atom(Predicate("g", 2), (rng.choice(nulls), rng.choice(terms)))
    atoms = set()
    for _ in range(size):
        predicate = rng.choice(CLOUD_PREDICATES)
        atoms.add(Atom(predicate, tuple(rng.choice(terms) for _ in range(predicate.arity))))
    return anchor, frozenset(atoms)


def random_fll_facts(rng: random.Random, size: int) -> str:
    """
    Facts for the F-Logic Lite rules: objects o1, o2; classes c1..c3; attributes att1, att2;
    values v1, v2; types t1, t2. Types never carry mandatory attributes, so the chase terminates.
    """
    objects, classes = ["o1", "o2"], ["c1", "c2", "c3"]
    attributes, values, types = ["att1", "att2"], ["v1", "v2"], ["t1", "t2"]
    makers = [
        lambda: f"member({rng.choice(objects)},{rng.choice(classes)})",
        lambda: f"sub({rng.choice(classes)},{rng.choice(classes)})",
        lambda: f"mandatory({rng.choice(attributes)},{rng.choice(classes)})",
        lambda: f"funct({rng.choice(attributes)},{rng.choice(classes + objects)})",
        lambda: f"type({rng.choice(classes + objects)},{rng.choice(attributes)},{rng.choice(types)})",
        lambda: f"data({rng.choice(objects)},{rng.choice(attributes)},{rng.choice(values)})",
    ]
    return "".join(f"fact {rng.choice(makers)()}.\n" for _ in range(size))
