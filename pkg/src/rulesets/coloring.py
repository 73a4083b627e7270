"""
coloring.py

Encoding of graph 3-colorability as a Boolean query over a fixed six-fact database.

The database lists every ordered pair of distinct colors r, g, b as data(o, c1, c2). A graph
becomes the query with one shared variable X and, per edge (vi, vj), the atoms data(X,Vi,Vj) and
data(X,Vj,Vi). The query holds iff the graph is 3-colorable, with or without the F-Logic Lite rules.
"""

from dataclasses import dataclass
from itertools import permutations

from program_io.parser import Program
from reasoning.errors import UsageError
from reasoning.model import Atom, Constant, Instance, Variable
from reasoning.query import CQ

COLORS = ("r", "g", "b")
WITNESS = "o"
COLOR_QUERY_NAME = "color"


@dataclass(frozen=True)
class GraphSpec:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        declared = set(self.vertices)
        for a, b in self.edges:
            if a not in declared or b not in declared:
                raise UsageError(f"edge ({a}, {b}) mentions an undeclared vertex")
            if a == b:
                raise UsageError(f"self-loop on {a} cannot be colored")


def color_database() -> Instance:
    witness = Constant(WITNESS)
    return Instance(
        Atom.of("data", witness, Constant(c1), Constant(c2)) for c1, c2 in permutations(COLORS, 2)
    )


def encode_three_colorability(graph: GraphSpec) -> tuple[Instance, CQ]:
    """
    Returns the color database and the Boolean query of `graph`.

    Vertex i (1-based, in declaration order) becomes the variable V<i>.
    """
    x = Variable("X")
    names = {v: Variable(f"V{i}") for i, v in enumerate(graph.vertices, start=1)}
    body: list[Atom] = []
    for a, b in graph.edges:
        body.append(Atom.of("data", x, names[a], names[b]))
        body.append(Atom.of("data", x, names[b], names[a]))
    return color_database(), CQ(COLOR_QUERY_NAME, (), tuple(dict.fromkeys(body)))


def coloring_program(graph: GraphSpec, rules: Program) -> Program:
    """The rules of `rules` over the encoded database, with the query named `color`."""
    database, query = encode_three_colorability(graph)
    return Program(facts=database, tgds=list(rules.tgds), egds=list(rules.egds),
                   queries={query.name: query})
