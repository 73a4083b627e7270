"""
acyclic.py

[S]-acyclicity of atom sets, join forests and the tree decompositions read off them.

An atom set is [S]-acyclic when its atoms can be arranged in a forest such that, for every value c
outside S, the atoms containing c form a connected subtree. This is plain α-acyclicity of the
hypergraph whose edge for an atom a is dom(a) − S, decided here by ear removal: an atom is an ear
when its hidden-free values shared with other atoms all lie in one other atom, its witness, which
becomes its parent.

Validation goes through networkx graphs built from the result.

Classes:
    JoinForest: Atom-labelled forest with a set of hidden values.
    TreeDecomposition: Bags with tree edges.

Functions:
    s_join_forest(atoms, hidden): Join forest and tree decomposition, or None.
    is_alpha_acyclic(hyperedges): Classical GYO reduction.
    join_forest_from_gcf(nodes, hidden): A restricted chase forest read as a join forest.
    join_forest_to_dot(forest): DOT rendering.
"""

from __future__ import annotations

from collections.abc import Collection, Hashable, Iterable, Sequence
from dataclasses import dataclass

import networkx as nx

from reasoning.chase import ForestNode
from reasoning.model import Atom, Term


@dataclass(frozen=True)
class JoinForest:
    """
    Attributes:
        labels (tuple[Atom, ...]): Node labels; node i is labelled labels[i].
        parent (tuple[int | None, ...]): Parent of each node, None for roots.
        hidden (frozenset[Term]): The set S of values exempt from connectivity.
    """
    labels: tuple[Atom, ...]
    parent: tuple[int | None, ...]
    hidden: frozenset[Term]

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.labels)))
        graph.add_edges_from((p, i) for i, p in enumerate(self.parent) if p is not None)
        return graph

    def validate(self, atoms: Iterable[Atom]) -> list[str]:
        """
        Checks that the labelling is onto `atoms`, that the edges form a forest and that every
        non-hidden value induces a connected subgraph.

        Returns:
            list[str]: Violations; empty when the forest is valid.
        """
        problems: list[str] = []
        expected = set(atoms)
        labelled = set(self.labels)
        if labelled != expected:
            missing = ", ".join(sorted(str(a) for a in expected - labelled))
            extra = ", ".join(sorted(str(a) for a in labelled - expected))
            problems.append(f"labelling is not onto the atom set (missing: {missing}; extra: {extra})")

        graph = self.graph()
        if graph.number_of_nodes() and not nx.is_forest(graph):
            problems.append("edges contain a cycle")

        occurrences: dict[Term, list[int]] = {}
        for node, atom in enumerate(self.labels):
            for term in atom.dom() - self.hidden:
                occurrences.setdefault(term, []).append(node)
        for term, nodes in occurrences.items():
            if len(nodes) > 1 and not nx.is_connected(graph.subgraph(nodes)):
                problems.append(f"nodes containing {term} are not connected")
        return problems


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node id; node 0 is the root holding the hidden values."""
    bags: tuple[frozenset[Term], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(bag) for bag in self.bags), default=0) - 1

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.bags)))
        graph.add_edges_from(self.edges)
        return graph

    def validate(self, atoms: Iterable[Atom]) -> list[str]:
        """
        Checks the tree-decomposition conditions against the Gaifman graph of `atoms`: every value is
        in a bag, the values of every atom share a bag, and the bags holding a value are connected.
        """
        problems: list[str] = []
        graph = self.graph()
        if not self.bags or not nx.is_tree(graph):
            return ["the decomposition is not a tree"]

        atoms = list(atoms)
        values = {t for atom in atoms for t in atom.args}
        covered = set().union(*self.bags)
        for term in values - covered:
            problems.append(f"{term} is in no bag")
        for atom in atoms:
            dom = atom.dom()
            if not any(dom <= bag for bag in self.bags):
                problems.append(f"no bag contains all values of {atom}")
        for term in values & covered:
            holders = [i for i, bag in enumerate(self.bags) if term in bag]
            if not nx.is_connected(graph.subgraph(holders)):
                problems.append(f"bags containing {term} are not connected")
        return problems


def _ear_removal(edges: Sequence[frozenset]) -> list[int | None] | None:
    """
    Removes ears in index order. Returns the witness of every edge (None for the last edge of a
    component), or None when the hypergraph is cyclic.
    """
    alive = list(range(len(edges)))
    parent: list[int | None] = [None] * len(edges)
    while len(alive) > 1:
        removed = False
        for i in alive:
            others = [j for j in alive if j != i]
            shared = edges[i] & frozenset().union(*(edges[j] for j in others))
            if not shared:
                parent[i] = None
            else:
                witness = next((j for j in others if shared <= edges[j]), None)
                if witness is None:
                    continue
                parent[i] = witness
            alive.remove(i)
            removed = True
            break
        if not removed:
            return None
    return parent


def s_join_forest(atoms: Iterable[Atom],
                  hidden: Collection[Term] = ()) -> tuple[JoinForest, TreeDecomposition] | None:
    """
    Builds an [S]-join forest of `atoms` with S = `hidden`, together with a tree decomposition.

    The decomposition has an auxiliary root bag S; every atom contributes the bag dom(atom) ∪ S,
    attached to the bag of its forest parent, or to the root for forest roots. Its width is at
    most |S| + w - 1 for maximal arity w.

    Args:
        atoms (Iterable[Atom]): The atom set.
        hidden (Collection[Term]): Values exempt from connectivity.

    Returns:
        tuple[JoinForest, TreeDecomposition] | None: None when the set is not [S]-acyclic.
    """
    labels = tuple(dict.fromkeys(atoms))
    hidden = frozenset(hidden)
    parent = _ear_removal([atom.dom() - hidden for atom in labels])
    if parent is None:
        return None
    forest = JoinForest(labels, tuple(parent), hidden)

    bags = [hidden] + [atom.dom() | hidden for atom in labels]
    edges = tuple((0 if p is None else p + 1, i + 1) for i, p in enumerate(parent))
    return forest, TreeDecomposition(tuple(bags), edges)


def is_alpha_acyclic(hyperedges: Iterable[Collection[Hashable]]) -> bool:
    """
    Classical GYO reduction: repeatedly delete vertices occurring in a single edge and edges
    contained in another edge; the hypergraph is α-acyclic iff nothing remains.
    """
    edges = [set(edge) for edge in hyperedges]
    changed = True
    while changed:
        changed = False
        counts: dict[Hashable, int] = {}
        for edge in edges:
            for vertex in edge:
                counts[vertex] = counts.get(vertex, 0) + 1
        for edge in edges:
            lonely = {v for v in edge if counts[v] == 1}
            if lonely:
                edge -= lonely
                changed = True
        for i, edge in enumerate(edges):
            if not edge or any(j != i and edge <= other for j, other in enumerate(edges)):
                del edges[i]
                changed = True
                break
    return not edges


def join_forest_from_gcf(nodes: Sequence[ForestNode], hidden: Collection[Term]) -> JoinForest:
    """
    Reads a restricted chase forest as a join forest: one node per forest node, same parent edges.
    Parents removed from `nodes` turn their children into roots.
    """
    position = {node.id: i for i, node in enumerate(nodes)}
    return JoinForest(
        labels=tuple(node.atom for node in nodes),
        parent=tuple(position.get(node.parent) if node.parent is not None else None for node in nodes),
        hidden=frozenset(hidden),
    )


def _quoted(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def join_forest_to_dot(forest: JoinForest, name: str = "join_forest") -> str:
    lines = [f"graph {name} {{", "  node [shape=box];"]
    for i, atom in enumerate(forest.labels):
        lines.append(f'  a{i} [label="{_quoted(str(atom))}"];')
    for i, p in enumerate(forest.parent):
        if p is not None:
            lines.append(f"  a{p} -- a{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
