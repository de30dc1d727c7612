# /usr/bin/env python3
# Connectivity Order
# Irreducible connected parts, the generic graph, poset height and the order of spaces and foliations

from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx

from src.constants import MATERIALIZE_LIMIT
from src.core import (
    ConnectivitySpace,
    Family,
    GroundSet,
    Subset,
    connected_sets,
    guard_size,
    overlap_blocks,
    sort_family,
)
from src.foliation import Foliation, induced_leaf_space


@dataclass(frozen=True)
class GenericGraph:
    """Irreducible connected parts ordered by inclusion."""

    ground: GroundSet
    elements: Family

    def __post_init__(self):
        object.__setattr__(self, "elements", sort_family(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def labels(self) -> List[str]:
        return self.ground.format_family(self.elements)


def irreducibles(space: ConnectivitySpace) -> GenericGraph:
    """
    Nonempty connected sets that the other connected sets do not generate.

    A connected k is reducible exactly when the proper connected subsets of k
    overlap into the single block k, so each k only needs the members below
    it.

    Raises:
        SizeGuardError: If the space has more than 16 points
    """
    guard_size(space.ground.n, MATERIALIZE_LIMIT, "Irreducible parts")
    kappa = [k for k in connected_sets(space) if k]

    found = []
    for k in kappa:
        below = [c for c in kappa if c != k and c & ~k == 0]
        if overlap_blocks(below) != [k]:
            found.append(k)
    return GenericGraph(space.ground, tuple(found))


def inclusion_digraph(graph: GenericGraph) -> nx.DiGraph:
    """Strict inclusion between elements, one edge per comparable pair."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.elements)
    for small in graph.elements:
        for large in graph.elements:
            if small != large and small & ~large == 0:
                digraph.add_edge(small, large)
    return digraph


def hasse_edges(graph: GenericGraph) -> List[Tuple[Subset, Subset]]:
    """Covering pairs of the inclusion order, sorted."""
    reduced = nx.transitive_reduction(inclusion_digraph(graph))
    ordered = {element: i for i, element in enumerate(graph.elements)}
    return sorted(reduced.edges(), key=lambda edge: (ordered[edge[0]], ordered[edge[1]]))


def poset_height(graph: GenericGraph) -> int:
    """
    Cardinality h of the longest chain (0 for the empty poset).

    The finite ordinal height of the poset is h + 1, the set {0, ..., h};
    callers derive it from the returned h.
    """
    if not graph.elements:
        return 0
    return nx.dag_longest_path_length(inclusion_digraph(graph)) + 1


def order_from_height(height: int) -> int:
    """Number of finite alpha with a chain of alpha + 2 elements."""
    return max(height - 1, 0)


def connectivity_order(space: ConnectivitySpace) -> int:
    return order_from_height(poset_height(irreducibles(space)))


def leaf_space_of(z: Foliation) -> ConnectivitySpace:
    """
    Leaf space of ``z`` as an ordinary space.

    Raises:
        SizeGuardError: If there are more than 16 leaves
    """
    leaf_space = induced_leaf_space(z)
    guard_size(len(leaf_space.leaves), MATERIALIZE_LIMIT, "Foliation order")
    return leaf_space.to_space()


def foliation_order(z: Foliation) -> int:
    return connectivity_order(leaf_space_of(z))


def longest_chain(graph: GenericGraph) -> List[Subset]:
    if not graph.elements:
        return []
    return list(nx.dag_longest_path(inclusion_digraph(graph)))
