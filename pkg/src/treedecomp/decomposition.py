"""
Tree decompositions and their validation.
"""
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from src.graph.core import Graph
from src.graph.problems import ValidityReport
from src.utils.errors import InvalidInputError


class TreeDecomposition:
    """
    Bags indexed by node id, joined by tree edges, with an optional root.

    Node ids are arbitrary integers. Structural problems (not a tree, uncovered edges, ...)
    are reported by validate rather than rejected here.
    """

    __slots__ = ("_bags", "_tree_edges", "_root", "_adjacency")

    def __init__(self, bags: Mapping[int, Iterable[int]], tree_edges: Iterable[Tuple[int, int]] = (),
                 root: Optional[int] = None):
        self._bags: Dict[int, FrozenSet[int]] = {int(t): frozenset(bag) for t, bag in bags.items()}
        adjacency: Dict[int, set] = {t: set() for t in self._bags}
        edges = set()
        for a, b in tree_edges:
            if a not in self._bags or b not in self._bags:
                raise InvalidInputError(f"tree edge ({a}, {b}) references an unknown node")
            if a == b:
                raise InvalidInputError(f"tree edge ({a}, {b}) is a loop")
            edges.add((a, b) if a < b else (b, a))
            adjacency[a].add(b)
            adjacency[b].add(a)
        if root is not None and root not in self._bags:
            raise InvalidInputError(f"root {root} is not a node")
        self._tree_edges = frozenset(edges)
        self._root = root
        self._adjacency = {t: frozenset(a) for t, a in adjacency.items()}

    @property
    def nodes(self) -> List[int]:
        return sorted(self._bags)

    @property
    def bags(self) -> Dict[int, FrozenSet[int]]:
        return dict(self._bags)

    @property
    def tree_edges(self) -> FrozenSet[Tuple[int, int]]:
        return self._tree_edges

    @property
    def root(self) -> Optional[int]:
        return self._root

    def bag(self, t: int) -> FrozenSet[int]:
        return self._bags[t]

    def tree_neighbors(self, t: int) -> FrozenSet[int]:
        return self._adjacency[t]

    def __len__(self) -> int:
        return len(self._bags)

    def __repr__(self) -> str:
        return f"TreeDecomposition(nodes={len(self._bags)}, width={width(self)})"


def width(td) -> int:
    """
    Maximum bag size minus one; -1 for a decomposition without non-empty bags.

    Args:
        td: TreeDecomposition or NiceTreeDecomposition

    Returns:
        Width of the decomposition
    """
    return max((len(bag) for bag in td.bags.values()), default=0) - 1


def validate(g: Graph, td: TreeDecomposition) -> ValidityReport:
    """
    Check the four tree decomposition conditions against g.

    Args:
        g: Graph the decomposition claims to decompose
        td: Decomposition to check

    Returns:
        ValidityReport naming the first failed condition
    """
    for t in td.nodes:
        for v in sorted(td.bag(t)):
            if not 0 <= v < g.n:
                return ValidityReport.fail("vertex out of range", t, f"bag {t} contains unknown vertex {v}")

    if len(td) == 0:
        if g.n == 0:
            return ValidityReport.ok()
        return ValidityReport.fail("empty decomposition", None, "decomposition has no nodes")

    tree = nx.Graph()
    tree.add_nodes_from(td.nodes)
    tree.add_edges_from(td.tree_edges)
    if not nx.is_tree(tree):
        return ValidityReport.fail("not a tree", None, "tree edges do not form a tree over the nodes")

    occurrences: Dict[int, List[int]] = {v: [] for v in g.vertices}
    for t in td.nodes:
        for v in td.bag(t):
            occurrences[v].append(t)

    for v in g.vertices:
        if not occurrences[v]:
            return ValidityReport.fail("uncovered vertex", v, f"vertex {v} is in no bag")

    for u, v in sorted(g.edges):
        if not any(v in td.bag(t) for t in occurrences[u]):
            return ValidityReport.fail("missing edge", u, f"edge ({u}, {v}) is in no bag")

    for v in g.vertices:
        if not nx.is_connected(tree.subgraph(occurrences[v])):
            return ValidityReport.fail("disconnected occurrences", v,
                                       f"bags containing vertex {v} do not form a subtree")
    return ValidityReport.ok()
