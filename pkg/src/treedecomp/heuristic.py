"""
Tree decompositions from a minimum-degree elimination ordering.
"""
from typing import Dict, List, Set

from src.graph.core import Graph
from src.treedecomp.decomposition import TreeDecomposition, width
from src.utils.logger import setup_logger

logger = setup_logger()


def elimination_order(g: Graph) -> List[int]:
    """Minimum-degree elimination ordering, smallest id on ties."""
    adjacency: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices}
    order = []
    while adjacency:
        v = min(adjacency, key=lambda u: (len(adjacency[u]), u))
        neighbors = adjacency.pop(v)
        for u in neighbors:
            adjacency[u].discard(v)
            adjacency[u] |= neighbors - {u}
        order.append(v)
    return order


def heuristic_td(g: Graph) -> TreeDecomposition:
    """
    Build a tree decomposition by eliminating vertices in minimum-degree order.

    The bag of v is v plus its neighbors at elimination time; its parent is the bag of the
    earliest-eliminated vertex among those neighbors. Component roots are chained together.

    Args:
        g: Graph to decompose

    Returns:
        Valid tree decomposition rooted at the last eliminated vertex
    """
    if g.n == 0:
        return TreeDecomposition({0: ()}, (), 0)

    order = elimination_order(g)
    position = {v: i for i, v in enumerate(order)}
    adjacency: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in g.vertices}
    bags: Dict[int, frozenset] = {}
    edges = []
    roots = []
    for v in order:
        neighbors = adjacency.pop(v)
        for u in neighbors:
            adjacency[u].discard(v)
            adjacency[u] |= neighbors - {u}
        bags[v] = frozenset(neighbors | {v})
        if neighbors:
            edges.append((v, min(neighbors, key=position.__getitem__)))
        else:
            roots.append(v)
    edges.extend(zip(roots, roots[1:]))

    td = TreeDecomposition(bags, edges, order[-1])
    logger.debug(f"Heuristic decomposition of {g}: width {width(td)}")
    return td
