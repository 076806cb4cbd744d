"""
Capacity-respecting assignment of dominated vertices to dominators.
"""
from typing import Dict, Iterable, List, Optional, Set

from src.graph.core import CapacitatedGraph


def capacitated_assignment(cg: CapacitatedGraph, chosen: Iterable[int]) -> Optional[Dict[int, int]]:
    """
    Find an assignment of every vertex outside chosen to an adjacent chosen vertex such that
    no chosen vertex v receives more than cap(v) vertices.

    Augmenting paths over a bipartite graph between V \\ chosen and chosen, with capacities
    as multiplicities. Vertices and dominators are scanned in ascending id.

    Args:
        cg: Capacitated graph
        chosen: Candidate dominating set

    Returns:
        The assignment, or None when none exists
    """
    g = cg.base
    chosen = g.check_vertices(chosen)
    load: Dict[int, List[int]] = {x: [] for x in chosen}
    owner: Dict[int, int] = {}
    options = {v: sorted(g.neighbors(v) & chosen) for v in g.vertices if v not in chosen}

    def augment(v: int, visited: Set[int]) -> bool:
        for x in options[v]:
            if x in visited:
                continue
            visited.add(x)
            if len(load[x]) < cg.cap(x):
                load[x].append(v)
                owner[v] = x
                return True
            for w in list(load[x]):
                if augment(w, visited):
                    load[x].remove(w)
                    load[x].append(v)
                    owner[v] = x
                    return True
        return False

    for v in sorted(options):
        if not augment(v, set()):
            return None
    return owner
