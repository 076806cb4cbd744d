"""
Greedy approximations: Chvátal-style set cover greedy applied to domination and hitting set.
"""
from typing import FrozenSet

from src.graph.core import Graph
from src.graph.problems import HittingSetInstance
from src.utils.logger import setup_logger

logger = setup_logger()


def greedy_ds(g: Graph) -> FrozenSet[int]:
    """
    Repeatedly pick the vertex dominating the most undominated vertices, smallest id on ties.

    Args:
        g: Graph

    Returns:
        Dominating set within a logarithmic factor of optimal
    """
    undominated = (1 << g.n) - 1
    chosen = set()
    while undominated:
        best, best_gain = -1, 0
        for v in g.vertices:
            gain = (g.closed_mask(v) & undominated).bit_count()
            if gain > best_gain:
                best, best_gain = v, gain
        chosen.add(best)
        undominated &= ~g.closed_mask(best)
    logger.debug(f"Greedy dominating set of size {len(chosen)} on {g}")
    return frozenset(chosen)


def greedy_independent_ds(g: Graph) -> FrozenSet[int]:
    """Greedy restricted to undominated vertices, which keeps the chosen set independent."""
    undominated = (1 << g.n) - 1
    chosen = set()
    while undominated:
        best, best_gain = -1, 0
        for v in g.vertices:
            if not undominated >> v & 1:
                continue
            gain = (g.closed_mask(v) & undominated).bit_count()
            if gain > best_gain:
                best, best_gain = v, gain
        chosen.add(best)
        undominated &= ~g.closed_mask(best)
    return frozenset(chosen)


def greedy_hs(inst: HittingSetInstance) -> FrozenSet[int]:
    """
    Repeatedly pick the element hitting the most unhit sets, smallest element on ties.

    Args:
        inst: Hitting set instance

    Returns:
        Hitting set
    """
    unhit = list(range(len(inst.sets)))
    chosen = set()
    while unhit:
        counts = [0] * inst.universe_size
        for index in unhit:
            for x in inst.sets[index]:
                counts[x] += 1
        best = max(range(inst.universe_size), key=lambda x: (counts[x], -x))
        chosen.add(best)
        unhit = [index for index in unhit if best not in inst.sets[index]]
    return frozenset(chosen)
