"""
Minimum independent dominating set from an IDS decision oracle.
"""
from typing import Callable, FrozenSet

from src.graph.core import Graph, closed_neighborhood, induced_subgraph
from src.oracles.exact import ids_decision
from src.utils.errors import OracleInconsistencyError
from src.utils.logger import setup_logger

logger = setup_logger()

DecisionOracle = Callable[[Graph, int], bool]


def ids_selfreduce(g: Graph, dec: DecisionOracle = ids_decision) -> FrozenSet[int]:
    """
    Build a minimum IDS with at most n + n·k₀ decision queries.

    First finds the smallest k₀ with dec(G, k₀). Then, while ℓ > 0, takes the smallest u
    with dec(H - N[u], ℓ - 1), adds it and continues on H - N[u]. Every query is on an
    induced subgraph of g.

    Args:
        g: Graph
        dec: Exact decision oracle: does the graph have an IDS of size at most k

    Returns:
        Minimum independent dominating set in g's ids

    Raises:
        OracleInconsistencyError: If the answers contradict each other
    """
    if g.n == 0:
        return frozenset()

    smallest = next((k for k in range(1, g.n + 1) if dec(g, k)), None)
    if smallest is None:
        logger.error(f"Decision oracle denies an IDS of size {g.n} on {g}")
        raise OracleInconsistencyError(f"decision oracle rejects k={g.n}, but every graph has an IDS of size at most n")

    chosen = set()
    current, mapping = g, tuple(g.vertices)
    remaining = smallest
    while remaining > 0:
        for u in current.vertices:
            rest, sub_mapping = induced_subgraph(current, set(current.vertices) - closed_neighborhood(current, {u}))
            if dec(rest, remaining - 1):
                chosen.add(mapping[u])
                mapping = tuple(mapping[v] for v in sub_mapping)
                current = rest
                remaining -= 1
                break
        else:
            logger.error(f"No vertex extends the partial solution with {remaining} picks left")
            raise OracleInconsistencyError(f"no vertex continues a solution of size {remaining} "
                                           f"on a {current.n}-vertex remainder")
    if current.n:
        raise OracleInconsistencyError(f"{current.n} vertices remain undominated after {smallest} picks")
    logger.debug(f"Self-reduction found an IDS of size {smallest} on {g}")
    return frozenset(chosen)
