"""
Combination of partial solutions across a separator split (A, B, C).

A split satisfies A ∪ C = V, A ∩ C = B and has no edge between A \\ B and C \\ B. Partial
solutions are given in the ids of the combined graph.
"""
from typing import FrozenSet, Iterable, Optional, Tuple

import networkx as nx

from src.graph.core import CapacitatedGraph, Graph, closed_neighborhood, is_independent
from src.graph.problems import CapacitatedSolution
from src.utils.errors import InvalidInputError, InvalidSplitError, PreconditionError
from src.utils.logger import setup_logger

logger = setup_logger()


def check_split(g: Graph, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> None:
    """
    Raise unless (A, B, C) is a separator split of g.

    Raises:
        InvalidSplitError: Naming the first failed condition
    """
    a, b, c = g.check_vertices(a), g.check_vertices(b), g.check_vertices(c)
    if a | c != frozenset(g.vertices):
        missing = min(set(g.vertices) - (a | c))
        raise InvalidSplitError(f"vertex {missing} is in neither side of the split")
    if a & c != b:
        raise InvalidSplitError("the sides of the split do not intersect exactly in the separator")
    for u in sorted(a - b):
        crossing = sorted(g.neighbors(u) & (c - b))
        if crossing:
            logger.error(f"Split has cross edge ({u}, {crossing[0]})")
            raise InvalidSplitError(f"edge ({u}, {crossing[0]}) crosses the separator")


def combine_ds(x: Iterable[int], y: Iterable[int]) -> FrozenSet[int]:
    """Dominating sets of G[A] and G[C] together dominate G."""
    return frozenset(x) | frozenset(y)


def combine_capds(g: CapacitatedGraph, x_sol: CapacitatedSolution, y_sol: CapacitatedSolution,
                  b: Iterable[int], a: Optional[Iterable[int]] = None,
                  c: Optional[Iterable[int]] = None) -> CapacitatedSolution:
    """
    Combine capacitated solutions of G[A] and G[C].

    Z := X ∪ Y ∪ N[B]; vertices of A \\ Z keep their dominator from x_sol, vertices of C \\ Z
    from y_sol. Every neighbor of B lies in Z, so no dominator in B receives anything and
    the capacities of both partial solutions carry over. |Z| <= |X| + |Y| + (Δ+1)|B|.

    Args:
        g: Capacitated graph
        x_sol: Solution of G[A]; its chosen set and assignment domain make up A
        y_sol: Solution of G[C]
        b: Separator B
        a: Side A, checked against x_sol when given
        c: Side C, checked against y_sol when given

    Returns:
        Capacitated solution of g

    Raises:
        InvalidSplitError: If the sides do not form a separator split
    """
    base = g.base
    b = base.check_vertices(b)
    side_a = x_sol.chosen | frozenset(x_sol.assignment)
    side_c = y_sol.chosen | frozenset(y_sol.assignment)
    if a is not None and base.check_vertices(a) != side_a:
        raise InvalidSplitError("x_sol does not cover exactly side A")
    if c is not None and base.check_vertices(c) != side_c:
        raise InvalidSplitError("y_sol does not cover exactly side C")
    check_split(base, side_a, b, side_c)

    z = x_sol.chosen | y_sol.chosen | closed_neighborhood(base, b)
    assignment = {}
    for v in base.vertices:
        if v in z:
            continue
        assignment[v] = x_sol.assignment[v] if v in side_a else y_sol.assignment[v]
    logger.debug(f"Combined capacitated solutions {len(x_sol.chosen)} + {len(y_sol.chosen)} over |B|={len(b)} into {len(z)}")
    return CapacitatedSolution(chosen=z, assignment=assignment)


def complete_independent(g: Graph, x: Iterable[int]) -> FrozenSet[int]:
    """
    Extend an independent set to an independent dominating set.

    Adds the smallest undominated vertex until none is left, so the result adds at most as
    many vertices as x leaves undominated.

    Raises:
        InvalidInputError: If x is not independent
    """
    x = g.check_vertices(x)
    if not is_independent(g, x):
        raise InvalidInputError("only independent sets can be completed")
    chosen = set(x)
    dominated = 0
    for v in chosen:
        dominated |= g.closed_mask(v)
    for v in g.vertices:
        if not dominated >> v & 1:
            chosen.add(v)
            dominated |= g.closed_mask(v)
    return frozenset(chosen)


def combine_ids(g: Graph, x: Iterable[int], y: Iterable[int], b: Iterable[int],
                a: Optional[Iterable[int]] = None, c: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """
    Combine independent dominating sets of G[A] and G[C].

    Z := (X ∪ Y) \\ B is independent because no edge crosses the separator; completing it
    adds at most the (Δ+1)|B| vertices around B.

    Raises:
        InvalidSplitError: If the sides are given and do not form a split, or Z is not independent
    """
    b = g.check_vertices(b)
    if a is not None and c is not None:
        check_split(g, a, b, c)
    z = (g.check_vertices(x) | g.check_vertices(y)) - b
    if not is_independent(g, z):
        logger.error("Combined independent sets are not independent; the split is invalid")
        raise InvalidSplitError("(X ∪ Y) \\ B is not independent")
    return complete_independent(g, z)


def _connecting_path(view: nx.Graph, source: FrozenSet[int], targets: FrozenSet[int]) -> Tuple[int, ...]:
    """Shortest path from source to the nearest target, smallest target id on ties."""
    distances, paths = nx.multi_source_dijkstra(view, set(source))
    reachable = [t for t in targets if t in distances]
    if not reachable:
        return ()
    target = min(reachable, key=lambda t: (distances[t], t))
    return tuple(paths[target])


def merge_components(g: Graph, z: Iterable[int]) -> Tuple[FrozenSet[int], int]:
    """
    Connect a dominating set of a connected graph.

    While G[Z] has two or more components, take the component C1 with the smallest vertex
    and a shortest path from it to the rest of Z. Because Z dominates, the path has at most
    two inner vertices: the one next to C1 and the first vertex w not adjacent to C1, whose
    dominator lies in Z \\ C1. Both are added.

    Returns:
        The connected set and the number of merge rounds
    """
    z = set(z)
    rounds = 0
    view = g.to_networkx()
    while True:
        components = sorted(nx.connected_components(view.subgraph(z)), key=min)
        if len(components) <= 1:
            return frozenset(z), rounds
        first = frozenset(components[0])
        path = _connecting_path(view, first, frozenset(z) - first)
        if not path:
            raise PreconditionError("solution components lie in different components of the graph")
        z.update(path[1:-1])
        rounds += 1


def combine_cds_rounds(g: Graph, x: Iterable[int], y: Iterable[int], b: Iterable[int],
                       a: Optional[Iterable[int]] = None,
                       c: Optional[Iterable[int]] = None) -> Tuple[FrozenSet[int], int]:
    """combine_cds that also reports the number of merge rounds."""
    if g.n and not nx.is_connected(g.to_networkx()):
        logger.error(f"combine_cds called on disconnected {g}")
        raise PreconditionError("combine_cds needs a connected graph")
    b = g.check_vertices(b)
    if a is not None and c is not None:
        a, c = g.check_vertices(a), g.check_vertices(c)
        check_split(g, a, b, c)
        if not a - b or not c - b:
            raise PreconditionError("both sides of the split must extend beyond the separator")
    start = g.check_vertices(x) | g.check_vertices(y) | b
    merged, rounds = merge_components(g, start)
    logger.debug(f"Connected {len(start)} vertices into {len(merged)} in {rounds} rounds")
    return merged, rounds


def combine_cds(g: Graph, x: Iterable[int], y: Iterable[int], b: Iterable[int],
                a: Optional[Iterable[int]] = None, c: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """
    Combine connected dominating sets of R(G[A], B) and R(G[C], B), gadget vertex removed.

    Starts from X ∪ Y ∪ B and merges components; the result has at most |X| + |Y| + 3|B|
    vertices.

    Args:
        g: Connected graph
        x: CDS of R(G[A], B) without its gadget vertex, in g's ids
        y: CDS of R(G[C], B) without its gadget vertex, in g's ids
        b: Separator
        a: Side A, checked when given together with c
        c: Side C

    Returns:
        Connected dominating set of g

    Raises:
        PreconditionError: If g is disconnected or a side lies inside B
        InvalidSplitError: If the sides do not form a split
    """
    return combine_cds_rounds(g, x, y, b, a, c)[0]
