"""
Exact solvers for every problem kind.

Graph solvers run on integer bitmasks: bit v of a mask stands for vertex v. All solvers are
deterministic and refuse instances above their configured budget instead of guessing.
"""
import itertools
from typing import FrozenSet, List, Optional, Tuple

import networkx as nx

from config import (EXACT_BUDGET_CAPDS, EXACT_BUDGET_CDS, EXACT_BUDGET_DS, EXACT_BUDGET_HS,
                    EXACT_BUDGET_IDS, EXACT_BUDGET_NST, EXACT_SOLVER_BUDGET)
from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import (CapacitatedSolution, HittingSetInstance, Instance, ProblemKind, Solution,
                                SteinerInstance)
from src.oracles.greedy import greedy_ds, greedy_hs, greedy_independent_ds
from src.oracles.matching import capacitated_assignment
from src.utils.errors import InvalidInputError, PreconditionError, SolverBudgetError
from src.utils.logger import setup_logger

logger = setup_logger()

_DEFAULT_BUDGETS = {
    ProblemKind.DS: EXACT_BUDGET_DS,
    ProblemKind.CDS: EXACT_BUDGET_CDS,
    ProblemKind.IDS: EXACT_BUDGET_IDS,
    ProblemKind.CAPDS: EXACT_BUDGET_CAPDS,
    ProblemKind.HS: EXACT_BUDGET_HS,
    ProblemKind.NST: EXACT_BUDGET_NST,
}


def resolve_budget(kind: ProblemKind, budget: Optional[int] = None) -> int:
    """Explicit budget, else the global override, else the per-kind default."""
    if budget is not None:
        return budget
    if EXACT_SOLVER_BUDGET:
        return int(EXACT_SOLVER_BUDGET)
    return _DEFAULT_BUDGETS[ProblemKind(kind)]


def _enforce_budget(kind: ProblemKind, size: int, budget: Optional[int]) -> None:
    limit = resolve_budget(kind, budget)
    if size > limit:
        logger.warning(f"Exact {kind.value} solver refuses size {size} above budget {limit}")
        raise SolverBudgetError(f"exact {kind.value} solver budget is {limit}, instance size is {size}",
                                size=size, budget=limit)


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _to_set(mask: int) -> FrozenSet[int]:
    return frozenset(_bits(mask))


def _mask_of(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class _DominationSearch:
    """
    Branch and bound for minimum (independent) dominating sets.

    Branches on the undominated vertex with the fewest remaining candidates in its closed
    neighborhood; the i-th branch takes the i-th candidate and forbids the earlier ones.
    Prunes with ceil(undominated / best single coverage).
    """

    def __init__(self, g: Graph, independent: bool, upper: FrozenSet[int]):
        self.masks = [g.closed_mask(v) for v in g.vertices]
        self.full = (1 << g.n) - 1
        self.independent = independent
        self.best_mask = _mask_of(upper)
        self.best_size = len(upper)

    def run(self) -> FrozenSet[int]:
        self._search(0, 0, 0, 0)
        return _to_set(self.best_mask)

    def _search(self, chosen: int, dominated: int, excluded: int, size: int) -> None:
        undominated = self.full & ~dominated
        if not undominated:
            if size < self.best_size:
                self.best_mask, self.best_size = chosen, size
            return
        if size + 1 >= self.best_size:
            return
        allowed = (undominated if self.independent else self.full & ~chosen) & ~excluded

        pivot, pivot_options, fewest = -1, 0, None
        for v in _bits(undominated):
            options = self.masks[v] & allowed
            count = options.bit_count()
            if count == 0:
                return
            if fewest is None or count < fewest:
                pivot, pivot_options, fewest = v, options, count

        cover = max((self.masks[u] & undominated).bit_count() for u in _bits(allowed))
        need = -(-undominated.bit_count() // cover)
        if size + need >= self.best_size:
            return

        candidates = sorted(_bits(pivot_options), key=lambda u: (-(self.masks[u] & undominated).bit_count(), u))
        for u in candidates:
            self._search(chosen | 1 << u, dominated | self.masks[u], excluded, size + 1)
            excluded |= 1 << u


def exact_ds(g: Graph, budget: Optional[int] = None) -> FrozenSet[int]:
    """
    Minimum dominating set.

    Args:
        g: Graph
        budget: Maximum vertex count accepted; configuration default when None

    Returns:
        Minimum dominating set

    Raises:
        SolverBudgetError: If g has more vertices than the budget
    """
    _enforce_budget(ProblemKind.DS, g.n, budget)
    return _DominationSearch(g, False, greedy_ds(g)).run()


def exact_ids(g: Graph, budget: Optional[int] = None) -> FrozenSet[int]:
    """Minimum independent dominating set; every IDS contains a vertex of N[v] for undominated v."""
    _enforce_budget(ProblemKind.IDS, g.n, budget)
    return _DominationSearch(g, True, greedy_independent_ds(g)).run()


class _ConnectedSearch:
    """
    Branch and bound over connected vertex sets grown from a start vertex.

    Each step decides the lowest frontier vertex: take it, or forbid it for the rest of the
    branch. Every connected superset of the start is reached exactly once.
    """

    def __init__(self, g: Graph, upper: FrozenSet[int]):
        self.masks = [g.closed_mask(v) for v in g.vertices]
        self.full = (1 << g.n) - 1
        self.best_mask = _mask_of(upper)
        self.best_size = len(upper)

    def grow(self, start: int, excluded: int) -> None:
        self._search(1 << start, self.masks[start], excluded, 1)

    def _search(self, chosen: int, dominated: int, excluded: int, size: int) -> None:
        undominated = self.full & ~dominated
        if not undominated:
            if size < self.best_size:
                self.best_mask, self.best_size = chosen, size
            return
        if size + 1 >= self.best_size:
            return
        allowed = self.full & ~chosen & ~excluded
        for v in _bits(undominated):
            if not self.masks[v] & allowed:
                return
        cover = max((self.masks[u] & undominated).bit_count() for u in _bits(allowed))
        need = -(-undominated.bit_count() // cover)
        if size + need >= self.best_size:
            return
        frontier = dominated & allowed
        if not frontier:
            return
        w = (frontier & -frontier).bit_length() - 1
        self._search(chosen | 1 << w, dominated | self.masks[w], excluded, size + 1)
        self._search(chosen, dominated, excluded | 1 << w, size)


def _spanning_tree_internal(g: Graph) -> FrozenSet[int]:
    """Non-leaf vertices of a BFS tree from vertex 0; a connected dominating set of connected g."""
    if g.n == 1:
        return frozenset({0})
    tree = nx.bfs_tree(g.to_networkx(), 0, sort_neighbors=sorted)
    return frozenset(v for v in tree.nodes if tree.out_degree(v) > 0)


def exact_cds(g: Graph, budget: Optional[int] = None) -> FrozenSet[int]:
    """
    Minimum connected dominating set of a connected graph.

    For a minimum-degree vertex v0 every CDS meets N[v0]; connected sets are grown from each
    start in N[v0], forbidding the starts already explored.

    Raises:
        PreconditionError: If g is disconnected
        SolverBudgetError: If g has more vertices than the budget
    """
    _enforce_budget(ProblemKind.CDS, g.n, budget)
    if g.n == 0:
        return frozenset()
    if not nx.is_connected(g.to_networkx()):
        logger.error(f"Exact CDS called on disconnected {g}")
        raise PreconditionError("connected dominating sets exist only for connected graphs")
    search = _ConnectedSearch(g, _spanning_tree_internal(g))
    v0 = min(g.vertices, key=lambda v: (g.degree(v), v))
    excluded = 0
    for start in sorted(g.neighbors(v0) | {v0}):
        search.grow(start, excluded)
        excluded |= 1 << start
    return _to_set(search.best_mask)


def exact_capds(cg: CapacitatedGraph, budget: Optional[int] = None) -> CapacitatedSolution:
    """
    Minimum capacitated dominating set.

    Candidate sets are enumerated by increasing size starting at the domination optimum, in
    lexicographic order; feasibility is decided by capacitated_assignment.

    Raises:
        SolverBudgetError: If cg has more vertices than the budget
    """
    _enforce_budget(ProblemKind.CAPDS, cg.n, budget)
    g = cg.base
    n = g.n
    if n == 0:
        return CapacitatedSolution(chosen=frozenset(), assignment={})
    full = (1 << n) - 1
    reach = [min(cg.cap(v), g.degree(v)) for v in g.vertices]
    start = len(_DominationSearch(g, False, greedy_ds(g)).run())
    for k in range(start, n + 1):
        for combo in itertools.combinations(range(n), k):
            dominated = 0
            for v in combo:
                dominated |= g.closed_mask(v)
            if dominated != full or sum(reach[v] for v in combo) < n - k:
                continue
            assignment = capacitated_assignment(cg, combo)
            if assignment is not None:
                return CapacitatedSolution(chosen=frozenset(combo), assignment=assignment)
    raise AssertionError("choosing every vertex is always feasible")


class _HittingSearch:
    def __init__(self, inst: HittingSetInstance, upper: FrozenSet[int]):
        self.sets = [_mask_of(members) for members in inst.sets]
        # Per element: bitmask of the sets containing it
        self.hits = [0] * inst.universe_size
        for index, members in enumerate(inst.sets):
            for x in members:
                self.hits[x] |= 1 << index
        self.all_sets = (1 << len(self.sets)) - 1
        self.universe = (1 << inst.universe_size) - 1
        self.best_mask = _mask_of(upper)
        self.best_size = len(upper)

    def run(self) -> FrozenSet[int]:
        self._search(0, 0, 0, 0)
        return _to_set(self.best_mask)

    def _search(self, chosen: int, hit: int, excluded: int, size: int) -> None:
        unhit = self.all_sets & ~hit
        if not unhit:
            if size < self.best_size:
                self.best_mask, self.best_size = chosen, size
            return
        if size + 1 >= self.best_size:
            return
        pivot_options, fewest = 0, None
        for index in _bits(unhit):
            options = self.sets[index] & ~excluded
            count = options.bit_count()
            if count == 0:
                return
            if fewest is None or count < fewest:
                pivot_options, fewest = options, count
        cover = max((self.hits[x] & unhit).bit_count() for x in _bits(self.universe & ~excluded & ~chosen))
        need = -(-unhit.bit_count() // cover)
        if size + need >= self.best_size:
            return
        for x in _bits(pivot_options):
            self._search(chosen | 1 << x, hit | self.hits[x], excluded, size + 1)
            excluded |= 1 << x


def exact_hs(inst: HittingSetInstance, budget: Optional[int] = None) -> FrozenSet[int]:
    """Minimum hitting set by branching over the elements of a smallest unhit set."""
    _enforce_budget(ProblemKind.HS, inst.universe_size, budget)
    if not inst.sets:
        return frozenset()
    return _HittingSearch(inst, greedy_hs(inst)).run()


def _connected_mask(masks: List[int], members: int) -> bool:
    if not members:
        return True
    seen = members & -members
    while True:
        grown = seen
        for v in _bits(seen):
            grown |= masks[v] & members
        if grown == seen:
            return seen == members
        seen = grown


def exact_nst(inst: SteinerInstance, budget: Optional[int] = None) -> FrozenSet[int]:
    """
    Minimum node Steiner tree: fewest non-terminals X with G[X ∪ T] connected.

    Raises:
        SolverBudgetError: If there are more non-terminals than the budget
        InvalidInputError: If the terminals lie in different components
    """
    others = inst.non_terminals
    _enforce_budget(ProblemKind.NST, len(others), budget)
    if not inst.terminals:
        return frozenset()
    g = inst.graph
    masks = [g.closed_mask(v) for v in g.vertices]
    terminals = _mask_of(inst.terminals)
    for k in range(len(others) + 1):
        for combo in itertools.combinations(others, k):
            if _connected_mask(masks, terminals | _mask_of(combo)):
                return frozenset(combo)
    logger.error("Terminals are not connected in the host graph")
    raise InvalidInputError("terminals lie in different components; no Steiner tree exists")


def instance_size(instance: Instance) -> int:
    """Vertex count for graph problems, universe size for hitting set."""
    if isinstance(instance, HittingSetInstance):
        return instance.universe_size
    if isinstance(instance, SteinerInstance):
        return instance.graph.n
    return instance.n


def exact_solve(kind: ProblemKind, instance: Instance, budget: Optional[int] = None) -> Solution:
    """
    Minimum-cardinality solution of the given kind.

    Args:
        kind: Problem kind
        instance: Graph (CapacitatedGraph for CapDS, HittingSetInstance, SteinerInstance)
        budget: Size limit overriding configuration

    Returns:
        Vertex or element set, or CapacitatedSolution for CapDS
    """
    kind = ProblemKind(kind)
    if kind == ProblemKind.CAPDS:
        if not isinstance(instance, CapacitatedGraph):
            raise InvalidInputError("CapDS instances are capacitated graphs")
        return exact_capds(instance, budget)
    if kind == ProblemKind.HS:
        return exact_hs(instance, budget)
    if kind == ProblemKind.NST:
        return exact_nst(instance, budget)
    if isinstance(instance, CapacitatedGraph):
        instance = instance.base
    solver = {ProblemKind.DS: exact_ds, ProblemKind.IDS: exact_ids, ProblemKind.CDS: exact_cds}[kind]
    return solver(instance, budget)


def ids_decision(g: Graph, k: int, budget: Optional[int] = None) -> bool:
    """Whether g has an independent dominating set of size at most k."""
    return len(exact_ids(g, budget)) <= k
