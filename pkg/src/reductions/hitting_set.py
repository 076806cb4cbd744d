"""
Approximation-preserving reductions from Hitting Set to domination problems and Node Steiner
Tree, the capacity reduction from DS to CapDS, and their lifting algorithms.
"""
from typing import Any, FrozenSet, Iterable, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import (CapacitatedSolution, HittingSetInstance, ProblemKind, SteinerInstance,
                                check_solution)
from src.utils.errors import InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()

ELEMENT = "element"
SET = "set"
HUB = "hub"


class VertexOrigin(BaseModel):
    """What a produced vertex stands for in the source instance."""
    role: str = Field(..., description="Kind of source object: element, set, hub, literal, negated, clause")
    index: int = Field(..., description="Index of the source object")
    copy_index: Optional[int] = Field(None, description="Copy number for replicated objects")


class ReductionArtifact(BaseModel):
    """A produced instance with the back-map its lifting algorithm needs."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ProblemKind = Field(..., description="Problem the produced instance belongs to")
    instance: Union[Graph, CapacitatedGraph, SteinerInstance] = Field(..., description="Produced instance")
    back_map: List[VertexOrigin] = Field(..., description="Origin of each produced vertex, by vertex id")
    source: Any = Field(None, description="Source instance")
    copies: Optional[int] = Field(None, description="Number of copies per replicated object")

    @property
    def graph(self) -> Graph:
        if isinstance(self.instance, SteinerInstance):
            return self.instance.graph
        if isinstance(self.instance, CapacitatedGraph):
            return self.instance.base
        return self.instance

    @model_validator(mode="after")
    def _back_map_is_bijective(self) -> "ReductionArtifact":
        if len(self.back_map) != self.graph.n:
            raise ValueError(f"back map covers {len(self.back_map)} of {self.graph.n} vertices")
        keys = {(o.role, o.index, o.copy_index) for o in self.back_map}
        if len(keys) != len(self.back_map):
            raise ValueError("two produced vertices share an origin")
        return self

    def origin(self, v: int) -> VertexOrigin:
        return self.back_map[v]


def _hub_graph(inst: HittingSetInstance) -> tuple:
    """Element vertices v_x = x, set vertices w_j = |U| + j and the hub u = |U| + |S|."""
    for index, members in enumerate(inst.sets):
        if not members:
            raise InvalidInputError(f"set {index} is empty")
    universe, m = inst.universe_size, len(inst.sets)
    hub = universe + m
    clique = list(range(universe)) + [hub]
    edges = [(a, b) for i, a in enumerate(clique) for b in clique[i + 1:]]
    for j, members in enumerate(inst.sets):
        edges.extend((x, universe + j) for x in sorted(members))
    back_map = ([VertexOrigin(role=ELEMENT, index=x) for x in range(universe)]
                + [VertexOrigin(role=SET, index=j) for j in range(m)]
                + [VertexOrigin(role=HUB, index=0)])
    return Graph(hub + 1, edges), back_map


def hs_to_ds(inst: HittingSetInstance) -> ReductionArtifact:
    """
    Dominating set instance with the same optimum as the hitting set instance.

    Element vertices and the hub form a clique; each set vertex is adjacent to the
    elements of its set.

    Args:
        inst: Hitting set instance with non-empty sets

    Returns:
        Artifact with |U| + |S| + 1 vertices
    """
    graph, back_map = _hub_graph(inst)
    return ReductionArtifact(kind=ProblemKind.DS, instance=graph, back_map=back_map, source=inst)


def hs_to_cds(inst: HittingSetInstance) -> ReductionArtifact:
    """Same graph as hs_to_ds; lifted solutions are cliques, so DS and CDS optima agree."""
    graph, back_map = _hub_graph(inst)
    return ReductionArtifact(kind=ProblemKind.CDS, instance=graph, back_map=back_map, source=inst)


def hs_to_nst(inst: HittingSetInstance) -> ReductionArtifact:
    """Same graph as hs_to_ds with the set vertices and the hub as terminals."""
    graph, back_map = _hub_graph(inst)
    terminals = frozenset(v for v, origin in enumerate(back_map) if origin.role != ELEMENT)
    return ReductionArtifact(kind=ProblemKind.NST, instance=SteinerInstance(graph=graph, terminals=terminals),
                             back_map=back_map, source=inst)


def lift_ds_to_hs(artifact: ReductionArtifact, x: Iterable[int]) -> FrozenSet[int]:
    """
    Hitting set no larger than a dominating set of the produced graph.

    Drops the hub and replaces every set vertex by the smallest element of its set.

    Raises:
        InvalidInputError: If x does not dominate the produced graph
    """
    x = frozenset(x)
    report = check_solution(artifact.graph, ProblemKind.DS, x)
    if not report:
        logger.error(f"Cannot lift a non-dominating set: {report.detail}")
        raise InvalidInputError(f"lifting needs a dominating set: {report.detail}")
    inst: HittingSetInstance = artifact.source
    hitting = set()
    for v in x:
        origin = artifact.origin(v)
        if origin.role == ELEMENT:
            hitting.add(origin.index)
        elif origin.role == SET:
            hitting.add(min(inst.sets[origin.index]))
    return frozenset(hitting)


def hitting_set_to_ds(artifact: ReductionArtifact, y: Iterable[int]) -> FrozenSet[int]:
    """Element vertices of a hitting set; they dominate the produced graph."""
    y = frozenset(y)
    return frozenset(v for v, origin in enumerate(artifact.back_map) if origin.role == ELEMENT and origin.index in y)


def lift_nst_to_hs(artifact: ReductionArtifact, x: Iterable[int]) -> FrozenSet[int]:
    """
    Elements whose vertices a Steiner solution uses.

    Raises:
        InvalidInputError: If x is not a Steiner solution of the produced instance
    """
    x = frozenset(x)
    report = check_solution(artifact.instance, ProblemKind.NST, x)
    if not report:
        raise InvalidInputError(f"lifting needs a Steiner solution: {report.detail}")
    return frozenset(artifact.origin(v).index for v in x if artifact.origin(v).role == ELEMENT)


def ds_to_capds(g: Graph) -> CapacitatedGraph:
    """Capacities equal to degrees, which leaves the optimum unchanged."""
    return CapacitatedGraph(g, [g.degree(v) for v in g.vertices])


def lift_capds_to_ds(sol: CapacitatedSolution) -> FrozenSet[int]:
    """The chosen set of a capacitated dominating set dominates the uncapacitated graph."""
    return frozenset(sol.chosen)
