"""
Problem kinds, instance and solution models, and the validity predicates for every kind.
"""
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.graph.core import CapacitatedGraph, Graph, closed_neighborhood
from src.utils.errors import InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()


class ProblemKind(str, Enum):
    """Problems an oracle can solve."""
    DS = "ds"
    IDS = "ids"
    CDS = "cds"
    CAPDS = "capds"
    HS = "hs"
    NST = "nst"


GRAPH_KINDS = (ProblemKind.DS, ProblemKind.IDS, ProblemKind.CDS, ProblemKind.CAPDS)


class CapacitatedSolution(BaseModel):
    """A capacitated dominating set together with its domination assignment."""
    chosen: FrozenSet[int] = Field(..., description="Dominating vertices")
    assignment: Dict[int, int] = Field(default_factory=dict,
                                       description="Each vertex outside chosen mapped to its dominator")

    def __len__(self) -> int:
        return len(self.chosen)


class ValidityReport(BaseModel):
    """Outcome of a validity check; names the first violated clause when invalid."""
    valid: bool = Field(..., description="Whether the checked object satisfies its definition")
    violation: Optional[str] = Field(None, description="Name of the first violated clause")
    vertex: Optional[int] = Field(None, description="Vertex, node or set index where the violation was found")
    detail: Optional[str] = Field(None, description="Human-readable explanation")

    def __bool__(self) -> bool:
        return self.valid

    @classmethod
    def ok(cls) -> "ValidityReport":
        return cls(valid=True)

    @classmethod
    def fail(cls, violation: str, vertex: Optional[int] = None, detail: Optional[str] = None) -> "ValidityReport":
        return cls(valid=False, violation=violation, vertex=vertex, detail=detail)


class HittingSetInstance(BaseModel):
    """Universe {0..universe_size-1} and a family of non-empty subsets."""
    universe_size: int = Field(..., ge=0, description="Number of universe elements")
    sets: List[FrozenSet[int]] = Field(default_factory=list, description="Family of sets to hit")

    @model_validator(mode="after")
    def _check_sets(self) -> "HittingSetInstance":
        for index, members in enumerate(self.sets):
            if not members:
                raise ValueError(f"set {index} is empty")
            for x in members:
                if not 0 <= x < self.universe_size:
                    raise ValueError(f"set {index} contains element {x} outside the universe")
        return self


class SteinerInstance(BaseModel):
    """Node Steiner Tree instance: connect the terminals using few non-terminals."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: Graph = Field(..., description="Host graph")
    terminals: FrozenSet[int] = Field(..., description="Vertices that must be connected")

    @field_validator("terminals")
    @classmethod
    def _non_negative(cls, value: FrozenSet[int]) -> FrozenSet[int]:
        if any(v < 0 for v in value):
            raise ValueError("terminal ids must be non-negative")
        return value

    @model_validator(mode="after")
    def _terminals_in_graph(self) -> "SteinerInstance":
        for v in self.terminals:
            if v >= self.graph.n:
                raise ValueError(f"terminal {v} is not a vertex of the graph")
        return self

    @property
    def non_terminals(self) -> List[int]:
        return [v for v in self.graph.vertices if v not in self.terminals]


Instance = Union[Graph, CapacitatedGraph, HittingSetInstance, SteinerInstance]
Solution = Union[FrozenSet[int], CapacitatedSolution]


def _first_undominated(g: Graph, x: FrozenSet[int]) -> Optional[int]:
    dominated = closed_neighborhood(g, x)
    for v in g.vertices:
        if v not in dominated:
            return v
    return None


def _first_disconnected(g: Graph, members: FrozenSet[int]) -> Optional[int]:
    """Smallest vertex of members outside the component of min(members), or None."""
    if len(members) <= 1:
        return None
    view = g.to_networkx().subgraph(members)
    if nx.is_connected(view):
        return None
    home = nx.node_connected_component(view, min(members))
    return min(v for v in members if v not in home)


def _check_graph_kind(g: Graph, kind: ProblemKind, x: FrozenSet[int]) -> ValidityReport:
    v = _first_undominated(g, x)
    if v is not None:
        return ValidityReport.fail("undominated vertex", v, f"vertex {v} is not dominated")
    if kind == ProblemKind.IDS:
        for u in sorted(x):
            inside = sorted(w for w in g.neighbors(u) if w in x)
            if inside:
                return ValidityReport.fail("violating edge", u, f"edge ({u}, {inside[0]}) lies inside the solution")
    if kind == ProblemKind.CDS:
        v = _first_disconnected(g, x)
        if v is not None:
            return ValidityReport.fail("disconnected component", v,
                                       f"vertex {v} is not connected to vertex {min(x)} inside the solution")
    return ValidityReport.ok()


def _check_capacitated(cg: CapacitatedGraph, sol: CapacitatedSolution) -> ValidityReport:
    g = cg.base
    chosen = g.check_vertices(sol.chosen)
    g.check_vertices(sol.assignment.keys())
    g.check_vertices(sol.assignment.values())
    load = {v: 0 for v in chosen}
    for v in g.vertices:
        if v in chosen:
            if v in sol.assignment:
                return ValidityReport.fail("assigned dominator", v, f"chosen vertex {v} has an assignment")
            continue
        if v not in sol.assignment:
            return ValidityReport.fail("unassigned vertex", v, f"vertex {v} has no dominator")
        target = sol.assignment[v]
        if target not in chosen:
            return ValidityReport.fail("assignment target not chosen", v,
                                       f"vertex {v} is assigned to {target}, which is not chosen")
        if not g.has_edge(v, target):
            return ValidityReport.fail("non-adjacent assignment", v,
                                       f"vertex {v} is assigned to non-neighbor {target}")
        load[target] += 1
    for v in sorted(chosen):
        if load[v] > cg.cap(v):
            return ValidityReport.fail("capacity overflow", v,
                                       f"vertex {v} dominates {load[v]} vertices, capacity {cg.cap(v)}")
    return ValidityReport.ok()


def _check_hitting_set(inst: HittingSetInstance, y: FrozenSet[int]) -> ValidityReport:
    for x in y:
        if not isinstance(x, int) or not 0 <= x < inst.universe_size:
            raise InvalidInputError(f"element {x!r} outside the universe 0..{inst.universe_size - 1}")
    for index, members in enumerate(inst.sets):
        if not members & y:
            return ValidityReport.fail("unhit set", index, f"set {index} is not hit")
    return ValidityReport.ok()


def _check_steiner(inst: SteinerInstance, x: FrozenSet[int]) -> ValidityReport:
    g = inst.graph
    x = g.check_vertices(x)
    for v in sorted(x):
        if v in inst.terminals:
            return ValidityReport.fail("terminal in solution", v, f"vertex {v} is a terminal")
    v = _first_disconnected(g, x | inst.terminals)
    if v is not None:
        return ValidityReport.fail("disconnected component", v, f"vertex {v} is cut off from the other terminals")
    return ValidityReport.ok()


def check_solution(instance: Instance, kind: ProblemKind, sol: Union[Iterable[int], CapacitatedSolution]) -> ValidityReport:
    """
    Check a solution against the definition of its problem kind.

    Args:
        instance: Graph, CapacitatedGraph, HittingSetInstance or SteinerInstance
        kind: Problem kind the solution claims to solve
        sol: Vertex set (element set for HS), or CapacitatedSolution for CapDS

    Returns:
        ValidityReport naming the first violated clause, smallest vertex first

    Raises:
        InvalidInputError: If the instance or solution shape does not match the kind,
            or the solution names vertices outside the instance
    """
    kind = ProblemKind(kind)
    if kind == ProblemKind.CAPDS:
        if not isinstance(instance, CapacitatedGraph) or not isinstance(sol, CapacitatedSolution):
            logger.error("CapDS check needs a CapacitatedGraph and a CapacitatedSolution")
            raise InvalidInputError("CapDS check needs a CapacitatedGraph and a CapacitatedSolution")
        return _check_capacitated(instance, sol)
    if isinstance(sol, CapacitatedSolution):
        raise InvalidInputError(f"{kind.value} solutions are vertex sets, not capacitated solutions")
    members = frozenset(sol)
    if kind == ProblemKind.HS:
        if not isinstance(instance, HittingSetInstance):
            raise InvalidInputError("HS check needs a HittingSetInstance")
        return _check_hitting_set(instance, members)
    if kind == ProblemKind.NST:
        if not isinstance(instance, SteinerInstance):
            raise InvalidInputError("NST check needs a SteinerInstance")
        return _check_steiner(instance, members)
    if isinstance(instance, CapacitatedGraph):
        instance = instance.base
    if not isinstance(instance, Graph):
        raise InvalidInputError(f"{kind.value} check needs a Graph")
    return _check_graph_kind(instance, kind, instance.check_vertices(members))


def solution_size(sol: Solution) -> int:
    if isinstance(sol, CapacitatedSolution):
        return len(sol.chosen)
    return len(sol)
