"""
The four (1+ε)-approximate Turing kernelizations for DS, CapDS, IDS and CDS.

Each run repeatedly cuts a subtree with s <= |V_t| <= 2s off the nice decomposition, solves
the cut-off part with the oracle, and continues on the rest; once at most s vertices remain,
the oracle solves the remainder and the partial solutions are combined bottom-up.
"""
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.graph.core import (CapacitatedGraph, Graph, Mapping, attach_separator_vertex, induced_capacitated,
                            induced_subgraph, invert_mapping, map_vertices)
from src.graph.problems import CapacitatedSolution, ProblemKind, Solution, solution_size
from src.kernels.combine import combine_capds, combine_cds_rounds, combine_ds, combine_ids
from src.kernels.sizes import kernel_size, parse_epsilon, query_cap
from src.oracles.handle import OracleHandle
from src.treedecomp.decomposition import validate, width
from src.treedecomp.heuristic import heuristic_td
from src.treedecomp.nice import (NiceTreeDecomposition, check_nice, find_split_node, make_nice, prune_subtree,
                                 relabel_vertices, substitute_bag_vertices)
from src.utils.errors import DecompositionError, InvalidInputError, PreconditionError
from src.utils.logger import setup_logger

logger = setup_logger()

KernelInput = Union[Graph, CapacitatedGraph]


class KernelConfig(BaseModel):
    """Settings of one kernelization run."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    epsilon: Fraction = Field(..., description="Approximation slack ε > 0, exact rational")
    oracle: OracleHandle = Field(..., description="Oracle for the problem being kernelized")
    record_trace: bool = Field(False, description="Keep one record per split in the trace")

    @field_validator("epsilon", mode="before")
    @classmethod
    def _parse_epsilon(cls, value):
        return parse_epsilon(value)


class SplitRecord(BaseModel):
    """One oracle call of a run."""
    level: int = Field(..., description="Recursion depth, 0 for the input graph")
    node: Optional[int] = Field(None, description="Split node t; None for the final call")
    graph_size: int = Field(..., description="Vertices of the graph at this level")
    subtree_size: int = Field(..., description="|V_t|")
    bag_size: int = Field(..., description="|X_t|")
    query_size: int = Field(..., description="Vertices of the oracle query")
    answer_size: int = Field(..., description="Size of the oracle answer")
    degenerate: bool = Field(False, description="CDS split that fell through to a direct call")


class KernelTrace(BaseModel):
    """Evidence collected during a run."""
    kind: ProblemKind = Field(..., description="Problem kernelized")
    epsilon: str = Field(..., description="ε as a fraction string")
    width: int = Field(..., description="Width of the input decomposition")
    max_degree: int = Field(..., description="Maximum degree of the input graph")
    kernel_size: int = Field(..., description="Kernel size s")
    size_cap: int = Field(..., description="Largest query the run may make")
    splits: List[SplitRecord] = Field(default_factory=list, description="Per-call records when recording")
    oracle_calls: int = Field(0, description="Oracle calls made by this run")
    max_query_size: int = Field(0, description="Largest query of this run")
    degenerate_splits: int = Field(0, description="CDS splits answered by a direct oracle call")
    merge_iterations: int = Field(0, description="Connection rounds spent combining CDS solutions")
    wall_time: float = Field(0.0, description="Seconds spent in the run")


@dataclass
class _Frame:
    graph: KernelInput
    subtree: frozenset
    bag: frozenset
    local: Solution
    mapping: Mapping


def _base(g: KernelInput) -> Graph:
    return g.base if isinstance(g, CapacitatedGraph) else g


def _empty(kind: ProblemKind) -> Solution:
    if kind == ProblemKind.CAPDS:
        return CapacitatedSolution(chosen=frozenset(), assignment={})
    return frozenset()


def _map_capacitated(sol: CapacitatedSolution, mapping: Mapping) -> CapacitatedSolution:
    return CapacitatedSolution(
        chosen=map_vertices(sol.chosen, mapping),
        assignment={mapping[v]: mapping[d] for v, d in sol.assignment.items()},
    )


def _prepare(kind: ProblemKind, g: KernelInput, ntd: Optional[NiceTreeDecomposition],
             cfg: KernelConfig) -> NiceTreeDecomposition:
    if cfg.oracle.kind != kind:
        raise InvalidInputError(f"a {kind.value} kernelization needs a {kind.value} oracle, got {cfg.oracle.kind.value}")
    if kind == ProblemKind.CAPDS and not isinstance(g, CapacitatedGraph):
        raise InvalidInputError("CapDS kernelization needs a capacitated graph")
    base = _base(g)
    if kind == ProblemKind.CDS and base.n and not nx.is_connected(base.to_networkx()):
        logger.error(f"CDS kernelization called on disconnected {base}")
        raise PreconditionError("CDS kernelization needs a connected graph; "
                                "split the input into connected components and kernelize each separately")
    if ntd is None:
        return make_nice(base, heuristic_td(base))
    report = validate(base, ntd.to_tree_decomposition())
    if report:
        report = check_nice(ntd)
    if not report:
        logger.error(f"Rejected decomposition: {report.violation} ({report.detail})")
        raise DecompositionError(f"invalid nice tree decomposition: {report.violation} ({report.detail})", report)
    return ntd


def _solve_local(kind: ProblemKind, g: KernelInput, subtree: frozenset, bag: frozenset,
                 oracle: OracleHandle) -> Tuple[Solution, int]:
    """Oracle answer for the cut-off part, translated into g's ids, with the query size."""
    if kind == ProblemKind.CAPDS:
        local, mapping = induced_capacitated(g, subtree)
        return _map_capacitated(oracle(local), mapping), local.n
    if kind == ProblemKind.CDS:
        rest = frozenset(g.vertices) - (subtree - bag)
        gadget, z, mapping = attach_separator_vertex(g, rest)
        answer = oracle(gadget)
        return map_vertices((v for v in answer if v != z), mapping), gadget.n
    local, mapping = induced_subgraph(g, subtree)
    return map_vertices(oracle(local), mapping), local.n


def _shrink(kind: ProblemKind, g: KernelInput, ntd: NiceTreeDecomposition, t: int, subtree: frozenset,
            bag: frozenset) -> Tuple[KernelInput, Mapping, NiceTreeDecomposition]:
    """Graph and decomposition the run continues on, with the mapping back to g's ids."""
    pruned = prune_subtree(ntd, t)
    if kind == ProblemKind.CDS:
        rest, z, mapping = attach_separator_vertex(g, subtree)
        renaming = invert_mapping(mapping)
        renaming[g.n] = z
        return rest, mapping, relabel_vertices(substitute_bag_vertices(pruned, bag, g.n), renaming)
    keep = frozenset(_base(g).vertices) - (subtree - bag)
    if kind == ProblemKind.CAPDS:
        rest, mapping = induced_capacitated(g, keep)
    else:
        rest, mapping = induced_subgraph(g, keep)
    return rest, mapping, relabel_vertices(pruned, invert_mapping(mapping))


def _combine(kind: ProblemKind, frame: _Frame, remainder: Solution, trace: KernelTrace) -> Solution:
    """Combine the cut-off solution with the solution of the remaining graph, in frame ids."""
    g = frame.graph
    keep = frozenset(_base(g).vertices) - (frame.subtree - frame.bag)
    if kind == ProblemKind.DS:
        return combine_ds(frame.local, map_vertices(remainder, frame.mapping))
    if kind == ProblemKind.IDS:
        return combine_ids(g, map_vertices(remainder, frame.mapping), frame.local, frame.bag,
                           a=keep, c=frame.subtree)
    if kind == ProblemKind.CAPDS:
        return combine_capds(g, _map_capacitated(remainder, frame.mapping), frame.local, frame.bag,
                             a=keep, c=frame.subtree)
    z = len(frame.mapping)
    rest = map_vertices((v for v in remainder if v != z), frame.mapping)
    merged, rounds = combine_cds_rounds(g, rest, frame.local, frame.bag, a=keep, c=frame.subtree)
    trace.merge_iterations += rounds
    return merged


def kernelize(kind: ProblemKind, g: KernelInput, ntd: Optional[NiceTreeDecomposition],
              cfg: KernelConfig) -> Tuple[Solution, KernelTrace]:
    """
    Run the kernelization for kind.

    The kernel size s is fixed from the width of the input decomposition and the maximum
    degree of the input graph. For the duration of the run the oracle's size cap is lowered to 2s (2s+1 for CDS,
    whose queries carry the gadget vertex).

    Args:
        kind: DS, CapDS, IDS or CDS
        g: Input graph; a CapacitatedGraph for CapDS
        ntd: Nice tree decomposition of g; built with heuristic_td when None
        cfg: ε, oracle and trace settings

    Returns:
        Tuple of the solution and the run's trace

    Raises:
        DecompositionError: If ntd is not a valid nice decomposition of g
        PreconditionError: For CDS on a disconnected graph
        ContractViolationError: If the oracle receives an oversized query or answers wrongly
    """
    kind = ProblemKind(kind)
    started = time.time()
    ntd = _prepare(kind, g, ntd, cfg)
    oracle = cfg.oracle
    base = _base(g)
    tw, delta = width(ntd), base.max_degree
    s = kernel_size(kind, cfg.epsilon, tw, delta)
    with oracle.capped(query_cap(kind, s)):
        logged_before = len(oracle.query_log)
        trace = KernelTrace(kind=kind, epsilon=str(cfg.epsilon), width=tw, max_degree=delta, kernel_size=s,
                            size_cap=oracle.size_cap)
        logger.info(f"Kernelizing {kind.value} on {base} with eps={cfg.epsilon}, tw={tw}, delta={delta}, s={s}")
        solution = _split_and_combine(kind, g, ntd, s, cfg, trace)
        queries = oracle.query_log[logged_before:]

    trace.oracle_calls = len(queries)
    trace.max_query_size = max((q.instance_size for q in queries), default=0)
    trace.wall_time = time.time() - started
    logger.info(f"Kernelized {kind.value}: solution size {solution_size(solution)} "
                f"with {trace.oracle_calls} oracle calls, largest query {trace.max_query_size}")
    return solution, trace


def _split_and_combine(kind: ProblemKind, g: KernelInput, ntd: NiceTreeDecomposition, s: int, cfg: KernelConfig,
                       trace: KernelTrace) -> Solution:
    """Cut off subtrees of s to 2s vertices until at most s remain, then combine bottom-up."""
    oracle = cfg.oracle
    frames: List[_Frame] = []
    current, current_ntd = g, ntd
    while True:
        level_size = _base(current).n
        if level_size <= s:
            solution = oracle(current) if level_size else _empty(kind)
            if cfg.record_trace and level_size:
                trace.splits.append(SplitRecord(level=len(frames), graph_size=level_size, subtree_size=level_size,
                                                bag_size=0, query_size=level_size,
                                                answer_size=solution_size(solution)))
            break

        t = find_split_node(current_ntd, s)
        subtree, bag = current_ntd.subtree_vertices(t), current_ntd.bag(t)
        if kind == ProblemKind.CDS and len(subtree) == level_size:
            logger.warning(f"Degenerate CDS split at level {len(frames)}: V_t = V, solving {level_size} vertices directly")
            solution = oracle(current)
            trace.degenerate_splits += 1
            if cfg.record_trace:
                trace.splits.append(SplitRecord(level=len(frames), node=t, graph_size=level_size,
                                                subtree_size=len(subtree), bag_size=len(bag), query_size=level_size,
                                                answer_size=solution_size(solution), degenerate=True))
            break

        local, query_size = _solve_local(kind, current, subtree, bag, oracle)
        if cfg.record_trace:
            trace.splits.append(SplitRecord(level=len(frames), node=t, graph_size=level_size,
                                            subtree_size=len(subtree), bag_size=len(bag), query_size=query_size,
                                            answer_size=solution_size(local)))
        logger.debug(f"Level {len(frames)}: split node {t}, |V_t|={len(subtree)}, |X_t|={len(bag)}")
        rest, mapping, rest_ntd = _shrink(kind, current, current_ntd, t, subtree, bag)
        frames.append(_Frame(current, subtree, bag, local, mapping))
        current, current_ntd = rest, rest_ntd

    while frames:
        solution = _combine(kind, frames.pop(), solution, trace)
    return solution


def kernelize_ds(g: Graph, ntd: Optional[NiceTreeDecomposition], cfg: KernelConfig) -> frozenset:
    """Dominating set within c(1+ε) of optimal for a c-approximate oracle."""
    return kernelize(ProblemKind.DS, g, ntd, cfg)[0]


def kernelize_capds(g: CapacitatedGraph, ntd: Optional[NiceTreeDecomposition],
                    cfg: KernelConfig) -> CapacitatedSolution:
    return kernelize(ProblemKind.CAPDS, g, ntd, cfg)[0]


def kernelize_ids(g: Graph, ntd: Optional[NiceTreeDecomposition], cfg: KernelConfig) -> frozenset:
    return kernelize(ProblemKind.IDS, g, ntd, cfg)[0]


def kernelize_cds(g: Graph, ntd: Optional[NiceTreeDecomposition], cfg: KernelConfig) -> frozenset:
    """Connected dominating set of a connected graph; oracle queries are gadget graphs R(G[V_t], X_t)."""
    return kernelize(ProblemKind.CDS, g, ntd, cfg)[0]
