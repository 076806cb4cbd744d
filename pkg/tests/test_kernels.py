from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import CapacitatedSolution, ProblemKind, check_solution, solution_size
from src.harness.generators import GeneratorParams, generate
from src.kernels.kernelizers import (KernelConfig, kernelize, kernelize_capds, kernelize_cds, kernelize_ds,
                                     kernelize_ids)
from src.kernels.sizes import kernel_size, parse_epsilon, query_cap
from src.oracles.exact import exact_capds, exact_cds, exact_ds, exact_ids
from src.oracles.greedy import greedy_ds
from src.oracles.handle import OracleBackend, wrap_as_oracle
from src.oracles.matching import capacitated_assignment
from src.reductions.hitting_set import ds_to_capds
from src.treedecomp.heuristic import heuristic_td
from src.treedecomp.nice import make_nice
from src.utils.errors import ContractViolationError, DecompositionError, InvalidInputError, PreconditionError
from tests.helpers import path_graph


def config(kind: ProblemKind, epsilon="1", backend=OracleBackend.EXACT, budget=None, solver=None,
           record_trace=False) -> KernelConfig:
    oracle = wrap_as_oracle(kind, backend, solver=solver, budget=budget)
    return KernelConfig(epsilon=epsilon, oracle=oracle, record_trace=record_trace)


def bfs_internal(g: Graph) -> frozenset:
    """Non-leaves of a BFS tree: a connected dominating set of any connected graph."""
    if g.n == 1:
        return frozenset({0})
    tree = nx.bfs_tree(g.to_networkx(), 0)
    return frozenset(v for v in tree.nodes if tree.out_degree(v) > 0)


def degree_capped_solver(cg: CapacitatedGraph) -> CapacitatedSolution:
    """Greedy domination is always feasible when every capacity is at least the degree."""
    chosen = greedy_ds(cg.base)
    return CapacitatedSolution(chosen=chosen, assignment=capacitated_assignment(cg, chosen))


def ceil_third(n: int) -> int:
    return -(-n // 3)


@pytest.mark.parametrize("kind, expected", [
    (ProblemKind.DS, 24),
    (ProblemKind.CAPDS, 108),
    (ProblemKind.IDS, 108),
    (ProblemKind.CDS, 60),
])
def test_kernel_sizes(kind, expected):
    assert kernel_size(kind, 1, 1, 2) == expected


def test_kernel_size_is_exact_rational():
    assert kernel_size(ProblemKind.DS, "1/4", 1, 2) == 60
    assert kernel_size(ProblemKind.DS, 4, 1, 2) == 15
    assert kernel_size(ProblemKind.CDS, 4, 1, 2) == 38
    assert kernel_size(ProblemKind.IDS, 4, 1, 2) == 68


def test_kernel_size_rejects_unkernelized_kinds():
    with pytest.raises(InvalidInputError):
        kernel_size(ProblemKind.HS, 1, 1, 2)


def test_parse_epsilon():
    assert parse_epsilon(0.1) == Fraction(1, 10)
    assert parse_epsilon("2/3") == Fraction(2, 3)
    for bad in ("0", "-1", "abc", 0):
        with pytest.raises(InvalidInputError):
            parse_epsilon(bad)


def test_query_cap():
    assert query_cap(ProblemKind.DS, 24) == 48
    assert query_cap(ProblemKind.CDS, 60) == 121


def test_kernel_config_parses_epsilon():
    assert config(ProblemKind.DS, "1/2").epsilon == Fraction(1, 2)
    with pytest.raises(ValueError):
        config(ProblemKind.DS, "0")


def test_small_graph_is_solved_by_one_call():
    g = path_graph(10)
    cfg = config(ProblemKind.DS)
    solution, trace = kernelize(ProblemKind.DS, g, None, cfg)
    assert solution == exact_ds(g)
    assert trace.oracle_calls == 1
    assert trace.kernel_size == 24 and trace.size_cap == 48


def test_empty_graph_makes_no_call():
    cfg = config(ProblemKind.DS)
    solution, trace = kernelize(ProblemKind.DS, Graph(0), None, cfg)
    assert solution == frozenset()
    assert trace.oracle_calls == 0
    capds, _ = kernelize(ProblemKind.CAPDS, CapacitatedGraph(Graph(0), []), None, config(ProblemKind.CAPDS))
    assert capds.chosen == frozenset()


def test_window_covering_the_whole_graph_is_one_call(p30):
    cfg = config(ProblemKind.DS, budget=30)
    solution, trace = kernelize(ProblemKind.DS, p30, None, cfg)
    assert check_solution(p30, ProblemKind.DS, solution)
    assert len(solution) == 10
    assert trace.oracle_calls == 1 and trace.max_query_size == 30


def test_ds_splits_and_stays_within_ratio():
    g = path_graph(40)
    cfg = config(ProblemKind.DS, epsilon=4, budget=64, record_trace=True)
    solution, trace = kernelize(ProblemKind.DS, g, None, cfg)
    assert check_solution(g, ProblemKind.DS, solution)
    assert len(solution) <= 5 * ceil_third(40)
    assert trace.kernel_size == 15
    assert trace.oracle_calls == len(trace.splits) >= 2
    first = trace.splits[0]
    assert 15 <= first.subtree_size <= 30
    assert first.query_size == first.subtree_size
    assert trace.splits[-1].node is None
    assert trace.max_query_size <= trace.size_cap


def test_ids_splits_on_long_path():
    g = path_graph(250)
    solution = kernelize_ids(g, None, config(ProblemKind.IDS, budget=300))
    assert check_solution(g, ProblemKind.IDS, solution)
    assert len(solution) <= 2 * ceil_third(250)


def test_capds_splits_with_degree_capacities():
    cg = ds_to_capds(path_graph(250))
    cfg = config(ProblemKind.CAPDS, backend=OracleBackend.CUSTOM, solver=degree_capped_solver)
    solution, trace = kernelize(ProblemKind.CAPDS, cg, None, cfg)
    assert check_solution(cg, ProblemKind.CAPDS, solution)
    assert trace.oracle_calls >= 2
    assert trace.max_query_size <= 216


def test_cds_splits_on_long_path():
    g = path_graph(130)
    cfg = config(ProblemKind.CDS, budget=200)
    solution, trace = kernelize(ProblemKind.CDS, g, None, cfg)
    assert check_solution(g, ProblemKind.CDS, solution)
    assert len(solution) <= 2 * 128
    assert trace.oracle_calls == 2
    assert trace.max_query_size <= 121
    assert trace.degenerate_splits == 0


def test_cds_degenerate_split_calls_the_oracle_directly():
    g = path_graph(70)
    solution, trace = kernelize(ProblemKind.CDS, g, None, config(ProblemKind.CDS, budget=128, record_trace=True))
    assert solution == frozenset(range(1, 69))
    assert trace.degenerate_splits == 1
    assert trace.oracle_calls == 1
    assert trace.splits[0].degenerate


def test_cds_rejects_disconnected_graphs():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(PreconditionError, match="component"):
        kernelize_cds(g, None, config(ProblemKind.CDS))


def test_oracle_kind_must_match():
    with pytest.raises(InvalidInputError):
        kernelize(ProblemKind.IDS, path_graph(4), None, config(ProblemKind.DS))


def test_capds_needs_capacities():
    with pytest.raises(InvalidInputError):
        kernelize(ProblemKind.CAPDS, path_graph(4), None, config(ProblemKind.CAPDS))


def test_invalid_decomposition_is_rejected():
    ntd = make_nice(path_graph(5), heuristic_td(path_graph(5)))
    with pytest.raises(DecompositionError) as caught:
        kernelize_ds(path_graph(6), ntd, config(ProblemKind.DS))
    assert caught.value.report.violation == "uncovered vertex"


def test_oversized_query_is_a_contract_violation():
    oracle = wrap_as_oracle(ProblemKind.DS, size_cap=3)
    with pytest.raises(ContractViolationError):
        kernelize_ds(path_graph(10), None, KernelConfig(epsilon=1, oracle=oracle))


def test_greedy_backend_on_bounded_degree_trees():
    g = generate("tree", GeneratorParams(n=150, max_degree=3), seed=7).graph
    ds, trace = kernelize(ProblemKind.DS, g, None, config(ProblemKind.DS, epsilon=4, backend=OracleBackend.GREEDY))
    assert check_solution(g, ProblemKind.DS, ds)
    assert 2 <= trace.oracle_calls <= g.n
    assert trace.max_query_size <= trace.size_cap
    ids = kernelize_ids(g, None, config(ProblemKind.IDS, epsilon=4, backend=OracleBackend.GREEDY))
    assert check_solution(g, ProblemKind.IDS, ids)


def test_custom_cds_oracle_on_trees():
    g = generate("tree", GeneratorParams(n=200, max_degree=3), seed=3).graph
    cfg = config(ProblemKind.CDS, epsilon=4, backend=OracleBackend.CUSTOM, solver=bfs_internal)
    solution, trace = kernelize(ProblemKind.CDS, g, None, cfg)
    assert check_solution(g, ProblemKind.CDS, solution)
    assert trace.max_query_size <= trace.size_cap


def test_capds_on_separated_triangles(triangles):
    cg = CapacitatedGraph(triangles, [1, 1, 4, 1, 1])
    solution = kernelize_capds(cg, None, config(ProblemKind.CAPDS))
    assert solution == exact_capds(cg)


@given(seed=st.integers(min_value=0, max_value=100_000), n=st.integers(min_value=1, max_value=16),
       epsilon=st.sampled_from(["1/4", "1", "4"]))
@settings(max_examples=40, deadline=None)
def test_kernels_are_sound_and_within_ratio(seed, n, epsilon):
    g = generate("random", GeneratorParams(n=n, edge_probability=0.3, connected=True), seed).graph
    bound = 1 + Fraction(epsilon)
    for kind, exact in ((ProblemKind.DS, exact_ds), (ProblemKind.IDS, exact_ids), (ProblemKind.CDS, exact_cds)):
        solution, trace = kernelize(kind, g, None, config(kind, epsilon))
        assert check_solution(g, kind, solution)
        assert len(solution) <= bound * len(exact(g))
        assert trace.max_query_size <= trace.size_cap
        assert trace.oracle_calls <= g.n
    cg = ds_to_capds(g)
    capds = kernelize_capds(cg, None, config(ProblemKind.CAPDS, epsilon))
    assert check_solution(cg, ProblemKind.CAPDS, capds)
    assert solution_size(capds) <= bound * len(exact_capds(cg))


def sparse_graph(family: str, n: int, delta: int, seed: int) -> Graph:
    if family == "grid":
        return generate("grid", GeneratorParams(rows=5, cols=n // 5), seed).graph
    if family == "tree":
        return generate("tree", GeneratorParams(n=n, max_degree=delta), seed).graph
    return generate("random", GeneratorParams(n=n, max_degree=delta, edge_probability=0.05, connected=True), seed).graph


def sparse_config(kind: ProblemKind, epsilon) -> KernelConfig:
    if kind == ProblemKind.CDS:
        return config(kind, epsilon, backend=OracleBackend.CUSTOM, solver=bfs_internal, record_trace=True)
    if kind == ProblemKind.CAPDS:
        return config(kind, epsilon, backend=OracleBackend.CUSTOM, solver=degree_capped_solver, record_trace=True)
    return config(kind, epsilon, backend=OracleBackend.GREEDY, record_trace=True)


def assert_split_discipline(n: int, trace) -> None:
    """Every cut-off part has at least s vertices, so a run makes at most ⌈n/(s-tw-1)⌉ + 1 calls."""
    s, tw = trace.kernel_size, trace.width
    assert trace.max_query_size <= trace.size_cap
    assert trace.oracle_calls <= min(n, -(-n // (s - tw - 1)) + 1)
    assert trace.oracle_calls == len(trace.splits)
    for record in trace.splits:
        if record.node is None or record.degenerate:
            continue
        assert record.subtree_size >= s
        if trace.kind == ProblemKind.CDS:
            assert record.query_size == record.subtree_size - record.bag_size + 1
        else:
            assert record.query_size == record.subtree_size
    if n > s:
        assert trace.splits[0].node is not None


@pytest.mark.parametrize("kind", [ProblemKind.DS, ProblemKind.IDS, ProblemKind.CDS, ProblemKind.CAPDS])
def test_every_kind_splits_bounded_degree_trees(kind):
    g = generate("tree", GeneratorParams(n=250, max_degree=3), seed=5).graph
    instance = ds_to_capds(g) if kind == ProblemKind.CAPDS else g
    solution, trace = kernelize(kind, instance, None, sparse_config(kind, "50"))
    assert check_solution(instance, kind, solution)
    assert_split_discipline(g.n, trace)
    assert trace.width == 1
    assert len(trace.splits) >= 2
    assert all(record.node is not None for record in trace.splits[:-1])


@given(seed=st.integers(min_value=0, max_value=100_000), n=st.integers(min_value=40, max_value=60),
       delta=st.integers(min_value=2, max_value=5), family=st.sampled_from(["tree", "grid", "random"]),
       epsilon=st.sampled_from(["1/4", "1", "4"]))
@settings(max_examples=25, deadline=None)
def test_kernels_split_soundly_on_sparse_graphs(seed, n, delta, family, epsilon):
    g = sparse_graph(family, n, delta, seed)
    for kind in (ProblemKind.DS, ProblemKind.IDS, ProblemKind.CDS, ProblemKind.CAPDS):
        instance = ds_to_capds(g) if kind == ProblemKind.CAPDS else g
        solution, trace = kernelize(kind, instance, None, sparse_config(kind, epsilon))
        assert check_solution(instance, kind, solution)
        assert_split_discipline(g.n, trace)


def test_oracle_can_be_reused_at_another_epsilon():
    g = path_graph(40)
    oracle = wrap_as_oracle(ProblemKind.DS, budget=64)
    _, coarse = kernelize(ProblemKind.DS, g, None, KernelConfig(epsilon=4, oracle=oracle))
    assert coarse.size_cap == 30
    assert oracle.size_cap is None
    solution, fine = kernelize(ProblemKind.DS, g, None, KernelConfig(epsilon=1, oracle=oracle))
    assert fine.size_cap == 48 and fine.max_query_size == 40
    assert len(solution) == ceil_third(40)
