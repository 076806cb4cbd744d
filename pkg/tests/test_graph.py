import pytest
from hypothesis import given, settings, strategies as st

from src.graph.core import (CapacitatedGraph, Graph, attach_separator_vertex, closed_neighborhood, ds_lower_bound,
                            induced_capacitated, induced_subgraph, invert_mapping, is_independent, map_vertices)
from src.graph.problems import (CapacitatedSolution, HittingSetInstance, ProblemKind, SteinerInstance, check_solution,
                                solution_size)
from src.harness.generators import GeneratorParams, generate
from src.utils.errors import InvalidInputError
from tests.helpers import complete_graph, path_graph, star_graph


def test_graph_basics():
    g = Graph(3, [(1, 0), (1, 2)])
    assert g.edges == frozenset({(0, 1), (1, 2)})
    assert g.n == 3 and g.edge_count == 2
    assert g.degree(1) == 2
    assert g.max_degree == 2
    assert g.label(0) == "1"
    assert g.closed_mask(1) == 0b111
    assert g.has_edge(2, 1)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)], [(-1, 0)]])
def test_graph_rejects_non_simple_input(edges):
    with pytest.raises(InvalidInputError):
        Graph(3, edges)


def test_check_vertices_rejects_out_of_range():
    with pytest.raises(InvalidInputError):
        path_graph(3).check_vertices([5])


def test_empty_graph():
    g = Graph(0)
    assert g.max_degree == 0
    assert ds_lower_bound(g) == 0
    assert check_solution(g, ProblemKind.CDS, set())


def test_induced_subgraph_maps_back():
    sub, mapping = induced_subgraph(path_graph(4), {3, 1, 2})
    assert mapping == (1, 2, 3)
    assert sub.edges == frozenset({(0, 1), (1, 2)})
    assert map_vertices({0, 2}, mapping) == frozenset({1, 3})
    assert invert_mapping(mapping) == {1: 0, 2: 1, 3: 2}


def test_induced_capacitated_keeps_capacities():
    cg = CapacitatedGraph(star_graph(3), [3, 0, 1, 2])
    sub, mapping = induced_capacitated(cg, {0, 3})
    assert mapping == (0, 3)
    assert sub.caps == (3, 2)
    assert sub.base.edges == frozenset({(0, 1)})


def test_attach_separator_vertex():
    gadget, z, mapping = attach_separator_vertex(path_graph(5), {2})
    assert mapping == (0, 1, 3, 4)
    assert z == 4
    assert gadget.edges == frozenset({(0, 1), (2, 3), (1, 4), (2, 4)})


def test_closed_neighborhood_and_independence():
    g = path_graph(5)
    assert closed_neighborhood(g, {0, 4}) == frozenset({0, 1, 3, 4})
    assert is_independent(g, {0, 2, 4})
    assert not is_independent(g, {1, 2})


def test_ds_lower_bound():
    assert ds_lower_bound(path_graph(30)) == 10
    assert ds_lower_bound(complete_graph(5)) == 1


def test_check_solution_ds():
    g = path_graph(3)
    assert check_solution(g, ProblemKind.DS, {1})
    report = check_solution(g, ProblemKind.DS, {0})
    assert not report
    assert report.violation == "undominated vertex"
    assert report.vertex == 2


def test_check_solution_ids_violating_edge():
    report = check_solution(complete_graph(3), ProblemKind.IDS, {0, 1})
    assert report.violation == "violating edge"
    assert report.vertex == 0


def test_check_solution_cds_disconnected():
    report = check_solution(path_graph(5), ProblemKind.CDS, {1, 3})
    assert report.violation == "disconnected component"
    assert report.vertex == 3
    assert check_solution(path_graph(5), ProblemKind.CDS, {1, 2, 3})


def test_check_solution_capds():
    cg = CapacitatedGraph(star_graph(3), [3, 1, 1, 1])
    good = CapacitatedSolution(chosen=frozenset({0}), assignment={1: 0, 2: 0, 3: 0})
    assert check_solution(cg, ProblemKind.CAPDS, good)
    assert solution_size(good) == 1

    tight = CapacitatedGraph(star_graph(3), [2, 1, 1, 1])
    assert check_solution(tight, ProblemKind.CAPDS, good).violation == "capacity overflow"

    missing = CapacitatedSolution(chosen=frozenset({0}), assignment={1: 0, 2: 0})
    report = check_solution(cg, ProblemKind.CAPDS, missing)
    assert report.violation == "unassigned vertex" and report.vertex == 3

    assigned = CapacitatedSolution(chosen=frozenset({0, 1}), assignment={1: 0, 2: 0, 3: 0})
    assert check_solution(cg, ProblemKind.CAPDS, assigned).violation == "assigned dominator"


def test_check_solution_shape_mismatch():
    with pytest.raises(InvalidInputError):
        check_solution(path_graph(3), ProblemKind.CAPDS, frozenset({1}))


def test_check_solution_hitting_set():
    inst = HittingSetInstance(universe_size=3, sets=[frozenset({0, 1}), frozenset({2})])
    assert check_solution(inst, ProblemKind.HS, {1, 2})
    report = check_solution(inst, ProblemKind.HS, {0})
    assert report.violation == "unhit set" and report.vertex == 1


def test_hitting_set_rejects_empty_set():
    with pytest.raises(ValueError):
        HittingSetInstance(universe_size=2, sets=[frozenset()])


def test_check_solution_steiner():
    inst = SteinerInstance(graph=path_graph(3), terminals=frozenset({0, 2}))
    assert inst.non_terminals == [1]
    assert check_solution(inst, ProblemKind.NST, {1})
    assert check_solution(inst, ProblemKind.NST, set()).violation == "disconnected component"
    assert check_solution(inst, ProblemKind.NST, {0}).violation == "terminal in solution"


@given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=1, max_value=20))
@settings(max_examples=50, deadline=None)
def test_whole_vertex_set_is_a_trivial_solution(seed, n):
    g = generate("random", GeneratorParams(n=n, edge_probability=0.3), seed).graph
    everything = frozenset(g.vertices)
    assert closed_neighborhood(g, everything) == everything
    assert check_solution(g, ProblemKind.DS, everything)
    sub, mapping = induced_subgraph(g, everything)
    assert sub == g and mapping == tuple(g.vertices)
