import pytest
from hypothesis import given, settings, strategies as st

from src.graph.core import Graph
from src.graph.problems import CapacitatedSolution, HittingSetInstance, ProblemKind, check_solution
from src.harness.generators import GeneratorParams, generate
from src.oracles.exact import exact_capds, exact_cds, exact_ds, exact_hs, exact_ids, exact_nst, ids_decision
from src.reductions.cnf import (CnfFormula, assignment_to_ids, brute_force_satisfiable, cnf_to_ids_gap, gap_min_ids,
                                ids_to_partial_assignment, parse_alpha)
from src.reductions.hitting_set import (ReductionArtifact, VertexOrigin, ds_to_capds, hitting_set_to_ds, hs_to_cds,
                                        hs_to_ds, hs_to_nst, lift_capds_to_ds, lift_ds_to_hs, lift_nst_to_hs)
from src.reductions.self_reduction import ids_selfreduce
from src.utils.errors import InvalidInputError, OracleInconsistencyError
from tests.helpers import cycle_graph, path_graph, star_graph


def single_set() -> HittingSetInstance:
    return HittingSetInstance(universe_size=2, sets=[frozenset({0, 1})])


def test_hs_to_ds_single_set():
    artifact = hs_to_ds(single_set())
    assert artifact.graph.n == 4
    assert [o.role for o in artifact.back_map] == ["element", "element", "set", "hub"]
    assert len(exact_ds(artifact.graph)) == 1


def test_hs_to_ds_singletons():
    inst = HittingSetInstance(universe_size=2, sets=[frozenset({0}), frozenset({1})])
    artifact = hs_to_ds(inst)
    assert artifact.graph.n == 5
    assert len(exact_ds(artifact.graph)) == 2
    assert len(exact_cds(hs_to_cds(inst).graph)) == 2


def test_lift_replaces_set_vertices_and_drops_the_hub():
    artifact = hs_to_ds(single_set())
    assert lift_ds_to_hs(artifact, {2, 3}) == frozenset({0})
    with pytest.raises(InvalidInputError):
        lift_ds_to_hs(artifact, {2})


def test_hitting_set_maps_to_element_vertices():
    artifact = hs_to_ds(single_set())
    x = hitting_set_to_ds(artifact, {1})
    assert x == frozenset({1})
    assert check_solution(artifact.graph, ProblemKind.DS, x)


def test_hs_to_nst():
    artifact = hs_to_nst(single_set())
    assert artifact.instance.non_terminals == [0, 1]
    solution = exact_nst(artifact.instance)
    assert len(solution) == 1
    assert check_solution(single_set(), ProblemKind.HS, lift_nst_to_hs(artifact, solution))
    with pytest.raises(InvalidInputError):
        lift_nst_to_hs(artifact, set())


def test_ds_to_capds():
    assert ds_to_capds(star_graph(3)).caps == (3, 1, 1, 1)
    edgeless = ds_to_capds(Graph(3))
    assert edgeless.caps == (0, 0, 0)
    assert len(exact_capds(edgeless)) == 3
    sol = CapacitatedSolution(chosen=frozenset({0}), assignment={1: 0, 2: 0, 3: 0})
    assert lift_capds_to_ds(sol) == frozenset({0})


def test_back_map_must_be_bijective():
    origin = VertexOrigin(role="element", index=0)
    with pytest.raises(ValueError):
        ReductionArtifact(kind=ProblemKind.DS, instance=path_graph(2), back_map=[origin, origin])
    with pytest.raises(ValueError):
        ReductionArtifact(kind=ProblemKind.DS, instance=path_graph(2), back_map=[origin])


def test_gap_graph_of_satisfiable_formula():
    f = CnfFormula(variable_count=1, clauses=[frozenset({1})])
    artifact = cnf_to_ids_gap(f, 1)
    assert artifact.graph.n == 4 and artifact.copies == 2
    assert gap_min_ids(artifact) == 1 == len(exact_ids(artifact.graph))
    x = assignment_to_ids(artifact, brute_force_satisfiable(f))
    assert x == frozenset({0})
    assert check_solution(artifact.graph, ProblemKind.IDS, x)
    assert ids_to_partial_assignment(artifact, x) == {0: True}


def test_gap_graph_of_unsatisfiable_formula():
    f = CnfFormula(variable_count=1, clauses=[frozenset({1}), frozenset({-1})])
    assert brute_force_satisfiable(f) is None
    artifact = cnf_to_ids_gap(f, 1)
    assert artifact.graph.n == 6
    assert gap_min_ids(artifact) == 3 == len(exact_ids(artifact.graph))
    assert gap_min_ids(artifact) >= artifact.copies


def test_gap_graph_numbers_clause_copies():
    artifact = cnf_to_ids_gap(CnfFormula(variable_count=1, clauses=[frozenset({1})]), 1)
    assert [o.copy_index for o in artifact.back_map] == [None, None, 0, 1]
    assert "copy" not in VertexOrigin.model_fields
    assert artifact.origin(3).model_copy().copy_index == 1


def test_brute_force_satisfiable_is_lexicographic():
    f = CnfFormula(variable_count=2, clauses=[frozenset({1, 2})])
    assert brute_force_satisfiable(f) == (False, True)


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(variable_count=1, clauses=[frozenset()])
    with pytest.raises(ValueError):
        CnfFormula(variable_count=1, clauses=[frozenset({2})])
    with pytest.raises(InvalidInputError):
        parse_alpha("1/2")
    with pytest.raises(InvalidInputError):
        assignment_to_ids(cnf_to_ids_gap(CnfFormula(variable_count=1), 1), (True, False))


@pytest.mark.parametrize("g, expected", [
    (star_graph(3), frozenset({0})),
    (cycle_graph(5), frozenset({0, 2})),
    (Graph(0), frozenset()),
])
def test_ids_selfreduce(g, expected):
    assert ids_selfreduce(g) == expected


def test_ids_selfreduce_query_count():
    g = path_graph(7)
    queries = []

    def counting(h, k):
        queries.append((h.n, k))
        return ids_decision(h, k)

    solution = ids_selfreduce(g, counting)
    k0 = len(solution)
    assert k0 == 3
    assert check_solution(g, ProblemKind.IDS, solution)
    assert len(queries) <= g.n + g.n * k0


def test_ids_selfreduce_detects_inconsistent_oracles():
    with pytest.raises(OracleInconsistencyError):
        ids_selfreduce(path_graph(3), lambda h, k: False)
    with pytest.raises(OracleInconsistencyError):
        ids_selfreduce(path_graph(3), lambda h, k: k >= 1)


@given(seed=st.integers(min_value=0, max_value=100_000))
@settings(max_examples=30, deadline=None)
def test_hitting_set_optimum_is_preserved(seed):
    inst = generate("hitting-set", GeneratorParams(universe_size=5, set_count=6), seed).hitting_set
    opt = len(exact_hs(inst))
    artifact = hs_to_ds(inst)
    x = exact_ds(artifact.graph)
    assert len(x) == opt
    lifted = lift_ds_to_hs(artifact, x)
    assert check_solution(inst, ProblemKind.HS, lifted)
    assert len(lifted) <= len(x)
