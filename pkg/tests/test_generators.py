import pytest
from hypothesis import given, settings, strategies as st

from src.harness.generators import FAMILIES, GeneratorParams, generate
from src.kernels.combine import check_split
from src.utils.errors import InvalidInputError
from tests.helpers import path_graph


def test_path_family():
    instance = generate("path", GeneratorParams(n=10))
    assert instance.graph == path_graph(10)
    assert instance.family == "path" and instance.seed == 0


def test_generation_is_deterministic():
    params = GeneratorParams(n=25, edge_probability=0.2, connected=True)
    assert generate("random", params, 11).graph == generate("random", params, 11).graph


@pytest.mark.parametrize("family", [f for f in FAMILIES if f not in ("hitting-set", "irving")])
def test_every_graph_family_builds(family):
    params = GeneratorParams(n=8, separator_size=2)
    assert generate(family, params, 1).graph.n > 0


def test_bounded_degree_random_graphs():
    g = generate("random", GeneratorParams(n=40, max_degree=3, edge_probability=0.5, connected=True), 2).graph
    assert g.max_degree <= 3
    assert g.edge_count >= 39


def test_bridged_cliques():
    g = generate("bridged-cliques", GeneratorParams(clique_size=3, clique_count=2)).graph
    assert g.n == 6 and g.edge_count == 7


@given(seed=st.integers(min_value=0, max_value=100_000), n=st.integers(min_value=3, max_value=20),
       b=st.integers(min_value=0, max_value=1))
@settings(max_examples=40, deadline=None)
def test_separated_split_has_no_cross_edges(seed, n, b):
    instance = generate("separated", GeneratorParams(n=n, separator_size=b, edge_probability=0.6), seed)
    a, sep, c = instance.split
    assert a & c == sep and len(sep) == b
    check_split(instance.graph, a, sep, c)


@pytest.mark.parametrize("family, params", [
    ("cycle", GeneratorParams(n=2)),
    ("separated", GeneratorParams(n=3, separator_size=2)),
    ("separated", GeneratorParams(n=6, separator_size=0, connected=True)),
    ("tree", GeneratorParams(n=3, max_degree=1)),
    ("hitting-set", GeneratorParams(universe_size=0, set_count=2)),
    ("irving", GeneratorParams(variable_count=0, clause_count=1)),
    ("lattice", GeneratorParams()),
])
def test_infeasible_parameters(family, params):
    with pytest.raises(InvalidInputError):
        generate(family, params)


def test_parameter_validation():
    with pytest.raises(ValueError):
        GeneratorParams(n=-1)


def test_capacities():
    degree = generate("star", GeneratorParams(n=4, capacities="degree")).capacitated
    assert degree.caps == (3, 1, 1, 1)
    capped = generate("random", GeneratorParams(n=30, capacities="random", max_capacity=2), 4).capacitated
    assert all(0 <= c <= 2 for c in capped.caps)


def test_hitting_set_family():
    instance = generate("hitting-set", GeneratorParams(universe_size=4, set_count=3), 5)
    assert instance.graph.n == 4 + 3 + 1
    assert len(instance.hitting_set.sets) == 3
    assert instance.artifact.source == instance.hitting_set


def test_irving_family():
    instance = generate("irving", GeneratorParams(variable_count=2, clause_count=3, alpha="2"), 9)
    copies = instance.artifact.copies
    assert copies == 5
    assert instance.graph.n == 2 * 2 + copies * 3
    assert len(instance.formula.clauses) == 3
