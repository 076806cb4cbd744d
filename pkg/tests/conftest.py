"""
Fixtures shared by the test suite.
"""
import pytest

from src.graph.core import Graph
from tests.helpers import path_graph, two_triangles


@pytest.fixture
def p30() -> Graph:
    return path_graph(30)


@pytest.fixture
def triangles() -> Graph:
    return two_triangles()
