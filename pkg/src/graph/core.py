"""
Graph representation and the structural transformations used by the kernelizers.

Vertex ids are dense integers 0..n-1. Graphs are immutable; every transformation returns
a new graph together with a mapping from new ids to the ids of the graph it came from.
"""
import math
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.utils.errors import InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()

VertexSet = FrozenSet[int]
Mapping = Tuple[int, ...]


class Graph:
    """
    Simple undirected graph on the vertices 0..vertex_count-1.
    """

    __slots__ = ("_n", "_edges", "_adjacency", "_labels", "_masks")

    def __init__(self, vertex_count: int, edges: Iterable[Tuple[int, int]] = (),
                 labels: Optional[Sequence[str]] = None):
        """
        Build a graph and check it is simple.

        Args:
            vertex_count: Number of vertices
            edges: Unordered vertex pairs
            labels: Optional external vertex identifiers, one per vertex

        Raises:
            InvalidInputError: On self-loops, duplicate edges or out-of-range ids
        """
        if vertex_count < 0:
            raise InvalidInputError(f"vertex count must be non-negative, got {vertex_count}")
        adjacency: List[set] = [set() for _ in range(vertex_count)]
        normalized = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidInputError(f"edge ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}")
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            edge = (u, v) if u < v else (v, u)
            if edge in normalized:
                raise InvalidInputError(f"duplicate edge {edge}")
            normalized.add(edge)
            adjacency[u].add(v)
            adjacency[v].add(u)
        if labels is not None:
            labels = tuple(str(label) for label in labels)
            if len(labels) != vertex_count:
                raise InvalidInputError(f"expected {vertex_count} labels, got {len(labels)}")
        self._n = vertex_count
        self._edges = frozenset(normalized)
        self._adjacency = tuple(frozenset(neighbors) for neighbors in adjacency)
        self._labels = labels
        self._masks = None

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> FrozenSet[Tuple[int, int]]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def labels(self) -> Optional[Tuple[str, ...]]:
        return self._labels

    def label(self, v: int) -> str:
        """External identifier of v; 1-based position when the graph has no labels."""
        if self._labels is None:
            return str(v + 1)
        return self._labels[v]

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    @property
    def max_degree(self) -> int:
        """Maximum degree Δ; 0 for graphs without vertices."""
        return max((len(a) for a in self._adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u]

    def closed_mask(self, v: int) -> int:
        """Bitmask of the closed neighborhood N[v]."""
        if self._masks is None:
            masks = []
            for u in range(self._n):
                mask = 1 << u
                for w in self._adjacency[u]:
                    mask |= 1 << w
                masks.append(mask)
            self._masks = tuple(masks)
        return self._masks[v]

    def check_vertices(self, vertices: Iterable[int]) -> VertexSet:
        """Return vertices as a frozenset, rejecting ids outside the graph."""
        members = frozenset(vertices)
        for v in members:
            if not isinstance(v, int) or not 0 <= v < self._n:
                raise InvalidInputError(f"vertex id {v!r} out of range 0..{self._n - 1}")
        return members

    def to_networkx(self) -> nx.Graph:
        """networkx view of the graph for connectivity queries."""
        view = nx.Graph()
        view.add_nodes_from(range(self._n))
        view.add_edges_from(self._edges)
        return view

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self._edges)})"


class CapacitatedGraph:
    """
    Graph with a non-negative capacity on every vertex.
    """

    __slots__ = ("_base", "_caps")

    def __init__(self, base: Graph, caps: Sequence[int]):
        caps = tuple(int(c) for c in caps)
        if len(caps) != base.vertex_count:
            raise InvalidInputError(f"expected {base.vertex_count} capacities, got {len(caps)}")
        for v, c in enumerate(caps):
            if c < 0:
                raise InvalidInputError(f"capacity of vertex {v} is negative ({c})")
        self._base = base
        self._caps = caps

    @property
    def base(self) -> Graph:
        return self._base

    @property
    def caps(self) -> Tuple[int, ...]:
        return self._caps

    def cap(self, v: int) -> int:
        return self._caps[v]

    @property
    def vertex_count(self) -> int:
        return self._base.vertex_count

    @property
    def n(self) -> int:
        return self._base.vertex_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, CapacitatedGraph):
            return NotImplemented
        return self._base == other._base and self._caps == other._caps

    def __hash__(self) -> int:
        return hash((self._base, self._caps))

    def __repr__(self) -> str:
        return f"CapacitatedGraph(n={self._base.n}, m={self._base.edge_count})"


def closed_neighborhood(g: Graph, x: Iterable[int]) -> VertexSet:
    """
    Closed neighborhood N[X] = X ∪ {v | some u in X is adjacent to v}.

    Args:
        g: Graph
        x: Vertex set of g

    Returns:
        N[X] as a frozenset
    """
    members = g.check_vertices(x)
    result = set(members)
    for u in members:
        result |= g.neighbors(u)
    return frozenset(result)


def is_independent(g: Graph, x: Iterable[int]) -> bool:
    members = g.check_vertices(x)
    return all(not (g.neighbors(u) & members) for u in members)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Tuple[Graph, Mapping]:
    """
    Subgraph G[S] renumbered densely.

    Args:
        g: Graph
        s: Vertex set to keep

    Returns:
        Tuple of the induced graph and the mapping new id -> old id (ascending old ids)
    """
    members = sorted(g.check_vertices(s))
    position = {old: new for new, old in enumerate(members)}
    edges = [(position[u], position[v]) for u, v in g.edges if u in position and v in position]
    labels = [g.label(v) for v in members] if g.labels is not None else None
    return Graph(len(members), edges, labels), tuple(members)


def induced_capacitated(cg: CapacitatedGraph, s: Iterable[int]) -> Tuple[CapacitatedGraph, Mapping]:
    """Induced subgraph of a capacitated graph keeping the original capacities."""
    sub, mapping = induced_subgraph(cg.base, s)
    return CapacitatedGraph(sub, [cg.cap(old) for old in mapping]), mapping


def attach_separator_vertex(g: Graph, s: Iterable[int]) -> Tuple[Graph, int, Mapping]:
    """
    Build R(G,S): delete S, add a vertex z adjacent to every surviving vertex that had a
    neighbor in S.

    Args:
        g: Graph
        s: Vertex set replaced by z

    Returns:
        Tuple of the gadget graph, the id of z (always the largest id) and the mapping
        from surviving new ids to old ids
    """
    removed = g.check_vertices(s)
    survivors = [v for v in g.vertices if v not in removed]
    position = {old: new for new, old in enumerate(survivors)}
    z = len(survivors)
    edges = [(position[u], position[v]) for u, v in g.edges if u in position and v in position]
    touching = sorted({position[w] for u in removed for w in g.neighbors(u) if w in position})
    edges.extend((v, z) for v in touching)
    labels = None
    if g.labels is not None:
        labels = [g.label(v) for v in survivors] + [f"z{g.n}"]
    return Graph(z + 1, edges, labels), z, tuple(survivors)


def ds_lower_bound(g: Graph) -> int:
    """
    Lower bound ⌈|V|/(Δ+1)⌉ on every domination optimum: a vertex dominates at most
    itself and its Δ neighbors.
    """
    if g.n == 0:
        return 0
    return math.ceil(g.n / (g.max_degree + 1))


def map_vertices(vertices: Iterable[int], mapping: Mapping) -> VertexSet:
    """Translate vertex ids of a derived graph back through its mapping."""
    return frozenset(mapping[v] for v in vertices)


def invert_mapping(mapping: Mapping) -> Dict[int, int]:
    return {old: new for new, old in enumerate(mapping)}
