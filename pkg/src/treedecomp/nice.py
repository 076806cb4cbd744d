"""
Nice tree decompositions: conversion, subtree vertex sets, split-node search and the
subtree surgery used by the kernelizers.
"""
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.graph.core import Graph
from src.graph.problems import ValidityReport
from src.treedecomp.decomposition import TreeDecomposition, validate, width
from src.utils.errors import DecompositionError, InvalidInputError, NoSuchNodeError
from src.utils.logger import setup_logger

logger = setup_logger()


class NodeKind(str, Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


class NiceTreeDecomposition:
    """
    Rooted decomposition whose nodes are leaves, introduce, forget or join nodes.

    Nodes are numbered 0..len-1. The subtree vertex sets V_t are computed for all nodes
    in one bottom-up pass the first time any of them is requested.
    """

    __slots__ = ("_bags", "_kinds", "_vertex", "_children", "_parent", "_root", "_subtree")

    def __init__(self, bags: List[FrozenSet[int]], kinds: List[NodeKind], vertex: List[Optional[int]],
                 children: List[Tuple[int, ...]], root: int):
        self._bags = tuple(bags)
        self._kinds = tuple(kinds)
        self._vertex = tuple(vertex)
        self._children = tuple(tuple(c) for c in children)
        parent: List[Optional[int]] = [None] * len(bags)
        for t, kids in enumerate(self._children):
            for c in kids:
                parent[c] = t
        self._parent = tuple(parent)
        self._root = root
        self._subtree: Optional[Tuple[FrozenSet[int], ...]] = None

    @property
    def root(self) -> int:
        return self._root

    @property
    def nodes(self) -> range:
        return range(len(self._bags))

    @property
    def bags(self) -> Dict[int, FrozenSet[int]]:
        return dict(enumerate(self._bags))

    def __len__(self) -> int:
        return len(self._bags)

    def bag(self, t: int) -> FrozenSet[int]:
        return self._bags[t]

    def kind(self, t: int) -> NodeKind:
        return self._kinds[t]

    def vertex(self, t: int) -> Optional[int]:
        """Vertex introduced or forgotten at t; None for leaves and joins."""
        return self._vertex[t]

    def children(self, t: int) -> Tuple[int, ...]:
        return self._children[t]

    def parent(self, t: int) -> Optional[int]:
        return self._parent[t]

    @property
    def tree_edges(self) -> List[Tuple[int, int]]:
        return [(t, c) for t in self.nodes for c in self._children[t]]

    def post_order(self, start: Optional[int] = None) -> List[int]:
        """Nodes of the subtree rooted at start, children before parents."""
        start = self._root if start is None else start
        order, stack = [], [start]
        while stack:
            t = stack.pop()
            order.append(t)
            stack.extend(self._children[t])
        order.reverse()
        return order

    def subtree_vertices(self, t: int) -> FrozenSet[int]:
        if self._subtree is None:
            table: List[FrozenSet[int]] = [frozenset()] * len(self._bags)
            for u in self.post_order():
                collected = set(self._bags[u])
                for c in self._children[u]:
                    collected |= table[c]
                table[u] = frozenset(collected)
            self._subtree = tuple(table)
        return self._subtree[t]

    @property
    def vertices(self) -> FrozenSet[int]:
        return self.subtree_vertices(self._root)

    def to_tree_decomposition(self) -> TreeDecomposition:
        return TreeDecomposition(self.bags, self.tree_edges, self._root)

    def __repr__(self) -> str:
        return f"NiceTreeDecomposition(nodes={len(self)}, width={width(self)})"


class _NiceBuilder:
    """Accumulates nodes bottom-up; every add returns the new node id."""

    def __init__(self):
        self.bags: List[FrozenSet[int]] = []
        self.kinds: List[NodeKind] = []
        self.vertex: List[Optional[int]] = []
        self.children: List[Tuple[int, ...]] = []

    def add(self, bag: FrozenSet[int], kind: NodeKind, vertex: Optional[int], children: Tuple[int, ...]) -> int:
        self.bags.append(bag)
        self.kinds.append(kind)
        self.vertex.append(vertex)
        self.children.append(children)
        return len(self.bags) - 1

    def leaf(self) -> int:
        return self.add(frozenset(), NodeKind.LEAF, None, ())

    def walk(self, node: int, target: FrozenSet[int]) -> int:
        """Forget then introduce from node's bag until the bag equals target."""
        bag = self.bags[node]
        for v in sorted(bag - target):
            bag = bag - {v}
            node = self.add(bag, NodeKind.FORGET, v, (node,))
        for v in sorted(target - bag):
            bag = bag | {v}
            node = self.add(bag, NodeKind.INTRODUCE, v, (node,))
        return node

    def build(self, root: int) -> NiceTreeDecomposition:
        return NiceTreeDecomposition(self.bags, self.kinds, self.vertex, self.children, root)


def _rooted_children(td: TreeDecomposition, root: int) -> Dict[int, List[int]]:
    children: Dict[int, List[int]] = {root: []}
    queue, seen = [root], {root}
    while queue:
        t = queue.pop(0)
        for u in sorted(td.tree_neighbors(t)):
            if u not in seen:
                seen.add(u)
                children[t].append(u)
                children[u] = []
                queue.append(u)
    return children


def _nicify(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Structural conversion to nice form; td must be a tree, its validity is not checked."""
    builder = _NiceBuilder()
    if len(td) == 0:
        return builder.build(builder.leaf())

    root = td.root if td.root is not None else td.nodes[0]
    children = _rooted_children(td, root)

    order, stack = [], [root]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(children[t])
    order.reverse()

    top: Dict[int, int] = {}
    for t in order:
        bag = td.bag(t)
        if not children[t]:
            top[t] = builder.walk(builder.leaf(), bag)
            continue
        node = builder.walk(top[children[t][0]], bag)
        for c in children[t][1:]:
            other = builder.walk(top[c], bag)
            node = builder.add(bag, NodeKind.JOIN, None, (node, other))
        top[t] = node

    return builder.build(builder.walk(top[root], frozenset()))


def make_nice(g: Graph, td: TreeDecomposition) -> NiceTreeDecomposition:
    """
    Convert a valid tree decomposition into a nice one of the same width.

    Every tree node becomes a chain that first forgets the vertices its parent lacks and then
    introduces the missing ones; nodes with several children get a join per extra child.

    Args:
        g: Graph the decomposition belongs to
        td: Valid tree decomposition of g

    Returns:
        Nice tree decomposition with empty root and leaf bags

    Raises:
        DecompositionError: If td fails validation
    """
    report = validate(g, td)
    if not report:
        logger.error(f"Cannot nicify an invalid decomposition: {report.detail}")
        raise DecompositionError(f"invalid tree decomposition: {report.violation} ({report.detail})", report)
    ntd = _nicify(td)
    logger.debug(f"Nicified {len(td)} bags into {len(ntd)} nodes, width {width(ntd)}")
    return ntd


def check_nice(ntd: NiceTreeDecomposition) -> ValidityReport:
    """Check the node-kind equations of a nice decomposition."""
    if ntd.bag(ntd.root):
        return ValidityReport.fail("non-empty root", ntd.root, "root bag must be empty")
    for t in ntd.nodes:
        kids = ntd.children(t)
        kind = ntd.kind(t)
        bag = ntd.bag(t)
        v = ntd.vertex(t)
        if kind == NodeKind.LEAF:
            ok = not kids and not bag
        elif kind == NodeKind.INTRODUCE:
            ok = len(kids) == 1 and v in bag and v not in ntd.bag(kids[0]) and bag == ntd.bag(kids[0]) | {v}
        elif kind == NodeKind.FORGET:
            ok = len(kids) == 1 and v not in bag and ntd.bag(kids[0]) == bag | {v}
        else:
            ok = len(kids) == 2 and all(ntd.bag(c) == bag for c in kids)
        if not ok:
            return ValidityReport.fail(f"bad {kind.value} node", t, f"node {t} breaks the {kind.value} rule")
    return ValidityReport.ok()


def subtree_vertices(ntd: NiceTreeDecomposition, t: int) -> FrozenSet[int]:
    """V_t: union of the bags in the subtree rooted at t."""
    return ntd.subtree_vertices(t)


def find_split_node(ntd: NiceTreeDecomposition, s: int) -> int:
    """
    Find a node t with s <= |V_t| <= 2s.

    Walks down from the root while |V_t| > 2s, following the unique child or, at a join,
    the child with the larger subtree vertex set. A forget or introduce step shrinks |V_t|
    by at most one and a join step by at most half, so the walk never jumps over the window.

    Args:
        ntd: Nice tree decomposition
        s: Lower end of the window

    Returns:
        Node id

    Raises:
        NoSuchNodeError: If s exceeds the number of vertices
    """
    n = len(ntd.vertices)
    if s < 0:
        raise InvalidInputError(f"window size must be non-negative, got {s}")
    if s > n:
        logger.error(f"No split node for s={s} on {n} vertices")
        raise NoSuchNodeError(f"window size s={s} exceeds the {n} decomposed vertices")
    t = ntd.root
    while len(ntd.subtree_vertices(t)) > 2 * s:
        kids = ntd.children(t)
        t = max(kids, key=lambda c: len(ntd.subtree_vertices(c)))
    return t


def prune_subtree(ntd: NiceTreeDecomposition, t: int) -> NiceTreeDecomposition:
    """
    Delete the strict descendants of t so that t becomes a leaf keeping its bag.

    The result decomposes G-(V_t \\ X_t) in the original vertex ids and is re-normalized to
    nice form.

    Args:
        ntd: Nice tree decomposition
        t: Node whose subtree is cut off

    Returns:
        Nice decomposition of the vertex-deleted graph
    """
    dropped = set(ntd.post_order(t))
    dropped.discard(t)
    bags = {u: ntd.bag(u) for u in ntd.nodes if u not in dropped}
    edges = [(u, c) for u, c in ntd.tree_edges if u not in dropped and c not in dropped]
    return _nicify(TreeDecomposition(bags, edges, ntd.root))


def substitute_bag_vertices(ntd: NiceTreeDecomposition, old: Iterable[int], z: int) -> NiceTreeDecomposition:
    """
    Replace every occurrence of a vertex of old by z.

    Each x in old occurs in a subtree and, when the substitution follows prune_subtree on the
    split node, all of these subtrees share that node, so the occurrences of z stay connected.
    When no bag mentions old, z is covered by a fresh bag {z} hung below the root.

    Args:
        ntd: Nice tree decomposition
        old: Vertices to replace
        z: Replacement vertex

    Returns:
        Nice decomposition of the graph in which old is contracted into z
    """
    old = frozenset(old)
    bags: Dict[int, FrozenSet[int]] = {}
    changed = False
    for u in ntd.nodes:
        bag = ntd.bag(u)
        if bag & old:
            bag = (bag - old) | {z}
            changed = True
        bags[u] = bag
    edges = list(ntd.tree_edges)
    if not changed:
        extra = len(ntd)
        bags[extra] = frozenset({z})
        edges.append((ntd.root, extra))
    return _nicify(TreeDecomposition(bags, edges, ntd.root))


def relabel_vertices(ntd: NiceTreeDecomposition, mapping: Mapping[int, int]) -> NiceTreeDecomposition:
    """
    Rename bag vertices through a bijective mapping, keeping nodes and kinds.

    Raises:
        InvalidInputError: If a bag vertex has no image or two vertices share one
    """
    used = ntd.vertices
    missing = sorted(v for v in used if v not in mapping)
    if missing:
        raise InvalidInputError(f"relabel mapping misses vertex {missing[0]}")
    if len({mapping[v] for v in used}) != len(used):
        raise InvalidInputError("relabel mapping is not injective")
    return NiceTreeDecomposition(
        [frozenset(mapping[v] for v in ntd.bag(t)) for t in ntd.nodes],
        [ntd.kind(t) for t in ntd.nodes],
        [None if ntd.vertex(t) is None else mapping[ntd.vertex(t)] for t in ntd.nodes],
        [ntd.children(t) for t in ntd.nodes],
        ntd.root,
    )
