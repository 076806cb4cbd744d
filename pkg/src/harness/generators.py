"""
Seeded instance generators: structured graph families, bounded-degree random graphs,
separated graphs with an explicit split, and reduction-derived instances.
"""
import random
from fractions import Fraction
from typing import Dict, FrozenSet, List, Literal, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import HittingSetInstance
from src.reductions.cnf import CnfFormula, cnf_to_ids_gap
from src.reductions.hitting_set import ReductionArtifact, ds_to_capds, hs_to_ds
from src.utils.errors import InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()

FAMILIES = ("random", "path", "cycle", "grid", "star", "complete", "tree", "bridged-cliques", "separated",
            "hitting-set", "irving")


class GeneratorParams(BaseModel):
    """Parameters of a generator family; each family reads the fields it needs."""
    n: int = Field(10, ge=0, description="Number of vertices")
    max_degree: Optional[int] = Field(None, ge=0, description="Degree bound for random edges")
    edge_probability: float = Field(0.3, ge=0.0, le=1.0, description="Probability of each random edge")
    connected: bool = Field(False, description="Force connectivity with a random spanning tree")
    rows: int = Field(3, ge=1, description="Grid rows")
    cols: int = Field(3, ge=1, description="Grid columns")
    clique_size: int = Field(3, ge=1, description="Vertices per clique")
    clique_count: int = Field(3, ge=1, description="Number of bridged cliques")
    separator_size: int = Field(1, ge=0, description="|B| of a separated graph")
    universe_size: int = Field(5, ge=0, description="Hitting set universe size")
    set_count: int = Field(5, ge=0, description="Number of sets")
    max_set_size: int = Field(3, ge=1, description="Largest set")
    variable_count: int = Field(3, ge=0, description="CNF variables")
    clause_count: int = Field(3, ge=0, description="CNF clauses")
    clause_width: int = Field(3, ge=1, description="Largest clause")
    alpha: str = Field("1", description="Gap factor of the irving family")
    capacities: Optional[Literal["degree", "random"]] = Field(None, description="Also produce a capacitated graph")
    max_capacity: int = Field(3, ge=0, description="Largest random capacity")


class GeneratedInstance(BaseModel):
    """Generated graph with the side products of its family."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: str = Field(..., description="Generator family")
    seed: int = Field(..., description="Seed the instance was generated from")
    graph: Graph = Field(..., description="Generated graph")
    capacitated: Optional[CapacitatedGraph] = Field(None, description="Capacitated version when requested")
    split: Optional[Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]] = Field(
        None, description="Separator split (A, B, C) of the separated family")
    hitting_set: Optional[HittingSetInstance] = Field(None, description="Source of the hitting-set family")
    formula: Optional[CnfFormula] = Field(None, description="Source of the irving family")
    artifact: Optional[ReductionArtifact] = Field(None, description="Reduction artifact of derived families")


def _tree_edges(rng: random.Random, vertices: List[int], max_degree: Optional[int],
                degree: Dict[int, int]) -> List[Tuple[int, int]]:
    """
    Random spanning tree on vertices: each vertex in shuffled order is hung below a random
    earlier one whose degree is below max_degree. degree is shared and updated.
    """
    order = list(vertices)
    rng.shuffle(order)
    edges = []
    for i, v in enumerate(order[1:], start=1):
        room = [u for u in order[:i] if max_degree is None or degree[u] < max_degree]
        if not room or (max_degree is not None and degree[v] >= max_degree):
            raise InvalidInputError(f"max degree {max_degree} is too small to connect {len(order)} vertices")
        u = rng.choice(room)
        edges.append((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1
    return edges


def _random_edges(rng: random.Random, vertices: List[int], p: float, max_degree: Optional[int],
                  degree: Dict[int, int], present: Set[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Add each missing pair with probability p while both endpoints stay within max_degree."""
    ordered = sorted(vertices)
    pairs = [(a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:]]
    rng.shuffle(pairs)
    edges = []
    for a, b in pairs:
        if (a, b) in present or rng.random() >= p:
            continue
        if max_degree is not None and (degree[a] >= max_degree or degree[b] >= max_degree):
            continue
        edges.append((a, b))
        present.add((a, b))
        degree[a] += 1
        degree[b] += 1
    return edges


def _random_graph(rng: random.Random, params: GeneratorParams) -> Graph:
    vertices = list(range(params.n))
    degree = {v: 0 for v in vertices}
    edges = _tree_edges(rng, vertices, params.max_degree, degree) if params.connected else []
    edges += _random_edges(rng, vertices, params.edge_probability, params.max_degree, degree, set(edges))
    return Graph(params.n, edges)


def _separated(rng: random.Random, params: GeneratorParams) -> Tuple[Graph, Tuple[FrozenSet[int], ...]]:
    """Two random blobs A and C sharing only the separator B; connected blobs when requested."""
    n, b = params.n, params.separator_size
    if n - b < 2:
        raise InvalidInputError(f"a separated graph needs two vertices outside the separator, n={n}, |B|={b}")
    if params.connected and b == 0:
        raise InvalidInputError("a connected separated graph needs a non-empty separator")
    order = list(range(n))
    rng.shuffle(order)
    sep = order[:b]
    left_size = (n - b + 1) // 2
    sides = (sep + order[b:b + left_size], sep + order[b + left_size:])
    degree = {v: 0 for v in order}
    edges: List[Tuple[int, int]] = []
    if params.connected:
        for side in sides:
            edges += [e for e in _tree_edges(rng, side, params.max_degree, degree) if e not in edges]
    present = set(edges)
    for side in sides:
        edges += _random_edges(rng, side, params.edge_probability, params.max_degree, degree, present)
    split = (frozenset(sides[0]), frozenset(sep), frozenset(sides[1]))
    return Graph(n, edges), split


def _hitting_set(rng: random.Random, params: GeneratorParams) -> HittingSetInstance:
    if params.set_count and not params.universe_size:
        raise InvalidInputError("sets need a non-empty universe")
    sets = []
    for _ in range(params.set_count):
        size = rng.randint(1, min(params.max_set_size, params.universe_size))
        sets.append(frozenset(rng.sample(range(params.universe_size), size)))
    return HittingSetInstance(universe_size=params.universe_size, sets=sets)


def _formula(rng: random.Random, params: GeneratorParams) -> CnfFormula:
    if params.clause_count and not params.variable_count:
        raise InvalidInputError("clauses need at least one variable")
    clauses = []
    for _ in range(params.clause_count):
        width = rng.randint(1, min(params.clause_width, params.variable_count))
        variables = rng.sample(range(1, params.variable_count + 1), width)
        clauses.append(frozenset(v if rng.random() < 0.5 else -v for v in variables))
    return CnfFormula(variable_count=params.variable_count, clauses=clauses)


def generate(family: str, params: Optional[GeneratorParams] = None, seed: int = 0) -> GeneratedInstance:
    """
    Generate an instance deterministically from (family, params, seed).

    Args:
        family: One of FAMILIES
        params: Family parameters; defaults when None
        seed: Random seed

    Returns:
        Generated instance

    Raises:
        InvalidInputError: On an unknown family or infeasible parameters
    """
    params = params or GeneratorParams()
    rng = random.Random(seed)
    extra = {}
    n = params.n
    if family == "random":
        graph = _random_graph(rng, params)
    elif family == "path":
        graph = Graph(n, [(v, v + 1) for v in range(n - 1)])
    elif family == "cycle":
        if n < 3:
            raise InvalidInputError(f"a cycle needs at least 3 vertices, got {n}")
        graph = Graph(n, [(v, (v + 1) % n) for v in range(n)])
    elif family == "grid":
        rows, cols = params.rows, params.cols
        edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
        edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
        graph = Graph(rows * cols, edges)
    elif family == "star":
        graph = Graph(n, [(0, v) for v in range(1, n)])
    elif family == "complete":
        graph = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    elif family == "tree":
        graph = Graph(n, _tree_edges(rng, list(range(n)), params.max_degree, {v: 0 for v in range(n)}))
    elif family == "bridged-cliques":
        size, count = params.clique_size, params.clique_count
        edges = [(k * size + i, k * size + j) for k in range(count) for i in range(size) for j in range(i + 1, size)]
        edges += [(k * size + size - 1, (k + 1) * size) for k in range(count - 1)]
        graph = Graph(size * count, edges)
    elif family == "separated":
        graph, extra["split"] = _separated(rng, params)
    elif family == "hitting-set":
        inst = _hitting_set(rng, params)
        artifact = hs_to_ds(inst)
        graph, extra["hitting_set"], extra["artifact"] = artifact.instance, inst, artifact
    elif family == "irving":
        formula = _formula(rng, params)
        artifact = cnf_to_ids_gap(formula, Fraction(params.alpha))
        graph, extra["formula"], extra["artifact"] = artifact.instance, formula, artifact
    else:
        raise InvalidInputError(f"unknown generator family {family!r}; choose from {', '.join(FAMILIES)}")

    if params.capacities == "degree":
        extra["capacitated"] = ds_to_capds(graph)
    elif params.capacities == "random":
        extra["capacitated"] = CapacitatedGraph(graph, [rng.randint(0, params.max_capacity) for _ in graph.vertices])

    logger.debug(f"Generated {family} instance {graph} from seed {seed}")
    return GeneratedInstance(family=family, seed=seed, graph=graph, **extra)
