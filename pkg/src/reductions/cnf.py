"""
CNF formulas and the gap graph that separates satisfiable from unsatisfiable formulas by
the size of a minimum independent dominating set.
"""
import itertools
import math
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from src.graph.core import Graph
from src.graph.problems import ProblemKind
from src.reductions.hitting_set import ReductionArtifact, VertexOrigin
from src.utils.errors import InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()

LITERAL = "literal"
NEGATED = "negated"
CLAUSE = "clause"


class CnfFormula(BaseModel):
    """Formula over variables 1..variable_count; literal +i is x_i, -i is its negation."""
    variable_count: int = Field(..., ge=0, description="Number of variables")
    clauses: List[FrozenSet[int]] = Field(default_factory=list, description="Clauses as sets of signed literals")

    @model_validator(mode="after")
    def _check_clauses(self) -> "CnfFormula":
        for index, clause in enumerate(self.clauses):
            if not clause:
                raise ValueError(f"clause {index} is empty")
            for literal in clause:
                if literal == 0 or abs(literal) > self.variable_count:
                    raise ValueError(f"clause {index} has literal {literal} outside 1..{self.variable_count}")
        return self

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in clause) for clause in self.clauses)


def brute_force_satisfiable(f: CnfFormula) -> Optional[Tuple[bool, ...]]:
    """First satisfying assignment in lexicographic order (False before True), or None."""
    for assignment in itertools.product((False, True), repeat=f.variable_count):
        if f.satisfied_by(assignment):
            return assignment
    return None


def parse_alpha(value: Union[Fraction, int, float, str]) -> Fraction:
    try:
        alpha = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise InvalidInputError(f"alpha {value!r} is not a rational number") from e
    if alpha < 1:
        raise InvalidInputError(f"alpha must be at least 1, got {alpha}")
    return alpha


def cnf_to_ids_gap(f: CnfFormula, alpha: Union[Fraction, int, float, str]) -> ReductionArtifact:
    """
    Gap graph of a formula.

    Literal vertices v_i = i and negated v̄_i = n + i are joined by an edge; each clause j
    has s = ⌈α·n⌉ + 1 pairwise non-adjacent copies w_j^ℓ = 2n + j·s + ℓ, each adjacent to
    the vertices of the literals in the clause. Satisfiable formulas have an independent
    dominating set of size n; for unsatisfiable ones every such set has at least s vertices.

    Args:
        f: Formula without empty clauses
        alpha: Gap factor, at least 1

    Returns:
        Artifact with 2n + s·m vertices, copies = s
    """
    alpha = parse_alpha(alpha)
    for index, clause in enumerate(f.clauses):
        if not clause:
            raise InvalidInputError(f"clause {index} is empty")
    n, m = f.variable_count, len(f.clauses)
    copies = math.ceil(alpha * n) + 1
    edges = [(i, n + i) for i in range(n)]
    back_map = ([VertexOrigin(role=LITERAL, index=i) for i in range(n)]
                + [VertexOrigin(role=NEGATED, index=i) for i in range(n)])
    for j, clause in enumerate(f.clauses):
        literal_vertices = sorted(abs(l) - 1 if l > 0 else n + abs(l) - 1 for l in clause)
        for copy in range(copies):
            w = 2 * n + j * copies + copy
            edges.extend((v, w) for v in literal_vertices)
            back_map.append(VertexOrigin(role=CLAUSE, index=j, copy_index=copy))
    graph = Graph(2 * n + copies * m, edges)
    logger.debug(f"Gap graph for {n} variables, {m} clauses, alpha={alpha}: {graph}")
    return ReductionArtifact(kind=ProblemKind.IDS, instance=graph, back_map=back_map, source=f, copies=copies)


def assignment_to_ids(artifact: ReductionArtifact, assignment: Sequence[bool]) -> FrozenSet[int]:
    """Literal vertices made true by the assignment; an IDS when the assignment satisfies the formula."""
    n = artifact.source.variable_count
    if len(assignment) != n:
        raise InvalidInputError(f"assignment has {len(assignment)} values for {n} variables")
    return frozenset(i if value else n + i for i, value in enumerate(assignment))


def ids_to_partial_assignment(artifact: ReductionArtifact, x: Iterable[int]) -> Dict[int, bool]:
    """Variable values read off the literal vertices of an independent set (0-based variable index)."""
    values: Dict[int, bool] = {}
    for v in x:
        origin = artifact.origin(v)
        if origin.role == LITERAL:
            values[origin.index] = True
        elif origin.role == NEGATED:
            values[origin.index] = False
    return dict(sorted(values.items()))


def gap_min_ids(artifact: ReductionArtifact) -> int:
    """
    Size of a minimum independent dominating set of a gap graph, by enumerating the 3^n
    ways to pick v_i, v̄_i or neither per variable.

    Clause copies are pairwise twins, so an IDS holds all copies of a clause or none. Given
    the picked literals P, exactly the clauses P leaves unsatisfied must be fully copied, and
    a variable with neither vertex picked must have both literals occur in those clauses.
    """
    f: CnfFormula = artifact.source
    copies = artifact.copies
    best = None
    for choice in itertools.product((None, True, False), repeat=f.variable_count):
        picked = {i + 1 if value else -(i + 1) for i, value in enumerate(choice) if value is not None}
        open_clauses = [clause for clause in f.clauses if not clause & picked]
        covered = set().union(*open_clauses) if open_clauses else set()
        if any(value is None and not {i + 1, -(i + 1)} <= covered for i, value in enumerate(choice)):
            continue
        size = len(picked) + copies * len(open_clauses)
        if best is None or size < best:
            best = size
    return best
