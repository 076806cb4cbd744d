"""
Oracle handles: size-capped, logged and verified access to a solver for one problem kind.
"""
import threading
from contextlib import contextmanager
from enum import Enum
from typing import Callable, Iterator, List, Optional

from pydantic import BaseModel, Field

from src.graph.core import CapacitatedGraph
from src.graph.problems import CapacitatedSolution, Instance, ProblemKind, Solution, check_solution, solution_size
from src.oracles.exact import exact_solve, instance_size
from src.oracles.greedy import greedy_ds, greedy_hs, greedy_independent_ds
from src.utils.errors import ContractViolationError, InvalidInputError
from src.utils.logger import setup_logger

logger = setup_logger()


class OracleBackend(str, Enum):
    EXACT = "exact"
    GREEDY = "greedy"
    CUSTOM = "custom"


class OracleQuery(BaseModel):
    """One answered oracle query."""
    instance_size: int = Field(..., description="Size of the queried instance")
    answer_size: int = Field(..., description="Size of the returned solution")


_GREEDY_SOLVERS = {
    ProblemKind.DS: greedy_ds,
    ProblemKind.IDS: greedy_independent_ds,
    ProblemKind.HS: greedy_hs,
}


class OracleHandle:
    """
    Approximate solver for one problem kind behind a size cap.

    Every call checks the instance size against the cap, solves, verifies the answer with
    check_solution and appends to the query log. The approximation factor of the backend is
    never exposed.
    """

    def __init__(self, kind: ProblemKind, backend: OracleBackend = OracleBackend.EXACT,
                 size_cap: Optional[int] = None, solver: Optional[Callable[[Instance], Solution]] = None,
                 budget: Optional[int] = None):
        """
        Initialize the handle.

        Args:
            kind: Problem kind answered by this handle
            backend: Exact, greedy or a custom solver callable
            size_cap: Largest instance size accepted; unlimited when None
            solver: Solver callable, required for the custom backend
            budget: Exact solver budget override
        """
        self.kind = ProblemKind(kind)
        self.backend = OracleBackend(backend)
        self.size_cap = size_cap
        self.budget = budget
        self._solver = solver
        self._log: List[OracleQuery] = []
        self._lock = threading.Lock()

    def __call__(self, instance: Instance) -> Solution:
        """
        Answer one query.

        Args:
            instance: Instance of this handle's kind

        Returns:
            Verified solution

        Raises:
            ContractViolationError: If the instance exceeds the cap or the answer is invalid
        """
        size = instance_size(instance)
        cap = self.size_cap
        if cap is not None and size > cap:
            logger.error(f"Oracle query of size {size} exceeds the {self.kind.value} size cap {cap}")
            raise ContractViolationError(f"oracle query of size {size} exceeds size cap {cap}",
                                         query_size=size, size_cap=cap)

        answer = self._solve(instance)
        if not isinstance(answer, CapacitatedSolution):
            answer = frozenset(answer)
        report = check_solution(instance, self.kind, answer)
        if not report:
            logger.error(f"Oracle answer failed verification: {report.violation} ({report.detail})")
            raise ContractViolationError(f"oracle returned an invalid {self.kind.value} solution: {report.detail}",
                                         query_size=size, size_cap=cap)

        query = OracleQuery(instance_size=size, answer_size=solution_size(answer))
        with self._lock:
            self._log.append(query)
        logger.debug(f"Oracle {self.kind.value}/{self.backend.value}: size {size} -> answer {query.answer_size}")
        return answer

    def _solve(self, instance: Instance) -> Solution:
        if self.backend == OracleBackend.EXACT:
            return exact_solve(self.kind, instance, self.budget)
        if self.backend == OracleBackend.GREEDY:
            if isinstance(instance, CapacitatedGraph):
                instance = instance.base
            return _GREEDY_SOLVERS[self.kind](instance)
        return self._solver(instance)

    def tighten(self, size_cap: int) -> None:
        """Lower the size cap; a looser cap never replaces a tighter one."""
        with self._lock:
            if self.size_cap is None or size_cap < self.size_cap:
                self.size_cap = size_cap

    @contextmanager
    def capped(self, size_cap: int) -> Iterator["OracleHandle"]:
        """Tighten the size cap for the body of a with-block and restore the previous cap after it."""
        with self._lock:
            previous = self.size_cap
        self.tighten(size_cap)
        try:
            yield self
        finally:
            with self._lock:
                self.size_cap = previous

    @property
    def query_log(self) -> List[OracleQuery]:
        with self._lock:
            return list(self._log)

    @property
    def calls(self) -> int:
        with self._lock:
            return len(self._log)

    @property
    def max_query_size(self) -> int:
        with self._lock:
            return max((q.instance_size for q in self._log), default=0)

    def __repr__(self) -> str:
        return f"OracleHandle(kind={self.kind.value}, backend={self.backend.value}, size_cap={self.size_cap})"


def wrap_as_oracle(kind: ProblemKind, backend: OracleBackend = OracleBackend.EXACT, size_cap: Optional[int] = None,
                   solver: Optional[Callable[[Instance], Solution]] = None,
                   budget: Optional[int] = None) -> OracleHandle:
    """
    Build an oracle handle after checking the backend can answer the kind.

    Raises:
        InvalidInputError: If the greedy backend is requested for a kind without a greedy
            solver, or the custom backend lacks a solver
    """
    kind = ProblemKind(kind)
    backend = OracleBackend(backend)
    if backend == OracleBackend.GREEDY and kind not in _GREEDY_SOLVERS:
        raise InvalidInputError(f"no greedy backend for {kind.value}; greedy is available for ds, ids and hs")
    if backend == OracleBackend.CUSTOM and solver is None:
        raise InvalidInputError("the custom backend needs a solver callable")
    return OracleHandle(kind, backend, size_cap, solver, budget)
