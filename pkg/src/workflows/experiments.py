"""
Single kernelization experiments and their tabular and JSON-lines output.
"""
import time
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, Field

from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import ProblemKind, check_solution, solution_size
from src.kernels.kernelizers import KernelConfig, KernelTrace, kernelize
from src.kernels.sizes import parse_epsilon
from src.oracles.exact import exact_solve
from src.oracles.handle import OracleBackend, wrap_as_oracle
from src.treedecomp.decomposition import TreeDecomposition
from src.treedecomp.heuristic import heuristic_td
from src.treedecomp.nice import make_nice
from src.utils.errors import SolverBudgetError, VerificationError
from src.utils.logger import setup_logger

logger = setup_logger()


class ExperimentRecord(BaseModel):
    """One kernelization run; the CSV columns in declared order."""
    instance_id: str = Field(..., description="Instance identifier")
    n: int = Field(..., description="Number of vertices")
    m: int = Field(..., description="Number of edges")
    width: int = Field(..., description="Width of the decomposition used")
    max_degree: int = Field(..., description="Maximum degree Δ")
    problem: str = Field(..., description="Problem kind")
    epsilon: str = Field(..., description="ε as a fraction string")
    oracle: str = Field(..., description="Oracle backend")
    solution_size: int = Field(..., description="Size of the kernelized solution")
    exact_opt: Optional[int] = Field(None, description="Exact optimum when computed")
    ratio: Optional[float] = Field(None, description="solution_size / exact_opt when the optimum is known")
    oracle_calls: int = Field(..., description="Oracle calls made")
    max_query_size: int = Field(..., description="Largest oracle query")
    wall_time: float = Field(..., description="Seconds for the run")


def run_experiment(instance_id: str, g: Union[Graph, CapacitatedGraph], kind: ProblemKind,
                   epsilon: Union[Fraction, str, float, int], backend: OracleBackend = OracleBackend.EXACT,
                   td: Optional[TreeDecomposition] = None, exact_opt: bool = False,
                   budget: Optional[int] = None, record_trace: bool = False) -> Tuple[ExperimentRecord, KernelTrace]:
    """
    Kernelize one instance and describe the run.

    Args:
        instance_id: Identifier written to the record
        g: Input graph; a CapacitatedGraph for CapDS
        kind: Problem kind
        epsilon: Approximation slack
        backend: Oracle backend
        td: Tree decomposition; heuristic_td when None
        exact_opt: Also compute the exact optimum when within budget
        budget: Exact solver budget override
        record_trace: Keep per-split records in the trace

    Returns:
        Tuple of the record and the trace

    Raises:
        VerificationError: If the kernelized solution fails its validity check
    """
    kind = ProblemKind(kind)
    epsilon = parse_epsilon(epsilon)
    started = time.time()
    base = g.base if isinstance(g, CapacitatedGraph) else g
    ntd = make_nice(base, td if td is not None else heuristic_td(base))
    oracle = wrap_as_oracle(kind, backend, budget=budget)
    cfg = KernelConfig(epsilon=epsilon, oracle=oracle, record_trace=record_trace)
    solution, trace = kernelize(kind, g, ntd, cfg)

    report = check_solution(g, kind, solution)
    if not report:
        logger.error(f"Kernelized {kind.value} solution of {instance_id} is invalid: {report.detail}")
        raise VerificationError(f"{instance_id}: kernelized solution is invalid ({report.detail})")

    opt = None
    if exact_opt:
        try:
            opt = solution_size(exact_solve(kind, g, budget))
        except SolverBudgetError as e:
            logger.warning(f"No exact optimum for {instance_id}: {e}")

    size = solution_size(solution)
    ratio = None
    if opt is not None:
        ratio = 1.0 if opt == 0 else size / opt

    record = ExperimentRecord(
        instance_id=instance_id, n=base.n, m=base.edge_count, width=trace.width, max_degree=trace.max_degree,
        problem=kind.value, epsilon=str(epsilon), oracle=OracleBackend(backend).value, solution_size=size,
        exact_opt=opt, ratio=ratio, oracle_calls=trace.oracle_calls, max_query_size=trace.max_query_size,
        wall_time=time.time() - started,
    )
    logger.debug(f"Experiment {instance_id}: {record.model_dump()}")
    return record, trace


def meets_guarantee(record: ExperimentRecord) -> bool:
    """With an exact oracle and a known optimum, size <= (1+ε)·OPT exactly; otherwise nothing to check."""
    if record.exact_opt is None or record.oracle != OracleBackend.EXACT.value:
        return True
    return record.solution_size <= (1 + Fraction(record.epsilon)) * record.exact_opt


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    """CSV with one header row and the ExperimentRecord fields as columns."""
    columns = list(ExperimentRecord.model_fields)
    frame = pd.DataFrame([r.model_dump() for r in records], columns=columns)
    return frame.to_csv(index=False)


def trace_to_json_lines(trace: KernelTrace) -> List[str]:
    """One JSON object per split record, then a summary object without the records."""
    lines = [record.model_dump_json() for record in trace.splits]
    lines.append(trace.model_dump_json(exclude={"splits"}))
    return lines


def write_trace(trace: KernelTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for line in trace_to_json_lines(trace):
            handle.write(line + "\n")
    logger.info(f"Trace written to {path}")
