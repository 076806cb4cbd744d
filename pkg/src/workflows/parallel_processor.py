"""
Parallel processing module for running independent kernelization jobs simultaneously.
"""
import concurrent.futures
import time
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from config import PARALLEL_WORKERS
from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import ProblemKind
from src.oracles.handle import OracleBackend
from src.utils.errors import DominationError
from src.utils.logger import setup_logger
from src.workflows.experiments import ExperimentRecord, run_experiment

logger = setup_logger()


class KernelJob(BaseModel):
    """One instance to kernelize."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    instance_id: str = Field(..., description="Instance identifier, also the merge key")
    graph: Union[Graph, CapacitatedGraph] = Field(..., description="Input graph")
    kind: ProblemKind = Field(..., description="Problem kind")
    epsilon: str = Field("1", description="Approximation slack")
    backend: OracleBackend = Field(OracleBackend.EXACT, description="Oracle backend")
    exact_opt: bool = Field(False, description="Compute the exact optimum as reference")
    budget: Optional[int] = Field(None, description="Exact solver budget override")


class BatchResult(BaseModel):
    """Result of parallel processing."""
    records: List[ExperimentRecord] = Field(default_factory=list, description="Records in instance-id order")
    failed_jobs: List[Dict[str, str]] = Field(default_factory=list, description="Jobs that raised, with the error and its exit code")
    processing_times: Dict[str, float] = Field(default_factory=dict, description="Processing time for each job")
    total_time: float = Field(..., description="Total processing time")


class ParallelProcessor:
    """
    Processor for handling multiple kernelization jobs in parallel.

    Each job builds its own oracle handle, so jobs share no mutable state.
    """

    def __init__(self, max_workers: int = PARALLEL_WORKERS):
        """
        Initialize the parallel processor.

        Args:
            max_workers: Maximum number of worker threads
        """
        self.max_workers = max_workers

    def process(self, jobs: List[KernelJob]) -> BatchResult:
        """
        Process multiple jobs in parallel.

        Args:
            jobs: Jobs to run

        Returns:
            Records merged in instance-id order, plus the failed jobs
        """
        start_time = time.time()
        records = []
        failed_jobs = []
        processing_times = {}

        logger.info(f"Processing {len(jobs)} jobs in parallel with {self.max_workers} workers")

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            # Submit all jobs for processing
            future_to_job = {executor.submit(self._process_single_job, job): job for job in jobs}

            # Process results as they complete
            for future in concurrent.futures.as_completed(future_to_job):
                job = future_to_job[future]
                try:
                    record = future.result()
                    records.append(record)
                    processing_times[job.instance_id] = record.wall_time
                except DominationError as e:
                    logger.error(f"Error processing job {job.instance_id}: {str(e)}")
                    failed_jobs.append({"instance_id": job.instance_id, "error": str(e),
                                        "exit_code": str(e.exit_code)})

        total_time = time.time() - start_time
        logger.info(f"Parallel processing completed in {total_time:.2f} seconds")
        logger.info(f"Finished {len(records)} jobs, {len(failed_jobs)} failed")

        return BatchResult(
            records=sorted(records, key=lambda r: r.instance_id),
            failed_jobs=sorted(failed_jobs, key=lambda f: f["instance_id"]),
            processing_times=processing_times,
            total_time=total_time
        )

    def _process_single_job(self, job: KernelJob) -> ExperimentRecord:
        """
        Process a single job.

        Args:
            job: Job to run

        Returns:
            Record of the run
        """
        record, _ = run_experiment(job.instance_id, job.graph, job.kind, job.epsilon, job.backend,
                                   exact_opt=job.exact_opt, budget=job.budget)
        return record
