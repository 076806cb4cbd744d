import json

from src.graph.core import Graph
from src.graph.problems import ProblemKind
from src.oracles.handle import OracleBackend
from src.reductions.hitting_set import ds_to_capds
from src.workflows.experiments import (ExperimentRecord, meets_guarantee, records_to_csv, run_experiment,
                                       trace_to_json_lines, write_trace)
from src.workflows.parallel_processor import KernelJob, ParallelProcessor
from tests.helpers import path_graph, star_graph

HEADER = ("instance_id,n,m,width,max_degree,problem,epsilon,oracle,solution_size,exact_opt,ratio,oracle_calls,"
          "max_query_size,wall_time")


def test_run_experiment_record():
    record, trace = run_experiment("p10", path_graph(10), ProblemKind.DS, "1", exact_opt=True)
    assert (record.n, record.m, record.width, record.max_degree) == (10, 9, 1, 2)
    assert record.problem == "ds" and record.epsilon == "1" and record.oracle == "exact"
    assert record.solution_size == 4 and record.exact_opt == 4 and record.ratio == 1.0
    assert record.oracle_calls == 1 == trace.oracle_calls
    assert record.max_query_size == 10
    assert meets_guarantee(record)


def test_run_experiment_over_budget_optimum_is_skipped(p30):
    record, _ = run_experiment("p30", p30, ProblemKind.DS, "1/2", backend=OracleBackend.GREEDY, exact_opt=True)
    assert record.exact_opt is None and record.ratio is None
    assert record.epsilon == "1/2"
    assert meets_guarantee(record)


def test_run_experiment_on_empty_graph():
    record, _ = run_experiment("empty", Graph(0), ProblemKind.IDS, 1, exact_opt=True)
    assert record.solution_size == 0 and record.exact_opt == 0
    assert record.ratio == 1.0
    assert record.oracle_calls == 0


def test_run_experiment_capacitated():
    record, _ = run_experiment("star", ds_to_capds(star_graph(4)), ProblemKind.CAPDS, 1, exact_opt=True)
    assert record.solution_size == 1 and record.ratio == 1.0


def test_meets_guarantee():
    record = ExperimentRecord(instance_id="x", n=6, m=5, width=1, max_degree=2, problem="ds", epsilon="1",
                              oracle="exact", solution_size=5, exact_opt=2, ratio=2.5, oracle_calls=1,
                              max_query_size=6, wall_time=0.0)
    assert not meets_guarantee(record)
    assert meets_guarantee(record.model_copy(update={"epsilon": "3/2"}))
    assert meets_guarantee(record.model_copy(update={"oracle": "greedy"}))


def test_records_to_csv():
    record, _ = run_experiment("p6", path_graph(6), ProblemKind.DS, "1")
    lines = records_to_csv([record]).splitlines()
    assert lines[0] == HEADER
    assert lines[1].startswith("p6,6,5,1,2,ds,1,exact,2,,,1,6,")
    assert records_to_csv([]).splitlines() == [HEADER]


def test_trace_lines(tmp_path):
    _, trace = run_experiment("p40", path_graph(40), ProblemKind.DS, 4, budget=64, record_trace=True)
    lines = trace_to_json_lines(trace)
    assert len(lines) == len(trace.splits) + 1
    first = json.loads(lines[0])
    assert first["level"] == 0 and first["subtree_size"] <= 30
    summary = json.loads(lines[-1])
    assert summary["kernel_size"] == 15 and "splits" not in summary

    path = tmp_path / "trace.jsonl"
    write_trace(trace, str(path))
    assert path.read_text().splitlines() == lines


def test_parallel_processor_merges_in_id_order():
    jobs = [
        KernelJob(instance_id="b", graph=path_graph(9), kind=ProblemKind.DS, exact_opt=True),
        KernelJob(instance_id="a", graph=path_graph(5), kind=ProblemKind.IDS),
        KernelJob(instance_id="c", graph=Graph(4, [(0, 1), (2, 3)]), kind=ProblemKind.CDS),
        KernelJob(instance_id="d", graph=ds_to_capds(star_graph(3)), kind=ProblemKind.CAPDS, epsilon="1/3"),
    ]
    result = ParallelProcessor(max_workers=2).process(jobs)
    assert [r.instance_id for r in result.records] == ["a", "b", "d"]
    assert result.records[1].exact_opt == 3
    assert len(result.failed_jobs) == 1
    failed = result.failed_jobs[0]
    assert failed["instance_id"] == "c" and failed["exit_code"] == "1"
    assert set(result.processing_times) == {"a", "b", "d"}
