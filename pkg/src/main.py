#!/usr/bin/env python3
"""
Domination Kernelizer - Main Entry Point

Subcommands:
1. kernelize: run a Turing kernelization on .gr files and print ExperimentRecords as CSV
2. verify: run verification suites over seeded corpora
3. generate: write a generated instance as a .gr file
4. decompose: write a heuristic tree decomposition as a .td file
"""
import argparse
import os
import random
import sys
from typing import List, Optional

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import DEFAULT_EPSILON, DEFAULT_SEED, PARALLEL_WORKERS
from src.graph.core import CapacitatedGraph, Graph
from src.graph.problems import GRAPH_KINDS, ProblemKind
from src.harness.formats import read_graph_file, read_td_file, write_gr, write_td
from src.harness.generators import FAMILIES, GeneratorParams, generate
from src.oracles.handle import OracleBackend
from src.reductions.hitting_set import ds_to_capds
from src.treedecomp.heuristic import heuristic_td
from src.treedecomp.nice import make_nice
from src.utils.errors import DominationError, VerificationError
from src.utils.logger import setup_logger
from src.workflows.experiments import meets_guarantee, records_to_csv, run_experiment, write_trace
from src.workflows.parallel_processor import KernelJob, ParallelProcessor
from src.workflows.verification import SUITE_NAMES, VerifyOptions, ensure_passed, reports_to_csv, run_verification

# Set up logger
logger = setup_logger()


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


def _with_capacities(g: Graph, args) -> CapacitatedGraph:
    if args.capacities == "degree":
        return ds_to_capds(g)
    rng = random.Random(args.seed)
    return CapacitatedGraph(g, [rng.randint(0, args.max_capacity) for _ in g.vertices])


def _kernelize(args) -> int:
    kind = ProblemKind(args.problem)
    backend = OracleBackend(args.oracle)
    graphs = [read_graph_file(path) for path in args.graph]
    inputs = [_with_capacities(g, args) if kind == ProblemKind.CAPDS else g for g in graphs]

    if len(inputs) == 1:
        td = read_td_file(args.td, graphs[0]) if args.td else None
        record, trace = run_experiment(args.graph[0], inputs[0], kind, args.epsilon, backend, td=td,
                                       exact_opt=args.exact_opt, record_trace=bool(args.trace))
        if args.trace:
            write_trace(trace, args.trace)
        records = [record]
        exit_code = 0
    else:
        jobs = [KernelJob(instance_id=path, graph=g, kind=kind, epsilon=args.epsilon, backend=backend,
                          exact_opt=args.exact_opt) for path, g in zip(args.graph, inputs)]
        result = ParallelProcessor(max_workers=args.parallel_workers).process(jobs)
        records = result.records
        for failed in result.failed_jobs:
            print(f"{failed['instance_id']}: {failed['error']}", file=sys.stderr)
        exit_code = max((int(f["exit_code"]) for f in result.failed_jobs), default=0)

    sys.stdout.write(records_to_csv(records))
    violated = [r.instance_id for r in records if not meets_guarantee(r)]
    if violated:
        raise VerificationError(f"size exceeds (1+eps)*OPT on {', '.join(violated)}")
    return exit_code


def _verify(args) -> int:
    options = VerifyOptions(count=args.count, max_n=args.max_n, seed=args.seed, alpha=args.alpha,
                            bound_offset=args.bound_offset)
    reports = run_verification(args.suite, options)
    sys.stdout.write(reports_to_csv(reports))
    ensure_passed(reports)
    return 0


def _generate(args) -> int:
    params = GeneratorParams(n=args.n, max_degree=args.max_degree, edge_probability=args.edge_probability,
                             connected=args.connected, rows=args.rows, cols=args.cols, clique_size=args.clique_size,
                             clique_count=args.clique_count, separator_size=args.separator_size,
                             universe_size=args.universe_size, set_count=args.set_count,
                             variable_count=args.variables, clause_count=args.clauses, alpha=args.alpha)
    instance = generate(args.family, params, args.seed)
    _emit(write_gr(instance.graph), args.output)
    return 0


def _decompose(args) -> int:
    g = read_graph_file(args.graph)
    td = heuristic_td(g)
    if args.nice:
        td = make_nice(g, td)
    _emit(write_td(td, g.n), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Approximate Turing kernels for domination problems')
    commands = parser.add_subparsers(dest='command', required=True)

    kernelize = commands.add_parser('kernelize', help='Kernelize graphs and print one CSV row per graph')
    kernelize.add_argument('--problem', required=True, choices=[k.value for k in GRAPH_KINDS],
                           help='Problem to solve')
    kernelize.add_argument('--epsilon', default=DEFAULT_EPSILON,
                           help=f'Approximation slack, a positive rational (default: {DEFAULT_EPSILON})')
    kernelize.add_argument('--oracle', default='exact', choices=['exact', 'greedy'],
                           help='Oracle backend (default: exact)')
    kernelize.add_argument('--graph', required=True, nargs='+', help='PACE .gr files')
    kernelize.add_argument('--td', help='PACE .td file for a single graph (default: heuristic decomposition)')
    kernelize.add_argument('--exact-opt', action='store_true', help='Compute the exact optimum when within budget')
    kernelize.add_argument('--seed', type=int, default=DEFAULT_SEED,
                           help=f'Seed for random capacities (default: {DEFAULT_SEED})')
    kernelize.add_argument('--capacities', default='degree', choices=['degree', 'random'],
                           help='Capacities of capds inputs (default: degree)')
    kernelize.add_argument('--max-capacity', type=int, default=3, help='Largest random capacity (default: 3)')
    kernelize.add_argument('--trace', help='Write the kernel trace of a single graph as JSON lines')
    kernelize.add_argument('--parallel-workers', type=int, default=PARALLEL_WORKERS,
                           help=f'Workers for several graphs (default: {PARALLEL_WORKERS})')
    kernelize.set_defaults(handler=_kernelize)

    verify = commands.add_parser('verify', help='Run verification suites')
    verify.add_argument('suite', choices=SUITE_NAMES, help='Suite to run')
    verify.add_argument('--count', type=int, default=50, help='Number of seeded instances (default: 50)')
    verify.add_argument('--max-n', type=int, default=14, help='Largest instance size (default: 14)')
    verify.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'First seed (default: {DEFAULT_SEED})')
    verify.add_argument('--alpha', default='1', help='Gap factor of the irving suite (default: 1)')
    verify.add_argument('--bound-offset', type=int, default=0,
                        help='Added to the allowed size in combine suites (default: 0)')
    verify.set_defaults(handler=_verify)

    gen = commands.add_parser('generate', help='Write a generated graph as .gr')
    gen.add_argument('family', choices=FAMILIES, help='Generator family')
    gen.add_argument('--n', type=int, default=10, help='Number of vertices (default: 10)')
    gen.add_argument('--max-degree', type=int, help='Degree bound of random edges')
    gen.add_argument('--edge-probability', type=float, default=0.3, help='Random edge probability (default: 0.3)')
    gen.add_argument('--connected', action='store_true', help='Force a connected graph')
    gen.add_argument('--rows', type=int, default=3, help='Grid rows (default: 3)')
    gen.add_argument('--cols', type=int, default=3, help='Grid columns (default: 3)')
    gen.add_argument('--clique-size', type=int, default=3, help='Bridged clique size (default: 3)')
    gen.add_argument('--clique-count', type=int, default=3, help='Number of bridged cliques (default: 3)')
    gen.add_argument('--separator-size', type=int, default=1, help='Separator size (default: 1)')
    gen.add_argument('--universe-size', type=int, default=5, help='Hitting set universe (default: 5)')
    gen.add_argument('--set-count', type=int, default=5, help='Hitting set family size (default: 5)')
    gen.add_argument('--variables', type=int, default=3, help='CNF variables of the irving family (default: 3)')
    gen.add_argument('--clauses', type=int, default=3, help='CNF clauses of the irving family (default: 3)')
    gen.add_argument('--alpha', default='1', help='Gap factor of the irving family (default: 1)')
    gen.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Seed (default: {DEFAULT_SEED})')
    gen.add_argument('--output', help='Output file (default: standard output)')
    gen.set_defaults(handler=_generate)

    decompose = commands.add_parser('decompose', help='Write a heuristic tree decomposition as .td')
    decompose.add_argument('--graph', required=True, help='PACE .gr file')
    decompose.add_argument('--nice', action='store_true', help='Write the nice decomposition instead')
    decompose.add_argument('--output', help='Output file (default: standard output)')
    decompose.set_defaults(handler=_decompose)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line and return its exit code.

    Exit codes: 0 success, 1 other error, 2 parse error, 3 oracle contract violation,
    4 verification failure.
    """
    args = build_parser().parse_args(argv)
    logger.debug(f"Running {args.command} with {vars(args)}")
    try:
        return args.handler(args)
    except DominationError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
