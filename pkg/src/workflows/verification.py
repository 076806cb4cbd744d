"""
Verification suites: the separator inequalities, combination bounds, reduction optimum
equalities, the Irving gap, the IDS self-reduction and the decomposition machinery, each
checked with exact solvers over a seeded corpus.
"""
import random
from typing import Callable, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

from config import DEFAULT_SEED
from src.graph.core import (CapacitatedGraph, Graph, attach_separator_vertex, ds_lower_bound, induced_capacitated,
                            induced_subgraph, map_vertices)
from src.graph.problems import CapacitatedSolution, ProblemKind, check_solution
from src.harness.generators import GeneratedInstance, GeneratorParams, generate
from src.kernels.combine import combine_capds, combine_cds, combine_ids
from src.oracles.exact import exact_capds, exact_cds, exact_ds, exact_hs, exact_ids, exact_nst, ids_decision
from src.oracles.greedy import greedy_ds
from src.reductions.cnf import assignment_to_ids, brute_force_satisfiable, gap_min_ids, parse_alpha
from src.reductions.hitting_set import (ds_to_capds, hs_to_cds, hs_to_nst, lift_capds_to_ds, lift_ds_to_hs,
                                        lift_nst_to_hs)
from src.reductions.self_reduction import ids_selfreduce
from src.treedecomp.decomposition import validate, width
from src.treedecomp.heuristic import heuristic_td
from src.treedecomp.nice import check_nice, find_split_node, make_nice
from src.utils.errors import DominationError, InvalidInputError, VerificationError
from src.utils.logger import setup_logger

logger = setup_logger()


class VerifyOptions(BaseModel):
    """Corpus settings shared by every suite."""
    count: int = Field(50, ge=1, description="Number of seeded instances")
    max_n: int = Field(14, ge=4, description="Largest instance size")
    seed: int = Field(DEFAULT_SEED, description="Seed of the first instance; instance i uses seed + i")
    alpha: str = Field("1", description="Gap factor of the irving suite")
    bound_offset: int = Field(0, description="Added to the allowed size of the combine suites")


class LemmaReport(BaseModel):
    """Outcome of one suite."""
    suite: str = Field(..., description="Suite name")
    checked: int = Field(..., description="Instances checked")
    passed: int = Field(..., description="Instances that passed")
    failed_seeds: List[int] = Field(default_factory=list, description="Seeds of the counterexamples")
    details: List[str] = Field(default_factory=list, description="One message per counterexample")

    @property
    def ok(self) -> bool:
        return self.passed == self.checked


# A check returns None on success, otherwise what went wrong.
Check = Callable[[int, VerifyOptions], Optional[str]]


def _separated(seed: int, options: VerifyOptions, connected: bool = False,
               capacities: Optional[str] = None) -> GeneratedInstance:
    rng = random.Random(seed)
    n = rng.randint(4, options.max_n)
    separator = rng.randint(1 if connected else 0, min(3, n - 2))
    params = GeneratorParams(n=n, separator_size=separator, edge_probability=rng.choice((0.3, 0.5, 0.7)),
                             connected=connected, capacities=capacities)
    return generate("separated", params, seed)


def _random(seed: int, options: VerifyOptions, cap: int = 14, connected: bool = False) -> Graph:
    rng = random.Random(seed)
    params = GeneratorParams(n=rng.randint(1, min(cap, options.max_n)), edge_probability=rng.choice((0.2, 0.35, 0.5)),
                             connected=connected)
    return generate("random", params, seed).graph


def _mapped_capds(sol: CapacitatedSolution, mapping) -> CapacitatedSolution:
    return CapacitatedSolution(chosen=map_vertices(sol.chosen, mapping),
                               assignment={mapping[v]: mapping[d] for v, d in sol.assignment.items()})


def _gadget_cds(g: Graph, removed) -> frozenset:
    """Minimum CDS of R(G, removed) without its gadget vertex, in g's ids."""
    gadget, z, mapping = attach_separator_vertex(g, removed)
    return map_vertices((v for v in exact_cds(gadget) if v != z), mapping)


def _gadget_cds_opt(g: Graph, removed) -> int:
    gadget, _, _ = attach_separator_vertex(g, removed)
    return len(exact_cds(gadget))


def _check_lemma_ds(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options)
    a, b, c = inst.split
    whole = len(exact_ds(inst.graph))
    left = len(exact_ds(induced_subgraph(inst.graph, a)[0]))
    right = len(exact_ds(induced_subgraph(inst.graph, c)[0]))
    if whole < left + right - 2 * len(b):
        return f"OPT={whole} < {left} + {right} - 2*{len(b)}"
    return None


def _check_lemma_capds(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options, capacities="random")
    a, b, c = inst.split
    cg = inst.capacitated
    whole = len(exact_capds(cg))
    left = len(exact_capds(induced_capacitated(cg, a)[0]))
    right = len(exact_capds(induced_capacitated(cg, c)[0]))
    if whole < left + right - 2 * len(b):
        return f"OPT={whole} < {left} + {right} - 2*{len(b)}"
    return None


def _check_lemma_ids(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options)
    a, b, c = inst.split
    whole = len(exact_ids(inst.graph))
    left = len(exact_ids(induced_subgraph(inst.graph, a)[0]))
    right = len(exact_ids(induced_subgraph(inst.graph, c)[0]))
    if whole < left + right - 2 * len(b):
        return f"OPT={whole} < {left} + {right} - 2*{len(b)}"
    return None


def _check_lemma_cds(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options, connected=True)
    a, b, c = inst.split
    whole = len(exact_cds(inst.graph))
    # R(G[A], B) removes C \ B from g and replaces B by z; symmetric for C
    left = _gadget_cds_opt(inst.graph, c)
    right = _gadget_cds_opt(inst.graph, a)
    if whole < left + right - 2:
        return f"OPT={whole} < {left} + {right} - 2"
    return None


def _check_combine_capds(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options, capacities="random")
    a, b, c = inst.split
    cg = inst.capacitated
    sub_a, map_a = induced_capacitated(cg, a)
    sub_c, map_c = induced_capacitated(cg, c)
    x_sol, y_sol = _mapped_capds(exact_capds(sub_a), map_a), _mapped_capds(exact_capds(sub_c), map_c)
    combined = combine_capds(cg, x_sol, y_sol, b, a=a, c=c)
    report = check_solution(cg, ProblemKind.CAPDS, combined)
    if not report:
        return f"combined solution invalid: {report.detail}"
    allowed = len(x_sol) + len(y_sol) + (cg.base.max_degree + 1) * len(b) + options.bound_offset
    if len(combined) > allowed:
        return f"combined size {len(combined)} exceeds {allowed}"
    return None


def _check_combine_ids(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options)
    a, b, c = inst.split
    g = inst.graph
    sub_a, map_a = induced_subgraph(g, a)
    sub_c, map_c = induced_subgraph(g, c)
    x, y = map_vertices(exact_ids(sub_a), map_a), map_vertices(exact_ids(sub_c), map_c)
    combined = combine_ids(g, x, y, b, a=a, c=c)
    report = check_solution(g, ProblemKind.IDS, combined)
    if not report:
        return f"combined solution invalid: {report.detail}"
    allowed = len(x) + len(y) + (g.max_degree + 1) * len(b) + options.bound_offset
    if len(combined) > allowed:
        return f"combined size {len(combined)} exceeds {allowed}"
    return None


def _check_combine_cds(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = _separated(seed, options, connected=True)
    a, b, c = inst.split
    g = inst.graph
    x, y = _gadget_cds(g, c), _gadget_cds(g, a)
    combined = combine_cds(g, x, y, b, a=a, c=c)
    report = check_solution(g, ProblemKind.CDS, combined)
    if not report:
        return f"combined solution invalid: {report.detail}"
    allowed = len(x) + len(y) + 3 * len(b) + options.bound_offset
    if len(combined) > allowed:
        return f"combined size {len(combined)} exceeds {allowed}"
    return None


def _hitting_params(seed: int, options: VerifyOptions) -> GeneratorParams:
    rng = random.Random(seed)
    universe = rng.randint(1, min(8, options.max_n))
    return GeneratorParams(universe_size=universe, set_count=rng.randint(1, 12), max_set_size=rng.randint(1, 3))


def _check_reductions_hs(seed: int, options: VerifyOptions) -> Optional[str]:
    inst = generate("hitting-set", _hitting_params(seed, options), seed)
    hs, artifact = inst.hitting_set, inst.artifact
    g = artifact.graph
    if g.n != hs.universe_size + len(hs.sets) + 1:
        return f"produced graph has {g.n} vertices"
    opt_hs = len(exact_hs(hs))
    ds = exact_ds(g)
    cds = exact_cds(hs_to_cds(hs).graph)
    if not opt_hs == len(ds) == len(cds):
        return f"OPT_HS={opt_hs}, OPT_DS={len(ds)}, OPT_CDS={len(cds)}"
    for candidate in (ds, cds, greedy_ds(g)):
        lifted = lift_ds_to_hs(artifact, candidate)
        report = check_solution(hs, ProblemKind.HS, lifted)
        if not report or len(lifted) > len(candidate):
            return f"lifting {sorted(candidate)} gave {sorted(lifted)}"
    return None


def _check_reductions_nst(seed: int, options: VerifyOptions) -> Optional[str]:
    hs = generate("hitting-set", _hitting_params(seed, options), seed).hitting_set
    artifact = hs_to_nst(hs)
    if len(artifact.instance.non_terminals) != hs.universe_size:
        return f"{len(artifact.instance.non_terminals)} non-terminals for a universe of {hs.universe_size}"
    opt_hs = len(exact_hs(hs))
    steiner = exact_nst(artifact.instance)
    if opt_hs != len(steiner):
        return f"OPT_HS={opt_hs}, OPT_NST={len(steiner)}"
    lifted = lift_nst_to_hs(artifact, steiner)
    if not check_solution(hs, ProblemKind.HS, lifted) or len(lifted) > len(steiner):
        return f"lifting {sorted(steiner)} gave {sorted(lifted)}"
    return None


def _check_ds_capds(seed: int, options: VerifyOptions) -> Optional[str]:
    g = _random(seed, options)
    cg = ds_to_capds(g)
    opt_ds = len(exact_ds(g))
    sol = exact_capds(cg)
    if opt_ds != len(sol):
        return f"OPT_DS={opt_ds}, OPT_CapDS={len(sol)}"
    if not check_solution(g, ProblemKind.DS, lift_capds_to_ds(sol)):
        return "lifted capacitated solution does not dominate"
    return None


def _check_irving(seed: int, options: VerifyOptions) -> Optional[str]:
    rng = random.Random(seed)
    alpha = parse_alpha(options.alpha)
    params = GeneratorParams(variable_count=rng.randint(1, 6), clause_count=rng.randint(1, 10),
                             clause_width=rng.randint(1, 3), alpha=options.alpha)
    inst = generate("irving", params, seed)
    formula, artifact = inst.formula, inst.artifact
    n = formula.variable_count
    if artifact.graph.n != 2 * n + artifact.copies * len(formula.clauses):
        return f"gap graph has {artifact.graph.n} vertices"
    satisfying = brute_force_satisfiable(formula)
    smallest = gap_min_ids(artifact)
    if (satisfying is not None) != (smallest <= alpha * n):
        return f"satisfiable={satisfying is not None} but min IDS={smallest}, alpha*n={alpha * n}"
    if satisfying is None and smallest < artifact.copies:
        return f"unsatisfiable formula with min IDS {smallest} below {artifact.copies}"
    if satisfying is not None and not check_solution(artifact.graph, ProblemKind.IDS,
                                                     assignment_to_ids(artifact, satisfying)):
        return "satisfying assignment does not give an IDS"
    if artifact.graph.n <= 20 and len(exact_ids(artifact.graph)) != smallest:
        return f"structural min IDS {smallest} disagrees with the exact solver"
    return None


def _check_self_reduction(seed: int, options: VerifyOptions) -> Optional[str]:
    g = _random(seed, options)
    queries = []

    def counting(h: Graph, k: int) -> bool:
        queries.append(h.n)
        return ids_decision(h, k)

    result = ids_selfreduce(g, counting)
    if not check_solution(g, ProblemKind.IDS, result):
        return "result is not an IDS"
    opt = len(exact_ids(g))
    if len(result) != opt:
        return f"self-reduction found {len(result)}, optimum is {opt}"
    if len(queries) > g.n + g.n * opt:
        return f"{len(queries)} queries exceed n + n*k0 = {g.n + g.n * opt}"
    return None


def _check_lower_bound(seed: int, options: VerifyOptions) -> Optional[str]:
    g = _random(seed, options, connected=True)
    bound = ds_lower_bound(g)
    optima = {
        "ds": len(exact_ds(g)),
        "ids": len(exact_ids(g)),
        "cds": len(exact_cds(g)),
        "capds": len(exact_capds(CapacitatedGraph(g, [g.degree(v) for v in g.vertices]))),
    }
    below = {kind: opt for kind, opt in optima.items() if opt < bound}
    if below:
        return f"lower bound {bound} exceeds {below}"
    return None


def _check_find_node(seed: int, options: VerifyOptions) -> Optional[str]:
    g = _random(seed, options, cap=60)
    ntd = make_nice(g, heuristic_td(g))
    for s in range(1, g.n + 1):
        size = len(ntd.subtree_vertices(find_split_node(ntd, s)))
        if not s <= size <= 2 * s:
            return f"s={s}: split node has |V_t|={size}"
    return None


def _check_nice(seed: int, options: VerifyOptions) -> Optional[str]:
    g = _random(seed, options, cap=60)
    td = heuristic_td(g)
    report = validate(g, td)
    if not report:
        return f"heuristic decomposition invalid: {report.violation}"
    ntd = make_nice(g, td)
    report = check_nice(ntd)
    if not report:
        return f"not nice: {report.violation}"
    if not validate(g, ntd.to_tree_decomposition()):
        return "nice decomposition does not validate"
    if width(ntd) != width(td):
        return f"width changed from {width(td)} to {width(ntd)}"
    return None


SUITES: Dict[str, Check] = {
    "lemma-ds-ii": _check_lemma_ds,
    "lemma-capds-i": _check_lemma_capds,
    "lemma-indds-ii": _check_lemma_ids,
    "lemma-conds-i": _check_lemma_cds,
    "combine-capds": _check_combine_capds,
    "combine-ids": _check_combine_ids,
    "combine-cds": _check_combine_cds,
    "reductions-hs": _check_reductions_hs,
    "reductions-nst": _check_reductions_nst,
    "ds-capds": _check_ds_capds,
    "irving": _check_irving,
    "self-reduction": _check_self_reduction,
    "lower-bound": _check_lower_bound,
    "find-node": _check_find_node,
    "nice": _check_nice,
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, options: Optional[VerifyOptions] = None) -> LemmaReport:
    """
    Run one suite over seeds seed .. seed + count - 1.

    Args:
        name: Suite name from SUITES
        options: Corpus settings

    Returns:
        Report with the failing seeds; errors raised by a check count as failures
    """
    if name not in SUITES:
        raise InvalidInputError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    options = options or VerifyOptions()
    check = SUITES[name]
    report = LemmaReport(suite=name, checked=0, passed=0)
    for seed in range(options.seed, options.seed + options.count):
        try:
            problem = check(seed, options)
        except DominationError as e:
            problem = f"{type(e).__name__}: {e}"
        report.checked += 1
        if problem is None:
            report.passed += 1
        else:
            logger.warning(f"Suite {name} failed on seed {seed}: {problem}")
            report.failed_seeds.append(seed)
            report.details.append(f"seed {seed}: {problem}")
    logger.info(f"Suite {name}: {report.passed}/{report.checked} passed")
    return report


def run_verification(name: str, options: Optional[VerifyOptions] = None) -> List[LemmaReport]:
    """Run a suite, or every suite for "all"."""
    names = list(SUITES) if name == "all" else [name]
    return [run_suite(suite, options) for suite in names]


def reports_to_csv(reports: List[LemmaReport]) -> str:
    columns = ["suite", "checked", "passed", "failed_seeds"]
    rows = [{"suite": r.suite, "checked": r.checked, "passed": r.passed,
             "failed_seeds": " ".join(str(s) for s in r.failed_seeds)} for r in reports]
    return pd.DataFrame(rows, columns=columns).to_csv(index=False)


def ensure_passed(reports: List[LemmaReport]) -> None:
    """
    Raises:
        VerificationError: Listing every counterexample seed
    """
    failed = [r for r in reports if not r.ok]
    if not failed:
        return
    seeds = sorted({seed for r in failed for seed in r.failed_seeds})
    summary = "; ".join(f"{r.suite}: {r.checked - r.passed} failed ({r.details[0]})" for r in failed)
    logger.error(f"Verification failed: {summary}")
    raise VerificationError(f"verification failed: {summary}; seeds {', '.join(map(str, seeds))}", seeds)
