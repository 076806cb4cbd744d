"""
PACE .gr / .td and DIMACS .cnf readers and writers.
"""
from typing import Dict, List, Tuple, Union

from src.graph.core import Graph
from src.reductions.cnf import CnfFormula
from src.treedecomp.decomposition import TreeDecomposition, validate, width
from src.utils.errors import DecompositionError, InvalidInputError, ParseError
from src.utils.logger import setup_logger

logger = setup_logger()

Text = Union[str, bytes]


def _lines(data: Text) -> List[Tuple[int, List[str]]]:
    """Numbered, tokenized lines without blanks and comment lines."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    out = []
    for number, line in enumerate(data.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        out.append((number, tokens))
    return out


def _ints(tokens: List[str], number: int) -> List[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", number) from e


def parse_gr(data: Text) -> Graph:
    """
    Parse a PACE graph: header "p tds n m", then one "u v" line per edge, 1-indexed.

    Raises:
        ParseError: On a malformed header or edge line, self-loops, duplicate edges or a
            wrong edge count, with the offending line number
    """
    lines = _lines(data)
    if not lines:
        raise ParseError("missing header line 'p tds n m'")
    number, header = lines[0]
    if len(header) != 4 or header[0] != "p" or header[1] not in ("tds", "tw"):
        raise ParseError(f"malformed header {' '.join(header)!r}, expected 'p tds n m'", number)
    n, m = _ints(header[2:], number)
    if n < 0 or m < 0:
        raise ParseError("vertex and edge counts must be non-negative", number)

    edges = set()
    for number, tokens in lines[1:]:
        if len(tokens) != 2:
            raise ParseError(f"edge line needs two vertices, got {' '.join(tokens)!r}", number)
        u, v = _ints(tokens, number)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge ({u}, {v}) has an endpoint outside 1..{n}", number)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", number)
        edge = (min(u, v) - 1, max(u, v) - 1)
        if edge in edges:
            raise ParseError(f"duplicate edge ({u}, {v})", number)
        edges.add(edge)
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}", lines[0][0])
    return Graph(n, edges)


def write_gr(g: Graph) -> str:
    """PACE graph text with edges in ascending order."""
    rows = [f"p tds {g.n} {g.edge_count}"]
    rows.extend(f"{u + 1} {v + 1}" for u, v in sorted(g.edges))
    return "\n".join(rows) + "\n"


def parse_td(data: Text, g: Graph) -> TreeDecomposition:
    """
    Parse a PACE tree decomposition of g and validate it.

    Header "s td <bags> <max bag size> <n>", bag lines "b i v1 v2 ...", tree edge lines "i j";
    bag i becomes node i - 1 and vertex v becomes v - 1.

    Raises:
        ParseError: On malformed lines or references to unknown bags or vertices
        DecompositionError: If the decomposition does not validate against g
    """
    lines = _lines(data)
    if not lines:
        raise ParseError("missing header line 's td <bags> <max bag size> <n>'")
    number, header = lines[0]
    if len(header) != 5 or header[:2] != ["s", "td"]:
        raise ParseError(f"malformed header {' '.join(header)!r}", number)
    bag_count, max_bag, n = _ints(header[2:], number)
    if n != g.n:
        raise ParseError(f"decomposition is for {n} vertices, graph has {g.n}", number)

    bags: Dict[int, frozenset] = {}
    edges = []
    for number, tokens in lines[1:]:
        if tokens[0] == "b":
            values = _ints(tokens[1:], number)
            if not values:
                raise ParseError("bag line without a bag id", number)
            bag_id, members = values[0], values[1:]
            if not 1 <= bag_id <= bag_count:
                raise ParseError(f"bag id {bag_id} outside 1..{bag_count}", number)
            if bag_id - 1 in bags:
                raise ParseError(f"bag {bag_id} defined twice", number)
            for v in members:
                if not 1 <= v <= n:
                    raise ParseError(f"bag {bag_id} references vertex {v} outside 1..{n}", number)
            if len(members) > max_bag:
                raise ParseError(f"bag {bag_id} has {len(members)} vertices, header allows {max_bag}", number)
            bags[bag_id - 1] = frozenset(v - 1 for v in members)
        else:
            if len(tokens) != 2:
                raise ParseError(f"tree edge line needs two bag ids, got {' '.join(tokens)!r}", number)
            a, b = _ints(tokens, number)
            if not (1 <= a <= bag_count and 1 <= b <= bag_count):
                raise ParseError(f"tree edge ({a}, {b}) references an unknown bag", number)
            edges.append((a - 1, b - 1))
    if len(bags) != bag_count:
        raise ParseError(f"header announces {bag_count} bags, found {len(bags)}", lines[0][0])

    try:
        td = TreeDecomposition(bags, edges)
    except InvalidInputError as e:
        raise ParseError(str(e)) from e
    report = validate(g, td)
    if not report:
        logger.error(f"Decomposition failed validation: {report.violation} ({report.detail})")
        raise DecompositionError(f"{report.violation}: {report.detail}", report)
    return td


def write_td(td, vertex_count: int) -> str:
    """
    PACE decomposition text; nodes are renumbered 1.. in ascending id order.

    Args:
        td: TreeDecomposition or NiceTreeDecomposition
        vertex_count: Number of vertices of the decomposed graph
    """
    nodes = sorted(td.bags)
    position = {t: i + 1 for i, t in enumerate(nodes)}
    rows = [f"s td {len(nodes)} {width(td) + 1} {vertex_count}"]
    for t in nodes:
        members = " ".join(str(v + 1) for v in sorted(td.bags[t]))
        rows.append(f"b {position[t]} {members}".rstrip())
    rows.extend(f"{position[a]} {position[b]}" for a, b in sorted(td.tree_edges))
    return "\n".join(rows) + "\n"


def parse_dimacs_cnf(data: Text) -> CnfFormula:
    """
    Parse DIMACS CNF: header "p cnf n m", then literals with each clause ended by 0.
    A line starting with "%" ends the formula.

    Raises:
        ParseError: On a malformed header, out-of-range literal, empty or unterminated
            clause, or a wrong clause count
    """
    lines = _lines(data)
    if not lines:
        raise ParseError("missing header line 'p cnf n m'")
    number, header = lines[0]
    if len(header) != 4 or header[:2] != ["p", "cnf"]:
        raise ParseError(f"malformed header {' '.join(header)!r}, expected 'p cnf n m'", number)
    n, m = _ints(header[2:], number)

    clauses = []
    current: List[int] = []
    for number, tokens in lines[1:]:
        if tokens[0].startswith("%"):
            break
        for literal in _ints(tokens, number):
            if literal == 0:
                if not current:
                    raise ParseError("empty clause", number)
                clauses.append(frozenset(current))
                current = []
            elif abs(literal) > n:
                raise ParseError(f"literal {literal} outside the {n} declared variables", number)
            else:
                current.append(literal)
    if current:
        raise ParseError("last clause is not terminated by 0", number)
    if len(clauses) != m:
        raise ParseError(f"header announces {m} clauses, found {len(clauses)}", lines[0][0])
    return CnfFormula(variable_count=n, clauses=clauses)


def write_dimacs_cnf(f: CnfFormula) -> str:
    rows = [f"p cnf {f.variable_count} {len(f.clauses)}"]
    rows.extend(" ".join(str(l) for l in sorted(clause, key=lambda l: (abs(l), l))) + " 0" for clause in f.clauses)
    return "\n".join(rows) + "\n"


def read_graph_file(path: str) -> Graph:
    with open(path, "rb") as handle:
        return parse_gr(handle.read())


def read_td_file(path: str, g: Graph) -> TreeDecomposition:
    with open(path, "rb") as handle:
        return parse_td(handle.read(), g)


def read_cnf_file(path: str) -> CnfFormula:
    with open(path, "rb") as handle:
        return parse_dimacs_cnf(handle.read())
