"""Algebraic graph expressions built from a circuit over the overlay semigroup.

Overlay is a commutative semigroup on graphs, so a circuit for ``Ax``
evaluated with ``x_j = vertex j`` gives ``y_i``, the graph whose vertices
are the out-neighbours of ``i``.  Connecting ``i`` to ``y_i`` and overlaying
every row yields the graph of ``A``.  Gates become shared subexpressions,
which keeps the expression DAG linear in the circuit size.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormatError, ShapeMismatchError
from .matrix import Matrix01
from .semigroups import EMPTY_GRAPH, Graph
from .synth import SynthParams, synthesize

GRAPH_HEADER = "semicirc-graph v1"
KINDS = ("empty", "leaf", "overlay", "connect")


@dataclass
class GraphExpr:
    """Expression DAG; node k is ``(kind, a, b)`` and refers only to nodes below k.

    For a leaf, ``a`` is the vertex id; ``empty`` ignores both fields.
    """

    nodes: list[tuple[str, int, int]] = field(default_factory=list)
    root: int | None = None
    _leaves: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def _push(self, kind: str, a: int, b: int) -> int:
        self.nodes.append((kind, a, b))
        return len(self.nodes) - 1

    def _check(self, *refs: int) -> None:
        for r in refs:
            if not 0 <= r < len(self.nodes):
                raise ValueError(f"node e{r} does not exist")

    def empty(self) -> int:
        return self._push("empty", 0, 0)

    def leaf(self, vertex: int) -> int:
        """Leaf for ``vertex``; repeated calls share one node."""
        node = self._leaves.get(vertex)
        if node is None:
            node = self._leaves[vertex] = self._push("leaf", vertex, 0)
        return node

    def overlay(self, left: int, right: int) -> int:
        self._check(left, right)
        return self._push("overlay", left, right)

    def connect(self, left: int, right: int) -> int:
        self._check(left, right)
        return self._push("connect", left, right)

    def overlay_all(self, items: list[int]) -> int:
        """Balanced overlay tree over ``items`` (non-empty)."""
        if not items:
            raise ValueError("overlay_all needs at least one operand")
        level = list(items)
        while len(level) > 1:
            nxt = [self.overlay(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]


@dataclass
class GraphReport:
    n: int
    z: int
    wires: int
    node_count: int
    # rows with no ones; they appear as bare vertices with no connect term
    isolated_rows: list[int] = field(default_factory=list)


def build_dense_graph_expr(a: Matrix01, params: SynthParams | None = None
                           ) -> tuple[GraphExpr, GraphReport]:
    """Expression for the graph with vertex set ``0..n-1`` and an edge ``(i, j)`` per one of ``a``."""
    if a.m != a.n:
        raise ShapeMismatchError(f"graph matrix must be square, got {a.m}x{a.n}")
    params = params or SynthParams()
    g = GraphExpr()
    empty_rows = a.empty_rows()
    report = GraphReport(a.n, a.z, 0, 0, list(empty_rows))
    if a.n == 0:
        g.root = g.empty()
        report.node_count = 1
        return g, report

    keep = [i for i in range(a.m) if len(a.zeros[i]) < a.n]
    node_of: dict[int, int] = {j: g.leaf(j) for j in range(a.n)}
    y: dict[int, int] = {}
    if keep:
        sub = a.select_rows(keep)
        c, rep = synthesize(sub, SynthParams(mode=params.mode, seed=params.seed,
                                             retry_limit=params.retry_limit))
        report.wires = rep.wires
        for k, ops in enumerate(c.gates):
            expr = node_of[ops[0]]
            for o in ops[1:]:
                expr = g.overlay(expr, node_of[o])
            node_of[c.n_inputs + k] = expr  # unary gates alias their operand
        y = {keep[label]: node_of[node] for label, node in c.outputs}

    terms = [g.connect(g.leaf(i), y[i]) if i in y else g.leaf(i) for i in range(a.n)]
    g.root = g.overlay_all(terms)
    report.node_count = g.node_count
    return g, report


def eval_graph_expr(g: GraphExpr, root: int | None = None) -> Graph:
    """Evaluate bottom-up; every node is computed once and freed after its last use."""
    root = g.root if root is None else root
    if root is None:
        raise ValueError("expression has no root")
    last_use = list(range(len(g.nodes)))
    for k, (kind, a, b) in enumerate(g.nodes):
        if kind in ("overlay", "connect"):
            last_use[a] = max(last_use[a], k)
            last_use[b] = max(last_use[b], k)
    last_use[root] = len(g.nodes)
    vals: list[Graph | None] = [None] * (root + 1)
    for k in range(root + 1):
        kind, a, b = g.nodes[k]
        if kind == "empty":
            vals[k] = EMPTY_GRAPH
        elif kind == "leaf":
            vals[k] = Graph.vertex(a)
        elif kind == "overlay":
            vals[k] = vals[a].overlay(vals[b])
        else:
            vals[k] = vals[a].connect(vals[b])
        if kind in ("overlay", "connect"):
            for r in (a, b):
                if last_use[r] == k:
                    vals[r] = None
    return vals[root]


def adjacency_graph(a: Matrix01) -> Graph:
    """Reference value: vertices ``0..n-1`` and an edge for every one of ``a``."""
    edges = frozenset((i, j) for i in range(a.m) for j in a.row_support(i))
    return Graph(frozenset(range(a.n)), edges)


# -- text format ----------------------------------------------------------------------

def format_graph_expr(g: GraphExpr) -> str:
    lines = [GRAPH_HEADER, f"nodes {len(g.nodes)}"]
    for k, (kind, a, b) in enumerate(g.nodes):
        if kind == "empty":
            lines.append(f"e{k} empty")
        elif kind == "leaf":
            lines.append(f"e{k} leaf {a}")
        else:
            lines.append(f"e{k} {kind} e{a} e{b}")
    lines.append(f"root e{g.root}")
    return "\n".join(lines) + "\n"


def parse_graph_expr(text: str) -> GraphExpr:
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines or lines[0][1] != GRAPH_HEADER:
        raise FormatError(f"missing header {GRAPH_HEADER!r}", lines[0][0] if lines else 1)
    if len(lines) < 3:
        raise FormatError("truncated expression", lines[-1][0])
    no, head = lines[1]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "nodes" or not parts[1].isdigit():
        raise FormatError("expected 'nodes <count>'", no)
    count = int(parts[1])
    body, tail = lines[2:-1], lines[-1]
    if len(body) != count:
        raise FormatError(f"expected {count} node lines, found {len(body)}", tail[0])

    def ref(token: str, k: int, no: int) -> int:
        if not token.startswith("e") or not token[1:].isdigit():
            raise FormatError(f"expected a node reference like e3, got {token!r}", no)
        r = int(token[1:])
        if r >= k:
            raise FormatError(f"e{k} refers to e{r}, which is not earlier", no)
        return r

    g = GraphExpr()
    for k, (no, line) in enumerate(body):
        parts = line.split()
        if parts[0] != f"e{k}":
            raise FormatError(f"expected node e{k}", no)
        kind = parts[1] if len(parts) > 1 else ""
        if kind == "empty" and len(parts) == 2:
            g.nodes.append(("empty", 0, 0))
        elif kind == "leaf" and len(parts) == 3 and parts[2].lstrip("-").isdigit():
            g.nodes.append(("leaf", int(parts[2]), 0))
            g._leaves.setdefault(int(parts[2]), k)
        elif kind in ("overlay", "connect") and len(parts) == 4:
            g.nodes.append((kind, ref(parts[2], k, no), ref(parts[3], k, no)))
        else:
            raise FormatError(f"malformed node line {line!r}", no)
    no, line = tail
    parts = line.split()
    if len(parts) != 2 or parts[0] != "root":
        raise FormatError("expected 'root e<k>'", no)
    g.root = ref(parts[1], count, no)
    return g
