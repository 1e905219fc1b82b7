import random

import pytest
from hypothesis import given, settings, strategies as st

from semicirc.errors import FormatError, ShapeMismatchError
from semicirc.graphs import (GraphExpr, adjacency_graph, build_dense_graph_expr, eval_graph_expr,
                             format_graph_expr, parse_graph_expr)
from semicirc.matrix import Matrix01, random_matrix
from semicirc.semigroups import EMPTY_GRAPH, Graph


def G(vs, es=()):
    return Graph(frozenset(vs), frozenset(es))


def test_single_edge():
    g = GraphExpr()
    g.root = g.connect(g.leaf(1), g.leaf(2))
    assert eval_graph_expr(g) == G({1, 2}, {(1, 2)})


def test_connect_to_overlay():
    g = GraphExpr()
    g.root = g.connect(g.leaf(1), g.overlay(g.leaf(2), g.leaf(3)))
    assert eval_graph_expr(g) == G({1, 2, 3}, {(1, 2), (1, 3)})


def test_connect_chain():
    g = GraphExpr()
    g.root = g.connect(g.connect(g.leaf(1), g.leaf(2)), g.leaf(3))
    assert eval_graph_expr(g) == G({1, 2, 3}, {(1, 2), (1, 3), (2, 3)})


def test_self_loop_and_idempotent_overlay():
    g = GraphExpr()
    one = g.leaf(1)
    assert g.leaf(1) == one  # leaves are shared
    loop = g.connect(one, one)
    assert eval_graph_expr(g, loop) == G({1}, {(1, 1)})
    twice = g.overlay(loop, loop)
    assert eval_graph_expr(g, twice) == eval_graph_expr(g, loop)


def test_bad_references():
    g = GraphExpr()
    with pytest.raises(ValueError):
        g.overlay(0, 1)
    with pytest.raises(ValueError):
        eval_graph_expr(g)


# -- laws, on random expressions ------------------------------------------------------------

@st.composite
def expressions(draw, depth=3):
    """Node of a random expression over vertices 0..4 and the empty graph, in a shared DAG."""
    g = draw(st.shared(st.builds(GraphExpr), key="expr"))

    def build(d):
        if d == 0 or draw(st.integers(0, 3)) == 0:
            choice = draw(st.integers(-1, 4))
            return g.empty() if choice < 0 else g.leaf(choice)
        kind = draw(st.sampled_from(["overlay", "connect"]))
        left, right = build(d - 1), build(d - 1)
        return g.overlay(left, right) if kind == "overlay" else g.connect(left, right)
    return build(depth)


LAWS = st.tuples(st.shared(st.builds(GraphExpr), key="expr"), expressions(), expressions(),
                 expressions())


@settings(max_examples=500)
@given(LAWS)
def test_overlay_laws(args):
    g, x, y, z = args
    ev = lambda node: eval_graph_expr(g, node)
    assert ev(g.overlay(x, y)) == ev(g.overlay(y, x))
    assert ev(g.overlay(x, g.overlay(y, z))) == ev(g.overlay(g.overlay(x, y), z))
    assert ev(g.overlay(x, x)) == ev(x)


@settings(max_examples=500)
@given(LAWS)
def test_connect_laws(args):
    g, x, y, z = args
    ev = lambda node: eval_graph_expr(g, node)
    assert ev(g.connect(x, g.connect(y, z))) == ev(g.connect(g.connect(x, y), z))
    assert ev(g.connect(x, g.overlay(y, z))) == ev(g.overlay(g.connect(x, y), g.connect(x, z)))
    assert ev(g.connect(g.overlay(x, y), z)) == ev(g.overlay(g.connect(x, z), g.connect(y, z)))


@settings(max_examples=500)
@given(LAWS)
def test_empty_is_identity(args):
    g, x, _, _ = args
    e = g.empty()
    ev = lambda node: eval_graph_expr(g, node)
    for node in (g.overlay(x, e), g.overlay(e, x), g.connect(x, e), g.connect(e, x)):
        assert ev(node) == ev(x)
    assert ev(e) == EMPTY_GRAPH


# -- dense graphs ----------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 5, 16, 64, 200])
def test_dense_graph_matches_adjacency(n):
    a = random_matrix(n, n, min(2, n - 1), random.Random(n))
    g, rep = build_dense_graph_expr(a)
    value = eval_graph_expr(g)
    assert value == adjacency_graph(a)
    assert value.vertices == frozenset(range(n))
    assert rep.node_count == g.node_count <= 16 * n


def test_empty_rows_become_isolated_vertices():
    a = Matrix01(3, 3, ((0, 1, 2), (1,), (0, 1, 2)))
    g, rep = build_dense_graph_expr(a)
    assert rep.isolated_rows == [0, 2]
    assert eval_graph_expr(g) == G({0, 1, 2}, {(1, 0), (1, 2)})


def test_all_rows_empty():
    a = Matrix01(2, 2, ((0, 1), (0, 1)))
    g, _ = build_dense_graph_expr(a)
    assert eval_graph_expr(g) == G({0, 1})


def test_non_square_rejected():
    with pytest.raises(ShapeMismatchError):
        build_dense_graph_expr(Matrix01(2, 3, ((), ())))


def test_text_round_trip():
    a = random_matrix(20, 20, 2, random.Random(0))
    g, _ = build_dense_graph_expr(a)
    text = format_graph_expr(g)
    back = parse_graph_expr(text)
    assert back.nodes == g.nodes and back.root == g.root
    assert format_graph_expr(back) == text


@pytest.mark.parametrize("text,line", [
    ("semicirc-graph v9\n", 1),
    ("semicirc-graph v1\nnodes 1\ne0 leaf 1\nroot e1\n", 4),
    ("semicirc-graph v1\nnodes 2\ne0 leaf 1\ne1 connect e0 e1\nroot e1\n", 4),
    ("semicirc-graph v1\nnodes 1\ne0 blob\nroot e0\n", 3),
    ("semicirc-graph v1\nnodes 2\ne0 leaf 1\nroot e0\n", 4),
])
def test_parse_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse_graph_expr(text)
    assert err.value.line == line
