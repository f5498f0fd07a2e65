import json
import random

import pytest

from graphring.plumbing import (J, CriticalFiber, GluingEdge, ParseError, PlumbingEdge, PlumbingGraph,
                                RawGraph, SeifertNode, ValidationError, graph_from, lint, normalize,
                                normalize_gluing, normalize_with_trace, parse, parse_raw,
                                replay_gluing, resolve_self_loop, serialize, spanning_tree, to_text)
from graphring.sampling import random_det_minus_one, random_graph
from conftest import data_path
from oracles import spanning_check


def test_parse_triangle(triangle):
    assert triangle.labels == ("P", "Q", "R")
    assert triangle.node("P").genus == -3 and not triangle.node("P").orientable
    assert triangle.node("Q").fibers == (CriticalFiber(-2, 1),)
    assert [e.ends for e in triangle.edges] == [("P", "Q"), ("Q", "R"), ("R", "P")]
    assert triangle.betti == 1 and not triangle.is_tree()


def test_json_and_text_round_trip(triangle, chain):
    for g in (triangle, chain):
        assert parse(serialize(g)) == g
        assert parse(to_text(g)) == g


def test_json_document_shape(two_node):
    doc = json.loads(serialize(two_node))
    assert doc["nodes"][0] == {"id": "S", "genus": 0, "fibers": [[-1, 2]]}
    assert doc["edges"] == [{"ends": ["S", "P"], "sign": 1}]


def test_bare_integer_fiber_and_comments():
    g = parse("node A genus 1 fibers -2, 3/2  # trailing\nnode B\nedge A B -\n")
    assert g.node("A").fibers == (CriticalFiber(-2, 1), CriticalFiber(3, 2))
    assert g.node("B").genus == 0
    assert g.edges[0].sign == -1


@pytest.mark.parametrize("text, line, column", [
    ("node A genus x\n", 1, 14),
    ("node A\nbogus A\n", 2, 1),
    ("node A\nnode B\nedge A B *\n", 3, 10),
])
def test_parse_errors_locate(text, line, column):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_parse_error_json():
    with pytest.raises(ParseError):
        parse('{"nodes": [}')


@pytest.mark.parametrize("text, invariant", [
    ("node A\nnode A\n", "unique-labels"),
    ("node A\nedge A B +\n", "edge-endpoint"),
    ("node A\nedge A A +\n", "self-loop"),
    ("node A\nnode B\n", "connected"),
    ("node A\nnode B\nglue A B 0 1 1 0\n", "plumbing"),
    ("node A genus 0 fibers 2/4\n", "fiber"),
    ("node A genus 1 fibers 1/0\n", "fiber"),
])
def test_validation_errors(text, invariant):
    with pytest.raises(ValidationError) as err:
        parse(text)
    assert err.value.invariant == invariant


def test_fiber_conventions():
    assert CriticalFiber.of_type(1, -3) == CriticalFiber(-1, 3)
    assert str(CriticalFiber(-1, 2)) == "-1/2"
    assert CriticalFiber(-1, 2).weight == -2
    with pytest.raises(ValidationError):
        CriticalFiber(0, 1)


def test_gluing_edge_needs_det_minus_one():
    with pytest.raises(ValidationError) as err:
        GluingEdge(("A", "B"), ((1, 0), (0, 1)))
    assert err.value.invariant == "gluing-det"


def test_signed_adjacency_cancels():
    g = graph_from([SeifertNode("A"), SeifertNode("B")], [("A", "B", 1), ("A", "B", -1)])
    assert g.signed_adjacency().get(("A", "B"), 0) == 0


def test_lint_flags_unnormalized(two_node):
    warnings = lint(two_node)
    assert any("-1/2" in w for w in warnings)
    assert lint(parse("node A genus 0 fibers 3/2\n")) == []


def test_normalize_gluing_single_step():
    for n in (2, -3, 5):
        res = normalize_gluing(((n, 1), (1, 0)), SeifertNode("L"), SeifertNode("R"))
        assert res.sign == 1
        assert [(s.side, s.n) for s in res.steps] == [("right", n)]
        assert res.right.fibers == (CriticalFiber.of_type(1, n),)
        assert res.left.fibers == ()
        assert replay_gluing(res) == ((n, 1), (1, 0))


def test_normalize_gluing_fixed_points():
    plus = normalize_gluing(J, SeifertNode("L"), SeifertNode("R"))
    minus = normalize_gluing(((0, -1), (-1, 0)), SeifertNode("L"), SeifertNode("R"))
    assert plus.steps == () and plus.sign == 1
    assert minus.steps == () and minus.sign == -1


def test_normalize_gluing_rejects_det():
    with pytest.raises(ValidationError):
        normalize_gluing(((1, 0), (0, 1)), SeifertNode("L"), SeifertNode("R"))


def test_normalize_gluing_random_replay():
    rng = random.Random(5)
    for _ in range(200):
        m = random_det_minus_one(rng)
        res = normalize_gluing(m, SeifertNode("L"), SeifertNode("R"))
        assert res.sign in (1, -1)
        assert replay_gluing(res) == m
        right = [s for s in res.steps if s.side == "right"]
        assert len(res.right.fibers) == len(right)
        assert len(res.left.fibers) == len(res.steps) - len(right)


def test_resolve_self_loop():
    raw = RawGraph((SeifertNode("A", 1),), (PlumbingEdge(("A", "A"), -1),))
    out = resolve_self_loop(raw)
    assert len(out.nodes) == 3 and len(out.edges) == 3
    g = PlumbingGraph(out.nodes, out.edges)
    assert g.betti == 1
    assert out.edges[0].sign == -1


def test_normalize_fixture():
    raw = parse_raw(data_path("self_loop.graph").read_text())
    g, trace = normalize_with_trace(raw)
    assert len(g.nodes) == 4 and g.betti == 1
    assert all(replay_gluing(res) == edge.matrix for edge, res in trace)
    assert normalize(raw) == g


def test_spanning_tree_random():
    rng = random.Random(3)
    for _ in range(100):
        g = random_graph(rng)
        tree, extra = spanning_tree(g)
        assert len(tree) + len(extra) == len(g.edges)
        assert sorted(tree + extra) == list(range(len(g.edges)))
        assert spanning_check(g.labels, g.edges, tree)
        assert len(extra) == g.betti


def test_spanning_tree_prefers_orientable_edges(triangle):
    tree, extra = spanning_tree(triangle)
    assert [triangle.edges[i].ends for i in extra] == [("R", "P")]
