"""Decorated plumbing graphs describing 3-dimensional graph manifolds.

A node is a Seifert fibered piece: a base surface of signed genus (``-g``
means the connected sum of ``g`` projective planes) and a list of critical
fibers with framings ``b/a``.  An edge is a plumbing by ``+J`` or ``-J``.

Two input formats are accepted.  The line format::

    # triangle graph
    node P genus -3 fibers 1/1
    node Q genus 1 fibers -2/1
    node R genus 1 fibers -1/2
    edge P Q +
    edge Q R +
    edge R P +

and a JSON document ``{"nodes": [{"id", "genus", "fibers": [[b, a], ...]}],
"edges": [{"ends": [u, v], "sign": 1}]}``.  Raw documents may also carry
``glue u v a b c d`` lines (JSON: ``{"ends": [u, v], "matrix": [[a, b], [c, d]]}``)
and self-loops; :func:`normalize` turns those into a plumbing graph.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "CriticalFiber", "SeifertNode", "PlumbingEdge", "GluingEdge", "PlumbingGraph", "RawGraph",
    "GraphError", "ParseError", "ValidationError", "GluingStep", "GluingNormalization",
    "parse", "parse_raw", "serialize", "to_json", "to_text", "lint", "normalize",
    "resolve_self_loop", "normalize_gluing", "replay_gluing", "orientable_subgraph",
    "spanning_tree", "J", "normalize_with_trace", "graph_from",
]

J = ((0, 1), (1, 0))


class GraphError(Exception):
    pass


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(GraphError):
    def __init__(self, invariant: str, message: str):
        self.invariant = invariant
        self.message = message
        super().__init__(f"{invariant}: {message}")


@dataclass(frozen=True)
class CriticalFiber:
    """A critical fiber with framing ``b/a`` (``a > 0``, ``b != 0``, coprime)."""

    b: int
    a: int

    def __post_init__(self):
        if self.b == 0:
            raise ValidationError("fiber", "framing numerator b must be nonzero")
        if self.a < 1:
            raise ValidationError("fiber", f"framing denominator a must be positive, got {self.a}")
        if gcd(self.a, abs(self.b)) != 1:
            raise ValidationError("fiber", f"framing {self.b}/{self.a} is not coprime")

    @classmethod
    def of_type(cls, num: int, den: int) -> "CriticalFiber":
        """Fiber of framing ``num/den`` with the sign moved onto ``b``."""
        if den == 0:
            raise ValidationError("fiber", "framing denominator is zero")
        if den < 0:
            num, den = -num, -den
        return cls(num, den)

    @property
    def weight(self) -> Fraction:
        """``a/b``, the quantity summed into the connectivity matrix."""
        return Fraction(self.a, self.b)

    def __str__(self):
        return f"{self.b}/{self.a}"


@dataclass(frozen=True)
class SeifertNode:
    id: str
    genus: int = 0
    fibers: tuple[CriticalFiber, ...] = ()

    @property
    def orientable(self) -> bool:
        return self.genus >= 0

    def with_fiber(self, fiber: CriticalFiber) -> "SeifertNode":
        return replace(self, fibers=self.fibers + (fiber,))


@dataclass(frozen=True)
class PlumbingEdge:
    ends: tuple[str, str]
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValidationError("edge-sign", f"edge sign must be +1 or -1, got {self.sign}")

    def other(self, label: str) -> str:
        u, v = self.ends
        return v if label == u else u


@dataclass(frozen=True)
class GluingEdge:
    """A raw gluing by an arbitrary orientation-reversing torus homeomorphism."""

    ends: tuple[str, str]
    matrix: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        det = a * d - b * c
        if abs(det) != 1:
            raise ValidationError("gluing-det", f"gluing matrix has |det| = {abs(det)}, expected 1")
        if det != -1:
            raise ValidationError("gluing-det", "gluing matrix has det +1; gluings must reverse orientation")


def _check_nodes(nodes: Sequence[SeifertNode]):
    seen = set()
    for n in nodes:
        if not n.id or re.search(r"\s", n.id):
            raise ValidationError("label", f"bad node label {n.id!r}")
        if n.id in seen:
            raise ValidationError("unique-labels", f"duplicate node label {n.id!r}")
        seen.add(n.id)
    return seen


@dataclass(frozen=True)
class RawGraph:
    """Unvalidated graph: self-loops and general gluing matrices allowed."""

    nodes: tuple[SeifertNode, ...]
    edges: tuple[PlumbingEdge | GluingEdge, ...]

    def __post_init__(self):
        labels = _check_nodes(self.nodes)
        for e in self.edges:
            for x in e.ends:
                if x not in labels:
                    raise ValidationError("edge-endpoint", f"edge refers to unknown node {x!r}")


@dataclass(frozen=True)
class PlumbingGraph:
    """A validated plumbing graph: connected, loop-free, all gluings ``±J``."""

    nodes: tuple[SeifertNode, ...]
    edges: tuple[PlumbingEdge, ...]
    allow_disconnected: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        labels = _check_nodes(self.nodes)
        for e in self.edges:
            if not isinstance(e, PlumbingEdge):
                raise ValidationError("plumbing", "edges of a plumbing graph must be +-J plumbings")
            u, v = e.ends
            for x in (u, v):
                if x not in labels:
                    raise ValidationError("edge-endpoint", f"edge refers to unknown node {x!r}")
            if u == v:
                raise ValidationError("self-loop", f"node {u!r} has a self-loop")
        if not self.allow_disconnected and self.nodes and self.components() != 1:
            raise ValidationError("connected", f"graph has {self.components()} components")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def node(self, label: str) -> SeifertNode:
        for n in self.nodes:
            if n.id == label:
                return n
        raise KeyError(label)

    def incident(self, label: str) -> list[tuple[int, PlumbingEdge]]:
        return [(i, e) for i, e in enumerate(self.edges) if label in e.ends]

    def signed_adjacency(self) -> dict[tuple[str, str], int]:
        """Signed edge counts, symmetric in the two labels."""
        adj: dict[tuple[str, str], int] = defaultdict(int)
        for e in self.edges:
            u, v = e.ends
            adj[u, v] += e.sign
            adj[v, u] += e.sign
        return adj

    def components(self) -> int:
        parent = {n.id: n.id for n in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.ends[0])] = find(e.ends[1])
        return len({find(x) for x in parent})

    @property
    def betti(self) -> int:
        """First Betti number of the underlying graph."""
        return len(self.edges) - len(self.nodes) + self.components()

    def is_tree(self) -> bool:
        return self.components() == 1 and len(self.edges) == len(self.nodes) - 1


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"[^\s,]+")


def _int(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None


def _parse_fiber(tok: str, lineno: int, col: int) -> CriticalFiber:
    m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", tok)
    if not m:
        raise ParseError(f"expected a framing b/a, got {tok!r}", lineno, col)
    b = int(m.group(1))
    a = int(m.group(2)) if m.group(2) is not None else 1
    return CriticalFiber(b, a)


def _parse_text(text: str) -> RawGraph:
    nodes: list[SeifertNode] = []
    edges: list[PlumbingEdge | GluingEdge] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        kw, kcol = toks[0]
        try:
            if kw == "node":
                if len(toks) < 2:
                    raise ParseError("node needs a label", lineno, kcol)
                label = toks[1][0]
                genus = 0
                fibers: list[CriticalFiber] = []
                i = 2
                while i < len(toks):
                    word, col = toks[i]
                    if word == "genus":
                        if i + 1 >= len(toks):
                            raise ParseError("genus needs a value", lineno, col)
                        genus = _int(toks[i + 1][0], lineno, toks[i + 1][1])
                        i += 2
                    elif word == "fibers":
                        i += 1
                        while i < len(toks) and toks[i][0] not in ("genus", "fibers"):
                            if toks[i][0] != "-":
                                fibers.append(_parse_fiber(toks[i][0], lineno, toks[i][1]))
                            i += 1
                    else:
                        raise ParseError(f"unexpected token {word!r}", lineno, col)
                nodes.append(SeifertNode(label, genus, tuple(fibers)))
            elif kw == "edge":
                if len(toks) != 4:
                    raise ParseError("expected: edge <label> <label> <+|->", lineno, kcol)
                s, scol = toks[3]
                if s not in ("+", "-", "+1", "-1"):
                    raise ParseError(f"edge sign must be + or -, got {s!r}", lineno, scol)
                edges.append(PlumbingEdge((toks[1][0], toks[2][0]), -1 if s.startswith("-") else 1))
            elif kw == "glue":
                if len(toks) != 7:
                    raise ParseError("expected: glue <label> <label> <a> <b> <c> <d>", lineno, kcol)
                a, b, c, d = (_int(t, lineno, col) for t, col in toks[3:])
                edges.append(GluingEdge((toks[1][0], toks[2][0]), ((a, b), (c, d))))
            else:
                raise ParseError(f"unknown statement {kw!r}", lineno, kcol)
        except ValidationError as exc:
            raise ValidationError(exc.invariant, f"line {lineno}: {exc.message}") from None
    return RawGraph(tuple(nodes), tuple(edges))


def _parse_json(text: str) -> RawGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise ParseError("JSON graph must be an object with a 'nodes' array", 1, 1)
    try:
        nodes = tuple(
            SeifertNode(str(n["id"]), int(n.get("genus", 0)),
                        tuple(CriticalFiber(int(b), int(a)) for b, a in n.get("fibers", [])))
            for n in doc["nodes"])
        edges = []
        for e in doc.get("edges", []):
            u, v = (str(x) for x in e["ends"])
            if "matrix" in e:
                (a, b), (c, d) = e["matrix"]
                edges.append(GluingEdge((u, v), ((int(a), int(b)), (int(c), int(d)))))
            else:
                edges.append(PlumbingEdge((u, v), int(e.get("sign", 1))))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed JSON graph: {exc!r}", 1, 1) from None
    return RawGraph(nodes, tuple(edges))


def parse_raw(text: str) -> RawGraph:
    """Parse either format without the plumbing-graph invariants."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def _as_plumbing(raw: RawGraph) -> PlumbingGraph:
    for e in raw.edges:
        if isinstance(e, GluingEdge):
            raise ValidationError("plumbing", f"edge {e.ends} is a general gluing; run normalize first")
    return PlumbingGraph(raw.nodes, raw.edges)


def parse(text: str) -> PlumbingGraph:
    """Parse and validate a plumbing-graph document (line format or JSON)."""
    return _as_plumbing(parse_raw(text))


def to_json(g: PlumbingGraph | RawGraph) -> dict:
    edges = []
    for e in g.edges:
        if isinstance(e, GluingEdge):
            edges.append({"ends": list(e.ends), "matrix": [list(r) for r in e.matrix]})
        else:
            edges.append({"ends": list(e.ends), "sign": e.sign})
    return {
        "nodes": [{"id": n.id, "genus": n.genus, "fibers": [[f.b, f.a] for f in n.fibers]}
                  for n in g.nodes],
        "edges": edges,
    }


def serialize(g: PlumbingGraph | RawGraph) -> str:
    """Canonical JSON interchange form."""
    return json.dumps(to_json(g), indent=2)


def to_text(g: PlumbingGraph | RawGraph) -> str:
    lines = []
    for n in g.nodes:
        line = f"node {n.id} genus {n.genus}"
        if n.fibers:
            line += " fibers " + ", ".join(str(f) for f in n.fibers)
        lines.append(line)
    for e in g.edges:
        if isinstance(e, GluingEdge):
            (a, b), (c, d) = e.matrix
            lines.append(f"glue {e.ends[0]} {e.ends[1]} {a} {b} {c} {d}")
        else:
            lines.append(f"edge {e.ends[0]} {e.ends[1]} {'+' if e.sign > 0 else '-'}")
    return "\n".join(lines) + "\n"


def lint(g: PlumbingGraph | RawGraph) -> list[str]:
    """Warnings that do not affect any computation.

    The classical normalization ``0 < a < |b|`` is not enforced; only the sum
    of ``a/b`` over a node enters the homology.
    """
    out = []
    for n in g.nodes:
        for f in n.fibers:
            if not 0 < f.a < abs(f.b):
                out.append(f"node {n.id}: fiber {f} is outside the normalized range 0 < a < |b|")
    return out


# ---------------------------------------------------------------- moves

def _fresh(label: str, taken: set[str]) -> str:
    k = 1
    while f"{label}~{k}" in taken:
        k += 1
    taken.add(f"{label}~{k}")
    return f"{label}~{k}"


def resolve_self_loop(g: RawGraph) -> RawGraph:
    """Replace every self-loop by an edge-vertex-edge-vertex-edge chain.

    The two inserted vertices are ``T^2 x I`` pieces (genus 0, no fibers).  A
    general gluing on the loop is kept on the first edge of the chain.
    """
    taken = {n.id for n in g.nodes}
    nodes = list(g.nodes)
    edges: list[PlumbingEdge | GluingEdge] = []
    for e in g.edges:
        u, v = e.ends
        if u != v:
            edges.append(e)
            continue
        x, y = _fresh(u, taken), _fresh(u, taken)
        nodes += [SeifertNode(x), SeifertNode(y)]
        first = replace(e, ends=(u, x))
        edges += [first, PlumbingEdge((x, y), 1), PlumbingEdge((y, u), 1)]
    return RawGraph(tuple(nodes), tuple(edges))


@dataclass(frozen=True)
class GluingStep:
    """One column operation.

    ``side == "right"``: column 1 -= n * column 2, fiber ``1/n`` added to the
    right node.  ``side == "left"``: column 2 -= n * column 1, fiber ``1/n``
    added to the left node.
    """

    side: str
    n: int

    @property
    def fiber(self) -> CriticalFiber:
        return CriticalFiber.of_type(1, self.n)


@dataclass(frozen=True)
class GluingNormalization:
    sign: int
    left: SeifertNode
    right: SeifertNode
    steps: tuple[GluingStep, ...]


def _apply(m, step: GluingStep):
    (a, b), (c, d) = m
    n = step.n
    if step.side == "right":
        return ((a - n * b, b), (c - n * d, d))
    return ((a, b - n * a), (c, d - n * c))


def _unapply(m, step: GluingStep):
    return _apply(m, GluingStep(step.side, -step.n))


def normalize_gluing(m, left: SeifertNode, right: SeifertNode) -> GluingNormalization:
    """Reduce an orientation-reversing gluing to ``±J`` by column operations.

    Each operation is paid for by a ``1/n`` critical fiber on one side (the
    fiber changes the Seifert piece only up to homeomorphism).  Euclid's
    algorithm runs on the first row; since the determinant is ``-1`` the
    result has the form ``[[0, ±1], [±1, 0]]`` with equal signs.
    """
    m = tuple(tuple(int(x) for x in r) for r in m)
    (a, b), (c, d) = m
    if a * d - b * c != -1:
        raise ValidationError("gluing-det", f"gluing matrix {m} does not have determinant -1")
    steps: list[GluingStep] = []

    def do(step):
        nonlocal m
        if step.n:
            steps.append(step)
            m = _apply(m, step)

    while m[0][0] != 0:
        a, b = m[0]
        if b == 0:
            do(GluingStep("left", -a))           # b := a^2 = 1
        elif abs(a) >= abs(b):
            do(GluingStep("right", a // b))
        else:
            do(GluingStep("left", b // a))
    # now m = [[0, e], [f, d]] with e*f = 1
    (_, e), (f, d) = m
    do(GluingStep("left", d // f))
    (z1, e), (f, z2) = m
    assert z1 == 0 and z2 == 0 and e == f and abs(e) == 1, m
    for s in steps:
        if s.side == "right":
            right = right.with_fiber(s.fiber)
        else:
            left = left.with_fiber(s.fiber)
    return GluingNormalization(e, left, right, tuple(steps))


def replay_gluing(result: GluingNormalization):
    """Rebuild the original gluing matrix from ``±J`` and the recorded steps."""
    s = result.sign
    m = ((0, s), (s, 0))
    for step in reversed(result.steps):
        m = _unapply(m, step)
    return m


def normalize_with_trace(raw: RawGraph) -> tuple[PlumbingGraph, list[tuple[GluingEdge, GluingNormalization]]]:
    """Resolve self-loops, reduce every gluing to ``±J`` and validate.

    Also returns, per general gluing, the recorded column operations.
    """
    raw = resolve_self_loop(raw)
    nodes = {n.id: n for n in raw.nodes}
    edges = []
    trace = []
    for e in raw.edges:
        if isinstance(e, GluingEdge):
            u, v = e.ends
            res = normalize_gluing(e.matrix, nodes[u], nodes[v])
            nodes[u], nodes[v] = res.left, res.right
            edges.append(PlumbingEdge(e.ends, res.sign))
            trace.append((e, res))
        else:
            edges.append(e)
    return PlumbingGraph(tuple(nodes[n.id] for n in raw.nodes), tuple(edges)), trace


def normalize(raw: RawGraph) -> PlumbingGraph:
    """Resolve self-loops, reduce every gluing to ``±J`` and validate."""
    return normalize_with_trace(raw)[0]


# ---------------------------------------------------------------- subgraphs

def orientable_subgraph(g: PlumbingGraph) -> PlumbingGraph:
    """Induced subgraph on the orientable-base nodes (possibly disconnected)."""
    keep = {n.id for n in g.nodes if n.orientable}
    return PlumbingGraph(tuple(n for n in g.nodes if n.id in keep),
                         tuple(e for e in g.edges if set(e.ends) <= keep),
                         allow_disconnected=True)


def spanning_tree(g: PlumbingGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split edge indices into a maximal tree ``T`` and the remaining edges ``E``.

    Edges joining two orientable nodes are taken first, then the rest, each
    group in document order (Kruskal with those two weights).  The tree thus
    restricts to a maximal forest of the orientable subgraph, which is where
    the kernel surfaces route their annuli.
    """
    parent = {n.id: n.id for n in g.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    orient = {n.id for n in g.nodes if n.orientable}
    order = sorted(range(len(g.edges)),
                   key=lambda i: (not set(g.edges[i].ends) <= orient, i))
    tree = set()
    for i in order:
        u, v = (find(x) for x in g.edges[i].ends)
        if u != v:
            parent[u] = v
            tree.add(i)
    extra = tuple(i for i in range(len(g.edges)) if i not in tree)
    return tuple(sorted(tree)), extra


def graph_from(nodes: Iterable[SeifertNode], edges: Iterable[tuple[str, str, int]]) -> PlumbingGraph:
    """Convenience constructor from ``(u, v, sign)`` triples."""
    return PlumbingGraph(tuple(nodes), tuple(PlumbingEdge((u, v), s) for u, v, s in edges))
