"""Seeded random instances for property checks and the ``random-tree`` command.

Every generator takes a :class:`random.Random` so a single seed fixes the
whole stream.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .exactlin import RatMatrix
from .homology import connectivity_matrix
from .plumbing import CriticalFiber, PlumbingEdge, PlumbingGraph, SeifertNode


def _fiber(rng: random.Random, bound: int) -> CriticalFiber:
    while True:
        b = rng.choice([x for x in range(-bound, bound + 1) if x])
        a = rng.randint(1, bound)
        if gcd(a, b) == 1:
            return CriticalFiber(b, a)


def _fiber_with_weight(w: Fraction) -> CriticalFiber | None:
    """The fiber ``b/a`` with ``a/b == w``, or None when ``w == 0``."""
    if not w:
        return None
    return CriticalFiber(w.denominator * (1 if w > 0 else -1), abs(w.numerator))


def _tree_edges(rng: random.Random, labels: list[str]) -> list[PlumbingEdge]:
    return [PlumbingEdge((labels[rng.randrange(i)], labels[i]), rng.choice((1, -1)))
            for i in range(1, len(labels))]


def _singular_leaf(nodes: list[SeifertNode], edges: list[PlumbingEdge], bound: int | None):
    """Retune the last node (a leaf) so the connectivity matrix becomes singular.

    Expanding the determinant along the leaf row gives
    ``det A = d * det A' - det A''`` with ``A'`` missing the leaf and ``A''``
    missing the leaf and its neighbour.
    """
    leaf = nodes[-1]
    if len(nodes) == 1:
        return [SeifertNode(leaf.id, leaf.genus, ())]
    parent = next(e.ends[0] for e in edges if e.ends[1] == leaf.id)
    rest = PlumbingGraph(tuple(nodes[:-1]), tuple(edges[:-1]))
    a1 = connectivity_matrix(rest).matrix.det()
    if a1 == 0:
        return None
    keep = [n for n in nodes[:-1] if n.id != parent]
    sub = PlumbingGraph(tuple(keep), tuple(e for e in edges[:-1] if parent not in e.ends),
                        allow_disconnected=True)
    a2 = connectivity_matrix(sub).matrix.det() if keep else Fraction(1)
    d = a2 / a1
    f = _fiber_with_weight(-d)
    if f is not None and bound is not None and (abs(f.b) > bound or f.a > bound):
        return None
    return nodes[:-1] + [SeifertNode(leaf.id, leaf.genus, () if f is None else (f,))]


def random_orientable_tree(rng: random.Random, max_nodes: int = 6, max_genus: int = 2,
                           max_fibers: int = 2, max_entry: int = 5,
                           singular_bias: float = 0.5, min_nodes: int = 1) -> PlumbingGraph:
    """A tree with orientable bases inside the given bounds.

    About ``singular_bias`` of the draws tune the last leaf so that the
    connectivity matrix is singular, and genus-zero fiberless nodes are
    common, so surviving fibers show up regularly.
    """
    n = rng.randint(min_nodes, max_nodes)
    labels = [f"N{i}" for i in range(1, n + 1)]
    nodes = []
    for lab in labels:
        k = rng.choice([0] * 2 + list(range(max_fibers + 1)))
        fibers = tuple(_fiber(rng, max_entry) for _ in range(k))
        nodes.append(SeifertNode(lab, rng.randint(0, max_genus), fibers))
    edges = _tree_edges(rng, labels)
    if rng.random() < singular_bias:
        tuned = _singular_leaf(nodes, edges, max_entry)
        if tuned is not None:
            nodes = tuned
    return PlumbingGraph(tuple(nodes), tuple(edges))


def random_tree_with_rank(rng: random.Random, rank: int = 6, max_nodes: int = 8,
                          max_entry: int = 5, max_tries: int = 100000) -> PlumbingGraph:
    """An orientable tree whose first rational homology has the given rank.

    The split between genus and surviving fibers is drawn first, weighted
    towards the mixed cases, then trees are sampled until one matches.
    """
    cases = [(g, rank - 2 * g) for g in range(rank // 2 + 1) if rank - 2 * g <= max(1, max_nodes - 2)]
    weights = [4 if g and r else 1 for g, r in cases]
    tries = 0
    while tries < max_tries:
        g_plus, r = rng.choices(cases, weights)[0]
        for _ in range(2000):
            tries += 1
            g = _tree_for_case(rng, g_plus, r, max_nodes, max_entry)
            a = connectivity_matrix(g).matrix
            if a.cols - a.rank() == r:
                return g
    raise RuntimeError(f"no rank-{rank} tree found")


def _tree_for_case(rng, g_plus, r, max_nodes, max_entry) -> PlumbingGraph:
    n = rng.randint(r + 2 if r > 1 else 1, max_nodes)
    labels = [f"N{i}" for i in range(1, n + 1)]
    genera = [0] * n
    for _ in range(g_plus):
        genera[rng.randrange(n)] += 1
    p_bare = min(0.9, 0.3 + 0.15 * r)
    nodes = []
    for lab, gen in zip(labels, genera):
        k = 0 if rng.random() < p_bare else rng.randint(1, 2)
        nodes.append(SeifertNode(lab, gen, tuple(_fiber(rng, max_entry) for _ in range(k))))
    edges = _tree_edges(rng, labels)
    if r and rng.random() < 0.5:
        tuned = _singular_leaf(nodes, edges, None)
        if tuned is not None:
            nodes = tuned
    return PlumbingGraph(tuple(nodes), tuple(edges))


def random_graph(rng: random.Random, max_nodes: int = 5, max_entry: int = 3,
                 max_extra: int = 2, nonorientable: bool = True) -> PlumbingGraph:
    """A connected multigraph with mixed bases and small entries."""
    n = rng.randint(1, max_nodes)
    labels = [f"N{i}" for i in range(1, n + 1)]
    nodes = []
    for lab in labels:
        if nonorientable and rng.random() < 0.3:
            genus = -rng.randint(1, max_entry)
        else:
            genus = rng.randint(0, max_entry)
        k = rng.choice([0, 0, 1, 2])
        nodes.append(SeifertNode(lab, genus, tuple(_fiber(rng, max_entry) for _ in range(k))))
    edges = _tree_edges(rng, labels)
    if n > 1:
        for _ in range(rng.randint(0, max_extra)):
            u, v = rng.sample(labels, 2)
            edges.append(PlumbingEdge((u, v), rng.choice((1, -1))))
    return PlumbingGraph(tuple(nodes), tuple(edges))


def random_det_minus_one(rng: random.Random, bound: int = 50) -> tuple[tuple[int, int], tuple[int, int]]:
    """An integer 2x2 matrix of determinant -1 with entries in ``[-bound, bound]``."""
    while True:
        a = rng.randint(-bound, bound)
        b = rng.randint(-bound, bound)
        if gcd(a, b) != 1:
            continue
        x, y = _bezout(a, b)            # a x + b y = 1
        c, d = y, -x                     # a d - b c = -1
        # sliding (c, d) along (a, b) keeps the determinant
        if a or b:
            k0 = -round((c * a + d * b) / (a * a + b * b))
            k = k0 + rng.randint(-2, 2)
            c, d = c + k * a, d + k * b
        if max(abs(c), abs(d)) <= bound:
            return (a, b), (c, d)


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def random_invertible(rng: random.Random, n: int, bound: int = 3) -> RatMatrix:
    while True:
        m = RatMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)],
                                cols=n)
        if m.det() != 0:
            return m


def random_symmetric(rng: random.Random, max_n: int = 6, bound: int = 4) -> RatMatrix:
    """Symmetric rational matrix, often singular (built as ``P^T D P``)."""
    n = rng.randint(1, max_n)
    if rng.random() < 0.3:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        return RatMatrix.from_rows(rows, cols=n)
    diag = [rng.choice([0, 0] + [x for x in range(-bound, bound + 1) if x]) for _ in range(n)]
    d = RatMatrix.from_rows([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)
    p = random_invertible(rng, n, 2)
    return p.T @ d @ p
