"""Rational first homology of a graph manifold.

The regular fibers of the orientable-base nodes are tied together by the
connectivity matrix ``A``: node ``i`` contributes the relation
``A[i] . t = 0`` with ``A[i, i] = -sum(a/b)`` over its critical fibers and
``A[i, j]`` the signed number of edges joining ``i`` and ``j``.  Fibers over
nonorientable bases have order two and vanish rationally.  The surviving
fibers are the free columns of ``rref(A)``; the null vectors of ``A`` give the
closed surfaces dual to them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exactlin import RatMatrix, Vector, free_column_kernel, rref
from .plumbing import PlumbingGraph, orientable_subgraph, spanning_tree

KINDS = ("alpha", "beta", "delta", "gamma", "fiber")


@dataclass(frozen=True)
class ConnectivityMatrix:
    order: tuple[str, ...]
    matrix: RatMatrix

    def index(self, label: str) -> int:
        return self.order.index(label)


@dataclass(frozen=True)
class Generator:
    """A basis curve of ``H_1(M; Q)``.

    ``source`` is the node label (alpha, beta, delta, fiber) or the edge
    index (gamma); ``index`` counts within the source, from 1.  ``name`` is
    the display name with kind-wide numbering, e.g. ``alpha2`` or ``t_R``.
    """

    kind: str
    source: str | int
    index: int
    name: str


@dataclass(frozen=True)
class H1Basis:
    graph: PlumbingGraph
    connectivity: ConnectivityMatrix
    generators: tuple[Generator, ...]
    surviving: tuple[str, ...]
    fiber_expression: dict[str, Vector]
    kernel: dict[str, Vector]
    tree_edges: tuple[int, ...]
    extra_edges: tuple[int, ...]
    rank_parts: tuple[int, int, int, int]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def position(self, kind: str, source, index: int = 1) -> int:
        for i, gen in enumerate(self.generators):
            if gen.kind == kind and gen.source == source and gen.index == index:
                return i
        raise KeyError((kind, source, index))

    def names(self) -> list[str]:
        return [g.name for g in self.generators]


@dataclass(frozen=True)
class SurfaceRecipe:
    """Integer combination of base surfaces forming a closed surface.

    ``scale * multiplicities`` is the rational class dual to ``fiber``.
    ``klein_caps`` counts punctured Klein bottles used in each adjacent
    nonorientable end to cap off leftover (even) fiber boundary.
    """

    fiber: str
    multiplicities: dict[str, int]
    klein_caps: dict[str, int]
    scale: Fraction
    doubled: bool = False

    def coefficients(self) -> dict[str, Fraction]:
        return {k: self.scale * v for k, v in self.multiplicities.items()}


def connectivity_matrix(g: PlumbingGraph) -> ConnectivityMatrix:
    h = orientable_subgraph(g)
    order = h.labels
    adj = h.signed_adjacency()
    rows = []
    for u in order:
        row = []
        for v in order:
            if u == v:
                row.append(-sum((f.weight for f in h.node(u).fibers), Fraction(0)))
            else:
                row.append(Fraction(adj.get((u, v), 0)))
        rows.append(row)
    return ConnectivityMatrix(order, RatMatrix.from_rows(rows, cols=len(order)))


def h1_basis(g: PlumbingGraph) -> H1Basis:
    conn = connectivity_matrix(g)
    a = conn.matrix
    _, pivots = rref(a)
    kern = free_column_kernel(a)
    surviving = tuple(conn.order[f] for f in sorted(kern))
    r = len(surviving)

    # t_i = sum_f kern[f][i] t_f: the rref rows express pivot fibers through free ones
    fiber_expression: dict[str, Vector] = {}
    for n in g.nodes:
        if n.orientable:
            i = conn.index(n.id)
            fiber_expression[n.id] = tuple(kern[f][i] for f in sorted(kern))
        else:
            fiber_expression[n.id] = (Fraction(0),) * r
    kernel = {conn.order[f]: v for f, v in kern.items()}

    tree, extra = spanning_tree(g)
    gens: list[Generator] = []
    k = 0
    for n in g.nodes:
        if n.orientable:
            for j in range(1, n.genus + 1):
                k += 1
                gens.append(Generator("alpha", n.id, j, f"alpha{k}"))
                gens.append(Generator("beta", n.id, j, f"beta{k}"))
    k = 0
    for n in g.nodes:
        if not n.orientable:
            # delta_|g| is eliminated by the relation 2 sum(delta) = sum(+-t)
            for j in range(1, -n.genus):
                k += 1
                gens.append(Generator("delta", n.id, j, f"delta{k}"))
    for k, e in enumerate(extra, start=1):
        gens.append(Generator("gamma", e, 1, f"gamma{k}" if len(extra) > 1 else "gamma"))
    for lab in surviving:
        gens.append(Generator("fiber", lab, 1, f"t_{lab}"))

    g_plus = sum(n.genus for n in g.nodes if n.orientable)
    g_minus = sum(-n.genus - 1 for n in g.nodes if not n.orientable)
    parts = (len(extra), r, 2 * g_plus, g_minus)
    assert sum(parts) == len(gens)
    return H1Basis(g, conn, tuple(gens), surviving, fiber_expression, kernel,
                   tree, extra, parts)


def kernel_surfaces(g: PlumbingGraph, basis: H1Basis | None = None) -> list[SurfaceRecipe]:
    """Closed surfaces dual to the surviving fibers, one per fiber."""
    if basis is None:
        basis = h1_basis(g)
    order = basis.connectivity.order
    adj = g.signed_adjacency()
    out = []
    for lab in basis.surviving:
        x = basis.kernel[lab]
        den = lcm(*(q.denominator for q in x))
        mult = {u: int(q * den) for u, q in zip(order, x)}
        residues = {}
        for n in g.nodes:
            if n.orientable:
                continue
            res = sum(adj.get((n.id, u), 0) * m for u, m in mult.items())
            if res:
                residues[n.id] = res
        doubled = any(res % 2 for res in residues.values())
        if doubled:
            mult = {u: 2 * m for u, m in mult.items()}
            residues = {k: 2 * v for k, v in residues.items()}
        caps = {k: abs(v) // 2 for k, v in residues.items()}
        out.append(SurfaceRecipe(lab, mult, caps, Fraction(1, mult[lab]), doubled))
    return out
