"""The intersection product ``H_2 x H_2 -> H_1`` of a graph manifold.

Each ``H_1`` generator has an intersection dual surface:

* ``A`` (dual to alpha) and ``B`` (dual to beta) are vertical tori over the
  base curves; ``A_j . B_j`` is the regular fiber of their node;
* ``D`` (dual to delta) are Klein bottles, disjoint from everything;
* ``C`` (dual to a graph loop) is the plumbing torus of the extra edge;
* ``T`` (dual to a surviving fiber) is the kernel surface ``F``.

Products are stored as vectors over the ``H_1`` basis, and the whole table
is equivalently one alternating 3-form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exactlin import Vector, fmt, vec
from .homology import Generator, H1Basis, SurfaceRecipe, h1_basis, kernel_surfaces
from .plumbing import PlumbingGraph
from .trivector import FormError, Trivector, product

DUAL_KIND = {"alpha": "A", "beta": "B", "delta": "D", "gamma": "C", "fiber": "T"}


@dataclass(frozen=True)
class DualClass:
    kind: str
    generator: Generator
    name: str


def dual_classes(gens) -> tuple[DualClass, ...]:
    """Dual surfaces named ``A1, B1, D1, C, F`` (``C2``, ``F_P`` when several)."""
    fibers = sum(1 for g in gens if g.kind == "fiber")
    out = []
    for g in gens:
        kind = DUAL_KIND[g.kind]
        if kind == "T":
            name = "F" if fibers == 1 else "F_" + str(g.source)
        else:
            name = kind + g.name.removeprefix(g.kind)
        out.append(DualClass(kind, g, name))
    return tuple(out)


@dataclass
class ProductTable:
    basis: tuple[DualClass, ...]
    generators: tuple[Generator, ...]
    products: dict[tuple[int, int], Vector] = field(default_factory=dict)
    convention_dependent: frozenset[tuple[int, int]] = frozenset()

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry(self, i: int, j: int) -> Vector:
        return self.products.get((i, j), (Fraction(0),) * self.size)

    def nonzero(self) -> list[tuple[int, int, Vector]]:
        return [(i, j, v) for (i, j), v in sorted(self.products.items()) if any(v)]

    def __eq__(self, other):
        if not isinstance(other, ProductTable) or self.size != other.size:
            return NotImplemented
        return all(self.entry(i, j) == other.entry(i, j)
                   for i in range(self.size) for j in range(self.size))

    def to_json(self) -> dict:
        return {
            "basis": [d.name for d in self.basis],
            "h1_basis": [g.name for g in self.generators],
            "table": [[i, j, _combo(v, self.generators)] for i, j, v in self.nonzero() if i < j],
            "convention_dependent": sorted([i, j] for i, j in self.convention_dependent if i < j),
        }

    def render(self) -> str:
        names = [d.name for d in self.basis]
        cells = [[_combo(self.entry(i, j), self.generators) for j in range(self.size)]
                 for i in range(self.size)]
        width = max([len(n) for n in names] + [len(c) for r in cells for c in r] + [1])
        lines = [" " * width + " | " + " ".join(n.rjust(width) for n in names)]
        lines.append("-" * len(lines[0]))
        for n, row in zip(names, cells):
            lines.append(n.rjust(width) + " | " + " ".join(c.rjust(width) for c in row))
        return "\n".join(lines)


def _combo(v: Vector, gens) -> str:
    parts = []
    for c, g in zip(v, gens):
        if not c:
            continue
        mag = "" if abs(c) == 1 else fmt(abs(c))
        parts.append(("-" if c < 0 else "+") + mag + g.name)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


def product_table(g: PlumbingGraph, basis: H1Basis | None = None,
                  surfaces: list[SurfaceRecipe] | None = None) -> ProductTable:
    """Intersection products among the dual surfaces.

    * ``A_j . B_j`` is the fiber of node ``j`` written in surviving fibers.
    * With ``c`` the rational coefficients of the kernel surface ``F``:
      ``A_j . F = -c(j) beta_j`` and ``B_j . F = c(j) alpha_j``.
    * For an extra edge ``e = (i, j)``: ``C_e . F = sign(e) (c(i) t_j - c(j) t_i)``,
      the class of ``F`` cut along the plumbing torus (annuli are routed through
      the maximal tree, so only base surfaces meet it).
    * ``F . F'`` has only loop components, fixed by skew-symmetry of the triple
      product from the ``C . F`` entries; these depend on the annulus routing.
    * ``D`` rows and everything else vanish.
    """
    if basis is None:
        basis = h1_basis(g)
    if surfaces is None:
        surfaces = kernel_surfaces(g, basis)
    gens = basis.generators
    n = len(gens)
    duals = dual_classes(gens)
    fe = basis.fiber_expression
    fiber_pos = [basis.position("fiber", lab) for lab in basis.surviving]
    coeff = {s.fiber: s.coefficients() for s in surfaces}

    table: dict[tuple[int, int], list[Fraction]] = {}

    def add(i, j, k, c):
        if not c:
            return
        table.setdefault((i, j), [Fraction(0)] * n)[k] += c
        table.setdefault((j, i), [Fraction(0)] * n)[k] -= c

    def add_fiber(i, j, node, scale):
        for pos, c in zip(fiber_pos, fe[node]):
            add(i, j, pos, scale * c)

    for idx, x in enumerate(gens):
        if x.kind != "alpha":
            continue
        b = basis.position("beta", x.source, x.index)
        add_fiber(idx, b, x.source, 1)
        for f, lab in zip(fiber_pos, basis.surviving):
            c = coeff[lab].get(x.source, Fraction(0))
            add(idx, f, b, -c)
            add(b, f, idx, c)

    tt: set[tuple[int, int]] = set()
    for idx, x in enumerate(gens):
        if x.kind != "gamma":
            continue
        e = g.edges[x.source]
        u, v = e.ends
        for f, lab in zip(fiber_pos, basis.surviving):
            cu = coeff[lab].get(u, Fraction(0))
            cv = coeff[lab].get(v, Fraction(0))
            add_fiber(idx, f, v, e.sign * cu)
            add_fiber(idx, f, u, -e.sign * cv)
        # F_f . F_g picks up gamma_e with the coefficient of t_g in C_e . F_f
        for (a, la), (b, lb) in combinations(list(zip(fiber_pos, basis.surviving)), 2):
            c = table.get((idx, a), [Fraction(0)] * n)[b]
            add(a, b, idx, c)
            tt.add((a, b))
            tt.add((b, a))

    products = {k: tuple(v) for k, v in table.items() if any(v)}
    return ProductTable(duals, gens, products, frozenset(tt))


def to_trivector(t: ProductTable) -> Trivector:
    """The 3-form ``w(i, j, k) = k-th coordinate of products(i, j)``.

    Raises :class:`FormError` if the table is not the contraction of an
    alternating form (the three cyclic readings of a triple disagree, or a
    product has a component along one of its own factors).
    """
    n = t.size
    for (i, j), v in t.products.items():
        if v[i] or v[j]:
            raise FormError(f"product ({t.basis[i].name}, {t.basis[j].name}) has a component "
                            "along one of its factors")
        if t.entry(j, i) != tuple(-x for x in v):
            raise FormError(f"table is not skew-symmetric at ({i}, {j})")
    coeffs = {}
    for i, j, k in combinations(range(n), 3):
        c1, c2, c3 = t.entry(i, j)[k], t.entry(j, k)[i], t.entry(k, i)[j]
        if not c1 == c2 == c3:
            raise FormError(f"triple ({t.basis[i].name}, {t.basis[j].name}, {t.basis[k].name}) "
                            f"reads {fmt(c1)}, {fmt(c2)}, {fmt(c3)}: not alternating")
        if c1:
            coeffs[i, j, k] = c1
    return Trivector(n, coeffs, tuple(d.name for d in t.basis))


def table_from_trivector(w: Trivector, basis: tuple[DualClass, ...],
                         generators: tuple[Generator, ...]) -> ProductTable:
    """Read the product table back off a form by contraction."""
    n = w.dim
    units = [tuple(Fraction(int(a == b)) for b in range(n)) for a in range(n)]
    products = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                v = product(w, units[i], units[j])
                if any(v):
                    products[i, j] = v
    return ProductTable(tuple(basis), tuple(generators), products)


def intersection_form(g: PlumbingGraph) -> tuple[H1Basis, ProductTable, Trivector]:
    basis = h1_basis(g)
    table = product_table(g, basis)
    return basis, table, to_trivector(table)


def dual_coordinates(v, basis: H1Basis) -> dict[str, Fraction]:
    return {g.name: c for g, c in zip(basis.generators, vec(v)) if c}
