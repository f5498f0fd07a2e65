"""Connected sums of rings for tree graph manifolds.

Each orientable node ``i`` of genus ``g`` contributes the intersection ring of
``closed surface x S^1``: curves ``alpha_j, beta_j, t``, surfaces
``A_j, B_j`` and the torus class over the base, with
``A_j . B_j = t``, ``A_j . P = -beta_j``, ``B_j . P = alpha_j``.

The blocks are glued by a fiber product over ``T = Q[F]/<F^2>``: the map
``eps_i`` sends the torus class of block ``i`` to ``F / c_i``, where ``c`` is
the null vector of the connectivity matrix, so the only torus tuple that
survives is ``(c_1 P_1, ..., c_n P_n)``.  The quotient then identifies the
fundamental classes and rewrites each block fiber ``t_i`` as ``c_i t``.

With several surviving fibers the target ring is taken to be
``Q[F_1, ..., F_r]/<F_a F_b>`` with one shared surface per fiber; this is an
extension of the one-fiber construction and is flagged in the output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import RatMatrix, Vector, fmt
from .homology import H1Basis, SurfaceRecipe, h1_basis, kernel_surfaces
from .intersection import product_table, to_trivector
from .plumbing import PlumbingGraph, ValidationError
from .trivector import Trivector, basis_change, pullback


@dataclass(frozen=True)
class BlockRing:
    """Intersection ring of ``closed genus-g surface x S^1``.

    Surfaces are indexed ``A_1, B_1, ..., A_g, B_g, P`` and curves
    ``alpha_1, beta_1, ..., alpha_g, beta_g, t`` so that each surface is
    dual to the curve in the same slot.
    """

    label: str
    genus: int

    @property
    def ranks(self) -> tuple[int, int, int, int]:
        n = 2 * self.genus + 1
        return 1, n, n, 1

    def surfaces(self) -> list[str]:
        out = []
        for j in range(1, self.genus + 1):
            out += [f"A{j}", f"B{j}"]
        return out + [self.label]

    def curves(self) -> list[str]:
        out = []
        for j in range(1, self.genus + 1):
            out += [f"alpha{j}", f"beta{j}"]
        return out + ["t"]

    def product(self, i: int, j: int) -> Vector:
        """Intersection of surfaces ``i`` and ``j`` over the curve basis."""
        n = 2 * self.genus + 1
        out = [Fraction(0)] * n
        p = n - 1
        if i == j:
            return tuple(out)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        if j == p and i < p:
            # A . P = -beta, B . P = alpha
            out[i + 1 if i % 2 == 0 else i - 1] = Fraction(-sign if i % 2 == 0 else sign)
        elif i % 2 == 0 and j == i + 1:
            out[p] = Fraction(sign)
        return tuple(out)

    def trivector(self) -> Trivector:
        n = 2 * self.genus + 1
        return Trivector(n, {(2 * j, 2 * j + 1, n - 1): 1 for j in range(self.genus)},
                         tuple(self.surfaces()))


@dataclass(frozen=True)
class GluePattern:
    """Fiber-product data.

    ``epsilon[label][f]`` is the multiple of ``F_f`` that block ``label``'s
    torus class maps to; ``surfaces[f]`` is the shared torus tuple, i.e. the
    multiplicity of each block's torus class in the surface dual to ``F_f``.
    """

    target: str
    fibers: tuple[str, ...]
    epsilon: dict[str, tuple[Fraction, ...]]
    surfaces: tuple[dict[str, Fraction], ...]
    iota: tuple[tuple[str, str], ...]
    fiber_identifications: dict[str, tuple[Fraction, ...]]
    extension: bool = False

    def compatible(self) -> bool:
        """Every shared tuple lies in the fiber product, and eps kills ``M``.

        The fundamental classes sit in top degree and map to zero in every
        target, so ``eps_i iota_i = 0`` for all blocks.
        """
        for f, tup in enumerate(self.surfaces):
            for lab, c in tup.items():
                e = self.epsilon[lab][f]
                if c and c * e != 1:
                    return False
                if not c and e:
                    return False
        return True


@dataclass(frozen=True)
class RingPresentation:
    blocks: tuple[BlockRing, ...]
    glue: GluePattern
    relations: tuple[str, ...] = field(default=())

    def generating_set(self) -> list[str]:
        """Generators of the fiber product before taking the quotient."""
        gens = ["(1)"]
        for b in self.blocks:
            gens += [f"{s}_{b.label}" for s in b.surfaces()[:-1]]
        for tup in self.glue.surfaces:
            gens.append("(" + ", ".join(_linear([tup.get(b.label, Fraction(0))], [b.label])
                                        for b in self.blocks) + ")")
        for b in self.blocks:
            gens += [f"{c}_{b.label}" for c in b.curves()]
        gens += [f"M_{b.label}" for b in self.blocks]
        return gens

    def quotient_basis(self) -> list[str]:
        names = []
        for b in self.blocks:
            names += [f"{s}_{b.label}" for s in b.surfaces()[:-1]]
        names += ["F" if len(self.glue.fibers) == 1 else f"F_{f}" for f in self.glue.fibers]
        return names

    def ranks(self) -> tuple[int, int, int, int]:
        n1 = sum(2 * b.genus for b in self.blocks) + len(self.glue.fibers)
        return 1, n1, n1, 1

    def to_json(self) -> dict:
        return {
            "target": self.glue.target,
            "extension": self.glue.extension,
            "blocks": [{"label": b.label, "genus": b.genus, "ranks": list(b.ranks)}
                       for b in self.blocks],
            "epsilon": {k: [fmt(x) for x in v] for k, v in self.glue.epsilon.items()},
            "shared_surfaces": [{k: fmt(v) for k, v in tup.items() if v}
                                for tup in self.glue.surfaces],
            "fiber_identifications": {k: [fmt(x) for x in v]
                                      for k, v in self.glue.fiber_identifications.items()},
            "fundamental_classes": [list(p) for p in self.glue.iota],
            "relations": list(self.relations),
            "ranks": list(self.ranks()),
        }


def _linear(coeffs, names) -> str:
    out = ""
    for c, n in zip(coeffs, names):
        if not c:
            continue
        mag = "" if abs(c) == 1 else fmt(abs(c))
        out += (" - " if c < 0 else " + ") + mag + n
    if not out:
        return "0"
    return out[3:] if out.startswith(" + ") else "-" + out[3:]


def _require_orientable_tree(g: PlumbingGraph):
    if not g.is_tree():
        raise ValidationError("tree", "graph has a cycle; connected sums need a tree")
    bad = [n.id for n in g.nodes if not n.orientable]
    if bad:
        raise ValidationError("orientable", "nonorientable base at " + ", ".join(bad))


def build_connected_sum(g: PlumbingGraph, basis: H1Basis | None = None,
                        surfaces: list[SurfaceRecipe] | None = None) -> RingPresentation:
    _require_orientable_tree(g)
    if basis is None:
        basis = h1_basis(g)
    if surfaces is None:
        surfaces = kernel_surfaces(g, basis)
    blocks = tuple(BlockRing(n.id, n.genus) for n in g.nodes)
    fibers = basis.surviving
    coeffs = [s.coefficients() for s in surfaces]
    shared = tuple({b.label: c.get(b.label, Fraction(0)) for b in blocks} for c in coeffs)
    eps = {b.label: tuple(Fraction(1) / t[b.label] if t[b.label] else Fraction(0)
                          for t in shared) for b in blocks}
    iota = tuple((blocks[i].label, blocks[i + 1].label) for i in range(len(blocks) - 1))
    ident = {b.label: basis.fiber_expression[b.label] for b in blocks}

    if not fibers:
        target = "Q"
    elif len(fibers) == 1:
        target = "Q[F]/<F^2>"
    else:
        target = f"Q[F_1..F_{len(fibers)}]/<F_a F_b>"
    # the one-fiber fiber product only sees the shared tuple when no block is
    # missing from it; otherwise the extended target is in use
    extension = len(fibers) > 1 or any(not v for t in shared for v in t.values())

    names = ["t" if len(fibers) == 1 else f"t_{f}" for f in fibers]
    rels = []
    for b in blocks:
        rels.append(f"t_{b.label} = " + _linear(ident[b.label], names))
    rels += [f"M_{u} = M_{v}" for u, v in iota]
    glue = GluePattern(target, fibers, eps, shared, iota, ident, extension)
    return RingPresentation(blocks, glue, tuple(rels))


def presentation_to_trivector(p: RingPresentation) -> Trivector:
    """The form of the quotient ring in its basis (block ``A, B``, then shared surfaces).

    The connected-sum form is the sum over blocks of each block form pulled
    back along the inclusion of the quotient surfaces into that block: block
    ``A, B`` classes map to themselves and each shared surface maps to its
    multiple of the block torus class.
    """
    names = p.quotient_basis()
    n = len(names)
    r = len(p.glue.fibers)
    total = Trivector(n, {})
    offset = 0
    for b in p.blocks:
        k = 2 * b.genus + 1
        rows = [[Fraction(0)] * n for _ in range(k)]
        for j in range(2 * b.genus):
            rows[j][offset + j] = Fraction(1)
        for f in range(r):
            rows[k - 1][n - r + f] = p.glue.surfaces[f][b.label]
        total = total + pullback(b.trivector(), RatMatrix.from_rows(rows, cols=n))
        offset += 2 * b.genus
    return Trivector(n, dict(((i, j, k), c) for i, j, k, c in total.terms()), tuple(names))


@dataclass(frozen=True)
class ConnectedSumCheck:
    matches: bool
    basis_map: tuple[int, ...]
    mismatch: tuple | None
    presentation: RingPresentation
    direct: Trivector
    connected_sum: Trivector

    def to_json(self) -> dict:
        out = {
            "matches": self.matches,
            "basis_map": {self.direct.labels[j]: self.connected_sum.labels[i]
                          for j, i in enumerate(self.basis_map)},
            "presentation": self.presentation.to_json(),
        }
        if self.mismatch:
            i, j, k, want, got = self.mismatch
            out["first_mismatch"] = {"triple": [i, j, k], "direct": fmt(want), "connected_sum": fmt(got)}
        return out


def check_connected_sum(g: PlumbingGraph) -> ConnectedSumCheck:
    """Compare the connected-sum form with the directly computed one.

    The basis map sends each dual class of the direct computation to the
    quotient class with the same provenance (node and index, or fiber).
    """
    _require_orientable_tree(g)
    basis = h1_basis(g)
    surfaces = kernel_surfaces(g, basis)
    pres = build_connected_sum(g, basis, surfaces)
    cs = presentation_to_trivector(pres)
    direct = to_trivector(product_table(g, basis, surfaces))

    slot = {}
    offset = 0
    for b in pres.blocks:
        for j in range(1, b.genus + 1):
            slot["alpha", b.label, j] = offset + 2 * j - 2
            slot["beta", b.label, j] = offset + 2 * j - 1
        offset += 2 * b.genus
    for f, lab in enumerate(pres.glue.fibers):
        slot["fiber", lab, 1] = offset + f
    perm = tuple(slot[x.kind, x.source, x.index] for x in basis.generators)
    n = len(perm)
    m = RatMatrix.from_rows([[int(perm[j] == i) for j in range(n)] for i in range(n)], cols=n)
    moved = basis_change(cs, m) if n else cs

    mismatch = None
    keys = sorted(set(moved.coeffs) | set(direct.coeffs))
    for key in keys:
        if moved[key] != direct[key]:
            mismatch = (*key, direct[key], moved[key])
            break
    return ConnectedSumCheck(mismatch is None, perm, mismatch, pres, direct, cs)
