"""Independent reference computations used by the tests.

Nothing here calls into the package's linear algebra: ranks, determinants
and contractions are recomputed from scratch on plain lists of fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations


def rank(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    n_cols = len(a[0])
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def leibniz_det(m) -> Fraction:
    n = len(m)
    return sum((perm_sign(p) * _prod(Fraction(m[i][p[i]]) for i in range(n))
                for p in permutations(range(n))), Fraction(0))


def _prod(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def h1_rank_by_relations(g) -> int:
    """Rank of ``H_1(M; Q)`` from the full presentation of a graph manifold.

    Generators: a regular fiber ``t`` per node, ``alpha, beta`` per handle of
    an orientable base, ``delta_1 .. delta_g`` per nonorientable base and one
    loop ``gamma`` per independent cycle.  Relations: each orientable node
    gives ``-(sum a/b) t_i + sum(+-t_k) = 0`` over its incident edges; each
    nonorientable node gives ``2 sum(delta) - sum(+-t_k) = 0`` and
    ``2 t_i = 0``.
    """
    cols = []
    for n in g.nodes:
        cols.append(("t", n.id, 0))
        if n.genus >= 0:
            for j in range(n.genus):
                cols += [("alpha", n.id, j), ("beta", n.id, j)]
        else:
            cols += [("delta", n.id, j) for j in range(-n.genus)]
    loops = len(g.edges) - len(g.nodes) + 1
    cols += [("gamma", k, 0) for k in range(loops)]
    index = {c: i for i, c in enumerate(cols)}
    rows = []
    for n in g.nodes:
        row = [Fraction(0)] * len(cols)
        for e in g.edges:
            for here, there in (e.ends, e.ends[::-1]):
                if here == n.id:
                    row[index["t", there, 0]] += e.sign
        if n.genus >= 0:
            row[index["t", n.id, 0]] -= sum((Fraction(f.a, f.b) for f in n.fibers), Fraction(0))
            rows.append(row)
        else:
            row = [-x for x in row]
            for j in range(-n.genus):
                row[index["delta", n.id, j]] += 2
            rows.append(row)
            two = [Fraction(0)] * len(cols)
            two[index["t", n.id, 0]] = Fraction(2)
            rows.append(two)
    return len(cols) - rank(rows)


def form_value(coeffs: dict, x, y, z) -> Fraction:
    """``w(x, y, z)`` from sorted-triple coefficients by full expansion."""
    total = Fraction(0)
    for (i, j, k), c in coeffs.items():
        for p in permutations((i, j, k)):
            total += c * perm_sign([(i, j, k).index(v) for v in p]) * x[p[0]] * y[p[1]] * z[p[2]]
    return total


def unit(n, i):
    return [Fraction(int(j == i)) for j in range(n)]


def levi_civita_k(coeffs: dict) -> list[list[Fraction]]:
    """``K`` in dimension six as a full index contraction.

    ``K(x)^m = 1/12 sum_{s} sign(s) w(x, e_s1, e_s2) w(e_s3, e_s4, e_s5)`` over
    permutations ``s`` of ``0..5`` with ``s0 = m``; returned with column ``j``
    equal to ``K(e_j)``.
    """
    n = 6
    w = {}
    for t in permutations(range(n), 3):
        w[t] = form_value(coeffs, unit(n, t[0]), unit(n, t[1]), unit(n, t[2]))
    k = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for s in permutations(range(n)):
            a = w.get((j, s[1], s[2]), Fraction(0))
            if not a:
                continue
            b = w[(s[3], s[4], s[5])]
            if b:
                k[s[0]][j] += perm_sign(s) * a * b
    return [[x / 12 for x in row] for row in k]


def obstruction_product(n1, n4) -> list[Fraction]:
    """Coefficients of ``A..F`` in ``u . x`` for ``abc + aef + bde``, written out by hand."""
    _, a1, a2, a3, a4, a5, a6 = [None] + list(n1)
    _, b1, b2, b3, b4, b5, b6 = [None] + list(n4)
    return [
        a2 * b3 - a3 * b2 + a5 * b6 - a6 * b5,
        -a1 * b3 + a3 * b1 + a4 * b5 - a5 * b4,
        a1 * b2 - a2 * b1,
        -a2 * b5 + a5 * b2,
        -a1 * b6 + a6 * b1 + a2 * b4 - a4 * b2,
        a1 * b5 - a5 * b1,
    ]


# multiplication table of abc + aef + bde, transcribed by hand: x . y as a signed dual letter
OBSTRUCTION_TABLE = {
    "ab": "C", "ac": "-B", "ad": "0", "ae": "F", "af": "-E", "bc": "A", "bd": "E",
    "be": "-D", "bf": "0", "cd": "0", "ce": "0", "cf": "0", "de": "B", "df": "0", "ef": "A",
}


def spanning_check(labels, edges, tree) -> bool:
    """``tree`` (edge indices) is acyclic and touches every node."""
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i in tree:
        u, v = edges[i].ends
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return len({find(x) for x in labels}) == 1


def pairs(n):
    return list(combinations(range(n), 2))
