"""Alternating 3-forms over Q and the summand-splitting questions about them.

A closed oriented 3-manifold's intersection ring is the alternating
trilinear form ``w(x, y, z)`` on ``H_2`` given by triple intersection.  The
product of two surfaces is the covector ``w(x, y, .)`` in ``H_1``.

Splitting off an ``S^1 x S^2`` summand is detected by the radical of ``w``.
In dimension six, splitting into two ``T^3`` summands (``uvw + xyz``) is
decided by the endomorphism ``K(x) = vol^{-1}(i_x w ^ w)``, whose square is a
scalar ``q``; the form splits over Q exactly when ``q`` is a nonzero rational
square, and then the two eigenspaces of ``K`` carry the two summands.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .exactlin import RatMatrix, Vector, frac, fmt, free_column_kernel, kernel, rref, vec

_LETTER_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?([A-Za-z]+)")
Triple = tuple[int, int, int]


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _det3(x, y, z, i, j, k) -> Fraction:
    return (x[i] * (y[j] * z[k] - y[k] * z[j])
            - x[j] * (y[i] * z[k] - y[k] * z[i])
            + x[k] * (y[i] * z[j] - y[j] * z[i]))


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class Trivector:
    """Element of the third exterior power, stored on sorted triples.

    Only nonzero coefficients are kept; ``coeffs[(i, j, k)]`` with
    ``i < j < k`` is the value of the form on ``(e_i, e_j, e_k)``.
    """

    dim: int
    coeffs: Mapping[Triple, Fraction] = field(default_factory=dict)
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        clean = {}
        for t, c in dict(self.coeffs).items():
            c = frac(c)
            if len(t) != 3 or len(set(t)) != 3:
                raise FormError(f"bad index triple {t}")
            if not all(0 <= i < self.dim for i in t):
                raise FormError(f"index triple {t} out of range for dimension {self.dim}")
            s = _perm_sign(t)
            key = tuple(sorted(t))
            clean[key] = clean.get(key, Fraction(0)) + s * c
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(clean.items()) if v})
        if self.labels is not None and len(self.labels) != self.dim:
            raise FormError("label count does not match dimension")

    @classmethod
    def from_terms(cls, dim: int, terms: Iterable, labels=None) -> "Trivector":
        """Build from ``(i, j, k, coeff)`` tuples; repeated triples add up."""
        acc: dict[Triple, Fraction] = {}
        for i, j, k, c in terms:
            w = Trivector(dim, {(i, j, k): c})
            for key, v in w.coeffs.items():
                acc[key] = acc.get(key, Fraction(0)) + v
        return cls(dim, acc, labels)

    @classmethod
    def from_letters(cls, text: str, alphabet: str = "abcdef") -> "Trivector":
        """Parse ``"abc + aef - 2 bde"`` style sums of letter triples."""
        body = text.replace(" ", "")
        if not body:
            return cls(len(alphabet), {}, tuple(alphabet))
        terms = []
        pos = 0
        while pos < len(body):
            m = _LETTER_TERM.match(body, pos)
            if m is None or (pos and not m.group(1)):
                raise FormError(f"cannot parse form at {body[pos:]!r}")
            sign, num, word = m.group(1), m.group(2), m.group(3)
            if len(word) != 3 or any(ch not in alphabet for ch in word):
                raise FormError(f"bad term {m.group(0)!r} for alphabet {alphabet!r}")
            coeff = frac(num) if num else Fraction(1)
            if sign == "-":
                coeff = -coeff
            terms.append((*(alphabet.index(ch) for ch in word), coeff))
            pos = m.end()
        return cls.from_terms(len(alphabet), terms, tuple(alphabet))

    def __getitem__(self, t: Triple) -> Fraction:
        if len(set(t)) < 3:
            return Fraction(0)
        return _perm_sign(t) * self.coeffs.get(tuple(sorted(t)), Fraction(0))

    def __call__(self, x, y, z) -> Fraction:
        x, y, z = vec(x), vec(y), vec(z)
        return sum((c * _det3(x, y, z, i, j, k) for (i, j, k), c in self.coeffs.items()), Fraction(0))

    def __add__(self, other: "Trivector") -> "Trivector":
        self._check_dim(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Trivector(self.dim, out, self.labels)

    def __neg__(self) -> "Trivector":
        return Trivector(self.dim, {k: -v for k, v in self.coeffs.items()}, self.labels)

    def __sub__(self, other: "Trivector") -> "Trivector":
        return self + (-other)

    def scale(self, c) -> "Trivector":
        c = frac(c)
        return Trivector(self.dim, {k: c * v for k, v in self.coeffs.items()}, self.labels)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise FormError(f"dimension mismatch {self.dim} vs {other.dim}")

    def terms(self) -> list[tuple[int, int, int, Fraction]]:
        return [(i, j, k, c) for (i, j, k), c in self.coeffs.items()]

    def to_json(self) -> dict:
        doc = {"dim": self.dim, "terms": [[i, j, k, fmt(c)] for i, j, k, c in self.terms()]}
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        return doc

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "Trivector":
        if isinstance(doc, str):
            doc = json.loads(doc)
        dim = int(doc["dim"])
        terms = []
        for t in doc.get("terms", []):
            i, j, k, c = t
            if not (0 <= i < j < k < dim):
                raise FormError(f"term indices must be strictly increasing and below dim: {t}")
            terms.append((int(i), int(j), int(k), frac(c)))
        labels = tuple(doc["labels"]) if "labels" in doc else None
        return cls.from_terms(dim, terms, labels)

    def pretty(self) -> str:
        if not self.coeffs:
            return "0"
        names = self.labels or tuple(f"e{i}" for i in range(self.dim))
        out = []
        for (i, j, k), c in self.coeffs.items():
            mono = f"{names[i]}^{names[j]}^{names[k]}"
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            out.append(f"{sign} {mono}" if mag == 1 else f"{sign} {fmt(mag)} {mono}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ------------------------------------------------------------ products

def product(w: Trivector, x, y) -> Vector:
    """The covector ``w(x, y, .)``: the product of two ``H_2`` classes in ``H_1``."""
    x, y = vec(x), vec(y)
    if len(x) != w.dim or len(y) != w.dim:
        raise FormError(f"vectors must have length {w.dim}")
    out = [Fraction(0)] * w.dim
    for (i, j, k), c in w.coeffs.items():
        # w(x, y, e_m) for m in the triple, via the alternating sign of (p, q, m)
        out[k] += c * (x[i] * y[j] - x[j] * y[i])
        out[j] -= c * (x[i] * y[k] - x[k] * y[i])
        out[i] += c * (x[j] * y[k] - x[k] * y[j])
    return tuple(out)


def contract(w: Trivector, x) -> dict[tuple[int, int], Fraction]:
    """The 2-form ``w(x, ., .)`` on sorted pairs."""
    x = vec(x)
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j, k), c in w.coeffs.items():
        for m, pair, s in ((i, (j, k), 1), (j, (i, k), -1), (k, (i, j), 1)):
            if x[m]:
                out[pair] = out.get(pair, Fraction(0)) + s * c * x[m]
    return {k: v for k, v in out.items() if v}


def pullback(w: Trivector, m: RatMatrix) -> Trivector:
    """``w^M(x, y, z) = w(Mx, My, Mz)`` for an ``n x m`` matrix ``M``."""
    if m.rows != w.dim:
        raise FormError(f"matrix has {m.rows} rows, form has dimension {w.dim}")
    cols = [m.col(j) for j in range(m.cols)]
    out = {}
    for a, b, c in combinations(range(m.cols), 3):
        val = w(cols[a], cols[b], cols[c])
        if val:
            out[a, b, c] = val
    return Trivector(m.cols, out)


def basis_change(w: Trivector, n: RatMatrix) -> Trivector:
    """Express ``w`` in the basis given by the columns of ``n``."""
    if n.rows != n.cols or n.rows != w.dim:
        raise FormError(f"basis change must be {w.dim}x{w.dim}")
    if n.det() == 0:
        raise FormError("basis change matrix is singular")
    return pullback(w, n)


def _wedge(f: Mapping[tuple, Fraction], g: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for a, x in f.items():
        for b, y in g.items():
            if set(a) & set(b):
                continue
            idx = a + b
            key = tuple(sorted(idx))
            out[key] = out.get(key, Fraction(0)) + _perm_sign(idx) * x * y
    return {k: v for k, v in out.items() if v}


def wedge(w: Trivector, v) -> dict[tuple, Fraction]:
    """``w ^ v`` for a covector ``v``, as a sparse 4-form."""
    one = {(i,): c for i, c in enumerate(vec(v)) if c}
    return _wedge(w.coeffs, one)


# ------------------------------------------------------------ radical

def radical(w: Trivector) -> list[tuple[int, ...]]:
    """Basis of ``{x : w(x, ., .) = 0}`` as primitive integer vectors."""
    n = w.dim
    pairs = list(combinations(range(n), 2))
    rows = [[w[i, j, k] for i in range(n)] for j, k in pairs]
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return kernel(RatMatrix.from_rows(rows, cols=n))


def _complement(basis: Sequence[Sequence], n: int) -> tuple[list[int], RatMatrix]:
    """Coordinate complement of a subspace and the projection onto it."""
    if not basis:
        return list(range(n)), RatMatrix.identity(n)
    r, piv = rref(RatMatrix.from_rows([vec(b) for b in basis], cols=n))
    keep = [i for i in range(n) if i not in piv]
    proj = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for row_i, p in enumerate(piv):
        rv = r.row(row_i)
        for i in range(n):
            proj[i][p] -= rv[i]
    return keep, RatMatrix.from_rows(proj, cols=n)


# ------------------------------------------------------------ decomposables

@dataclass(frozen=True)
class Decomposition:
    decomposable: bool
    support: tuple[Vector, ...]
    factors: tuple[Vector, Vector, Vector] | None = None


def support(w: Trivector) -> tuple[Vector, ...]:
    """Basis of the span of all double contractions ``w(e_i, e_j, .)``."""
    n = w.dim
    rows = [product(w, _unit(n, i), _unit(n, j)) for i, j in combinations(range(n), 2)]
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    red, piv = rref(RatMatrix.from_rows(rows, cols=n))
    return tuple(red.row(i) for i in range(len(piv)))


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def decomposable_form(u, v, x) -> Trivector:
    u, v, x = vec(u), vec(v), vec(x)
    n = len(u)
    out = {}
    for i, j, k in combinations(range(n), 3):
        d = _det3(u, v, x, i, j, k)
        if d:
            out[i, j, k] = d
    return Trivector(n, out)


def is_decomposable(w: Trivector) -> Decomposition:
    """Decide whether ``w = u ^ v ^ x`` and return the factors if so."""
    if w.is_zero():
        raise FormError("the zero form has no decomposability verdict")
    sup = support(w)
    if len(sup) != 3 or any(wedge(w, s) for s in sup):
        return Decomposition(False, sup)
    u, v, x = sup
    base = decomposable_form(u, v, x)
    key = next(iter(w.coeffs))
    lam = w.coeffs[key] / base.coeffs[key]
    factors = (tuple(lam * c for c in u), v, x)
    assert decomposable_form(*factors) == w
    return Decomposition(True, sup, factors)


# ------------------------------------------------------------ rank-3 splitting

def k_endomorphism(w: Trivector) -> RatMatrix:
    """Matrix of ``K(x) = vol^{-1}(i_x w ^ w)`` in dimension six.

    ``vol`` is the standard volume ``e_0 ^ ... ^ e_5``; column ``j`` is
    ``K(e_j)``.
    """
    if w.dim != 6:
        raise FormError("K is defined here for dimension 6 only")
    full = tuple(range(6))
    cols = []
    for j in range(6):
        five = _wedge(contract(w, _unit(6, j)), w.coeffs)
        y = []
        for m in range(6):
            rest = full[:m] + full[m + 1:]
            # i_{e_m} vol = (-1)^m e_rest
            y.append((-1) ** m * five.get(rest, Fraction(0)))
        cols.append(y)
    return RatMatrix.from_columns(cols, rows=6)


def split_invariant(w: Trivector) -> Fraction:
    """``q`` with ``K^2 = q * I``; scales by ``det(N)^2`` under basis change."""
    k = k_endomorphism(w)
    k2 = k @ k
    return sum((k2[i, i] for i in range(6)), Fraction(0)) / 6


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


SPLITS = "splits"
DOES_NOT_SPLIT = "does-not-split"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class SplitReport:
    dim: int
    radical_dim: int
    radical_basis: tuple[tuple[int, ...], ...]
    verdict: str
    q: Fraction | None = None
    degenerate: bool = False
    witness: tuple[Trivector, Trivector] | None = None
    note: str = ""

    def to_json(self) -> dict:
        doc = {
            "dim": self.dim,
            "radical_dim": self.radical_dim,
            "radical_basis": [list(v) for v in self.radical_basis],
            "rank3_verdict": self.verdict,
            "q": None if self.q is None else fmt(self.q),
            "degenerate": self.degenerate,
            "note": self.note,
        }
        if self.witness is not None:
            doc["witness"] = [d.to_json() for d in self.witness]
        return doc


def _split_core(w: Trivector):
    k = k_endomorphism(w)
    k2 = k @ k
    q = sum((k2[i, i] for i in range(6)), Fraction(0)) / 6
    if k2 != RatMatrix.identity(6).scale(q):
        raise AssertionError("K^2 is not scalar; the endomorphism is miscomputed")
    if q == 0:
        return q, True, None, "q = 0: degenerate orbit, never of type uvw + xyz"
    s = rational_sqrt(q)
    if s is None:
        why = "q < 0: splits only over a complex quadratic extension" if q < 0 else \
            "q is not a rational square: splits only over Q(sqrt q)"
        return q, False, None, why
    eye = RatMatrix.identity(6)
    plus = list(free_column_kernel(k - eye.scale(s)).values())
    minus = list(free_column_kernel(k + eye.scale(s)).values())
    assert len(plus) == 3 and len(minus) == 3
    basis = RatMatrix.from_columns(plus + minus, rows=6)
    inv = basis.inverse()
    witness = []
    for keep in (range(3), range(3, 6)):
        d = RatMatrix.from_rows([[Fraction(int(i == j and i in keep)) for j in range(6)]
                                 for i in range(6)], cols=6)
        witness.append(pullback(w, basis @ d @ inv))
    return q, False, (witness[0], witness[1]), "eigenspaces of K give the two summands"


def rank3_split_dim6(w: Trivector) -> SplitReport:
    """Decide whether a radical-free 6-dimensional form is ``uvw + xyz`` over Q."""
    if w.dim != 6:
        raise FormError(f"rank-3 splitting is decided in dimension 6, got {w.dim}")
    rad = radical(w)
    if rad:
        raise FormError("form has a nonzero radical; strip rank-1 summands first")
    q, degenerate, witness, note = _split_core(w)
    if witness is not None:
        witness = tuple(Trivector(6, d.coeffs, w.labels) for d in witness)
    verdict = SPLITS if witness is not None else DOES_NOT_SPLIT
    return SplitReport(6, 0, (), verdict, q, degenerate, witness, note)


def analyze(w: Trivector) -> SplitReport:
    """Radical, then the rank-3 question on the radical-free quotient if it is 6-dimensional."""
    rad = radical(w)
    keep, proj = _complement(rad, w.dim)
    if len(keep) != 6:
        return SplitReport(w.dim, len(rad), tuple(rad), NOT_APPLICABLE,
                           note=f"radical-free quotient has dimension {len(keep)}, not 6")
    sel = RatMatrix.from_columns([_unit(w.dim, i) for i in keep], rows=w.dim)
    quotient = pullback(w, sel)
    q, degenerate, witness, note = _split_core(quotient)
    if witness is not None:
        # carry summands back: first project along the radical, then read coordinates
        back = RatMatrix.from_rows([proj.row(i) for i in keep], cols=w.dim)
        witness = tuple(pullback(d, back) for d in witness)
    if witness is not None:
        witness = tuple(Trivector(w.dim, d.coeffs, w.labels) for d in witness)
    verdict = SPLITS if witness is not None else DOES_NOT_SPLIT
    return SplitReport(w.dim, len(rad), tuple(rad), verdict, q, degenerate, witness, note)


@dataclass(frozen=True)
class Obstruction:
    obstructed: bool
    reason: str
    report: SplitReport

    def to_json(self) -> dict:
        return {"obstructed": self.obstructed, "reason": self.reason, "analysis": self.report.to_json()}


def obstruct(w: Trivector) -> Obstruction:
    """Does this intersection form rule out homology cobordism to a tree graph manifold?

    A rank-6 tree graph manifold always splits a rank-1 or a rank-3 summand,
    so a radical-free 6-dimensional form with no ``uvw + xyz`` splitting is
    an obstruction.  Anything else is inconclusive for this invariant.
    """
    rep = analyze(w)
    if rep.radical_dim:
        return Obstruction(False, f"splits {rep.radical_dim} rank-1 summand(s)", rep)
    if w.dim != 6:
        return Obstruction(False, f"rank {w.dim} is outside the rank-6 criterion", rep)
    if rep.verdict == SPLITS:
        return Obstruction(False, "splits two rank-3 summands", rep)
    return Obstruction(True, "no rank-1 and no rank-3 summand: not homology cobordant "
                             "to any tree graph manifold", rep)


# ------------------------------------------------------------ parallelism refuter

_PAIRS = ((0, 1), (1, 4), (0, 4))   # coordinates (a, b), (b, e), (a, e)


@dataclass(frozen=True)
class ParallelismReport:
    opp_para_violations: tuple[tuple[int, int, tuple[int, int]], ...]
    all_para_pairs: tuple[tuple[int, int], ...]
    zero_products_required: tuple[tuple[int, int], ...]
    missing_duals: tuple[int, ...]
    product_span_rank: int

    @property
    def opp_para_holds(self) -> bool:
        return not self.opp_para_violations


def _parallel(r, s, p, q) -> bool:
    return r[p] * s[q] - r[q] * s[p] == 0


def opp_para_check(rows: Sequence[Sequence], w: Trivector | None = None) -> ParallelismReport:
    """Evaluate the 2x2 parallelism conditions for candidate ``u, v, w, x, y, z``.

    ``rows[i]`` expresses the i-th new basis vector in ``a, ..., f``.  If
    ``w`` is given, also record which of the required-zero products
    ``{u,v,w} . {x,y,z}`` vanish, which duals among ``B, C, F`` never occur
    in any product, and the rank of the span of all products.
    """
    rows = [vec(r) for r in rows]
    if len(rows) != 6 or any(len(r) != 6 for r in rows):
        raise FormError("expected six coefficient vectors of length 6")
    bad = []
    for i in range(3):
        for j in range(3, 6):
            for p, q in _PAIRS:
                if not _parallel(rows[i], rows[j], p, q):
                    bad.append((i, j, (p, q)))
    allp = tuple((p, q) for p, q in _PAIRS
                 if all(_parallel(rows[i], rows[j], p, q) for i in range(6) for j in range(6)))
    zeros: list[tuple[int, int]] = []
    missing: tuple[int, ...] = ()
    rank = 0
    if w is not None:
        prods = {(i, j): product(w, rows[i], rows[j]) for i, j in combinations(range(6), 2)}
        zeros = [(i, j) for i in range(3) for j in range(3, 6) if not any(prods[i, j])]
        missing = tuple(k for k in (1, 2, 5) if all(p[k] == 0 for p in prods.values()))
        rank = RatMatrix.from_rows(list(prods.values()), cols=6).rank()
    return ParallelismReport(tuple(bad), allp, tuple(zeros), missing, rank)
