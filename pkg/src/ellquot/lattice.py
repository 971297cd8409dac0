"""Integral lattices, discriminant forms and overlattices.

Conventions: root lattices (A_k, D_k, E_k) are negative definite with
roots of norm -2, U is the hyperbolic plane, and <m> is the rank-one
lattice with a generator of norm m.  Vectors are coordinate columns in the
lattice basis; the dual lattice is G^{-1} Z^n.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .surfaces import GeometricFiber
from .weierstrass import FiberConfiguration, KodairaType

__all__ = [
    "LatticeError",
    "IntegralLattice",
    "FiniteQuadraticForm",
    "GlueVector",
    "build_lattice",
    "root_lattice",
    "smith_normal_form",
    "discriminant_form",
    "overlattice",
    "reducible_fibers",
    "component_node",
    "ns_from_fibration",
    "qforms_isomorphic",
    "transcendental_match",
]

Matrix = list[list[int]]


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact matrix helpers

def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise LatticeError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def signature(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) by symmetric congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if a[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j, which has norm 2 a_ij != 0 (diagonal zero)
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            k = i
        d = a[k][k]
        pos += d > 0
        neg += d < 0
        idx.remove(k)
        for i in idx:
            f = a[i][k] / d
            if f:
                for c in range(n):
                    a[i][c] -= f * a[k][c]
                for r in range(n):
                    a[r][i] -= f * a[r][k]
    return pos, neg, n - pos - neg


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return (diag, U, V) with U*M*V = diag(d_1 | d_2 | ...), U and V unimodular."""
    a = [list(r) for r in m]
    rows, cols = len(a), len(a[0]) if a else 0
    U, V = _identity(rows), _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, U, V


def hnf_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite basis of the Z-span of integer row vectors."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    basis = []
    col = 0
    while a and col < ncols:
        while True:
            nz = [r for r in a if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(ncols):
                    r[k] -= q * p[k]
            a = [r for r in a if any(r)]
        nz = [r for r in a if r[col]]
        if nz:
            p = nz[0]
            if p[col] < 0:
                p[:] = [-x for x in p]
            basis.append(p)
            a = [r for r in a if r is not p]
        col += 1
    return basis


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class IntegralLattice:
    gram: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return determinant(self.gram)

    @property
    def signature(self) -> tuple[int, int]:
        p, n, z = signature(self.gram)
        if z:
            raise LatticeError("degenerate lattice")
        return p, n

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def __add__(self, other: "IntegralLattice") -> "IntegralLattice":
        return direct_sum([self, other])

    def to_dict(self) -> dict:
        return {"name": self.name, "rank": self.rank, "gram": [list(r) for r in self.gram]}


def direct_sum(parts: Iterable[IntegralLattice]) -> IntegralLattice:
    parts = list(parts)
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        off += p.rank
    return IntegralLattice(tuple(map(tuple, g)), "+".join(p.name for p in parts if p.name))


def _dynkin_edges(kind: str, k: int) -> list[tuple[int, int]]:
    if kind == "A":
        if k < 1:
            raise LatticeError("A_k needs k >= 1")
        return [(i, i + 1) for i in range(1, k)]
    if kind == "D":
        if k < 4:
            raise LatticeError("D_k needs k >= 4")
        return [(i, i + 1) for i in range(1, k - 2)] + [(k - 2, k - 1), (k - 2, k)]
    if kind == "E":
        if k not in (6, 7, 8):
            raise LatticeError("E_k needs k in {6, 7, 8}")
        chain = [1, 3, 4, 5, 6, 7, 8][: k - 1]
        return list(zip(chain, chain[1:])) + [(2, 4)]
    raise LatticeError(f"unknown root system {kind!r}")


def root_lattice(kind: str, k: int) -> IntegralLattice:
    """Negative definite ADE lattice, nodes labelled 1..k (Bourbaki for E)."""
    edges = _dynkin_edges(kind, k)
    g = [[-2 if i == j else 0 for j in range(k)] for i in range(k)]
    for a, b in edges:
        g[a - 1][b - 1] = g[b - 1][a - 1] = 1
    return IntegralLattice(tuple(map(tuple, g)), f"{kind}{k}")


_U = IntegralLattice(((0, 1), (1, 0)), "U")


def build_lattice(spec: str | IntegralLattice | Sequence) -> IntegralLattice:
    """Build from text such as ``U+D5^2+A7``, ``<2>+<8>`` or ``A_1``."""
    if isinstance(spec, IntegralLattice):
        return spec
    if not isinstance(spec, str):
        return direct_sum(build_lattice(s) for s in spec)
    parts = []
    for raw in spec.replace(" ", "").split("+"):
        m = re.fullmatch(r"(?:(U)|([ADE])_?(\d+)|<(-?\d+)>)(?:\^(\d+))?", raw)
        if not m:
            raise LatticeError(f"invalid lattice spec {raw!r}")
        if m.group(1):
            piece = _U
        elif m.group(2):
            piece = root_lattice(m.group(2), int(m.group(3)))
        else:
            val = int(m.group(4))
            if val == 0:
                raise LatticeError("<0> is degenerate")
            piece = IntegralLattice(((val,),), f"<{val}>")
        rep = int(m.group(5)) if m.group(5) else 1
        if rep < 1:
            raise LatticeError("repetition must be positive")
        parts.extend([piece] * rep)
    return direct_sum(parts) if len(parts) > 1 else parts[0]


# ---------------------------------------------------------------------------
# discriminant forms

def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x // m)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Finite quadratic form on Z/d_1 x ... x Z/d_r (q mod 2, b mod 1)."""

    orders: tuple[int, ...]
    q: tuple[Fraction, ...]
    b: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = len(self.orders)
        object.__setattr__(self, "q", tuple(_mod(Fraction(x), 2) for x in self.q))
        object.__setattr__(self, "b", tuple(tuple(_mod(Fraction(x), 1) for x in row) for row in self.b))
        if len(self.q) != r or len(self.b) != r:
            raise LatticeError("inconsistent discriminant form data")

    @property
    def order(self) -> int:
        o = 1
        for d in self.orders:
            o *= d
        return o

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def qvalue(self, x: Sequence[int]) -> Fraction:
        s = Fraction(0)
        for i, xi in enumerate(x):
            s += xi * xi * self.q[i]
            for j in range(i + 1, len(x)):
                s += 2 * xi * x[j] * self.b[i][j]
        return _mod(s, 2)

    def bvalue(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        s = Fraction(0)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                s += xi * yj * self.b[i][j]
        return _mod(s, 1)

    def negate(self) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(self.orders, tuple(-x for x in self.q), tuple(tuple(-x for x in r) for r in self.b))

    def direct_sum(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        r, s = len(self.orders), len(other.orders)
        b = [[Fraction(0)] * (r + s) for _ in range(r + s)]
        for i in range(r):
            for j in range(r):
                b[i][j] = self.b[i][j]
        for i in range(s):
            for j in range(s):
                b[r + i][r + j] = other.b[i][j]
        return FiniteQuadraticForm(self.orders + other.orders, self.q + other.q, tuple(map(tuple, b)))

    def to_dict(self) -> dict:
        return {"orders": list(self.orders), "q": [str(x) for x in self.q]}


@dataclass(frozen=True)
class GlueVector:
    """Coordinates of a discriminant-group element in the generator basis."""

    coordinates: tuple[int, ...]


@dataclass(frozen=True)
class _DiscData:
    form: FiniteQuadraticForm
    generators: tuple[tuple[int, ...], ...]  # integer z with dual vector G^{-1} z
    U: Matrix
    diag: tuple[int, ...]


def _disc_data(L: IntegralLattice) -> _DiscData:
    if L.rank == 0 or L.det == 0:
        raise LatticeError("degenerate lattice has no discriminant form")
    diag, U, V = smith_normal_form([list(r) for r in L.gram])
    Uinv = inverse(U)
    Ginv = inverse(L.gram)
    keep = [i for i, d in enumerate(diag) if d > 1]
    gens = []
    for i in keep:
        col = [Uinv[r][i] for r in range(L.rank)]
        gens.append(tuple(int(c) for c in col))

    def pair(z1, z2):
        return sum(z1[i] * Ginv[i][j] * z2[j] for i in range(L.rank) for j in range(L.rank))

    q = tuple(pair(g, g) for g in gens)
    b = tuple(tuple(pair(g, h) for h in gens) for g in gens)
    form = FiniteQuadraticForm(tuple(diag[i] for i in keep), q, b)
    return _DiscData(form, tuple(gens), U, tuple(diag))


def discriminant_form(L: IntegralLattice) -> FiniteQuadraticForm:
    """q on L*/L from the Smith normal form of the Gram matrix."""
    return _disc_data(L).form


def _dual_vector(L: IntegralLattice, z: Sequence[int]) -> list[Fraction]:
    Ginv = inverse(L.gram)
    return [sum(Ginv[i][j] * z[j] for j in range(L.rank)) for i in range(L.rank)]


def glue_to_dual(L: IntegralLattice, glue: GlueVector) -> list[Fraction]:
    data = _disc_data(L)
    if len(glue.coordinates) != len(data.generators):
        raise LatticeError("glue coordinates do not match the discriminant group")
    z = [sum(c * g[i] for c, g in zip(glue.coordinates, data.generators)) for i in range(L.rank)]
    return _dual_vector(L, z)


def overlattice(L: IntegralLattice, glue: Sequence[GlueVector | Sequence[Fraction]]) -> IntegralLattice:
    """L + span(glue) for an isotropic glue subgroup, checked exactly."""
    n = L.rank
    vecs = []
    for gv in glue:
        v = glue_to_dual(L, gv) if isinstance(gv, GlueVector) else [Fraction(x) for x in gv]
        if len(v) != n:
            raise LatticeError("glue vector has the wrong length")
        vecs.append(v)
    if not vecs:
        return L
    G = L.gram

    def pair(x, y):
        return sum(x[i] * G[i][j] * y[j] for i in range(n) for j in range(n))

    for v in vecs:
        if any(sum(G[i][j] * v[j] for j in range(n)).denominator != 1 for i in range(n)):
            raise LatticeError("glue vector is not in the dual lattice")
    for a, v in enumerate(vecs):
        for w in vecs[a:]:
            if pair(v, w).denominator != 1:
                raise LatticeError("glue vectors pair non-integrally")
        qv = pair(v, v)
        if L.is_even and (qv.denominator != 1 or qv.numerator % 2):
            raise LatticeError(f"glue is not isotropic: q = {_mod(qv, 2)} mod 2Z")
    den = 1
    for v in vecs:
        for x in v:
            den = lcm(den, x.denominator)
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(x * den) for x in v] for v in vecs]
    basis = [[Fraction(x, den) for x in r] for r in hnf_basis(rows)]
    if len(basis) != n:
        raise LatticeError("glue span has the wrong rank")
    gram = [[pair(u, w) for w in basis] for u in basis]
    if any(x.denominator != 1 for r in gram for x in r):
        raise LatticeError("overlattice is not integral")
    M = IntegralLattice(tuple(tuple(int(x) for x in r) for r in gram), L.name + "+glue" if L.name else "")
    index_inv = abs(_fraction_det(basis))
    if M.det * index_inv.denominator ** 2 != L.det * index_inv.numerator ** 2 or index_inv.numerator != 1:
        raise LatticeError("determinant/index consistency check failed")
    return M


def overlattice_index(L: IntegralLattice, M: IntegralLattice) -> int:
    r = Fraction(L.det, M.det)
    from math import isqrt

    k = isqrt(r.numerator)
    if r.denominator != 1 or k * k != r.numerator:
        raise LatticeError("determinants are not related by a square index")
    return k


def _fraction_det(m):
    a = [list(r) for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


# ---------------------------------------------------------------------------
# Néron-Severi lattices of elliptic surfaces

def reducible_fibers(config: FiberConfiguration) -> list[GeometricFiber]:
    """One entry per geometric reducible fiber; labels match the torsion witnesses."""
    out = []
    for e in sorted(config.entries, key=lambda e: e.place.sort_key()):
        if not e.type.is_reducible:
            continue
        for j in range(e.point_count):
            label = str(e.place) if e.point_count == 1 else f"{e.place}[{j}]"
            out.append(GeometricFiber(label, e.type))
    return out


def _fiber_lattice(t: KodairaType) -> IntegralLattice:
    label = t.root_lattice
    return build_lattice(label)


def component_node(t: KodairaType, x: Sequence[int]) -> int | None:
    """Dynkin node (1-based) of the simple component x; None for the identity."""
    x = tuple(x)
    if not any(x):
        return None
    if t.symbol == "I":
        return x[0]
    if t.symbol == "I*":
        k = t.m + 4
        table = {(2,): 1, (1,): k - 1, (3,): k} if t.m % 2 else {(1, 0): 1, (0, 1): k - 1, (1, 1): k}
        return table[x]
    table = {
        "III": {(1,): 1},
        "IV": {(1,): 1, (2,): 2},
        "IV*": {(1,): 1, (2,): 6},
        "III*": {(1,): 7},
    }
    try:
        return table[t.symbol][x]
    except KeyError:
        raise LatticeError(f"component {x} is not a simple component of {t}") from None


def ns_from_fibration(
    config: FiberConfiguration,
    torsion_sections: Sequence[Mapping[str, Sequence[int] | Mapping]] = (),
) -> IntegralLattice:
    """U + fiber root lattices, glued by the given torsion sections.

    Each section is a map from fiber label to the component it meets (given
    as group coordinates, or a witness record with a ``component`` key).
    Fibers not listed are met in the identity component.
    """
    fibers = reducible_fibers(config)
    blocks = [_fiber_lattice(f.type) for f in fibers]
    L = direct_sum([_U] + blocks)
    offsets, off = {}, 2
    for f, b in zip(fibers, blocks):
        offsets[f.label] = (off, b)
        off += b.rank
    glue = []
    for sec in torsion_sections:
        z = [0] * L.rank
        for label, comp in sec.items():
            if isinstance(comp, Mapping):
                comp = comp["component"]
            if label not in offsets:
                raise LatticeError(f"unknown reducible fiber {label!r}")
            f = next(f for f in fibers if f.label == label)
            node = component_node(f.type, comp)
            if node is not None:
                z[offsets[label][0] + node - 1] = 1
        glue.append(_dual_vector(L, z))
    return overlattice(L, glue)


# ---------------------------------------------------------------------------
# form isomorphism and transcendental lattices

def _nontrivial(form: FiniteQuadraticForm) -> FiniteQuadraticForm:
    keep = [i for i, d in enumerate(form.orders) if d > 1]
    return FiniteQuadraticForm(
        tuple(form.orders[i] for i in keep),
        tuple(form.q[i] for i in keep),
        tuple(tuple(form.b[i][j] for j in keep) for i in keep),
    )


def qforms_isomorphic(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm, bound: int = 10 ** 4) -> bool:
    """Exhaustive search for a group isomorphism carrying q1 to q2."""
    q1, q2 = _nontrivial(q1), _nontrivial(q2)
    if q1.order > bound or q2.order > bound:
        raise LatticeError(f"group order exceeds the brute-force bound {bound}")
    if q1.order != q2.order:
        return False
    if sorted(q1.orders) != sorted(q2.orders):
        # invariant factors from SNF are canonical; compare as multisets of
        # elementary divisors to tolerate non-canonical input
        if _elementary(q1.orders) != _elementary(q2.orders):
            return False
    if q1.order == 1:
        return True
    targets = list(q2.elements())
    tq = {x: q2.qvalue(x) for x in targets}
    r = len(q1.orders)

    def order_in(form, x):
        o = 1
        for xi, d in zip(x, form.orders):
            o = lcm(o, d // gcd(xi, d))
        return o

    cand = []
    for i in range(r):
        d = q1.orders[i]
        cand.append([x for x in targets if d % order_in(q2, x) == 0 and tq[x] == q1.q[i] and order_in(q2, x) == d])
    images: list = []

    def extend(i):
        if i == r:
            span = set()
            for coeffs in q1.elements():
                y = tuple(
                    sum(c * im[k] for c, im in zip(coeffs, images)) % q2.orders[k] for k in range(len(q2.orders))
                )
                span.add(y)
            return len(span) == q2.order
        for x in cand[i]:
            if all(q2.bvalue(images[j], x) == q1.b[j][i] for j in range(i)):
                images.append(x)
                if extend(i + 1):
                    return True
                images.pop()
        return False

    return extend(0)


def _elementary(orders):
    out = []
    for d in orders:
        p = 2
        while d > 1:
            if d % p == 0:
                k = 1
                while d % p == 0:
                    d //= p
                    k *= p
                out.append(k)
            p += 1
    return sorted(out)


K3_RANK = 22
K3_SIGNATURE = (3, 19)


def transcendental_match(NS: IntegralLattice, T: IntegralLattice, ambient: str = "K3") -> bool:
    """Necessary-and-checkable conditions for T to be the complement of NS."""
    if ambient != "K3":
        raise LatticeError("only the K3 lattice is supported")
    if T.rank != K3_RANK - NS.rank:
        return False
    p, n = NS.signature
    if T.signature != (K3_SIGNATURE[0] - p, K3_SIGNATURE[1] - n):
        return False
    if abs(T.det) != abs(NS.det):
        return False
    return qforms_isomorphic(discriminant_form(T), discriminant_form(NS).negate())
