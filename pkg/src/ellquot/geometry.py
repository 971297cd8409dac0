"""The curves C_(n), the quotients Y_(n)^(l) and the computations built on them.

C_(n) is the hyperelliptic curve u^n = v^2 - 1 (affine w = 1) with the
automorphism alpha: u -> zeta_n u.  G_(n)^(l) is the kernel of the sum map
on (Z/n)^l acting factorwise through alpha; Y_(n)^(l) is the quotient of
the l-fold product.  Local weights are exponents of the action on a local
parameter at a point with nontrivial stabilizer.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .algebra import MultiPoly, parse_poly
from .surfaces import (
    shioda_tate_rank,
    surface_invariants,
    torsion_feasibility,
    trivial_lattice_excess,
)
from .weierstrass import (
    FiberConfiguration,
    KodairaType,
    WeierstrassModel,
    classify_all,
    parse_configuration,
    weierstrass_invariants,
)

__all__ = [
    "GeometryError",
    "SpecialPoint",
    "CurveData",
    "curve_data",
    "hodge_h_i0",
    "SingularPointRecord",
    "singular_points_Y2",
    "hj_string",
    "evaluate_hj",
    "ResolutionGraph",
    "resolution_fiber_graphs",
    "full_resolution_graph",
    "Equation",
    "Relation",
    "EquationBundle",
    "cover_equation",
    "curve_product_bundle",
    "family_weierstrass",
    "z_model",
    "r_model",
    "substitution_check",
    "structural_identities",
    "s_t_model",
    "delta_s_t",
    "k3_fiber_report",
    "FIBRATION_TABLE",
    "fibration_table_check",
    "canonical_triviality_check",
    "weierstrass_multidegrees",
    "kodaira_bound_chain",
]


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the curve C_(n)

@dataclass(frozen=True)
class SpecialPoint:
    label: str
    stabilizer_order: int
    weight: int  # generator alpha^(n/k) acts on a local parameter by zeta_k^weight


@dataclass(frozen=True)
class CurveData:
    n: int
    genus: int
    stated_genus: int
    special_points: tuple[SpecialPoint, ...]
    notes: tuple[str, ...] = ()

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    @property
    def genus_flagged(self) -> bool:
        return self.genus != self.stated_genus

    def point(self, label: str) -> SpecialPoint:
        return next(p for p in self.special_points if p.label == label)

    def alpha(self, label: str) -> str:
        """Image of a special point under alpha."""
        if label == "P_inf^1":
            return "P_inf^2"
        if label == "P_inf^2":
            return "P_inf^1"
        return label

    def riemann_hurwitz_genus(self) -> int:
        # n:1 cover of P^1 by alpha; ramification index of a point = stabilizer order
        total = -2 * self.n + sum(p.stabilizer_order - 1 for p in self.special_points)
        return total // 2 + 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "parity": self.parity,
            "genus": self.genus,
            "stated_genus": self.stated_genus,
            "genus_flagged": self.genus_flagged,
            "special_points": [
                {"label": p.label, "stabilizer_order": p.stabilizer_order, "weight": p.weight}
                for p in self.special_points
            ],
            "notes": list(self.notes),
        }


def curve_data(n: int) -> CurveData:
    if n < 2:
        raise GeometryError("C_(n) needs n >= 2")
    if n % 2:
        pts = (
            SpecialPoint("P_1", n, 1),
            SpecialPoint("P_-1", n, 1),
            SpecialPoint("P_inf", n, (n - 1) // 2),
        )
        return CurveData(n, (n - 1) // 2, (n - 1) // 2, pts)
    k = n // 2
    # alpha^2 acts near P_inf^{1,2} by zeta_n^(-2) = zeta_(n/2)^(-1)
    pts = (
        SpecialPoint("P_1", n, 1),
        SpecialPoint("P_-1", n, 1),
        SpecialPoint("P_inf^1", k, (-1) % k if k > 1 else 0),
        SpecialPoint("P_inf^2", k, (-1) % k if k > 1 else 0),
    )
    notes = (
        f"genus {(n - 2) // 2} from Riemann-Hurwitz; the value n/2 = {n // 2} is reported as stated_genus and flagged",
        "local weight at P_inf^{1,2} uses the -2 convention: alpha^2 acts by zeta_n^(-2)",
    )
    return CurveData(n, (n - 2) // 2, n // 2, pts, notes)


def hodge_h_i0(n: int, l: int) -> list[int]:
    """h^{p,0} of Y_(n)^(l) by counting G-invariant products of the forms omega_i."""
    if n < 2 or l < 1:
        raise GeometryError("need n >= 2 and l >= 1")
    g = curve_data(n).genus
    # generators alpha x alpha^(n-1) placed on factors (1, m); omega_i has character i
    gens = []
    for m in range(1, l):
        a = [0] * l
        a[0], a[m] = 1, n - 1
        gens.append(a)
    out = []
    for p in range(l + 1):
        count = 0
        for factors in itertools.combinations(range(l), p):
            for idx in itertools.product(range(1, g + 1), repeat=p):
                if all(sum(a[f] * i for f, i in zip(factors, idx)) % n == 0 for a in gens):
                    count += 1
        out.append(count)
    return out


# ---------------------------------------------------------------------------
# singular points of Y_(n)^(2)

@dataclass(frozen=True)
class SingularPointRecord:
    representative: tuple[str, str]
    orbit: tuple[tuple[str, str], ...]
    stabilizer_order: int
    q: int  # canonical: max(q, q^-1 mod k)
    raw_q: int  # weights (1, raw_q) on (x, y) = (first factor, second factor)
    resolution: tuple[int, ...]

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)

    @property
    def type(self) -> tuple[int, int, int]:
        return (self.stabilizer_order, 1, self.q)

    @property
    def type_str(self) -> str:
        return f"1/{self.stabilizer_order}(1,{self.q})"

    def to_dict(self) -> dict:
        return {
            "representative": list(self.representative),
            "orbit_size": self.orbit_size,
            "stabilizer_order": self.stabilizer_order,
            "type": self.type_str,
            "resolution": list(self.resolution),
        }


def _canonical_q(k: int, q: int) -> int:
    if k <= 1:
        return 0
    return max(q, pow(q, -1, k))


def singular_points_Y2(n: int, include_smooth: bool = False) -> list[SingularPointRecord]:
    """Orbits of special-point pairs under alpha x alpha^(n-1), with local types."""
    C = curve_data(n)
    pairs = [(a.label, b.label) for a in C.special_points for b in C.special_points]
    seen = set()
    out = []
    for pair in pairs:
        if pair in seen:
            continue
        orbit = [pair]
        cur = pair
        while True:
            cur = (C.alpha(cur[0]), C.alpha(cur[1]))  # alpha^(n-1) permutes labels like alpha
            if cur == pair:
                break
            orbit.append(cur)
        seen.update(orbit)
        P, Q = C.point(pair[0]), C.point(pair[1])
        k = gcd(P.stabilizer_order, Q.stabilizer_order)
        if k != n // len(orbit):
            raise GeometryError("orbit-stabilizer mismatch")  # internal guard
        if k == 1:
            if include_smooth:
                out.append(SingularPointRecord(pair, tuple(orbit), 1, 0, 0, ()))
            continue
        # alpha^(n/k) x alpha^(-n/k) acts by (zeta_k^{w_P}, zeta_k^{-w_Q})
        wx, wy = P.weight % k, (-Q.weight) % k
        raw_q = (wy * pow(wx, -1, k)) % k
        q = _canonical_q(k, raw_q)
        out.append(SingularPointRecord(pair, tuple(orbit), k, q, raw_q, tuple(hj_string(k, q))))
    return out


def hj_string(k: int, q: int) -> list[int]:
    """Hirzebruch-Jung continued fraction k/q = b1 - 1/(b2 - ...)."""
    if not (isinstance(k, int) and isinstance(q, int)) or not 1 <= q < k or gcd(k, q) != 1:
        raise GeometryError(f"need 1 <= q < k with gcd(k, q) = 1, got ({k}, {q})")
    out = []
    a, b = k, q
    while b:
        c = -(-a // b)
        out.append(c)
        a, b = b, c * b - a
    return out


def evaluate_hj(string: Sequence[int]) -> Fraction:
    """Inverse of hj_string: evaluate b1 - 1/(b2 - 1/(...))."""
    val = Fraction(string[-1])
    for b in reversed(string[:-1]):
        val = b - 1 / val
    return val


# ---------------------------------------------------------------------------
# resolution graphs

@dataclass
class ResolutionGraph:
    nodes: dict[str, int]  # label -> self-intersection
    edges: set[frozenset]
    multiplicities: dict[str, int] = field(default_factory=dict)
    recognized_type: str | None = None

    def neighbours(self, v: str) -> list[str]:
        return sorted(next(iter(e - {v})) for e in self.edges if v in e)

    def intersection(self, a: str, b: str) -> int:
        if a == b:
            return self.nodes[a]
        return int(frozenset((a, b)) in self.edges)

    def edge_list(self) -> str:
        lines = [f"# nodes {len(self.nodes)} edges {len(self.edges)}"]
        for v in sorted(self.nodes):
            lines.append(f"node {v} {self.nodes[v]}")
        for e in sorted(tuple(sorted(e)) for e in self.edges):
            lines.append(f"edge {e[0]} {e[1]}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "nodes": [{"label": v, "self_intersection": s, "multiplicity": self.multiplicities.get(v, 1)}
                      for v, s in sorted(self.nodes.items())],
            "edges": sorted([sorted(e) for e in self.edges]),
            "recognized_type": self.recognized_type,
        }


def _subgraph(full: ResolutionGraph, labels) -> ResolutionGraph:
    labels = set(labels)
    return ResolutionGraph(
        {v: full.nodes[v] for v in labels},
        {e for e in full.edges if e <= labels},
    )


def _connected(g: ResolutionGraph) -> bool:
    if not g.nodes:
        return False
    start = next(iter(g.nodes))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in g.neighbours(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.nodes)


def _recognize(g: ResolutionGraph) -> str | None:
    """Extended Dynkin pattern of a configuration of (-2)-curves, with multiplicities."""
    if not _connected(g) or any(s != -2 for s in g.nodes.values()):
        return None
    deg = {v: len(g.neighbours(v)) for v in g.nodes}
    m = len(g.nodes)
    if all(d == 2 for d in deg.values()) and len(g.edges) == m:
        g.multiplicities = {v: 1 for v in g.nodes}
        return f"I_{m}"
    if len(g.edges) != m - 1 or m < 5:
        return None
    leaves = [v for v, d in deg.items() if d == 1]
    branch = [v for v, d in deg.items() if d >= 3]
    if len(leaves) != 4:
        return None
    if m == 5 and len(branch) == 1 and deg[branch[0]] == 4:
        g.multiplicities = {v: 1 if deg[v] == 1 else 2 for v in g.nodes}
        return "I*_0"
    if len(branch) == 2 and all(deg[b] == 3 for b in branch):
        g.multiplicities = {v: 1 if deg[v] == 1 else 2 for v in g.nodes}
        return f"I*_{m - 5}"
    return None


def _is_fiber(full: ResolutionGraph, fiber: ResolutionGraph) -> bool:
    """F.C = 0 for every component C of F (so F^2 = 0)."""
    mult = fiber.multiplicities
    return all(sum(mult[a] * full.intersection(a, c) for a in fiber.nodes) == 0 for c in fiber.nodes)


def _label(a: str) -> str:
    return a.replace("P_", "")


def resolution_fiber_graphs(n: int) -> tuple[ResolutionGraph, ResolutionGraph, list[dict]]:
    """The fibers F1, F2 and the four sections on the minimal resolution of Y_(n)^(2)."""
    F1, F2, sections, _ = _resolve(n)
    return F1, F2, sections


def full_resolution_graph(n: int) -> ResolutionGraph:
    """Dual graph of the central components and all exceptional curves."""
    return _resolve(n)[3]


def _resolve(n: int):
    """Exceptional curves and central components of the minimal resolution of Y_(n)^(2).

    Returns (F1, F2, sections, full graph).  The six central components
    (curves P x C and C x P through the special points) are taken as
    rational (-2)-curves, as cited; the exceptional chains come from the
    Hirzebruch-Jung strings.  For weights (1, q) on (x, y) the first curve
    of the string for k/q meets {y = 0} = C x P_b and the last meets
    {x = 0} = P_a x C.
    """
    if n < 3:
        raise GeometryError("the resolution graphs are built for n >= 3")

    def base(label):
        return "P_inf" if label.startswith("P_inf") else label

    nodes: dict[str, int] = {}
    edges: set[frozenset] = set()
    centrals = {}
    for p in ("P_1", "P_-1", "P_inf"):
        centrals[("1", p)] = f"Ctr({_label(p)}xC)"
        centrals[("2", p)] = f"Ctr(Cx{_label(p)})"
    for v in centrals.values():
        nodes[v] = -2
    chains = {}
    for rec in singular_points_Y2(n):
        a, b = rec.representative
        tag = f"E({_label(a)};{_label(b)})"
        string = hj_string(rec.stabilizer_order, rec.raw_q)
        names = [f"{tag}{j + 1}" for j in range(len(string))]
        for name, s in zip(names, string):
            nodes[name] = -s
        for u, w in zip(names, names[1:]):
            edges.add(frozenset((u, w)))
        edges.add(frozenset((names[0], centrals[("2", base(b))])))
        edges.add(frozenset((names[-1], centrals[("1", base(a))])))
        chains[rec.representative] = (names, base(a), base(b))
    full = ResolutionGraph(nodes, edges)

    f1_central = {centrals[(s, p)] for s in ("1", "2") for p in ("P_1", "P_-1")}
    f1 = set(f1_central)
    f2 = {centrals[("1", "P_inf")], centrals[("2", "P_inf")]}
    sections = []
    for rep, (names, a, b) in chains.items():
        if a != "P_inf" and b != "P_inf":
            f1.update(names)
        elif a == "P_inf" and b == "P_inf":
            f2.update(names)
        else:
            touching = [v for v in names if any(c in full.neighbours(v) for c in f1_central)]
            if len(touching) != 1:
                raise GeometryError("mixed chain does not meet F1 in exactly one curve")
            sec = touching[0]
            sections.append(sec)
            f2.update(v for v in names if v != sec)

    F1, F2 = _subgraph(full, f1), _subgraph(full, f2)
    F1.recognized_type = _recognize(F1)
    F2.recognized_type = _recognize(F2)
    expected1 = f"I_{4 * n}"
    expected2 = f"I*_{n}" if n % 2 else f"I_{n}"
    if F1.recognized_type != expected1 or F2.recognized_type != expected2:
        raise GeometryError(f"fiber graphs recognized as {F1.recognized_type}, {F2.recognized_type}")
    if not (_is_fiber(full, F1) and _is_fiber(full, F2)):
        raise GeometryError("F1 or F2 is not numerically a fiber")
    if any(e & set(F1.nodes) and e & set(F2.nodes) for e in full.edges):
        raise GeometryError("F1 and F2 meet")
    sec_data = []
    for s in sorted(sections):
        meets = []
        for F in (F1, F2):
            meets.append(sum(F.multiplicities[c] for c in F.nodes if full.intersection(s, c)))
        if meets != [1, 1]:
            raise GeometryError(f"{s} is not a section: meets fibers with multiplicities {meets}")
        sec_data.append({"label": s, "self_intersection": full.nodes[s]})
    return F1, F2, sec_data, full


# ---------------------------------------------------------------------------
# equation bundles

@dataclass(frozen=True)
class Equation:
    lhs: MultiPoly
    rhs: MultiPoly

    @property
    def poly(self) -> MultiPoly:
        return self.lhs - self.rhs

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Relation:
    """Rewrite rule var^exponent -> rhs (rhs free of var)."""

    var: str
    exponent: int
    rhs: MultiPoly

    def __str__(self):
        return f"{self.var}^{self.exponent} -> {self.rhs}"


@dataclass
class EquationBundle:
    variables: tuple[str, ...]
    equations: dict[str, Equation]
    main: str | None = None
    relations: list[Relation] = field(default_factory=list)
    models: dict[str, WeierstrassModel] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def main_poly(self) -> MultiPoly | None:
        return None if self.main is None else self.equations[self.main].poly

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "equations": {k: str(v) for k, v in sorted(self.equations.items())},
            "main": self.main,
            "relations": [str(r) for r in self.relations],
            "models": {k: m.to_dict() for k, m in sorted(self.models.items())},
            "notes": list(self.notes),
        }


def _vars(l: int, prefix=("v", "w")) -> list[str]:
    return [f"{p}{i}" for i in range(1, l + 1) for p in prefix]


def cover_equation(n: int, l: int) -> EquationBundle:
    """U^n = prod (v_i - w_i)(v_i + w_i) w_i^(n-2)."""
    if n < 2 or l < 1:
        raise GeometryError("need n >= 2 and l >= 1")
    vs = ("U", *_vars(l))
    rhs = MultiPoly.constant(1, vs)
    for i in range(1, l + 1):
        rhs = rhs * parse_poly(f"(v{i}-w{i})*(v{i}+w{i})*w{i}^{n - 2}", vs)
    lhs = MultiPoly.var("U", vs) ** n
    return EquationBundle(vs, {"cover": Equation(lhs, rhs)}, "cover",
                          notes=[f"{n}:1 cover of (P^1)^{l} with cover automorphism U -> zeta_{n} U"])


def curve_product_bundle(n: int, l: int) -> EquationBundle:
    """The l-fold product of C_(n): u_i^n = (v_i^2 - w_i^2) w_i^(n-2), no main equation."""
    vs = tuple(v for i in range(1, l + 1) for v in (f"u{i}", f"v{i}", f"w{i}"))
    rels, eqs = [], {}
    for i in range(1, l + 1):
        rhs = parse_poly(f"(v{i}^2-w{i}^2)*w{i}^{n - 2}", vs)
        rels.append(Relation(f"u{i}", n, rhs))
        eqs[f"C{i}"] = Equation(MultiPoly.var(f"u{i}", vs) ** n, rhs)
    return EquationBundle(vs, eqs, None, rels, notes=[f"product of {l} copies of C_({n})"])


def z_model(n: int) -> WeierstrassModel:
    """Affine model (sigma = 1) of the surface Z_(n) over the base variable t."""
    return WeierstrassModel.from_strings("t", a2=f"1-2*t^{n}", a4=f"t^{2 * n}")


def r_model() -> WeierstrassModel:
    return WeierstrassModel.from_strings("t", a2="1-2*t", a4="t^2")


def family_weierstrass(n: int, l: int) -> EquationBundle:
    """Weierstrass equations of the birational models Z_(n)^(l) and their base-change companions."""
    if n < 2 or l < 2:
        raise GeometryError("need n >= 2 and l >= 2")
    if l == 2:
        eps = n % 2
        vs = ("x", "y", "tau", "sigma")
        lhs = parse_poly("y^2", vs)
        rhs = parse_poly(f"x*(x^2+sigma^{eps}*(sigma^{n}-2*tau^{n})*x+tau^{2 * n}*sigma^{2 * eps})", vs)
        comp = parse_poly("x*(x^2+(1-2*tau)*x+tau^2)", vs)
        return EquationBundle(
            vs,
            {"surface": Equation(lhs, rhs), "companion": Equation(lhs, comp)},
            "surface",
            models={"Z": z_model(n), "R": r_model()},
            notes=[
                f"epsilon = {eps}",
                "model Z is the chart sigma = 1 with base variable t = tau",
                f"Z is the base change t -> t^{n} of R",
            ],
        )
    k = l - 2
    vs = ("X", "Y", "t", *[f"v{i}" for i in range(1, k + 1)])
    P = "*".join(f"(v{i}^2-1)" for i in range(1, k + 1))
    lhs = parse_poly("Y^2", vs)
    rhs = parse_poly(f"X*(X^2+{P}*({P}-2*t^{n})*X+t^{2 * n}*({P})^2)", vs)
    comp = parse_poly(f"X*(X^2+{P}*({P}-2*t)*X+t^2*({P})^2)", vs)
    return EquationBundle(
        vs,
        {"family": Equation(lhs, rhs), "companion": Equation(lhs, comp)},
        "family",
        notes=[f"fibration over P^1_t; the family is the base change t -> t^{n} of the companion"],
    )


def _clear(p: MultiPoly, mapping: Mapping[str, tuple[MultiPoly, MultiPoly]]) -> MultiPoly:
    """prod D_x^{deg_x p} * p(N/D): a polynomial."""
    degs = {x: p.degree(x) for x in mapping}
    result = None
    for exp, c in p.items():
        term = None
        rest = {}
        for v, e in zip(p.variables, exp):
            if v in mapping:
                N, D = mapping[v]
                f = N ** e * D ** (degs[v] - e)
                term = f if term is None else term * f
            elif e:
                rest[v] = e
        mono_vars = tuple(rest)
        mono = MultiPoly(mono_vars, {tuple(rest.values()): c}) if rest else MultiPoly.constant(c)
        if term is None:
            term = MultiPoly.constant(1)
            for x in mapping:
                term = term * mapping[x][1] ** degs[x]
        piece = term * mono
        result = piece if result is None else result + piece
    return result if result is not None else MultiPoly(())


def _reduce(p: MultiPoly, relations: Sequence[Relation]) -> MultiPoly:
    changed = True
    while changed:
        changed = False
        for r in relations:
            if r.var not in p.variables or p.degree(r.var) < r.exponent:
                continue
            out = None
            for k, c in p.coefficients_in(r.var).items():
                q, m = divmod(k, r.exponent)
                piece = c * MultiPoly.var(r.var, c.variables) ** m * r.rhs ** q
                out = piece if out is None else out + piece
            p = out
            changed = True
    return p


def _into(p: MultiPoly, ctx: tuple[str, ...]) -> MultiPoly:
    """Re-express p in the variable order ctx (unused variables are dropped)."""
    extra = tuple(v for v in p.used_variables() if v not in ctx)
    return p.with_variables(ctx + extra)


def _as_rational(expr, variables) -> tuple[MultiPoly, MultiPoly]:
    if isinstance(expr, tuple):
        num, den = expr
    else:
        num, den = expr, MultiPoly.constant(1)
    if isinstance(num, str):
        num = parse_poly(num, variables)
    if isinstance(den, str):
        den = parse_poly(den, variables)
    if den.is_zero():
        raise GeometryError("substitution denominator vanishes identically")
    return num, den


def substitution_check(
    source: EquationBundle,
    target: EquationBundle,
    mapping: Mapping[str, object],
    allow_sign: bool = False,
) -> bool:
    """Does the substituted source identity become a multiple of the target identity?

    ``mapping`` sends source variables to polynomials or (numerator,
    denominator) pairs in the target variables (strings are parsed in the
    union of both contexts).  Relations of both bundles are applied as
    rewrite rules.  With ``allow_sign`` the target right-hand side may also
    be taken with the opposite sign (the normalization U -> zeta U with
    zeta^n = -1 over C).
    """
    ctx = tuple(dict.fromkeys(source.variables + target.variables))
    subst = {x: _as_rational(e, ctx) for x, e in mapping.items()}
    S = source.main_poly()
    if S is None:
        raise GeometryError("source bundle has no main equation")
    S = _clear(S, subst) if subst else S
    rels = [Relation(r.var, r.exponent, _into(r.rhs, ctx)) for r in list(source.relations) + list(target.relations)]
    S = _reduce(_into(S, ctx), rels)
    if target.main is None:
        return S.is_zero()
    eq = target.equations[target.main]
    candidates = [eq.lhs - eq.rhs]
    if allow_sign:
        candidates.append(eq.lhs + eq.rhs)
    for T in candidates:
        T = _reduce(_into(T, ctx), rels)
        if S.is_zero() or T.divides(S):
            return True
    return False


def structural_identities(n: int = 3) -> dict[str, bool]:
    """The three substitution identities behind the birational models."""
    # (1) tau^n (w1 w2)^2 + prod (v_i^2 - w_i^2) = 0 with tau -> U/(w1 w2)
    vs1 = ("tau", *_vars(2))
    base_change = EquationBundle(
        vs1,
        {"R_base_change": Equation(parse_poly(f"tau^{n}*(w1*w2)^2", vs1),
                                   parse_poly("-(v1^2-w1^2)*(v2^2-w2^2)", vs1))},
        "R_base_change",
    )
    cover = cover_equation(n, 2)
    one = substitution_check(base_change, cover, {"tau": ("U", "w1*w2")}, allow_sign=True)
    # (2) surface x curve -> threefold via X = x u^2n, Y = y u^3n, t = tau u
    vs2 = ("x", "y", "tau", "u", "v")
    surf = EquationBundle(
        vs2,
        {"surface": Equation(parse_poly("y^2", vs2),
                             parse_poly(f"x*(x^2+(1-2*tau^{n})*x+tau^{2 * n})", vs2))},
        "surface",
        relations=[Relation("u", n, parse_poly("v^2-1", vs2))],
    )
    three = family_weierstrass(n, 3)
    three = EquationBundle(
        tuple(s if s != "v1" else "v" for s in three.variables),
        {"family": Equation(*(e.substitute({"v1": MultiPoly.var("v")}) for e in (three.equations["family"].lhs,
                                                                               three.equations["family"].rhs)))},
        "family",
    )
    two = substitution_check(
        surf, three,
        {"x": ("X", f"u^{2 * n}"), "y": ("Y", f"u^{3 * n}"), "tau": ("t", "u")},
    )
    # (3) the l = 2 cover equation with U -> u1 u2 on C_(n) x C_(n)
    three_id = substitution_check(cover, curve_product_bundle(n, 2), {"U": "u1*u2"})
    return {"base_change_birationality": one, "threefold_invariants": two, "cover_equation": three_id}


# ---------------------------------------------------------------------------
# K3 fibers of the threefold

def s_t_model(t0) -> WeierstrassModel:
    """The fiber S_t0: Y^2 = X(X^2 + (v^2-1)(v^2-1-2 t0) X + t0^2 (v^2-1)^2) over P^1_v."""
    t0 = Fraction(t0)
    P = parse_poly("v^2-1", ["v"])
    return WeierstrassModel("v", MultiPoly(("v",)), P * (P - 2 * t0), MultiPoly(("v",)), P * P * (t0 * t0),
                            MultiPoly(("v",)))


def delta_s_t() -> tuple[MultiPoly, MultiPoly]:
    """(computed discriminant in t, v; the stated closed form t^4 (v^2-1)^7 (v^2-1-4t))."""
    vs = ("t", "v")
    z = MultiPoly(vs)
    a2 = parse_poly("(v^2-1)*((v^2-1)-2*t)", vs)
    a4 = parse_poly("t^2*(v^2-1)^2", vs)
    inv = weierstrass_invariants(z, a2, z, a4, z)
    return inv.delta, parse_poly("t^4*(v^2-1)^7*(v^2-1-4*t)", vs)


def k3_fiber_report(t0) -> dict:
    from .isogeny import verify_four_torsion
    from .lattice import build_lattice, discriminant_form, ns_from_fibration, transcendental_match

    t0 = Fraction(t0)
    if t0 == 0:
        raise GeometryError("t0 = 0 is a degenerate member of the family (not a K3 surface)")
    model = s_t_model(t0)
    config = classify_all(model)
    inv = surface_invariants(config)
    lower = 2 + trivial_lattice_excess(config)
    if lower >= 20:
        rho, rho_source = lower, "computed: the trivial lattice already has rank 20, the maximum for a complex K3"
    else:
        rho, rho_source = 19, f"cited: rho >= {lower} from the trivial lattice, equality from the non-isotrivial family"
    rank = shioda_tate_rank(config, rho)
    tors = torsion_feasibility(config, inv.chi)
    section_x = parse_poly(f"({t0})*(v^2-1)", ["v"])
    section_y = verify_four_torsion(model, section_x)
    glue = [tors.witnesses[4][0]] if 4 in tors.witnesses else []
    ns = ns_from_fibration(config, glue)
    candidates = {}
    for name in ("U+<8>", "<2>+<8>"):
        candidates[name] = transcendental_match(ns, build_lattice(name))
    return {
        "t0": str(t0),
        "model": model.to_dict(),
        "configuration": config.summary(),
        "fibers": config.to_list(),
        "invariants": inv.to_dict(),
        "rho": rho,
        "rho_source": rho_source,
        "mw_rank": rank,
        "torsion": tors.group_name,
        "four_torsion_section": {"x": str(section_x), "y": str(section_y)},
        "ns_rank": ns.rank,
        "ns_det": abs(ns.det),
        "ns_discriminant_group": list(discriminant_form(ns).orders),
        "transcendental": candidates,
    }


# ---------------------------------------------------------------------------
# the table of elliptic fibrations on S_t

FIBRATION_TABLE: tuple[tuple[str, int], ...] = (
    ("2II*", 1), ("I*_12", 1), ("II*+I*_4", 1), ("2III*+2I_2", 1), ("III*+I_10", 1),
    ("I*_8+I*_0", 1), ("2I*_4", 1), ("I_16", 2), ("I*_5+I_8", 1), ("IV*+I*_3", 1),
    ("I*_2+I_10+I_2", 1), ("2I*_1+I_8", 0), ("2I_9", 1), ("I_17", 1), ("I_13+I_5", 1),
)


def fibration_table_check(table: Sequence[tuple[str, int]] = FIBRATION_TABLE, rho: int = 19) -> list[dict]:
    """Euler budget and Shioda-Tate rank for each listed fibration on a K3 with Picard number rho."""
    rows = []
    for fibers, claimed in table:
        counts = parse_configuration(fibers)
        excess = sum((t.components - 1) * k for t, k in counts.items())
        euler = sum(t.euler * k for t, k in counts.items())
        computed = rho - 2 - excess
        budget_ok = euler <= 24
        consistent = budget_ok and computed == claimed
        rows.append({
            "fibers": fibers,
            "claimed_rank": claimed,
            "computed_rank": computed,
            "components_excess": excess,
            "euler_reducible": euler,
            "euler_filler": 24 - euler,
            "budget_ok": budget_ok,
            "consistent": consistent,
            "verdict": "consistent" if consistent else "flagged",
        })
    return rows


# ---------------------------------------------------------------------------
# multidegree criterion and Kodaira dimension bounds

def canonical_triviality_check(degrees: Sequence[Sequence[int]]) -> dict:
    """Accept exactly multidegrees ((4,...,4), (8,...,8), (12,...,12)) for (a4, a8, a12)."""
    degrees = [tuple(d) for d in degrees]
    ok = (
        len(degrees) == 3
        and len(degrees[0]) >= 1
        and all(len(d) == len(degrees[0]) for d in degrees)
        and all(all(x == w for x in d) for d, w in zip(degrees, (4, 8, 12)))
    )
    return {
        "degrees": [list(d) for d in degrees],
        "accepted": ok,
        "conclusion": "k(W) <= 0 (cited result)" if ok else None,
    }


def weierstrass_multidegrees(coeffs: Sequence[MultiPoly], base_vars: Sequence[str]) -> list[tuple[int, ...]]:
    """Multidegrees of (a4, a8, a12) after homogenizing each base variable with weight i.

    An affine degree d <= i in a variable is padded to i by the homogenizing
    variable; the zero polynomial is a section of every degree.  Raises if
    some degree exceeds its weight.
    """
    out = []
    for c, w in zip(coeffs, (4, 8, 12)):
        row = []
        for v in base_vars:
            d = c.degree(v) if not c.is_zero() else -1
            if d > w:
                raise GeometryError(f"degree {d} in {v} exceeds {w}: not a section of the required bundle")
            row.append(w)
        out.append(tuple(row))
    return out


def _k_value(k) -> str:
    return {None: "-inf"}.get(k, str(k))


def kodaira_bound_chain(n: int, l: int) -> dict:
    """Chain of Kodaira-dimension statements for Y_(n)^(1..l), each with provenance."""
    if n < 2 or l < 1:
        raise GeometryError("need n >= 2 and l >= 1")
    NEG = float("-inf")
    lines = []
    g = curve_data(n).genus
    k1 = NEG if g == 0 else (0 if g == 1 else 1)
    lines.append({"l": 1, "statement": f"k(C_({n})) = {_fmt(k1)}", "value": _fmt(k1), "relation": "=",
                  "provenance": f"computed from genus {g}"})
    current, relation = k1, "="
    if l >= 2:
        inv = surface_invariants(classify_all(z_model(n)))
        k2 = {"rational": NEG, "K3": 0, "properly-elliptic": 1}[inv.kodaira_class]
        lines.append({"l": 2, "statement": f"k(Y_({n})^(2)) = {_fmt(k2)}", "value": _fmt(k2), "relation": "=",
                      "provenance": f"computed: chi = {inv.chi}, {inv.kodaira_class} elliptic surface"})
        current, relation = k2, "="
    for j in range(3, l + 1):
        chain = current + 1 if current != NEG else NEG
        lines.append({"l": j, "statement": f"k(Y_({n})^({j})) <= k(Y_({n})^({j - 1})) + 1 = {_fmt(chain)}"
                      if relation == "=" else f"k(Y_({n})^({j})) <= {_fmt(chain)} (easy addition along the chain)",
                      "value": _fmt(chain), "relation": "<=", "provenance": "computed from the easy addition chain"})
        if n == 2:
            current, relation = NEG, "="
            prov = "rational fibers: the isotrivial fibration has fibers birational to a rational surface"
            lines.append({"l": j, "statement": f"k(Y_(2)^({j})) = -inf", "value": "-inf", "relation": "=",
                          "provenance": prov})
        elif n in (3, 4):
            current, relation = 0, "="
            lines.append({"l": j, "statement": f"k(Y_({n})^({j})) = 0", "value": "0", "relation": "=",
                          "provenance": "cited: crepant Calabi-Yau resolution"})
        else:
            fam = family_weierstrass(n, j)
            fiber_eq = fam.equations["family"]
            X = MultiPoly.var("X", fam.variables)
            rhs = fiber_eq.rhs
            coeffs = rhs.coefficients_in("X")
            a4, a8, a12 = (coeffs.get(k, MultiPoly(fam.variables)) for k in (2, 1, 0))
            vs = [f"v{i}" for i in range(1, j - 1)]
            check = canonical_triviality_check(weierstrass_multidegrees([a4, a8, a12], vs))
            bound = min(chain, 1) if check["accepted"] else chain
            current, relation = bound, "<="
            lines.append({"l": j, "statement": f"k(Y_({n})^({j})) <= {_fmt(bound)}", "value": _fmt(bound),
                          "relation": "<=",
                          "provenance": "computed multidegree check on the generic fiber; cited result gives "
                                        "k(fiber) <= 0; easy addition over P^1_t"})
    final = lines[-1]
    return {"n": n, "l": l, "lines": lines, "result": f"{'=' if final['relation'] == '=' else '<='} {final['value']}"}


def _fmt(k) -> str:
    if k == float("-inf"):
        return "-inf"
    return str(int(k))
