"""Numerical invariants of elliptic surfaces over P^1 from their singular fibers.

Torsion sections are detected with the height formula: a torsion section P
of a relatively minimal elliptic surface in characteristic 0 is disjoint
from the zero section and has height 0, so

    2*chi = sum over reducible fibers of contr_v(P)

and the same identity holds for every nonzero multiple kP.  Fiber
components are encoded as elements of the component group, written in its
invariant-factor coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .weierstrass import FiberConfiguration, KodairaType

__all__ = [
    "SurfaceError",
    "SurfaceInvariants",
    "surface_invariants",
    "shioda_tate_rank",
    "contribution",
    "component_elements",
    "element_order",
    "GeometricFiber",
    "expand_fibers",
    "TorsionReport",
    "torsion_feasibility",
    "ModularityReport",
    "modularity_criteria",
    "is_near",
    "surface_report",
]


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceInvariants:
    e: int
    chi: int
    p_g: int
    h11: int
    rho_max: int
    kodaira_class: str
    kodaira_dimension: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def surface_invariants(config: FiberConfiguration) -> SurfaceInvariants:
    """e, chi, p_g, h^{1,1}, and the Kodaira class for an elliptic surface over P^1."""
    e = config.euler_total
    if e == 0:
        raise SurfaceError("Euler number 0: product-type fibration is out of scope")
    if e < 0 or e % 12:
        raise SurfaceError(f"Euler number {e} is not a positive multiple of 12")
    chi = e // 12
    if chi == 1:
        cls, kod = "rational", "-inf"
    elif chi == 2:
        cls, kod = "K3", "0"
    else:
        cls, kod = "properly-elliptic", "1"
    return SurfaceInvariants(e, chi, chi - 1, 10 * chi, 10 * chi, cls, kod)


def trivial_lattice_excess(config: FiberConfiguration) -> int:
    """Sum of (components - 1) over geometric singular fibers."""
    return sum((f.components - 1) * f.point_count for f in config.entries)


def shioda_tate_rank(config: FiberConfiguration, rho: int) -> int:
    """Mordell-Weil rank rho - 2 - sum(r_v - 1)."""
    rank = rho - 2 - trivial_lattice_excess(config)
    if rank < 0:
        raise SurfaceError(f"rho={rho} is smaller than the trivial lattice rank {rho - rank}")
    return rank


# ---------------------------------------------------------------------------
# component groups and contributions

def component_elements(t: KodairaType) -> list[tuple[int, ...]]:
    """All elements of the component group in invariant-factor coordinates."""
    return list(itertools.product(*(range(d) for d in t.component_group)))


def element_order(t: KodairaType, x: tuple[int, ...]) -> int:
    o = 1
    for xi, d in zip(x, t.component_group):
        o = lcm(o, d // gcd(xi, d))
    return o


def _mul(t: KodairaType, k: int, x: tuple[int, ...]) -> tuple[int, ...]:
    return tuple((k * xi) % d for xi, d in zip(x, t.component_group))


def is_near(t: KodairaType, x: tuple[int, ...]) -> bool:
    """For I*_m: is the component the simple one near the identity component?"""
    if t.symbol != "I*":
        raise ValueError("near/far only applies to I*_m")
    return x == ((2,) if t.m % 2 else (1, 0))


def contribution(t: KodairaType, x: tuple[int, ...]) -> Fraction:
    """Local height correction contr_v for a section meeting component x."""
    if not any(x):
        return Fraction(0)
    if t.symbol == "I":
        i, m = x[0], t.m
        return Fraction(i * (m - i), m)
    if t.symbol == "I*":
        return Fraction(1) if is_near(t, x) else 1 + Fraction(t.m, 4)
    return {"III": Fraction(1, 2), "III*": Fraction(3, 2), "IV": Fraction(2, 3), "IV*": Fraction(4, 3)}[t.symbol]


@dataclass(frozen=True)
class GeometricFiber:
    label: str
    type: KodairaType


def expand_fibers(config: FiberConfiguration) -> list[GeometricFiber]:
    """One entry per geometric point carrying a reducible fiber."""
    out = []
    for e in sorted(config.entries, key=lambda e: e.place.sort_key()):
        if not e.type.component_group:
            continue
        for j in range(e.point_count):
            label = str(e.place) if e.point_count == 1 else f"{e.place}[{j}]"
            out.append(GeometricFiber(label, e.type))
    return out


# ---------------------------------------------------------------------------
# torsion search

@dataclass
class TorsionReport:
    chi: int
    feasible_orders: list[int]
    witnesses: dict[int, list[dict]]
    group: tuple[int, ...]
    two_torsion_count: int
    notes: list[str] = field(default_factory=list)

    @property
    def group_order(self) -> int:
        o = 1
        for d in self.group:
            o *= d
        return o

    @property
    def group_name(self) -> str:
        if not self.group:
            return "0"
        return " x ".join(f"Z/{d}Z" for d in self.group)

    @property
    def two_torsion_unique(self) -> bool:
        return self.two_torsion_count == 1

    def to_dict(self) -> dict:
        return {
            "chi": self.chi,
            "feasible_orders": self.feasible_orders,
            "witnesses": {str(k): v for k, v in self.witnesses.items()},
            "group": self.group_name,
            "two_torsion_count": self.two_torsion_count,
            "notes": self.notes,
        }


def _feasible_elements(fibers: Sequence[GeometricFiber], chi: int, d: int) -> list[tuple]:
    """All assignments of exact order d whose multiples all have sum 2*chi."""
    target = Fraction(2 * chi)
    choices = []
    for f in fibers:
        opts = []
        for x in component_elements(f.type):
            if d % element_order(f.type, x) == 0:
                contr = [contribution(f.type, _mul(f.type, k, x)) for k in range(1, d)]
                opts.append((x, contr))
        choices.append(opts)
    found = []
    sums = [Fraction(0)] * (d - 1)
    assign: list = []

    def dfs(i):
        if i == len(fibers):
            if all(s == target for s in sums):
                o = 1
                for f, x in zip(fibers, assign):
                    o = lcm(o, element_order(f.type, x))
                if o == d:
                    found.append(tuple(assign))
            return
        for x, contr in choices[i]:
            ok = True
            for k in range(d - 1):
                sums[k] += contr[k]
                if sums[k] > target:
                    ok = False
            if ok:
                assign.append(x)
                dfs(i + 1)
                assign.pop()
            for k in range(d - 1):
                sums[k] -= contr[k]

    if d > 1:
        dfs(0)
    return found


def _witness(fibers, elem) -> dict:
    return {
        f.label: {"type": str(f.type), "component": list(x), "contribution": str(contribution(f.type, x))}
        for f, x in zip(fibers, elem)
        if any(x)
    }


def _closure(fibers, gens) -> set:
    zero = tuple(tuple(0 for _ in f.type.component_group) for f in fibers)
    group = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                s = tuple(
                    tuple((a + b) % d for a, b, d in zip(hx, gx, f.type.component_group))
                    for f, hx, gx in zip(fibers, h, g)
                )
                if s not in group:
                    group.add(s)
                    nxt.append(s)
        frontier = nxt
    return group


def _invariant_factors(fibers, group: set) -> tuple[int, ...]:
    order = len(group)
    if order == 1:
        return ()
    exponent = 1
    for el in group:
        o = 1
        for f, x in zip(fibers, el):
            o = lcm(o, element_order(f.type, x))
        exponent = lcm(exponent, o)
    return (exponent,) if exponent == order else (order // exponent, exponent)


def torsion_feasibility(config: FiberConfiguration, chi: int) -> TorsionReport:
    """Torsion orders and the largest group compatible with the height formula."""
    fibers = expand_fibers(config)
    exponent = 1
    for f in fibers:
        for d in f.type.component_group:
            exponent = lcm(exponent, d)
    feasible: dict[int, list[tuple]] = {}
    for d in range(2, exponent + 1):
        if exponent % d == 0:
            els = _feasible_elements(fibers, chi, d)
            if els:
                feasible[d] = els
    all_feasible = [el for els in feasible.values() for el in els]
    feasible_set = set(all_feasible)
    best: set = _closure(fibers, [])
    for i, g in enumerate(all_feasible):
        for h in [None] + all_feasible[i:]:
            gens = [g] if h is None else [g, h]
            grp = _closure(fibers, gens)
            if len(grp) <= len(best):
                continue
            if all(el in feasible_set for el in grp if any(any(x) for x in el)):
                best = grp
    group = _invariant_factors(fibers, best)
    witnesses = {d: [_witness(fibers, el) for el in els] for d, els in sorted(feasible.items())}
    two = len(feasible.get(2, []))
    notes = []
    if two == 1:
        notes.append("exactly one component assignment is admissible for a 2-torsion section, so it is unique")
    elif two > 1:
        notes.append(f"{two} component assignments are admissible for 2-torsion sections")
    bigger = [d for d in range(2, exponent + 1) if exponent % d == 0 and d not in feasible]
    if bigger:
        notes.append(f"orders {bigger} fail the height formula")
    return TorsionReport(chi, sorted(feasible), witnesses, group, two, notes)


# ---------------------------------------------------------------------------
# modularity checklist

@dataclass(frozen=True)
class ModularityReport:
    extremal: bool
    no_II_star_or_III_star: bool
    j_nonconstant: bool

    @property
    def verdict(self) -> bool:
        return self.extremal and self.no_II_star_or_III_star and self.j_nonconstant

    def to_dict(self) -> dict:
        return {
            "extremal": self.extremal,
            "no_II_star_or_III_star": self.no_II_star_or_III_star,
            "j_nonconstant": self.j_nonconstant,
            "verdict": "modular by the cited criterion" if self.verdict else "criterion not met",
        }


def modularity_criteria(config: FiberConfiguration, mw_rank: int, j_constant: bool) -> ModularityReport:
    inv = surface_invariants(config)
    extremal = mw_rank == 0 and 2 + trivial_lattice_excess(config) + mw_rank == inv.rho_max
    bad = any(e.type.symbol in ("II*", "III*") for e in config.entries)
    return ModularityReport(extremal, not bad, not j_constant)


def surface_report(model) -> dict:
    """Fibers, invariants, Mordell-Weil data and the modularity checklist of a model over P^1.

    The Picard number is taken as h^{1,1}; when the trivial lattice fills it
    (as for extremal surfaces) the Shioda-Tate rank is 0.
    """
    from .weierstrass import classify_all, j_is_constant

    config = classify_all(model)
    inv = surface_invariants(config)
    lower = 2 + trivial_lattice_excess(config)
    rank = shioda_tate_rank(config, inv.rho_max)
    tors = torsion_feasibility(config, inv.chi)
    jc = j_is_constant(model)
    mod = modularity_criteria(config, rank, jc)
    return {
        "model": model.to_dict(),
        "configuration": config.summary(),
        "fibers": config.to_list(),
        "invariants": inv.to_dict(),
        "trivial_lattice_rank": lower,
        "mw_rank": rank,
        "mw_rank_note": "rank for rho = h11; equals 0 exactly when the trivial lattice fills H^{1,1}",
        "torsion": tors.to_dict(),
        "j_constant": jc,
        "modularity": mod.to_dict(),
    }
