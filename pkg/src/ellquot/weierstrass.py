"""Weierstrass models over Q(t) and Kodaira fiber classification.

Classification uses the characteristic-0 shortcut: on a model that is
minimal at the place, the fiber type is a function of the valuations of
``c4``, ``c6`` and ``Δ``.  The fiber at infinity is obtained by the flip
``t -> 1/s`` with the minimal weight ``d`` that keeps every coefficient
polynomial.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .algebra import (
    MultiPoly,
    Place,
    PolyError,
    gcd_free_basis,
    parse_poly,
    valuation,
)

__all__ = [
    "DegenerateModelError",
    "ClassificationError",
    "WeierstrassModel",
    "Invariants",
    "weierstrass_invariants",
    "standard_invariants",
    "KodairaType",
    "LocalFiberData",
    "FiberConfiguration",
    "parse_configuration",
    "configuration_from_counts",
    "minimalize_at",
    "tate_classify",
    "flip_model",
    "flip_weight",
    "minimalize_at_infinity",
    "fiber_at_infinity",
    "classify_all",
    "j_is_constant",
]


class DegenerateModelError(ValueError):
    """The discriminant vanishes identically."""


class ClassificationError(ArithmeticError):
    """Valuation data that no minimal model can produce (internal guard)."""


# ---------------------------------------------------------------------------
# invariants

@dataclass(frozen=True)
class Invariants:
    b2: MultiPoly
    b4: MultiPoly
    b6: MultiPoly
    b8: MultiPoly
    c4: MultiPoly
    c6: MultiPoly
    delta: MultiPoly

    @property
    def j(self) -> tuple[MultiPoly, MultiPoly]:
        """j = c4^3 / Δ as an unreduced (numerator, denominator) pair."""
        return self.c4 ** 3, self.delta


def weierstrass_invariants(a1, a2, a3, a4, a6) -> Invariants:
    """Standard b/c/Δ invariants; works for any multivariate coefficients."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    delta = -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return Invariants(b2, b4, b6, b8, c4, c6, delta)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in Q[base_var]."""

    base_var: str
    a1: MultiPoly
    a2: MultiPoly
    a3: MultiPoly
    a4: MultiPoly
    a6: MultiPoly

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            c = getattr(self, name)
            if isinstance(c, (int, Fraction)):
                c = MultiPoly.constant(c, (self.base_var,))
            if not isinstance(c, MultiPoly):
                raise TypeError(f"{name} must be a MultiPoly")
            extra = [v for v in c.used_variables() if v != self.base_var]
            if extra:
                raise PolyError(f"{name} = {c} involves {extra} besides {self.base_var!r}")
            object.__setattr__(self, name, c.with_variables((self.base_var,)))
        if self.invariants.delta.is_zero():
            raise DegenerateModelError("discriminant vanishes identically")

    @classmethod
    def from_strings(cls, base_var: str, a1="0", a2="0", a3="0", a4="0", a6="0") -> "WeierstrassModel":
        vs = [base_var]
        return cls(base_var, *(parse_poly(str(s), vs) for s in (a1, a2, a3, a4, a6)))

    @classmethod
    def short(cls, base_var: str, a: MultiPoly, b: MultiPoly) -> "WeierstrassModel":
        """y^2 = x(x^2 + a x + b)."""
        zero = MultiPoly((base_var,))
        return cls(base_var, zero, a, zero, b, zero)

    @property
    def coefficients(self) -> tuple[MultiPoly, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> Invariants:
        return weierstrass_invariants(*self.coefficients)

    def replace(self, **kw) -> "WeierstrassModel":
        d = dict(zip(("a1", "a2", "a3", "a4", "a6"), self.coefficients))
        d.update(kw)
        return WeierstrassModel(self.base_var, **d)

    def rhs(self, xvar: str = "x") -> MultiPoly:
        vs = (xvar, self.base_var)
        x = MultiPoly.var(xvar, vs)
        return x ** 3 + self.a2 * x ** 2 + self.a4 * x + self.a6

    def equation(self) -> str:
        lhs = "y^2"
        if self.a1:
            lhs += f" + ({self.a1})*x*y"
        if self.a3:
            lhs += f" + ({self.a3})*y"
        return f"{lhs} = {self.rhs()}"

    def to_dict(self) -> dict:
        return {
            "base_var": self.base_var,
            **{k: str(v) for k, v in zip(("a1", "a2", "a3", "a4", "a6"), self.coefficients)},
        }

    def __str__(self):
        return self.equation()


def standard_invariants(model: WeierstrassModel) -> Invariants:
    return model.invariants


# ---------------------------------------------------------------------------
# fiber types

@dataclass(frozen=True, order=True)
class KodairaType:
    """One of I_m, I*_m, II, III, IV, IV*, III*, II*."""

    symbol: str  # "I", "I*", "II", "III", "IV", "IV*", "III*", "II*"
    m: int = 0

    _EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
    _COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}
    _GROUP = {"II": (), "III": (2,), "IV": (3,), "IV*": (3,), "III*": (2,), "II*": ()}

    def __post_init__(self):
        if self.symbol in ("I", "I*"):
            if self.m < 0:
                raise ValueError("I_m needs m >= 0")
        elif self.symbol in self._EULER:
            if self.m:
                raise ValueError(f"{self.symbol} carries no index")
        else:
            raise ValueError(f"unknown Kodaira symbol {self.symbol!r}")

    @classmethod
    def I(cls, m: int) -> "KodairaType":
        return cls("I", m)

    @classmethod
    def Istar(cls, m: int) -> "KodairaType":
        return cls("I*", m)

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        s = text.strip().replace("^", "").replace("{", "").replace("}", "").replace(" ", "")
        m = re.fullmatch(r"I\*?_?(\d+)\*?", s)
        if m and s.startswith("I") and not s.startswith("II") and not s.startswith("IV"):
            star = "*" in s
            return cls("I*" if star else "I", int(m.group(1)))
        if s in cls._EULER:
            return cls(s)
        raise ValueError(f"cannot parse Kodaira type {text!r}")

    @property
    def euler(self) -> int:
        if self.symbol == "I":
            return self.m
        if self.symbol == "I*":
            return self.m + 6
        return self._EULER[self.symbol]

    @property
    def components(self) -> int:
        if self.symbol == "I":
            return max(self.m, 1)
        if self.symbol == "I*":
            return self.m + 5
        return self._COMPONENTS[self.symbol]

    @property
    def component_group(self) -> tuple[int, ...]:
        """Invariant factors of the group of simple components."""
        if self.symbol == "I":
            return (self.m,) if self.m >= 2 else ()
        if self.symbol == "I*":
            return (2, 2) if self.m % 2 == 0 else (4,)
        return self._GROUP[self.symbol]

    @property
    def is_smooth(self) -> bool:
        return self.symbol == "I" and self.m == 0

    @property
    def is_reducible(self) -> bool:
        return self.components > 1

    @property
    def root_lattice(self) -> str | None:
        """ADE label of the non-identity components (None if irreducible)."""
        if self.symbol == "I":
            return f"A{self.m - 1}" if self.m >= 2 else None
        if self.symbol == "I*":
            return f"D{self.m + 4}"
        return {"II": None, "III": "A1", "IV": "A2", "IV*": "E6", "III*": "E7", "II*": "E8"}[self.symbol]

    def _sort_key(self):
        rank = {"II*": 0, "III*": 1, "IV*": 2, "I*": 3, "I": 4, "IV": 5, "III": 6, "II": 7}
        return (rank[self.symbol], -self.m)

    def __str__(self):
        if self.symbol == "I":
            return f"I_{self.m}"
        if self.symbol == "I*":
            return f"I*_{self.m}"
        return self.symbol


@dataclass(frozen=True)
class LocalFiberData:
    place: Place
    type: KodairaType
    delta_valuation: int
    c4_valuation: float
    c6_valuation: float
    point_count: int
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def euler(self) -> int:
        return self.type.euler

    @property
    def components(self) -> int:
        return self.type.components

    @property
    def component_group(self) -> tuple[int, ...]:
        return self.type.component_group

    def to_dict(self) -> dict:
        return {
            "place": str(self.place),
            "type": str(self.type),
            "delta_valuation": self.delta_valuation,
            "euler": self.euler,
            "components": self.components,
            "component_group": list(self.component_group),
            "point_count": self.point_count,
        }


def _format_counts(counts: Mapping[KodairaType, int]) -> str:
    parts = []
    for t in sorted(counts, key=KodairaType._sort_key):
        k = counts[t]
        if k:
            parts.append(f"{k}{t}" if k > 1 else str(t))
    return "+".join(parts) if parts else "I_0"


@dataclass(frozen=True)
class FiberConfiguration:
    """Singular fibers of a fibration over P^1 (smooth fibers excluded)."""

    entries: tuple[LocalFiberData, ...]

    def counts(self) -> Counter:
        """Multiset of fiber types weighted by geometric point count."""
        c: Counter = Counter()
        for e in self.entries:
            c[e.type] += e.point_count
        return c

    @property
    def euler_total(self) -> int:
        return sum(e.euler * e.point_count for e in self.entries)

    def at_infinity(self) -> LocalFiberData | None:
        for e in self.entries:
            if e.place.is_infinite:
                return e
        return None

    def at(self, place: Place) -> LocalFiberData | None:
        for e in self.entries:
            if e.place == place:
                return e
        return None

    def matches(self, other: "FiberConfiguration | str | Mapping") -> bool:
        if isinstance(other, FiberConfiguration):
            other = other.counts()
        elif isinstance(other, str):
            other = parse_configuration(other)
        return +self.counts() == +Counter(other)

    def summary(self) -> str:
        return _format_counts(self.counts())

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in sorted(self.entries, key=lambda e: e.place.sort_key())]

    def __str__(self):
        return self.summary()


def parse_configuration(text: str) -> Counter:
    """Parse strings like ``2I*_1+I_8+2I_1`` into a Counter of types."""
    out: Counter = Counter()
    for part in text.replace(" ", "").split("+"):
        if not part:
            raise ValueError(f"empty term in configuration {text!r}")
        m = re.match(r"(\d*)(.*)$", part)
        mult = int(m.group(1)) if m.group(1) else 1
        rest = m.group(2)
        if not rest:
            raise ValueError(f"missing fiber type in {part!r}")
        t = KodairaType.parse(rest)
        if not t.is_smooth:
            out[t] += mult
    return out


def configuration_from_counts(counts: Mapping[KodairaType, int], var: str = "t") -> FiberConfiguration:
    """A synthetic configuration (placeholder places) from a type multiset."""
    entries = []
    i = 0
    for t in sorted(counts, key=KodairaType._sort_key):
        for _ in range(counts[t]):
            i += 1
            place = Place.finite(MultiPoly.from_dense([-i, 1], var), var)
            entries.append(LocalFiberData(place, t, t.euler, 0, 0, 1, {"synthetic": True}))
    return FiberConfiguration(tuple(entries))


# ---------------------------------------------------------------------------
# minimalization and classification

INF = float("inf")


def _val(p: MultiPoly, place: Place):
    return INF if p.is_zero() else valuation(p, place)


def _is_minimal(inv: Invariants, place: Place) -> bool:
    return not (_val(inv.c4, place) >= 4 and _val(inv.c6, place) >= 6)


def _short_form(model: WeierstrassModel) -> WeierstrassModel:
    inv = model.invariants
    z = MultiPoly((model.base_var,))
    return WeierstrassModel(model.base_var, z, z, z, inv.c4 * Fraction(-1, 48), inv.c6 * Fraction(-1, 864))


def minimalize_at(model: WeierstrassModel, place: Place) -> tuple[WeierstrassModel, list[str]]:
    """Remove weight-(4,6) excess of (c4, c6) at a finite place."""
    if place.is_infinite:
        raise ValueError("minimalize_at needs a finite place; use fiber_at_infinity")
    log: list[str] = []
    g = place.poly.with_variables((model.base_var,))
    while not _is_minimal(model.invariants, place):
        coeffs = model.coefficients
        weights = (1, 2, 3, 4, 6)
        if all(c.is_zero() or _val(c, place) >= w for c, w in zip(coeffs, weights)):
            new = [c.exact_div(g ** w) for c, w in zip(coeffs, weights)]
            model = WeierstrassModel(model.base_var, *new)
            log.append(f"rescale (x,y) -> (({g})^2 x, ({g})^3 y)")
        else:
            model = _short_form(model)
            log.append("complete the square and cube: short form from (c4, c6)")
    return model, log


def _type_from_valuations(vc4, vc6, vd) -> KodairaType:
    if vd == 0:
        return KodairaType.I(0)
    if vc4 == 0:
        return KodairaType.I(vd)
    if vc4 == 2 and vc6 == 3 and vd > 6:
        return KodairaType.Istar(vd - 6)
    if vd == 6:
        return KodairaType.Istar(0)
    table = {2: "II", 3: "III", 4: "IV", 8: "IV*", 9: "III*", 10: "II*"}
    if vd in table:
        return KodairaType(table[vd])
    raise ClassificationError(f"no fiber type for v(c4)={vc4}, v(c6)={vc6}, v(Δ)={vd}")


def tate_classify(model: WeierstrassModel, place: Place, _provenance: dict | None = None) -> LocalFiberData:
    """Kodaira type at a finite place with uniform root behavior."""
    if place.is_infinite:
        return fiber_at_infinity(model)
    if place.var != model.base_var:
        raise ValueError(f"place variable {place.var!r} differs from base {model.base_var!r}")
    minimal, log = minimalize_at(model, place)
    inv = minimal.invariants
    vc4, vc6, vd = _val(inv.c4, place), _val(inv.c6, place), _val(inv.delta, place)
    t = _type_from_valuations(vc4, vc6, vd)
    prov = {"minimalization": log}
    if _provenance:
        prov.update(_provenance)
    return LocalFiberData(place, t, vd, vc4, vc6, place.degree, prov)


def minimalize_at_infinity(model: WeierstrassModel) -> tuple[WeierstrassModel, list[str]]:
    """Lower the weight at infinity until the flipped model is minimal at s = 0."""
    log: list[str] = []
    place0 = Place.finite(MultiPoly.var(model.base_var), model.base_var)
    while True:
        flipped, d = flip_model(model)
        if _is_minimal(flipped.invariants, place0):
            return model, log
        short = _short_form(model)
        if flip_weight(short) >= d:
            raise ClassificationError("cannot lower the weight at infinity")
        model = short
        log.append(f"short form lowers the weight at infinity from {d} to {flip_weight(short)}")


def flip_weight(model: WeierstrassModel) -> int:
    d = 0
    for c, w in zip(model.coefficients, (1, 2, 3, 4, 6)):
        if not c.is_zero():
            d = max(d, -(-c.degree(model.base_var) // w))
    return d


def flip_model(model: WeierstrassModel, new_var: str | None = None) -> tuple[WeierstrassModel, int]:
    """Model in s = 1/t: a_i(s) = s^(i d) a_i(1/s) with minimal d."""
    s = new_var or model.base_var
    d = flip_weight(model)
    new = []
    for c, w in zip(model.coefficients, (1, 2, 3, 4, 6)):
        dense = c.to_dense(model.base_var)
        k = w * d
        new.append(MultiPoly((s,), {(k - i,): coef for i, coef in enumerate(dense) if coef}))
    return WeierstrassModel(s, *new), d


def fiber_at_infinity(model: WeierstrassModel) -> LocalFiberData:
    flipped, d = flip_model(model)
    place0 = Place.finite(MultiPoly.var(model.base_var), model.base_var)
    local = tate_classify(flipped, place0, {"flip_weight": d})
    return LocalFiberData(
        Place.infinity(model.base_var),
        local.type,
        local.delta_valuation,
        local.c4_valuation,
        local.c6_valuation,
        1,
        local.provenance,
    )


def classify_all(
    model: WeierstrassModel,
    include_smooth: bool = False,
    refine_with: Iterable[MultiPoly] = (),
) -> FiberConfiguration:
    """All singular fibers: the gcd-free basis of (Δ, c4, c6) plus infinity.

    ``refine_with`` adds polynomials to the basis computation so that their
    roots become separate places (useful to isolate branch points).
    """
    inv = model.invariants
    var = model.base_var
    extra = [p.with_variables((var,)) for p in refine_with]
    polys = [p for p in (inv.delta, inv.c4, inv.c6) if not p.is_zero()] + extra
    basis, exps = gcd_free_basis(polys, var)
    entries = []
    for j, g in enumerate(basis):
        if exps[0][j] == 0 and not include_smooth:
            continue
        data = tate_classify(model, Place(var, g))
        if include_smooth or not data.type.is_smooth:
            entries.append(data)
    inf = fiber_at_infinity(model)
    if include_smooth or not inf.type.is_smooth:
        entries.append(inf)
    config = FiberConfiguration(tuple(entries))
    if config.euler_total % 12:
        raise ClassificationError(f"Euler sum {config.euler_total} is not a multiple of 12")
    return config


def j_is_constant(model: WeierstrassModel) -> bool:
    """True iff c4^3/Δ has zero derivative in the base variable."""
    inv = model.invariants
    num = inv.c4 ** 3
    t = model.base_var
    return (num.derivative(t) * inv.delta - num * inv.delta.derivative(t)).is_zero()
