"""Cyclic base change t -> t^n, totally branched over 0 and infinity.

The pulled-back model keeps the name of the base variable.  Predictions
follow the standard table: over a branch point I_m becomes I_{nm}, I*_m
becomes I*_{nm} (n odd) or I_{nm} (n even), and a potentially good fiber
with v(Δ) = k becomes the fiber with v(Δ) = n*k mod 12; over every other
place the fiber is repeated n times.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .algebra import MultiPoly, Place
from .weierstrass import (
    FiberConfiguration,
    KodairaType,
    WeierstrassModel,
    classify_all,
    fiber_at_infinity,
    minimalize_at,
    minimalize_at_infinity,
    tate_classify,
)

__all__ = [
    "pullback_model",
    "predict_transform",
    "transform_provenance",
    "BaseChangeRow",
    "BaseChangeReport",
    "verify_base_change",
]

_BY_DELTA = {0: KodairaType.I(0), 2: KodairaType("II"), 3: KodairaType("III"), 4: KodairaType("IV"),
             6: KodairaType.Istar(0), 8: KodairaType("IV*"), 9: KodairaType("III*"), 10: KodairaType("II*")}


def pullback_model(model: WeierstrassModel, n: int) -> WeierstrassModel:
    """Substitute t -> t^n and minimalize at the two branch points."""
    if n < 1:
        raise ValueError("base change order must be positive")
    if n == 1:
        return model
    t = model.base_var
    tn = MultiPoly.var(t) ** n
    new = WeierstrassModel(t, *(c.substitute({t: tn}) for c in model.coefficients))
    new, _ = minimalize_at(new, Place.finite(MultiPoly.var(t), t))
    new, _ = minimalize_at_infinity(new)
    return new


def predict_transform(t: KodairaType, n: int, ramified: bool) -> list[tuple[KodairaType, int]]:
    """Fiber types (with counts) above a place carrying a fiber of type t."""
    if n < 1:
        raise ValueError("base change order must be positive")
    if not ramified:
        return [(t, n)]
    if t.symbol == "I":
        return [(KodairaType.I(n * t.m), 1)]
    if t.symbol == "I*" and t.m > 0:
        return [(KodairaType.Istar(n * t.m) if n % 2 else KodairaType.I(n * t.m), 1)]
    return [(_BY_DELTA[(n * t.euler) % 12], 1)]


def transform_provenance(t: KodairaType, ramified: bool) -> str:
    """Whether the rule is one of the quoted ones or only checked by the Tate oracle."""
    if not ramified or t.symbol == "I" or (t.symbol == "I*" and t.m > 0):
        return "quoted rule"
    return "oracle-verified table"


@dataclass
class BaseChangeRow:
    place: str
    original: str
    ramified: bool
    predicted: Counter
    observed: Counter
    provenance: str

    @property
    def agrees(self) -> bool:
        return +self.predicted == +self.observed

    def to_dict(self) -> dict:
        def fmt(c):
            return {str(k): v for k, v in sorted(c.items(), key=lambda kv: kv[0]._sort_key()) if v and not k.is_smooth}

        return {
            "place": self.place,
            "original": self.original,
            "ramified": self.ramified,
            "predicted": fmt(self.predicted),
            "observed": fmt(self.observed),
            "agrees": self.agrees,
            "provenance": self.provenance,
        }


@dataclass
class BaseChangeReport:
    n: int
    rows: list[BaseChangeRow]
    pullback: WeierstrassModel
    configuration: FiberConfiguration
    euler_original: int
    euler_predicted: int
    euler_pullback: int
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(r.agrees for r in self.rows) and self.euler_predicted == self.euler_pullback

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "verdict": "consistent" if self.consistent else "inconsistent",
            "rows": [r.to_dict() for r in self.rows],
            "pullback": self.pullback.to_dict(),
            "configuration": self.configuration.summary(),
            "euler": {
                "original": self.euler_original,
                "predicted": self.euler_predicted,
                "pullback": self.euler_pullback,
            },
            "notes": self.notes,
        }


def _counter(pairs, weight=1) -> Counter:
    c: Counter = Counter()
    for t, k in pairs:
        if not t.is_smooth:
            c[t] += k * weight
    return c


def verify_base_change(model: WeierstrassModel, n: int) -> BaseChangeReport:
    """Compare predicted and recomputed fibers place by place."""
    var = model.base_var
    tpoly = MultiPoly.var(var)
    zero = Place.finite(tpoly, var)
    original = classify_all(model, refine_with=[tpoly])
    pulled = pullback_model(model, n)
    new_config = classify_all(pulled, refine_with=[tpoly])
    rows = []

    def observed_for(pred):
        c: Counter = Counter()
        for e in new_config.entries:
            if pred(e.place):
                c[e.type] += e.point_count
        return c

    at0 = tate_classify(model, zero)
    rows.append(BaseChangeRow(
        str(zero), str(at0.type), True, _counter(predict_transform(at0.type, n, True)),
        observed_for(lambda p: p == zero), transform_provenance(at0.type, True),
    ))
    at_inf = fiber_at_infinity(model)
    rows.append(BaseChangeRow(
        "inf", str(at_inf.type), True, _counter(predict_transform(at_inf.type, n, True)),
        observed_for(lambda p: p.is_infinite), transform_provenance(at_inf.type, True),
    ))
    for e in sorted(original.entries, key=lambda e: e.place.sort_key()):
        if e.place.is_infinite or e.place == zero:
            continue
        lifted = e.place.poly.substitute({var: tpoly ** n})
        rows.append(BaseChangeRow(
            str(e.place), f"{e.point_count}{e.type}" if e.point_count > 1 else str(e.type), False,
            _counter(predict_transform(e.type, n, False), e.point_count),
            observed_for(lambda p, g=lifted: not p.is_infinite and p != zero and p.poly.divides(g)),
            transform_provenance(e.type, False),
        ))
    predicted_total = sum(sum(t.euler * k for t, k in r.predicted.items()) for r in rows)
    notes = []
    if n * original.euler_total != new_config.euler_total:
        notes.append(
            f"Euler number changes by the factor {new_config.euler_total}/{original.euler_total}, not {n}: "
            "branch fibers do not scale linearly"
        )
    return BaseChangeReport(
        n, rows, pulled, new_config, original.euler_total, predicted_total, new_config.euler_total, notes
    )
