"""Quotients of y^2 = x(x^2 + a x + b) by 2- and 4-torsion translations.

The 2-isogeny with kernel {O, (0,0)} sends the curve to
y^2 = x(x^2 - 2a x + (a^2 - 4b)), with x-map x -> y^2/x^2.  A quotient by a
cyclic 4-torsion subgroup <P> is the composite of the 2-isogeny with
kernel <2P> and the 2-isogeny with kernel the image of P.
"""

from __future__ import annotations

from .algebra import DivisionError, MultiPoly, poly_sqrt
from .weierstrass import DegenerateModelError, WeierstrassModel

__all__ = [
    "IsogenyError",
    "shift_two_torsion",
    "two_isogeny",
    "double_x",
    "verify_four_torsion",
    "four_torsion_quotient",
    "j_equivalent",
]


class IsogenyError(ValueError):
    pass


def _require_a1a3_zero(model: WeierstrassModel):
    if model.a1 or model.a3:
        raise IsogenyError("model must have a1 = a3 = 0")


def _cubic_at(model: WeierstrassModel, x0: MultiPoly) -> MultiPoly:
    return x0 ** 3 + model.a2 * x0 ** 2 + model.a4 * x0 + model.a6


def shift_two_torsion(model: WeierstrassModel, x0: MultiPoly) -> WeierstrassModel:
    """Translate x -> x + x0 so that the 2-torsion point (x0, 0) sits at (0, 0)."""
    _require_a1a3_zero(model)
    t = model.base_var
    x0 = x0.with_variables((t,)) if isinstance(x0, MultiPoly) else MultiPoly.constant(x0, (t,))
    if not _cubic_at(model, x0).is_zero():
        raise IsogenyError(f"x0 = {x0} is not a root of the cubic")
    a2 = model.a2 + 3 * x0
    a4 = model.a4 + 2 * model.a2 * x0 + 3 * x0 ** 2
    zero = MultiPoly((t,))
    return WeierstrassModel(t, zero, a2, zero, a4, zero)


def two_isogeny(model: WeierstrassModel) -> WeierstrassModel:
    """Quotient by the 2-torsion point (0, 0)."""
    _require_a1a3_zero(model)
    if model.a6:
        raise IsogenyError("(0, 0) is not on the curve: a6 must vanish")
    a, b = model.a2, model.a4
    disc = a * a - 4 * b
    if disc.is_zero():
        raise IsogenyError("a^2 - 4b vanishes identically: degenerate quotient")
    try:
        return WeierstrassModel.short(model.base_var, -2 * a, disc)
    except DegenerateModelError as exc:  # pragma: no cover - disc != 0 and b != 0 imply Δ' != 0
        raise IsogenyError(str(exc)) from exc


def double_x(model: WeierstrassModel, x: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """x(2P) as (numerator, denominator) from the duplication formula."""
    inv = model.invariants
    num = x ** 4 - inv.b4 * x ** 2 - 2 * inv.b6 * x - inv.b8
    den = 4 * x ** 3 + inv.b2 * x ** 2 + 2 * inv.b4 * x + inv.b6
    return num, den


def verify_four_torsion(model: WeierstrassModel, px: MultiPoly) -> MultiPoly:
    """Check that (px, y) is a 4-torsion point with 2P = (0, 0); return y."""
    _require_a1a3_zero(model)
    t = model.base_var
    px = px.with_variables((t,))
    y2 = _cubic_at(model, px)
    if y2.is_zero():
        raise IsogenyError("the point is 2-torsion, not 4-torsion")
    y = poly_sqrt(y2, t)
    if y is None:
        raise IsogenyError(f"{y2} is not the square of a polynomial: no section with x = {px}")
    num, den = double_x(model, px)
    if den.is_zero() or not num.is_zero():
        raise IsogenyError("x(2P) is not 0: the point does not double to (0, 0)")
    if model.a6:
        raise IsogenyError("(0, 0) is not on the curve")
    return y


def four_torsion_quotient(model: WeierstrassModel, p4_x: MultiPoly) -> WeierstrassModel:
    """Quotient by <P> where x(P) = p4_x and 2P = (0, 0)."""
    verify_four_torsion(model, p4_x)
    t = model.base_var
    px = p4_x.with_variables((t,))
    first = two_isogeny(model)
    # image of P under the first isogeny: X = y^2 / x^2 = (x^2 + a x + b) / x
    try:
        image_x = (px ** 2 + model.a2 * px + model.a4).exact_div(px)
    except DivisionError:
        raise IsogenyError("image of P has a non-polynomial x-coordinate") from None
    shifted = shift_two_torsion(first, image_x)
    return two_isogeny(shifted)


def j_equivalent(m1: WeierstrassModel, m2: WeierstrassModel) -> bool:
    """Equal j as rational functions of the base variable."""
    if m1.base_var != m2.base_var:
        raise IsogenyError("models live over different base variables")
    i1, i2 = m1.invariants, m2.invariants
    return i1.c4 ** 3 * i2.delta == i2.c4 ** 3 * i1.delta
