from fractions import Fraction

import pytest

from ellquot.algebra import MultiPoly, Place, parse_poly
from ellquot.geometry import r_model, z_model
from ellquot.weierstrass import (
    DegenerateModelError,
    KodairaType,
    WeierstrassModel,
    classify_all,
    configuration_from_counts,
    fiber_at_infinity,
    flip_model,
    j_is_constant,
    minimalize_at,
    parse_configuration,
    standard_invariants,
    tate_classify,
)

T0 = Place.finite("t", "t")


def W(**kw):
    return WeierstrassModel.from_strings("t", **kw)


def test_r_discriminant():
    inv = standard_invariants(r_model())
    assert inv.delta == parse_poly("16*t^4*(1-4*t)", ["t"])
    assert 1728 * inv.delta == inv.c4 ** 3 - inv.c6 ** 2
    assert 4 * inv.b8 == inv.b2 * inv.b6 - inv.b4 ** 2


def test_generic_short_form_discriminant():
    vs = ("a", "b", "t")
    a, b = MultiPoly.var("a", vs), MultiPoly.var("b", vs)
    from ellquot.weierstrass import weierstrass_invariants

    z = MultiPoly(vs)
    inv = weierstrass_invariants(z, a, z, b, z)
    assert inv.delta == 16 * b ** 2 * (a ** 2 - 4 * b)


def test_j_zero_curve():
    inv = standard_invariants(W(a6="1"))
    assert inv.delta.constant_value() == -432 and inv.c4.is_zero()


def test_degenerate_model():
    with pytest.raises(DegenerateModelError):
        W(a6="0")


def test_minimalize_examples():
    m, log = minimalize_at(W(a6="t^6"), T0)
    assert m.a6 == parse_poly("1", ["t"]) and len(log) == 1
    m, log = minimalize_at(r_model(), T0)
    assert m == r_model() and not log
    m, log = minimalize_at(W(a6="t^7"), T0)
    assert m.a6 == parse_poly("t", ["t"]) and len(log) == 1


def test_tate_examples():
    assert str(tate_classify(r_model(), T0).type) == "I_4"
    assert str(tate_classify(r_model(), Place.finite("t-1/4", "t")).type) == "I_1"
    d = tate_classify(W(a6="t"), T0)
    assert str(d.type) == "II" and d.delta_valuation == 2


@pytest.mark.parametrize("coeffs,expected", [
    (dict(a6="t"), "II"), (dict(a4="t"), "III"), (dict(a6="t^2"), "IV"),
    (dict(a4="t^2", a6="t^3"), "I*_0"), (dict(a6="t^4"), "IV*"), (dict(a4="t^3"), "III*"),
    (dict(a6="t^5"), "II*"), (dict(a2="t", a4="t^2", a6="t^4"), None),
])
def test_additive_types(coeffs, expected):
    d = tate_classify(W(**coeffs), T0)
    if expected:
        assert str(d.type) == expected
    else:
        assert d.type.symbol == "I*"


def test_fiber_at_infinity():
    assert str(fiber_at_infinity(r_model()).type) == "I*_1"
    assert str(fiber_at_infinity(z_model(5)).type) == "I*_5"
    assert str(fiber_at_infinity(W(a6="1")).type) == "I_0"
    assert fiber_at_infinity(r_model()).provenance["flip_weight"] == 1


def test_flip_consistency():
    m = r_model()
    flipped, d = flip_model(m)
    assert str(fiber_at_infinity(flipped).type) == str(tate_classify(m, T0).type)


def test_classify_examples():
    assert classify_all(z_model(5)).summary() == "I*_5+I_20+5I_1"
    assert classify_all(z_model(2)).matches("I_2+I_8+2I_1")
    assert classify_all(r_model()).matches("I*_1+I_4+I_1")


@pytest.mark.parametrize("n", range(2, 13))
def test_z_family(n):
    c = classify_all(z_model(n))
    at_inf = f"I*_{n}" if n % 2 else f"I_{n}"
    assert c.matches(f"{at_inf}+I_{4 * n}+{n}I_1")
    assert c.euler_total % 12 == 0
    for e in c.entries:
        if e.type.symbol in ("I", "I*"):
            assert e.delta_valuation == e.type.euler


def test_rescaling_invariance():
    base = W(a2="1-2*t", a4="t^2")
    u = parse_poly("t-3", ["t"])
    scaled = WeierstrassModel("t", base.a1, base.a2 * u ** 2, base.a3, base.a4 * u ** 4, base.a6)
    for place in (T0, Place.finite("t-1/4", "t")):
        assert tate_classify(scaled, place).type == tate_classify(base, place).type


def test_j_constant():
    assert not j_is_constant(r_model())
    assert j_is_constant(W(a6="t^6"))
    assert not j_is_constant(z_model(3))


def test_kodaira_type_data():
    assert KodairaType.parse("I*_3") == KodairaType.parse("I_3^*") == KodairaType.Istar(3)
    assert KodairaType.Istar(2).component_group == (2, 2)
    assert KodairaType.Istar(1).component_group == (4,)
    assert KodairaType.parse("IV*").euler == 8 and KodairaType.parse("IV*").components == 7
    assert KodairaType.I(7).components == 7 and KodairaType.Istar(7).components == 12
    assert parse_configuration("2I*_1+I_8+2I_1")[KodairaType.Istar(1)] == 2


def test_configuration_from_counts():
    c = configuration_from_counts(parse_configuration("I*_5+I_20+5I_1"))
    assert c.euler_total == 36
