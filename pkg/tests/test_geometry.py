from collections import Counter
from fractions import Fraction
from math import gcd

import pytest

from ellquot import geometry as geo
from ellquot.algebra import parse_poly
from ellquot.surfaces import surface_invariants
from ellquot.weierstrass import classify_all


def test_curve_examples():
    c5 = geo.curve_data(5)
    assert c5.genus == 2 and [p.weight for p in c5.special_points] == [1, 1, 2]
    assert geo.curve_data(2).genus == 0
    c6 = geo.curve_data(6)
    assert c6.genus == 2 and c6.stated_genus == 3 and c6.genus_flagged
    with pytest.raises(geo.GeometryError):
        geo.curve_data(1)


@pytest.mark.parametrize("n", range(2, 21))
def test_riemann_hurwitz(n):
    c = geo.curve_data(n)
    assert c.riemann_hurwitz_genus() == c.genus
    orders = sorted(p.stabilizer_order for p in c.special_points)
    assert orders == ([n] * 3 if n % 2 else [n // 2, n // 2, n, n])


def test_hodge_examples():
    assert geo.hodge_h_i0(3, 2) == [1, 0, 1]
    for n in range(2, 9):
        for l in range(1, 6):
            h = geo.hodge_h_i0(n, l)
            assert h == [1] + [0] * (l - 1) + [geo.curve_data(n).genus]


@pytest.mark.parametrize("n", range(2, 9))
def test_hodge_matches_pg(n):
    assert geo.hodge_h_i0(n, 2)[2] == surface_invariants(classify_all(geo.z_model(n))).p_g


def _types(n):
    return Counter(r.type for r in geo.singular_points_Y2(n))


def test_singularities_examples():
    assert _types(5) == Counter({(5, 1, 4): 5, (5, 1, 3): 4})
    assert _types(6) == Counter({(6, 1, 5): 4, (3, 1, 2): 2, (3, 1, 1): 4})
    assert _types(2) == Counter({(2, 1, 1): 4})


@pytest.mark.parametrize("n", range(3, 21))
def test_singularity_counts(n):
    recs = geo.singular_points_Y2(n, include_smooth=True)
    assert sum(r.orbit_size for r in recs) == (9 if n % 2 else 16)
    t = Counter(r.type for r in geo.singular_points_Y2(n))
    if n % 2:
        assert t == Counter({(n, 1, n - 1): 5, (n, 1, (n + 1) // 2): 4}) or n == 3
    else:
        k = n // 2
        expected = Counter({(n, 1, n - 1): 4})
        expected[(k, 1, max(1, k - 1))] += 2
        expected[(k, 1, 1)] += 4
        assert t == expected


def test_hj_examples():
    assert geo.hj_string(7, 6) == [2] * 6
    assert geo.hj_string(5, 3) == [2, 3]
    assert geo.hj_string(9, 1) == [9]
    with pytest.raises(geo.GeometryError):
        geo.hj_string(6, 3)


def test_hj_reassembles():
    for k in range(2, 51):
        for q in range(1, k):
            if gcd(k, q) == 1:
                assert geo.evaluate_hj(geo.hj_string(k, q)) == Fraction(k, q)


def test_resolution_strings_match_bullets():
    n = 7
    strings = {r.type: r.resolution for r in geo.singular_points_Y2(n)}
    assert strings[(n, 1, n - 1)] == tuple([2] * (n - 1))
    assert strings[(n, 1, (n + 1) // 2)] == (2, (n + 1) // 2)
    assert {r.resolution for r in geo.singular_points_Y2(8) if r.type == (4, 1, 1)} == {(4,)}


@pytest.mark.parametrize("n", range(3, 21))
def test_fiber_graphs(n):
    F1, F2, sections = geo.resolution_fiber_graphs(n)
    assert F1.recognized_type == f"I_{4 * n}" and len(F1.nodes) == 4 * n
    assert F2.recognized_type == (f"I*_{n}" if n % 2 else f"I_{n}")
    assert len(F2.nodes) == (n + 5 if n % 2 else n)
    chi = surface_invariants(classify_all(geo.z_model(n))).chi
    assert len(sections) == 4 and all(s["self_intersection"] == -chi for s in sections)


def test_edge_list_format():
    text = geo.full_resolution_graph(5).edge_list()
    assert text.startswith("# nodes") and "edge " in text


def test_resolution_requires_n3():
    with pytest.raises(geo.GeometryError):
        geo.resolution_fiber_graphs(2)


def test_cover_equation_examples():
    b = geo.cover_equation(3, 2)
    assert b.equations["cover"].rhs == parse_poly("(v1^2-w1^2)*w1*(v2^2-w2^2)*w2", b.variables)
    assert str(geo.cover_equation(2, 1).equations["cover"]) == "U^2 = v1^2 - w1^2"
    rhs = geo.cover_equation(5, 3).equations["cover"].rhs
    for exp, _ in rhs.items():
        for i in range(3):
            assert exp[1 + 2 * i] + exp[2 + 2 * i] == 5


def test_family_examples():
    b = geo.family_weierstrass(5, 2)
    assert b.equations["surface"].rhs == parse_poly("x*(x^2+sigma*(sigma^5-2*tau^5)*x+tau^10*sigma^2)", b.variables)
    b4 = geo.family_weierstrass(4, 2)
    assert b4.equations["surface"].rhs == parse_poly("x*(x^2+(sigma^4-2*tau^4)*x+tau^8)", b4.variables)
    b3 = geo.family_weierstrass(3, 3)
    assert b3.equations["family"].rhs == parse_poly(
        "X*(X^2+(v1^2-1)*((v1^2-1)-2*t^3)*X+t^6*(v1^2-1)^2)", b3.variables)


def test_substitution_identity_and_failure():
    b = geo.family_weierstrass(3, 2)
    assert geo.substitution_check(b, b, {})
    cover = geo.cover_equation(3, 2)
    assert not geo.substitution_check(cover, geo.curve_product_bundle(3, 2), {"U": "2*u1*u2"})
    with pytest.raises(geo.GeometryError):
        geo.substitution_check(cover, cover, {"U": ("U", "0")})


@pytest.mark.parametrize("n", range(2, 7))
def test_structural_identities(n):
    assert all(geo.structural_identities(n).values())


def test_delta_s_t():
    computed, stated = geo.delta_s_t()
    assert computed == 16 * stated


def test_k3_reports():
    r = geo.k3_fiber_report(1)
    assert r["configuration"] == "2I*_1+I_8+2I_1" and r["rho"] == 19 and r["ns_det"] == 8
    assert r["transcendental"] == {"U+<8>": True, "<2>+<8>": False}
    assert r["invariants"]["chi"] == 2 and r["torsion"] == "Z/4Z"
    s = geo.k3_fiber_report(Fraction(-1, 4))
    assert s["configuration"] == "2I*_1+I_8+I_2" and s["rho"] == 20
    assert s["transcendental"]["<2>+<8>"]
    with pytest.raises(geo.GeometryError):
        geo.k3_fiber_report(0)


def test_table_check():
    rows = geo.fibration_table_check()
    assert len(rows) == 15
    flagged = [r for r in rows if not r["consistent"]]
    assert [(r["fibers"], r["computed_rank"], r["claimed_rank"]) for r in flagged] == [("IV*+I*_3", 4, 1)]
    by = {r["fibers"]: r for r in rows}
    assert by["2II*"]["computed_rank"] == 1 and by["I_16"]["computed_rank"] == 2


def test_canonical_triviality():
    assert geo.canonical_triviality_check([(4, 4), (8, 8), (12, 12)])["accepted"]
    assert not geo.canonical_triviality_check([(5, 4), (8, 8), (12, 12)])["accepted"]
    fam = geo.family_weierstrass(5, 4)
    c = fam.equations["family"].rhs.coefficients_in("X")
    degs = geo.weierstrass_multidegrees([c[2], c[1], c.get(0, c[2] * 0)], ["v1", "v2"])
    assert geo.canonical_triviality_check(degs)["accepted"]


def test_kodaira_chain_examples():
    r = geo.kodaira_bound_chain(5, 2)
    assert r["result"] == "= 1" and "computed" in r["lines"][-1]["provenance"]
    assert geo.kodaira_bound_chain(2, 4)["result"] == "= -inf"
    assert geo.kodaira_bound_chain(7, 5)["result"] == "<= 1"
    assert geo.kodaira_bound_chain(3, 3)["lines"][-1]["provenance"].startswith("cited")
