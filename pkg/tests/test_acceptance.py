"""The eleven acceptance criteria, each run exactly and reported as one PASS/FAIL line.

Run directly (python tests/test_acceptance.py) to print the lines, or through
pytest, where they are collected into the terminal summary.
"""

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest

from ellquot import geometry as geo
from ellquot.algebra import (
    MultiPoly,
    Place,
    SplitPlaceError,
    gcd_free_basis,
    parse_poly,
    squarefree_decomposition,
    univariate_gcd,
    valuation,
)
from ellquot.basechange import pullback_model, verify_base_change
from ellquot.isogeny import four_torsion_quotient, j_equivalent, two_isogeny
from ellquot.surfaces import modularity_criteria, shioda_tate_rank, surface_invariants, torsion_feasibility
from ellquot.weierstrass import WeierstrassModel, classify_all, j_is_constant

from randpoly import SQUAREFREE_POOL, rand_multipoly, rand_product, rand_univariate

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover - direct execution without pytest
    ACCEPTANCE_LINES = {}

CASES = 10 ** 4
SEED = 20261014


def _surface_from_family(n):
    """The l = 2 family, dehomogenized at sigma = 1 (base variable t = tau)."""
    bundle = geo.family_weierstrass(n, 2)
    rhs = bundle.equations["surface"].rhs.specialize({"sigma": 1})
    c = rhs.coefficients_in("x")
    t = ("t",)

    def coef(k):
        p = c.get(k)
        return MultiPoly(t) if p is None else p.specialize({"y": 0}).substitute({"tau": MultiPoly.var("t")}).with_variables(t)

    model = WeierstrassModel("t", MultiPoly(t), coef(2), MultiPoly(t), coef(1), coef(0))
    assert model == bundle.models["Z"]
    return model


def criterion_1():
    bad = []
    for n in range(2, 13):
        c = classify_all(_surface_from_family(n))
        inf = f"I*_{n}" if n % 2 else f"I_{n}"
        if not c.matches(f"{inf}+I_{4 * n}+{n}I_1"):
            bad.append((n, c.summary()))
    return not bad, f"n=2..12 configurations{'' if not bad else ' mismatched: ' + str(bad)}"


def criterion_2():
    bad = []
    for n in range(2, 13):
        model = geo.z_model(n)
        c = classify_all(model)
        inv = surface_invariants(c)
        g = (n - 1) // 2 if n % 2 else (n - 2) // 2
        rank = shioda_tate_rank(c, inv.h11)
        tors = torsion_feasibility(c, inv.chi)
        cls = "rational" if n == 2 else "K3" if n in (3, 4) else "properly-elliptic"
        mod = modularity_criteria(c, rank, j_is_constant(model))
        ok = (
            inv.e == 12 * (g + 1)
            and geo.curve_data(n).genus == g
            and inv.h11 == (5 * n + 5 if n % 2 else 5 * n)
            and rank == 0
            and tors.group_name == "Z/4Z"
            and inv.kodaira_class == cls
            and mod.extremal and mod.no_II_star_or_III_star and mod.j_nonconstant
        )
        if not ok:
            bad.append(n)
    return not bad, f"e, h11, MW rank, torsion, class, modularity for n=2..12{'' if not bad else ' failed: ' + str(bad)}"


def criterion_3():
    r = geo.r_model()
    bad = [n for n in range(1, 9) if not verify_base_change(r, n).consistent]
    z6 = classify_all(pullback_model(geo.z_model(3), 2)).matches(classify_all(geo.z_model(6)).counts())
    return not bad and z6, f"R base change consistent for n<=8 ({'ok' if not bad else bad}); pullback(Z_3, 2) ~ Z_6: {z6}"


def criterion_4():
    bad = []
    for n in range(2, 9):
        z = geo.z_model(n)
        q2 = two_isogeny(z)
        ref2 = WeierstrassModel.from_strings("t", a2=f"-2+4*t^{n}", a4=f"1-4*t^{n}")  # x(x-1)(x-1+4t^n)
        exp2 = f"{n}I_2+I_{2 * n}+I*_{2 * n}" if n % 2 else f"{n}I_2+2I_{2 * n}"
        q4 = four_torsion_quotient(z, parse_poly(f"t^{n}", ["t"]))
        ref4 = WeierstrassModel.from_strings("t", a2=f"-2*(4*t^{n}+1)", a4=f"(4*t^{n}-1)^2")
        exp4 = f"{n}I_4+I_{n}+I*_{n}" if n % 2 else f"{n}I_4+2I_{n}"
        if not (j_equivalent(q2, ref2) and classify_all(q2).matches(exp2)
                and j_equivalent(q4, ref4) and classify_all(q4).matches(exp4)):
            bad.append(n)
    return not bad, f"2- and 4-torsion quotients for n=2..8{'' if not bad else ' failed: ' + str(bad)}"


def criterion_5():
    problems = []
    t5 = Counter(r.type for r in geo.singular_points_Y2(5))
    if t5 != Counter({(5, 1, 4): 5, (5, 1, 3): 4}):
        problems.append(f"n=5 types {dict(t5)}")
    for n in range(4, 21, 2):
        k = n // 2
        expected = Counter({(n, 1, n - 1): 4})
        expected[(k, 1, max(1, k - 1))] += 2
        expected[(k, 1, 1)] += 4
        if Counter(r.type for r in geo.singular_points_Y2(n)) != expected:
            problems.append(f"even n={n}")
    for n in range(3, 21, 2):
        strings = {r.type: r.resolution for r in geo.singular_points_Y2(n)}
        if strings[(n, 1, n - 1)] != tuple([2] * (n - 1)) or strings[(n, 1, (n + 1) // 2)] != (2, (n + 1) // 2):
            problems.append(f"strings n={n}")
    for n in range(4, 21, 2):
        strings = {r.type: r.resolution for r in geo.singular_points_Y2(n)}
        if strings[(n // 2, 1, 1)] != (n // 2,):
            problems.append(f"strings n={n}")
    for n in range(3, 21):
        F1, F2, sections = geo.resolution_fiber_graphs(n)
        chi = surface_invariants(classify_all(geo.z_model(n))).chi
        if F1.recognized_type != f"I_{4 * n}" or F2.recognized_type != (f"I*_{n}" if n % 2 else f"I_{n}") \
                or any(s["self_intersection"] != -chi for s in sections) or len(sections) != 4:
            problems.append(f"graphs n={n}")
    return not problems, "singularity types, strings, F1/F2 graphs, section self-intersections for n<=20" + (
        f" problems: {problems}" if problems else "")


def criterion_6():
    from math import gcd

    count, bad = 0, []
    for k in range(2, 51):
        for q in range(1, k):
            if gcd(k, q) == 1:
                count += 1
                if geo.evaluate_hj(geo.hj_string(k, q)) != Fraction(k, q):
                    bad.append((k, q))
    return not bad, f"{count} coprime pairs with k<=50 reassemble exactly{'' if not bad else ': ' + str(bad[:5])}"


def criterion_7():
    g = geo.k3_fiber_report(1)
    s = geo.k3_fiber_report(Fraction(-1, 4))
    ok_g = (g["configuration"] == "2I*_1+I_8+2I_1" and g["rho"] == 19 and g["ns_det"] == 8
            and g["transcendental"]["U+<8>"])
    ok_s = s["configuration"] == "2I*_1+I_8+I_2" and s["rho"] == 20 and s["transcendental"]["<2>+<8>"]
    computed, stated = geo.delta_s_t()
    # the discriminant convention Delta = 16 b^2 (a^2 - 4b) carries the constant 16 the closed form omits
    ok_d = computed == 16 * stated
    return ok_g and ok_s and ok_d, (
        f"t0=1: {g['configuration']}, rho={g['rho']}, |det NS|={g['ns_det']}; "
        f"t0=-1/4: {s['configuration']}, rho={s['rho']}; Delta = t^4(v^2-1)^7(v^2-1-4t) up to the constant 16 of the b^2(a^2-4b) convention: {ok_d}")


def criterion_8():
    rows = geo.fibration_table_check()
    good = [r for r in rows if r["consistent"]]
    flagged = [r for r in rows if not r["consistent"]]
    ok = (len(rows) == 15 and len(good) == 14 and len(flagged) == 1 and flagged[0]["fibers"] == "IV*+I*_3"
          and flagged[0]["computed_rank"] == 4 and flagged[0]["claimed_rank"] == 1)
    return ok, f"{len(good)} of {len(rows)} rows consistent; flagged: " + ", ".join(
        f"{r['fibers']} (computed {r['computed_rank']} vs claimed {r['claimed_rank']})" for r in flagged)


def criterion_9():
    bad = []
    for n in range(2, 9):
        g = geo.curve_data(n).genus
        for l in range(1, 6):
            if geo.hodge_h_i0(n, l) != [1] + [0] * (l - 1) + [g]:
                bad.append((n, l))
        if geo.hodge_h_i0(n, 2)[2] != surface_invariants(classify_all(geo.z_model(n))).p_g:
            bad.append((n, "p_g"))
    return not bad, f"h^(i,0) = (1,0,...,0,g) for n<=8, l<=5 and p_g agreement{'' if not bad else ': ' + str(bad)}"


def criterion_10():
    results = {}
    for n in range(2, 9):
        for name, ok in geo.structural_identities(n).items():
            results.setdefault(name, True)
            results[name] &= ok
    return all(results.values()), "identities for n=2..8: " + ", ".join(f"{k}={v}" for k, v in sorted(results.items()))


def _roundtrip(rng):
    p = rand_multipoly(rng)
    return parse_poly(str(p), ["x", "y", "t"]) == p


def _squarefree(rng):
    p = rand_product(rng, SQUAREFREE_POOL) * rand_univariate(rng, max_deg=2)
    dec = squarefree_decomposition(p, "t")
    prod = MultiPoly.constant(1, ("t",))
    one = MultiPoly.constant(1, ("t",))
    for f, m in dec:
        prod = prod * f ** m
        if univariate_gcd(f, f.derivative("t"), "t") != one:
            return False
    lead = p.leading_term()[1]
    if prod.scale(lead) != p:
        return False
    return all(univariate_gcd(f, g, "t").is_constant() for (f, _), (g, _) in combinations(dec, 2))


def _gcd_free(rng):
    ps = [rand_product(rng, SQUAREFREE_POOL, max_factors=3) * rand_univariate(rng, max_deg=1) for _ in range(3)]
    basis, exps = gcd_free_basis(ps, "t")
    if any(not univariate_gcd(f, g, "t").is_constant() for f, g in combinations(basis, 2)):
        return False
    for p, row in zip(ps, exps):
        prod = MultiPoly.constant(1, ("t",))
        for b, e in zip(basis, row):
            prod = prod * b ** e
        quotient = p.exact_div(prod)
        if not quotient.is_constant():
            return False
    return True


_PLACES = [Place.finite(g, "t") for g in ("t", "t - 1", "t^2 + 1", "t^2 - 2", "t*(t - 1)", "t^3 - 5")]


def _valuation(rng):
    place = rng.choice(_PLACES)
    p = rand_product(rng, SQUAREFREE_POOL, max_factors=3)
    q = rand_product(rng, SQUAREFREE_POOL, max_factors=3)
    try:
        vp, vq = valuation(p, place), valuation(q, place)
    except SplitPlaceError:
        return None
    return valuation(p * q, place) == vp + vq


def criterion_11():
    rng = random.Random(SEED)
    summary = []
    ok = True
    for name, fn in (("round-trip", _roundtrip), ("squarefree", _squarefree), ("gcd-free", _gcd_free),
                     ("valuation", _valuation)):
        checked = failures = 0
        attempts = 0
        while checked < CASES:
            attempts += 1
            r = fn(rng)
            if r is None:
                continue
            checked += 1
            failures += not r
        ok &= failures == 0
        summary.append(f"{name} {checked - failures}/{checked}")
    return ok, "; ".join(summary)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11]


def _line(i, ok, detail):
    return f"criterion {i:2d}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("i", range(1, 12))
def test_criterion(i):
    ok, detail = CRITERIA[i - 1]()
    line = _line(i, ok, detail)
    ACCEPTANCE_LINES[i] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    for i, crit in enumerate(CRITERIA, 1):
        print(_line(i, *crit()), flush=True)
