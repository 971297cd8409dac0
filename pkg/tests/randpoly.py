"""Seeded random polynomials shared by the property tests and the acceptance run."""

import random
from fractions import Fraction

from ellquot.algebra import MultiPoly

SQUAREFREE_POOL = ["t", "t - 1", "t + 2", "t^2 + 1", "t^2 - 2", "t^2 + t + 1", "t - 1/3", "t^3 - 5"]


def rand_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def rand_multipoly(rng: random.Random, variables=("x", "y", "t"), max_terms=5, max_deg=4) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = tuple(rng.randint(0, max_deg) for _ in variables)
        c = rand_coeff(rng)
        if c:
            terms[exp] = c
    return MultiPoly(tuple(variables), terms)


def rand_univariate(rng: random.Random, var="t", max_deg=4, nonzero=True) -> MultiPoly:
    while True:
        p = MultiPoly.from_dense([rand_coeff(rng) for _ in range(rng.randint(1, max_deg + 1))], var)
        if not nonzero or not p.is_zero():
            return p


def rand_product(rng: random.Random, pool, var="t", max_factors=4, max_exp=3):
    """A nonzero constant times a product of powers of pool polynomials."""
    from ellquot.algebra import parse_poly

    p = MultiPoly.constant(rng.choice([1, -2, Fraction(3, 4), 5]), (var,))
    for _ in range(rng.randint(0, max_factors)):
        p = p * parse_poly(rng.choice(pool), [var]) ** rng.randint(1, max_exp)
    return p
