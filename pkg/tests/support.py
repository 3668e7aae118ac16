"""Seeded random generators shared by the unit and acceptance suites."""

import random
from fractions import Fraction

from hecke.field import build_field_context
from hecke.group import st_product


def random_element(rng, ctx, coeff=20, den=6, integral=False):
    coeffs = []
    for _ in range(ctx.degree):
        n = rng.randint(-coeff, coeff)
        coeffs.append(n if integral else Fraction(n, rng.randint(1, den)))
    return ctx.element(coeffs)


def random_nonzero(rng, ctx, **kw):
    while True:
        x = random_element(rng, ctx, **kw)
        if not x.is_zero():
            return x


def random_digits(rng, n_min=1, n_max=6, mag=4):
    return [rng.choice([-1, 1]) * rng.randint(1, mag) for _ in range(rng.randint(n_min, n_max))]


def random_group_matrix(rng, ctx, **kw):
    return st_product(random_digits(rng, **kw), ctx)


def make_rng(seed, tag):
    # independent stream per suite so adding cases to one leaves the others unchanged
    return random.Random(f"{seed}:{tag}")


def ctx(q):
    return build_field_context(q)
