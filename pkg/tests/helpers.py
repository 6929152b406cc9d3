"""Random test data shared by several test modules."""

import random
from fractions import Fraction

from k2tate.rings import QQ, zmod
from k2tate.series import LaurentSeries as L
from k2tate.theta_symbols import CanonicalProduct, ElementaryFactor

RINGS = {"QQ": QQ, "Z/11^4": zmod(11, 4)}


def rand_unit_coeff(rng, R):
    if R == QQ:
        return Fraction(rng.choice([1, -1, 2, -3, 5])) / rng.choice([1, 2, 3])
    while True:
        c = rng.randrange(R.modulus)
        if c % R.p:
            return c


def rand_coeff(rng, R):
    if R == QQ:
        return Fraction(rng.randint(-4, 4))
    return rng.randrange(R.modulus)


def rand_series(rng, R, N, order):
    cs = [rand_unit_coeff(rng, R)] + [rand_coeff(rng, R) for _ in range(N - order - 1)]
    return L(R, cs, order, N)


def rand_product(rng, R, N, nfactors=3):
    a0 = rand_series(rng, R, N + 2, rng.randint(-2, 2))
    factors = []
    for _ in range(nfactors):
        i = rng.choice([1, 2, 3, -1, -2])
        order = rng.randint(0, 2) if i > 0 else rng.randint(1, 3)
        factors.append(ElementaryFactor(i, rand_series(rng, R, N + 2, order), rng.choice([1, -1, 2])))
    return CanonicalProduct(a0, rng.randint(-2, 2), factors)


def same_unit(a, b, N):
    return a.order == b.order and a.unit_part.agrees(b.unit_part, min(N, a.unit_part.prec, b.unit_part.prec))


def is_one(v, N):
    R = v.unit_part.ring
    return v.order == 0 and v.unit_part.agrees(L.one(R, N), min(N, v.unit_part.prec))
