import random
from fractions import Fraction

import pytest
from helpers import RINGS, is_one, rand_product, rand_series, rand_unit_coeff, same_unit

from k2tate.rings import QQ, zmod
from k2tate.series import LaurentSeries as L
from k2tate.theta_symbols import (
    CanonicalProduct, ElementaryFactor, MilnorSymbol, boundary, canonical_of_rational,
    canonical_of_theta, eisenstein_symbol, eisenstein_value, norm_by_determinant, norm_to_q, pair,
    tame_symbol_sum, tau_infinity, theta_quotient,
)

N = 8


def test_factor_order_validation():
    q = L.gen(QQ, 5)
    with pytest.raises(ValueError):
        ElementaryFactor(-1, L.one(QQ, 5))
    with pytest.raises(ValueError):
        ElementaryFactor(1, q.shift(-2))
    with pytest.raises(ValueError):
        ElementaryFactor(0, q)


def test_canonical_of_theta_q_inverse():
    # 1 - q^-1 u = -q^-1 u (1 - q u^-1)
    q = L.gen(QQ, 6)
    c = canonical_of_theta(q.invert(), 6)
    assert c.n == 1
    assert c.a0.agrees(L.monomial(QQ, -1, 4, -1))
    # theta(q u) = -u^-1 theta(u)
    c = canonical_of_theta(q, 6)
    assert c.n == -1 and c.a0.agrees(L.monomial(QQ, 0, 4, -1))


def test_canonical_of_theta_evaluates_to_theta():
    from k2tate.tate import theta_eval

    M = 10
    q = L.gen(QQ, M)
    alpha = q.scale(Fraction(2))
    c = canonical_of_theta(alpha, M)
    u = L.monomial(QQ, 0, M, Fraction(3))
    assert c.evaluate(u).agrees(theta_eval(alpha.scale(Fraction(3))), 6)


def test_pairing_with_constants():
    # <u, c> = c^-1 and <c, d> = 1
    c = L(QQ, [Fraction(3), 1], 0, N)
    u = CanonicalProduct(L.one(QQ, N), 1)
    const = CanonicalProduct(c)
    v = pair(u, const, N)
    assert same_unit(v, c.invert().unit_decompose(), N)
    assert is_one(pair(const, CanonicalProduct(c * c), N), N)


@pytest.mark.parametrize("name", list(RINGS))
def test_pairing_matches_tame_symbols(name):
    R = RINGS[name]
    rng = random.Random(11)
    M = N + 8
    for _ in range(25):
        def rnd_roots(k):
            return [(rand_series(rng, R, M, rng.randint(-2, 2)), rng.choice([1, -1, 2]))
                    for _ in range(k)]
        fr, gr = rnd_roots(2), rnd_roots(2)
        fc, gc = rand_series(rng, R, M, 0), rand_series(rng, R, M, rng.randint(-1, 1))
        f = canonical_of_rational(fc, fr, M, R)
        g = canonical_of_rational(gc, gr, M, R)
        assert same_unit(pair(f, g, N), tame_symbol_sum(fc, fr, gc, gr, N), N)


def test_pairing_antisymmetric_and_bilinear():
    rng = random.Random(5)
    R = zmod(11, 4)
    for _ in range(10):
        f1, f2, g = (rand_product(rng, R, N) for _ in range(3))
        fg, gf = pair(f1, g, N), pair(g, f1, N)
        assert fg.order == -gf.order
        assert is_one(type(fg)(0, (fg.unit_part * gf.unit_part)), N)
        lhs = pair(f1 * f2, g, N)
        rhs = (pair(f1, g, N).series() * pair(f2, g, N).series()).unit_decompose()
        assert same_unit(lhs, rhs, N)


def test_boundary_is_q_order():
    q = L.gen(QQ, N)
    assert boundary(L.monomial(QQ, -3, N)) == -3
    v = pair(CanonicalProduct(L.one(QQ, N), 1), CanonicalProduct(q), N)
    assert boundary(v) == -1


@pytest.mark.parametrize("abc", [(1, 2, 3), (1, 2, 4), (2, 3, 5)])
def test_eisenstein_value_matches_symbol(abc):
    a, b, c = abc
    M = 10
    v = eisenstein_value(a, b, c, M)
    assert v.order == a * (b - a) * (b - c)
    w = tau_infinity(eisenstein_symbol(a, b, c, M), M)
    assert same_unit(v, w, M)


def test_eisenstein_torsion_sign():
    # a, b odd and c even: the two sides differ by -1
    M = 6
    v = eisenstein_value(1, 3, 4, M)
    w = tau_infinity(eisenstein_symbol(1, 3, 4, M), M)
    assert v.order == w.order
    assert v.unit_part.agrees(-w.unit_part)


@pytest.mark.parametrize("abc", [(1, 2, 3), (1, 3, 4)])
def test_norm_two_ways(abc):
    v = eisenstein_value(*abc, 12)
    n1, n2 = norm_to_q(v, abc[2]), norm_by_determinant(v, abc[2])
    assert n1.order == n2.order
    assert n1.unit_part.agrees(n2.unit_part)


def test_theta_quotient_evaluates():
    from k2tate.tate import theta_eval

    M = 12
    q = L.gen(QQ, M)
    alpha, beta = q.scale(Fraction(2)), L.monomial(QQ, 0, M, Fraction(3))
    t = theta_quotient([alpha], [beta], M)
    u = L.monomial(QQ, 0, M, Fraction(5))
    want = theta_eval(alpha.scale(5)) * theta_eval(beta.scale(5)).invert()
    assert t.evaluate(u).agrees(want, 6)


def test_milnor_symbol_sum():
    rng = random.Random(2)
    f, g, h = (rand_product(rng, QQ, N) for _ in range(3))
    s = MilnorSymbol([(f, g, 1)]) + MilnorSymbol([(f, h, 2)])
    want = (pair(f, g, N).series() * pair(f, h, N).series() ** 2).unit_decompose()
    assert same_unit(tau_infinity(s, N), want, N)
