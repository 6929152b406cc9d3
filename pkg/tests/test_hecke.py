import random

import pytest

from k2tate.hecke import (
    Character, QExpansion, cyclic_character, cyclotomic_integers, diamond, eigen_consistency,
    hecke_T, hecke_prime_oracle, trivial_character,
)
from k2tate.rings import ZZ, divisors


def z4_character():
    R = cyclotomic_integers(4)
    return cyclic_character(5, 2, R.gen(), R)


def random_form(rng, chi, k, B):
    R = chi.ring
    if R is ZZ:
        coeffs = [rng.randint(-9, 9) for _ in range(B)]
    else:
        coeffs = [tuple(rng.randint(-9, 9) for _ in range(R.degree)) for _ in range(B)]
    return QExpansion(chi.modulus, k, chi, coeffs)


def eisenstein_with_character(chi, k, B):
    R = chi.ring
    c = [R.zero]
    for n in range(1, B):
        acc = R.zero
        for d in divisors(n):
            acc = R.add(acc, R.scale(d ** (k - 1), chi(d)))
        c.append(acc)
    return c


def test_character_values():
    chi = z4_character()
    R = chi.ring
    assert chi(2) == R.gen()
    assert R.eq(chi(4), R.neg(R.one))
    assert R.is_zero(chi(10))
    assert chi(7) == chi(2)


def test_character_validation():
    with pytest.raises(ValueError):
        Character(ZZ, 3, (0, 1))
    with pytest.raises(ValueError):
        Character(ZZ, 4, (1, 1, 0, 1))
    with pytest.raises(ValueError):
        Character(ZZ, 4, (0, 1, 1, 1))
    with pytest.raises(ValueError):
        Character(ZZ, 5, (0, 1, 1, -1, 1))
    with pytest.raises(ValueError):
        cyclic_character(5, 4, -1, ZZ)


def test_level_must_match_character():
    with pytest.raises(ValueError):
        QExpansion(6, 2, trivial_character(5), [0] * 5)


@pytest.mark.parametrize("chi_name", ["trivial", "z4"])
def test_T2_T3_equals_T6(chi_name):
    rng = random.Random(1)
    chi = trivial_character(5) if chi_name == "trivial" else z4_character()
    for k in (2, 3, 5):
        f = random_form(rng, chi, k, 60)
        assert hecke_T(hecke_T(f, 3), 2) == hecke_T(f, 6)
        assert hecke_T(hecke_T(f, 2), 3) == hecke_T(f, 6)


def test_T2_squared():
    rng = random.Random(2)
    chi = z4_character()
    R, k = chi.ring, 3
    f = random_form(rng, chi, k, 60)
    lhs = hecke_T(hecke_T(f, 2), 2)
    t4, t1 = hecke_T(f, 4), f.truncate(lhs.bound)
    w = R.scale(2 ** (k - 1), chi(2))
    rhs = [R.add(a, R.mul(w, b)) for a, b in zip(t4.coeffs, t1.coeffs)]
    assert all(R.eq(a, b) for a, b in zip(lhs.coeffs, rhs))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_T_p_against_direct_formula(p):
    rng = random.Random(p)
    chi = z4_character()
    f = random_form(rng, chi, 4, 80)
    g = hecke_T(f, p)
    assert g.bound == 80 // p
    assert all(chi.ring.eq(a, b) for a, b in zip(g.coeffs, hecke_prime_oracle(f, p)))


def test_T1_is_identity_and_bound_errors():
    f = random_form(random.Random(3), z4_character(), 2, 7)
    assert hecke_T(f, 1) == f
    assert hecke_T(f, 7).bound == 1
    with pytest.raises(ValueError):
        hecke_T(f, 8)
    with pytest.raises(ValueError):
        hecke_T(f, 0)


def test_diamond():
    chi = z4_character()
    R = chi.ring
    f = random_form(random.Random(4), chi, 2, 12)
    g = diamond(diamond(f, 2), 2)
    assert all(R.eq(a, R.neg(b)) for a, b in zip(g.coeffs, f.coeffs))
    assert diamond(f, 6) == f
    with pytest.raises(ValueError):
        diamond(f, 5)


def test_diamond_commutes_with_T():
    chi = z4_character()
    f = random_form(random.Random(5), chi, 3, 40)
    assert diamond(hecke_T(f, 3), 2) == hecke_T(diamond(f, 2), 3)


def test_eisenstein_eigenform_level_one():
    chi = trivial_character(1)
    c = [0] + [sum(d**3 for d in divisors(n)) for n in range(1, 200)]
    assert eigen_consistency(c, chi, 4, 199)
    f = QExpansion(1, 4, chi, c)
    for p in (2, 3, 5):
        g = hecke_T(f, p)
        assert all(g.coeffs[n] == c[p] * c[n] for n in range(1, g.bound))


def test_eisenstein_eigenform_with_character():
    chi = z4_character()
    R = chi.ring
    c = eisenstein_with_character(chi, 3, 120)
    assert eigen_consistency(c, chi, 3, 119)
    f = QExpansion(5, 3, chi, c)
    for p in (2, 3, 5, 7):
        g = hecke_T(f, p)
        assert all(R.eq(g.coeffs[n], R.mul(c[p], c[n])) for n in range(1, g.bound))
    # the same data with the conjugate character is not an eigenform
    bar = cyclic_character(5, 2, R.neg(R.gen()), R)
    assert not eigen_consistency(c, bar, 3, 119)


def test_eigen_consistency_witnesses():
    chi = trivial_character(1)
    c = [0] + [n**11 for n in range(1, 50)]
    assert eigen_consistency(c, chi, 12, 49).witness == ("recurrence", 2, 1)
    d = [0] + [sum(x for x in divisors(n)) for n in range(1, 50)]
    d[6] += 1
    assert eigen_consistency(d, chi, 2, 49).witness == ("coprime", 2, 3)
    with pytest.raises(ValueError):
        eigen_consistency([0, 2, 3], chi, 2, 2)
