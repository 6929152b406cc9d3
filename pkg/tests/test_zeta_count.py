import pytest

from k2tate.rings import FiniteField
from k2tate.zeta_count import (
    admissible_prime, all_eigenvalues_equal_ell, betti, count_affine, count_surface,
    elementary_from_power_sums, newton_eigen_check, power_sums, power_sums_from_elementary,
)


def brute_count(n, ell, m):
    F = FiniteField(ell, m)
    els = [F.element(i) for i in range(F.size)]
    squares = {}
    for y in els:
        s = F.index(F.mul(y, y))
        squares[s] = squares.get(s, 0) + 1
    total = 0
    for t in els:
        tn = F.pow(t, n)
        for x in els:
            v = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(x, x)), tn)
            total += squares.get(F.index(v), 0)
    return total


@pytest.mark.parametrize("n,ell,m", [(2, 5, 1), (3, 7, 1), (5, 11, 1), (7, 3, 2), (2, 5, 2)])
def test_count_against_brute_force(n, ell, m):
    assert count_affine(n, ell, m) == brute_count(n, ell, m)


def test_count_limits():
    with pytest.raises(ValueError):
        count_affine(2, 4, 1)
    with pytest.raises(ValueError):
        count_affine(2, 101, 2)
    with pytest.raises(ValueError):
        count_surface(6, 5, 1)


def test_power_sum_weil_bound():
    for m, s in zip((1, 2), power_sums(5, 19, (1, 2))):
        assert abs(s) <= betti(5) * 19**m


def test_all_eigenvalues_equal_ell():
    s = count_surface(2, 13, 1).power_sum
    assert all_eigenvalues_equal_ell(s, 2, 13)
    assert not all_eigenvalues_equal_ell(s - 1, 2, 13)


def test_newton_identities_on_explicit_roots():
    roots = [2, -3, 5, 7, -1, 4]
    e = [1]
    for r in roots:
        e = [a - r * b for a, b in zip(e + [0], [0] + e)]
    elem = [(-1) ** k * c for k, c in enumerate(e)]
    p = power_sums_from_elementary(elem, 9)
    assert p[1:] == [sum(r**k for r in roots) for k in range(1, 10)]
    assert elementary_from_power_sums(p, 6) == elem


def _sympy_solution(n, ell, sign):
    sp = pytest.importorskip("sympy")
    k = (n - 1) // 6
    B, c0 = 10 + 12 * k, 12 * k - n + 11
    M = B + 4
    r = sp.symbols(f"r1:{M // (n - 1) + 1}")
    p = {}
    for m in range(1, M + 1):
        extra = r[m // (n - 1) - 1] if m % (n - 1) == 0 else 0
        p[m] = c0 * ell**m + extra
    e = [sp.Integer(1)]
    for kk in range(1, M + 1):
        e.append(sp.expand(sum((-1) ** (i - 1) * e[kk - i] * p[i] for i in range(1, kk + 1)) / kk))
    eqs = [e[B] - sign * ell**B] + [e[kk] for kk in range(B + 1, M + 1)]
    sols = sp.solve(eqs, list(r), dict=True)
    return [(int(s[r[0]]) + c0 * ell ** (n - 1), int(s[r[1]]) + c0 * ell ** (2 * n - 2)) for s in sols]


@pytest.mark.parametrize("n", [11, 13])
@pytest.mark.parametrize("sign", [-1, 1])
def test_newton_check_against_symbolic_solution(n, sign):
    ell = 5
    r = newton_eigen_check(n, ell, sign)
    assert r.hypotheses_ok
    assert _sympy_solution(n, ell, sign) == [(r.p_n_minus_1, r.p_2n_minus_2)]


@pytest.mark.parametrize("n", [11, 13, 17, 19, 23, 29])
def test_newton_closed_form(n):
    k = (n - 1) // 6
    c0, B = 12 * k - n + 11, 10 + 12 * k
    for ell in (5, 13):
        for sign in (-1, 1):
            r = newton_eigen_check(n, ell, sign)
            assert r.p_n_minus_1 == (c0 - sign * (n - 1)) * ell ** (n - 1)
            assert r.p_2n_minus_2 == B * ell ** (2 * n - 2)


def test_newton_check_validation():
    with pytest.raises(ValueError):
        newton_eigen_check(7, 13, 1)
    with pytest.raises(ValueError):
        newton_eigen_check(11, 13, 0)


@pytest.mark.parametrize("n,p,ok", [
    (2, 3, False), (2, 5, True), (3, 7, True), (5, 5, False), (5, 19, False), (5, 23, True),
    (7, 11, True), (7, 13, False), (7, 5, True), (11, 7, True), (11, 5, False), (11, 11, False),
    (11, 3, False), (13, 5, False), (13, 11, True), (13, 9, False),
])
def test_admissible(n, p, ok):
    assert admissible_prime(n, p)[0] is ok


def test_admissible_unsupported_n():
    with pytest.raises(ValueError):
        admissible_prime(9, 11)
    with pytest.raises(ValueError):
        admissible_prime(31, 7)
