"""Point counts for ``Y^2 = X^3 + X^2 + t^n`` over finite fields and Frobenius power sums."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd

import numpy as np

from .rings import FiniteField, is_prime, prime_factors

MAX_FIELD_PAIRS = 10**8


class _FieldTables:
    """Index arithmetic for ``F_{l^m}``: elements are ints ``0..q-1`` (base-l digits)."""

    def __init__(self, ell: int, m: int):
        self.ell, self.m = ell, m
        self.q = q = ell**m
        fld = FiniteField(ell, m)
        # digits of every index, for vectorised addition
        idx = np.arange(q, dtype=np.int64)
        self.digits = np.stack([(idx // ell**j) % ell for j in range(m)], axis=1)
        self.weights = ell ** np.arange(m, dtype=np.int64)
        gen = self._generator(fld)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = fld.one
        for i in range(q - 1):
            j = fld.index(cur)
            exp[i] = j
            log[j] = i
            cur = fld.mul(cur, gen)
        self.exp, self.log = exp, log

    @staticmethod
    def _generator(fld: FiniteField):
        order = fld.size - 1
        primes = prime_factors(order) if order > 1 else []
        for i in range(1, fld.size):
            g = fld.element(i)
            if all(not fld.eq(fld.pow(g, order // r), fld.one) for r in primes):
                return g
        raise AssertionError("no generator")

    def add(self, a, b):
        s = (self.digits[a] + self.digits[b]) % self.ell
        return s @ self.weights

    def power(self, k: int) -> np.ndarray:
        """Index of ``x^k`` for every ``x``."""
        out = np.zeros(self.q, dtype=np.int64)
        nz = np.arange(1, self.q)
        out[nz] = self.exp[(self.log[nz] * k) % (self.q - 1)]
        if k == 0:
            out[0] = self.exp[0]
        return out

    def chi(self) -> np.ndarray:
        """Quadratic character on indices."""
        c = np.zeros(self.q, dtype=np.int64)
        nz = np.arange(1, self.q)
        c[nz] = np.where(self.log[nz] % 2 == 0, 1, -1)
        return c


def count_affine(n: int, ell: int, m: int) -> int:
    """``#{(t, X, Y) in F_{l^m}^3 : Y^2 = X^3 + X^2 + t^n}``."""
    if not is_prime(ell) or ell == 2:
        raise ValueError("l must be an odd prime")
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    q = ell**m
    if q * q > MAX_FIELD_PAIRS:
        raise ValueError(f"field of size {q} exceeds the counting limit")
    T = _FieldTables(ell, m)
    chi = T.chi()
    tn = T.power(n)
    cube = T.add(T.power(3), T.power(2))
    hist_t = np.bincount(tn, minlength=q)
    hist_x = np.bincount(cube, minlength=q)
    xs = np.nonzero(hist_x)[0]
    wx = hist_x[xs]
    total = 0
    for a in np.nonzero(hist_t)[0]:
        s = T.add(np.full(len(xs), a), xs)
        total += int(hist_t[a]) * int((wx * chi[s]).sum())
    return q * q + total


@dataclass
class CountReport:
    n: int
    ell: int
    m: int
    nu_affine: int
    nu_surface: int
    power_sum: int

    def as_dict(self):
        return dict(n=self.n, l=self.ell, m=self.m, nu_affine=self.nu_affine,
                    nu_surface=self.nu_surface, power_sum=self.power_sum)


def count_surface(n: int, ell: int, m: int) -> CountReport:
    """``nu_m(X) = 1 + (12k - n + 11) l^m + nu_m(X^o)`` for ``6`` not dividing ``n``."""
    if n % 6 == 0:
        raise ValueError("the completion formula needs 6 not dividing n")
    k = (n - 1) // 6
    aff = count_affine(n, ell, m)
    surf = 1 + (12 * k - n + 11) * ell**m + aff
    return CountReport(n, ell, m, aff, surf, surf - 1 - ell ** (2 * m))


def betti(n: int) -> int:
    """Number of Frobenius eigenvalues ``B = 10 + 12k``."""
    return 10 + 12 * ((n - 1) // 6)


def power_sums(n: int, ell: int, m_list) -> list[int]:
    out = []
    for m in m_list:
        r = count_surface(n, ell, m)
        if abs(r.power_sum) > betti(n) * ell**m:
            raise AssertionError(f"power sum {r.power_sum} violates the Weil bound")
        out.append(r.power_sum)
    return out


def all_eigenvalues_equal_ell(power_sum_1: int, n: int, ell: int) -> bool:
    """``sum alpha_i = B l`` with ``|alpha_i| = l`` forces ``alpha_i = l`` for all ``i``."""
    return power_sum_1 == betti(n) * ell


# ---------------------------------------------------------------------------
# Newton identities


def elementary_from_power_sums(p: list[int], count: int) -> list:
    """``e_0..e_count`` from ``p_1..p_count`` (``p[0]`` unused)."""
    from fractions import Fraction

    e = [Fraction(1)]
    for k in range(1, count + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * p[i] for i in range(1, k + 1))
        e.append(Fraction(s, k))
    return e


def power_sums_from_elementary(e: list[int], count: int) -> list[int]:
    """``p_1..p_count`` (index 0 unused) via ``p_k = (-1)^(k-1) k e_k + sum_{i<k} (-1)^(k-1+i) e_(k-i) p_i``."""
    p = [0] * (count + 1)
    for k in range(1, count + 1):
        ek = e[k] if k < len(e) else 0
        s = (-1) ** (k - 1) * k * ek
        for i in range(1, k):
            eki = e[k - i] if k - i < len(e) else 0
            s += (-1) ** (k - 1 + i) * eki * p[i]
        p[k] = s
    return p


@dataclass
class NewtonReport:
    n: int
    ell: int
    sign: int
    B: int
    p_n_minus_1: int
    p_2n_minus_2: int
    claimed_n_minus_1: int
    claimed_2n_minus_2: int | None
    hypotheses_ok: bool

    @property
    def matches_claim(self) -> bool:
        ok = self.p_n_minus_1 == self.claimed_n_minus_1
        if self.claimed_2n_minus_2 is not None:
            ok = ok and self.p_2n_minus_2 == self.claimed_2n_minus_2
        return ok

    def as_dict(self):
        return dict(n=self.n, l=self.ell, sign=self.sign, B=self.B,
                    p_n_minus_1=self.p_n_minus_1, p_2n_minus_2=self.p_2n_minus_2,
                    claimed_n_minus_1=self.claimed_n_minus_1,
                    claimed_2n_minus_2=self.claimed_2n_minus_2,
                    hypotheses_ok=self.hypotheses_ok, matches_claim=self.matches_claim)


def claimed_values(n: int, ell: int, sign: int) -> tuple[int, int | None]:
    """The stated values of ``p_(n-1)`` and (for ``sign = +1``) ``p_(2n-2)``."""
    k = (n - 1) // 6
    if sign < 0:
        return (10 + 12 * k) * ell ** (n - 1), None
    return 10, (10 + 12 * k) * ell ** (n - 1)


def newton_eigen_check(n: int, ell: int, sign: int) -> NewtonReport:
    """Power sums ``p_(n-1)``, ``p_(2n-2)`` forced by ``p_m = (12k-n+11) l^m`` for ``(n-1)`` not dividing ``m`` and ``prod alpha_i = sign l^B``.

    The characteristic polynomial ``P(x) = prod (1 - alpha_i x)`` of degree
    ``B = c0 + n - 1`` (``c0 = 12k - n + 11``) equals ``(1 - l x)^c0 Q(x^(n-1))``;
    ``Q`` is then a polynomial of degree one, ``1 + c x^(n-1)``, and the
    product condition fixes ``c``.  Power sums are recovered from ``P`` by the
    Newton identities in exact integers and the hypotheses re-checked.
    """
    if n < 11 or not is_prime(n):
        raise ValueError("the eigenvalue check needs a prime n >= 11")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k = (n - 1) // 6
    c0 = 12 * k - n + 11
    B = betti(n)
    # leading coefficient of P is prod(-alpha_i) = (-1)^B sign l^B = (-l)^c0 c
    c = (-1) ** (B - c0) * sign * ell ** (B - c0)
    P = [0] * (B + 1)
    for j in range(c0 + 1):
        coef = comb(c0, j) * (-ell) ** j
        P[j] += coef
        P[j + n - 1] += coef * c
    e = [(-1) ** j * P[j] for j in range(B + 1)]
    top = 3 * (n - 1) + 1
    p = power_sums_from_elementary(e, top)
    hyp = all(p[m] == c0 * ell**m for m in range(1, top + 1) if m % (n - 1))
    hyp = hyp and e[B] == sign * ell**B
    # the Newton identities must give back the elementary symmetric functions
    back = elementary_from_power_sums(p, top)
    hyp = hyp and all(back[j] == (e[j] if j <= B else 0) for j in range(top + 1))
    cl1, cl2 = claimed_values(n, ell, sign)
    return NewtonReport(n, ell, sign, B, p[n - 1], p[2 * n - 2], cl1, cl2, hyp)


# ---------------------------------------------------------------------------


def admissible_prime(n: int, p: int) -> tuple[bool, str]:
    """Primes ``p`` for which the eigenvalue conditions are known to hold."""
    if not is_prime(p):
        return False, f"{p} is not prime"
    if n == 2 or n == 3:
        return (p >= 5, "p >= 5" if p >= 5 else f"n = {n} needs p >= 5")
    if n == 5:
        if p < 7:
            return False, "n = 5 needs p >= 7"
        if p == 19:
            return False, "n = 5 excludes p = 19"
        return True, "p >= 7 and p != 19"
    if n == 7:
        if (2 * 3 * 7 * 13) % p == 0:
            return False, "n = 7 needs p prime to 2*3*7*13"
        return True, "p prime to 2*3*7*13"
    if n >= 11 and n <= 29 and is_prime(n):
        if (6 * n) % p == 0:
            return False, f"p divides 6n = {6 * n}"
        if (2 * (n - 1)) % (p - 1) == 0:
            return False, f"p - 1 = {p - 1} divides 2(n-1) = {2 * (n - 1)}"
        return True, "p prime to 6n and p - 1 does not divide 2(n-1)"
    raise ValueError(f"n = {n} is outside the supported set {{2, 3, 5, 7, primes 11..29}}")


def generator_hypothesis(n: int, ell: int) -> bool:
    """``l mod n`` generates ``(Z/n)^*`` (``n`` prime)."""
    if not is_prime(n) or ell % n == 0:
        return False
    order = 1
    x = ell % n
    while x != 1:
        x = x * ell % n
        order += 1
    return order == n - 1 and gcd(ell, n) == 1
