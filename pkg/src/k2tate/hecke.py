"""Hecke and diamond operators on truncated q-expansions with a character."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .rings import ZZ, PolynomialQuotientRing, Ring, divisors, is_prime, multiplicative_order
from .theta_symbols import cyclotomic_polynomial


def cyclotomic_integers(m: int) -> Ring:
    """``Z[zeta_m]`` as ``Z[z]/(Phi_m)``; for ``m <= 2`` this is ``Z`` itself."""
    if m <= 2:
        return ZZ
    return PolynomialQuotientRing(ZZ, cyclotomic_polynomial(m), "z")


@dataclass(frozen=True)
class Character:
    """A Dirichlet character mod ``N`` stored as its table of values."""

    ring: Ring
    modulus: int
    values: tuple

    def __post_init__(self):
        R, N = self.ring, self.modulus
        if len(self.values) != N:
            raise ValueError("character table must have one entry per residue")
        if not R.eq(self.values[1 % N], R.one):
            raise ValueError("chi(1) must be 1")
        for a in range(N):
            if gcd(a, N) > 1 and not R.is_zero(self.values[a]):
                raise ValueError(f"chi({a}) must vanish since gcd({a}, {N}) > 1")
        for a in range(N):
            for b in range(N):
                if not R.eq(R.mul(self.values[a], self.values[b]), self.values[a * b % N]):
                    raise ValueError("character is not multiplicative")

    def __call__(self, a: int):
        return self.values[a % self.modulus]


def trivial_character(N: int, ring: Ring = ZZ) -> Character:
    return Character(ring, N, tuple(ring.one if gcd(a, N) == 1 else ring.zero for a in range(N)))


def cyclic_character(N: int, g: int, value, ring: Ring) -> Character:
    """The character with ``chi(g) = value`` on a cyclic ``(Z/N)^*`` generated by ``g``."""
    phi = sum(1 for a in range(1, N + 1) if gcd(a, N) == 1)
    if N > 1 and multiplicative_order(g, N) != phi:
        raise ValueError(f"{g} does not generate (Z/{N})^*")
    vals = [ring.zero] * N
    cur, x = ring.one, 1 % N
    for _ in range(max(phi, 1)):
        vals[x] = cur
        cur = ring.mul(cur, value)
        x = x * g % N
    return Character(ring, N, tuple(vals))


@dataclass
class QExpansion:
    """``sum_{n<B} c_n q^n`` of weight ``k`` and character ``chi`` mod ``N``; ``coeffs[n] = c_n``."""

    level: int
    weight: int
    chi: Character
    coeffs: list

    def __post_init__(self):
        if self.chi.modulus != self.level:
            raise ValueError("character modulus must equal the level")
        R = self.ring
        self.coeffs = [R.coerce(c) for c in self.coeffs]

    @property
    def ring(self) -> Ring:
        return self.chi.ring

    @property
    def bound(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        R = self.ring
        return (self.level, self.weight, self.bound) == (other.level, other.weight, other.bound) \
            and self.chi == other.chi \
            and all(R.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def truncate(self, B: int) -> "QExpansion":
        return QExpansion(self.level, self.weight, self.chi, self.coeffs[:B])


def hecke_T(f: QExpansion, m: int) -> QExpansion:
    """``c*_n = sum_{a | gcd(n, m)} chi(a) a^(k-1) c_(mn/a^2)`` for ``n < floor(B/m)``."""
    if m < 1:
        raise ValueError("m must be positive")
    Bp = f.bound // m
    if Bp < 1:
        raise ValueError(f"bound {f.bound} too small for T_{m}")
    R, k, c = f.ring, f.weight, f.coeffs
    out = []
    for n in range(Bp):
        acc = R.zero
        for a in divisors(gcd(n, m)):
            w = f.chi(a)
            if R.is_zero(w):
                continue
            acc = R.add(acc, R.scale(a ** (k - 1), R.mul(w, c[m * n // (a * a)])))
        out.append(acc)
    return QExpansion(f.level, k, f.chi, out)


def diamond(f: QExpansion, d: int) -> QExpansion:
    """``<d> f = chi(d) f``."""
    if gcd(d, f.level) != 1:
        raise ValueError("diamond operator needs d prime to the level")
    R = f.ring
    w = f.chi(d)
    return QExpansion(f.level, f.weight, f.chi, [R.mul(w, x) for x in f.coeffs])


def hecke_prime_oracle(f: QExpansion, p: int) -> list:
    """``c_(np) + chi(p) p^(k-1) c_(n/p)`` written out directly."""
    R, k, c = f.ring, f.weight, f.coeffs
    out = []
    for n in range(f.bound // p):
        v = c[n * p]
        if n % p == 0:
            v = R.add(v, R.scale(p ** (k - 1), R.mul(f.chi(p), c[n // p])))
        out.append(v)
    return out


@dataclass
class EigenReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def eigen_consistency(c: Sequence, chi: Character, k: int, bound: int) -> EigenReport:
    """Check multiplicativity and the prime-power recurrence up to ``bound``.

    ``c[n]`` is the ``n``-th coefficient; ``bound < len(c)``.  The witness is
    ``("coprime", n, m)`` or ``("recurrence", p, r)``.
    """
    R = chi.ring
    c = [R.coerce(x) for x in c]
    if len(c) < 2 or not R.eq(c[1], R.one):
        raise ValueError("eigenform data must satisfy c_1 = 1")
    bound = min(bound, len(c) - 1)
    for n in range(2, bound + 1):
        for m in range(2, bound // n + 1):
            if gcd(n, m) == 1 and not R.eq(c[n * m], R.mul(c[n], c[m])):
                return EigenReport(False, ("coprime", n, m))
    for p in range(2, bound + 1):
        if not is_prime(p):
            continue
        r, pr = 1, p
        while pr * p <= bound:
            lhs = c[pr * p]
            rhs = R.sub(R.mul(c[p], c[pr]),
                        R.scale(p ** (k - 1), R.mul(chi(p), c[pr // p])))
            if not R.eq(lhs, rhs):
                return EigenReport(False, ("recurrence", p, r))
            r, pr = r + 1, pr * p
    return EigenReport(True)
