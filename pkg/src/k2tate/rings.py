"""Coefficient rings.

Every ring is a small immutable descriptor that acts on *raw* values:
Python ``int`` for ``Z`` and ``Z/p^nu``, ``Fraction`` for ``Q``, tuples of
base values for polynomial quotients, and pairs for dual numbers.  Series and
matrices store raw values and route all arithmetic through their ring, which
keeps the inner loops free of wrapper objects.  :class:`RingElement` wraps a
raw value with operator overloading for interactive use and tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


class NotInvertibleError(ArithmeticError):
    """Raised when an element that must be a unit is not one."""


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in ``(Z/m)^*``, by repeated multiplication."""
    if m == 1:
        return 1
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    x, k = a % m, 1
    while x != 1:
        x = x * a % m
        k += 1
    return k


def int_valuation(n: int, p: int) -> int | float:
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# base class


class Ring:
    """Shared helpers; subclasses implement the primitive operations."""

    key: tuple = ()

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.name

    @property
    def name(self) -> str:
        return self.__class__.__name__

    # -- derived operations
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def sum(self, values: Iterable):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def scale(self, n: int, a):
        return self.mul(self.from_int(n), a)

    def div_int(self, a, n: int):
        return self.mul(a, self.inv(self.from_int(n)))

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def convolve(self, a: Sequence, b: Sequence, n: int) -> list:
        """First ``n`` coefficients of the product of two coefficient lists."""
        out = []
        la, lb = len(a), len(b)
        for k in range(n):
            acc = self.zero
            for i in range(max(0, k - lb + 1), min(k + 1, la)):
                acc = self.add(acc, self.mul(a[i], b[k - i]))
            out.append(acc)
        return out

    def __call__(self, value) -> "RingElement":
        return RingElement(self, self.coerce(value))

    def coerce(self, value):
        """Turn ints, Fractions and wrapped elements into raw values."""
        if isinstance(value, RingElement):
            if value.ring == self:
                return value.value
            return self.reduce_from(value.ring, value.value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_rational(value)
        return value

    def reduce_from(self, ring: "Ring", value):
        raise TypeError(f"cannot coerce from {ring} to {self}")

    def fmt(self, a) -> str:
        return str(a)


class IntegerRing(Ring):
    key = ("ZZ",)
    zero = 0
    one = 1
    characteristic = 0

    @property
    def name(self):
        return "ZZ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scale(self, n, a):
        return n * a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotInvertibleError(f"{a} is not a unit of ZZ")

    def div_int(self, a, n):
        if a % n:
            raise NotInvertibleError(f"{a} is not divisible by {n}")
        return a // n

    def from_int(self, n):
        return int(n)

    def from_rational(self, x):
        x = Fraction(x)
        if x.denominator != 1:
            raise NotInvertibleError(f"{x} is not an integer")
        return x.numerator

    def eq(self, a, b):
        return a == b

    def convolve(self, a, b, n):
        la, lb = len(a), len(b)
        return [sum(a[i] * b[k - i] for i in range(max(0, k - lb + 1), min(k + 1, la)))
                for k in range(n)]


class RationalField(Ring):
    key = ("QQ",)
    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0

    @property
    def name(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scale(self, n, a):
        return n * a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise NotInvertibleError("division by zero in QQ")
        return 1 / Fraction(a)

    def div_int(self, a, n):
        return Fraction(a) / n

    def from_int(self, n):
        return Fraction(n)

    def from_rational(self, x):
        return Fraction(x)

    def reduce_from(self, ring, value):
        if isinstance(ring, IntegerRing):
            return Fraction(value)
        return super().reduce_from(ring, value)

    def eq(self, a, b):
        return a == b

    def convolve(self, a, b, n):
        la, lb = len(a), len(b)
        return [sum((a[i] * b[k - i] for i in range(max(0, k - lb + 1), min(k + 1, la))),
                    Fraction(0)) for k in range(n)]


ZZ = IntegerRing()
QQ = RationalField()


class IntegersModPrimePower(Ring):
    """``Z/p^nu`` with raw values in ``[0, p^nu)``."""

    zero = 0
    one = 1
    characteristic = None

    def __init__(self, p: int, nu: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if nu < 1:
            raise ValueError(f"precision nu must be >= 1, got {nu}")
        self.p = p
        self.nu = nu
        self.modulus = p**nu
        self.key = ("Zp", p, nu)
        self.characteristic = self.modulus

    @property
    def name(self):
        return f"Z/{self.p}^{self.nu}"

    def with_precision(self, nu: int) -> "IntegersModPrimePower":
        return zmod(self.p, nu)

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def scale(self, n, a):
        return n * a % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertibleError(f"{a} is not a unit mod {self.p}^{self.nu}")
        return pow(a, -1, self.modulus)

    def valuation(self, a) -> int:
        """p-adic valuation, capped at ``nu`` for zero."""
        a %= self.modulus
        if a == 0:
            return self.nu
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def div_int(self, a, n):
        """Exact division by an integer.

        Dividing by ``p^e * unit`` needs ``p^e | a`` and leaves a result that is
        only meaningful modulo ``p^(nu - e)``; callers track that loss.
        """
        e = int_valuation(n, self.p)
        if e == float("inf"):
            raise NotInvertibleError("division by zero")
        if e == 0:
            return a * pow(n, -1, self.modulus) % self.modulus
        if e >= self.nu:
            raise NotInvertibleError(f"division by {n} not representable mod {self.p}^{self.nu}")
        pe = self.p**e
        if a % pe:
            raise NotInvertibleError(f"{a} is not divisible by {pe}")
        low = self.p ** (self.nu - e)
        return (a // pe) * pow(n // pe, -1, low) % low

    def from_int(self, n):
        return n % self.modulus

    def from_rational(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise NotInvertibleError(f"{x} is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def reduce_from(self, ring, value):
        if isinstance(ring, IntegerRing):
            return value % self.modulus
        if isinstance(ring, RationalField):
            return self.from_rational(value)
        if isinstance(ring, IntegersModPrimePower) and ring.p == self.p and ring.nu >= self.nu:
            return value % self.modulus
        return super().reduce_from(ring, value)

    def eq(self, a, b):
        return (a - b) % self.modulus == 0

    def convolve(self, a, b, n):
        la, lb, m = len(a), len(b), self.modulus
        return [sum(a[i] * b[k - i] for i in range(max(0, k - lb + 1), min(k + 1, la))) % m
                for k in range(n)]

    def signed(self, a) -> int:
        """Representative in ``(-p^nu/2, p^nu/2]``."""
        a %= self.modulus
        return a - self.modulus if 2 * a > self.modulus else a


@lru_cache(maxsize=None)
def zmod(p: int, nu: int) -> IntegersModPrimePower:
    return IntegersModPrimePower(p, nu)


# ---------------------------------------------------------------------------
# linear algebra over a base ring (small, dense)


def solve_linear(base: Ring, matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve ``matrix @ x = rhs`` for a square matrix invertible over ``base``.

    Pivots are chosen among units, so the routine works over local rings such
    as ``Z/p^nu`` as long as the matrix is invertible there.
    """
    if isinstance(base, IntegerRing):
        sol = solve_linear(QQ, matrix, [Fraction(r) for r in rhs])
        return [ZZ.from_rational(x) for x in sol]
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if base.is_unit(aug[r][col])), None)
        if piv is None:
            raise NotInvertibleError("matrix is singular over the base ring")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = base.inv(aug[col][col])
        aug[col] = [base.mul(inv, x) for x in aug[col]]
        for r in range(n):
            if r != col and not base.is_zero(aug[r][col]):
                f = aug[r][col]
                aug[r] = [base.sub(x, base.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def invert_matrix(base: Ring, matrix: Sequence[Sequence]) -> list[list]:
    n = len(matrix)
    cols = []
    for j in range(n):
        e = [base.one if i == j else base.zero for i in range(n)]
        cols.append(solve_linear(base, matrix, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# polynomial quotient rings


class PolynomialQuotientRing(Ring):
    """``base[x]/(f)`` for a monic ``f``; raw values are coordinate tuples.

    ``modulus`` lists the coefficients of ``f`` from ``x^0`` up to the leading
    ``1``.
    """

    def __init__(self, base: Ring, modulus: Sequence, var: str = "x"):
        modulus = tuple(base.coerce(c) for c in modulus)
        if len(modulus) < 2 or not base.eq(modulus[-1], base.one):
            raise ValueError("modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.var = var
        self.key = ("Quot", base.key, modulus)
        self.characteristic = base.characteristic
        d = self.degree
        self.zero = (base.zero,) * d
        self.one = (base.one,) + (base.zero,) * (d - 1)
        # x^(d+j) in the power basis, j = 0..d-2
        self._reduction = []
        cur = [base.neg(c) for c in modulus[:-1]]
        for _ in range(max(d - 1, 0)):
            self._reduction.append(tuple(cur))
            top = cur[-1]
            cur = [base.zero] + cur[:-1]
            cur = [base.sub(c, base.mul(top, m)) for c, m in zip(cur, modulus[:-1])]
        if d >= 1:
            self._x = tuple(base.one if i == 1 else base.zero for i in range(d)) if d > 1 \
                else (base.neg(modulus[0]),)

    @property
    def name(self):
        return f"{self.base.name}[{self.var}]/({self._fmt_poly(self.modulus)})"

    def _fmt_poly(self, coeffs):
        terms = []
        for i in range(len(coeffs) - 1, -1, -1):
            c = coeffs[i]
            if self.base.is_zero(c):
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = self.base.fmt(c)
            if mono and cs == "1":
                terms.append(mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms) or "0"

    def gen(self):
        """The class of ``x``."""
        return self._x

    def add(self, a, b):
        ad = self.base.add
        return tuple(ad(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        sb = self.base.sub
        return tuple(sb(x, y) for x, y in zip(a, b))

    def neg(self, a):
        ng = self.base.neg
        return tuple(ng(x) for x in a)

    def _reduce_full(self, prod: list) -> tuple:
        """Reduce an unreduced coefficient list of length <= 2d-1."""
        base, d = self.base, self.degree
        low = list(prod[:d]) + [base.zero] * (d - len(prod[:d]))
        for j, c in enumerate(prod[d:]):
            if base.is_zero(c):
                continue
            red = self._reduction[j]
            low = [base.add(x, base.mul(c, r)) for x, r in zip(low, red)]
        return tuple(low)

    def mul(self, a, b):
        base, d = self.base, self.degree
        if d == 1:
            return (base.mul(a[0], b[0]),)
        prod = [base.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        return self._reduce_full(prod)

    def scale(self, n, a):
        return tuple(self.base.scale(n, x) for x in a)

    def scalar(self, c, a):
        """Multiply by a base-ring value."""
        return tuple(self.base.mul(c, x) for x in a)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def mult_matrix(self, a) -> list[list]:
        """Matrix of ``y -> a*y`` in the power basis (columns = images)."""
        d = self.degree
        cols = []
        xi = self.one
        for _ in range(d):
            cols.append(self.mul(a, xi))
            xi = self.mul(xi, self._x)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def is_unit(self, a):
        try:
            self.inv(a)
        except NotInvertibleError:
            return False
        return True

    def inv(self, a):
        sol = solve_linear(self.base, self.mult_matrix(a), self.one)
        return tuple(sol)

    def div_int(self, a, n):
        return tuple(self.base.div_int(x, n) for x in a)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def from_rational(self, x):
        return (self.base.from_rational(x),) + (self.base.zero,) * (self.degree - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def coerce(self, value):
        if isinstance(value, (tuple, list)):
            if len(value) != self.degree:
                raise ValueError(f"expected {self.degree} coordinates, got {len(value)}")
            return tuple(self.base.coerce(c) for c in value)
        return super().coerce(value)

    def reduce_from(self, ring, value):
        if isinstance(ring, PolynomialQuotientRing) and ring.degree == self.degree:
            return tuple(self.base.reduce_from(ring.base, c) if ring.base != self.base else c
                         for c in value)
        return self.from_base(self.base.reduce_from(ring, value))

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a[1:])

    def fmt(self, a):
        return "(" + self._fmt_poly(a) + ")" if sum(not self.base.is_zero(x) for x in a) > 1 \
            else self._fmt_poly(a)


class _ModPQuotientMixin:
    """Fast paths for quotients over ``Z/p^nu`` using plain integer arithmetic."""

    def add(self, a, b):
        m = self._mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self._mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self._mod
        return tuple(-x % m for x in a)

    def scale(self, n, a):
        m = self._mod
        return tuple(n * x % m for x in a)

    def is_zero(self, a):
        m = self._mod
        return all(x % m == 0 for x in a)

    def eq(self, a, b):
        m = self._mod
        return all((x - y) % m == 0 for x, y in zip(a, b))

    def _reduce_ints(self, prod: list) -> tuple:
        d, m = self.degree, self._mod
        low = prod[:d]
        for j in range(len(prod) - d):
            c = prod[d + j]
            if c:
                red = self._red_int[j]
                for i in range(d):
                    low[i] += c * red[i]
        return tuple(x % m for x in low)

    def mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0] % self._mod,)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce_ints(prod)

    def convolve(self, a, b, n):
        d = self.degree
        la, lb = len(a), len(b)
        out = []
        for k in range(n):
            prod = [0] * (2 * d - 1)
            for i in range(max(0, k - lb + 1), min(k + 1, la)):
                x, y = a[i], b[k - i]
                for s, xs in enumerate(x):
                    if xs:
                        for t, yt in enumerate(y):
                            prod[s + t] += xs * yt
            out.append(self._reduce_ints(prod))
        return out


class UnramifiedRing(_ModPQuotientMixin, PolynomialQuotientRing):
    """Truncated unramified extension ``(Z/p^nu)[x]/(f)`` with ``x = zeta``.

    ``zeta`` is a primitive ``root_order``-th root of unity (a Teichmueller
    lift), so the power basis ``1, zeta, ..., zeta^(d-1)`` is itself a
    cyclotomic basis and Frobenius is ``zeta -> zeta^p``.
    """

    def __init__(self, p: int, nu: int, modulus: Sequence[int], root_order: int):
        base = zmod(p, nu)
        super().__init__(base, modulus, var="z")
        self.p = p
        self.nu = nu
        self.root_order = root_order
        self._mod = base.modulus
        self._red_int = [list(r) for r in self._reduction]
        self.key = ("Unram", p, nu, self.modulus, root_order)
        self.frobenius_matrix = self._frobenius_matrix()

    @property
    def name(self):
        return f"Z/{self.p}^{self.nu}[zeta_{self.root_order}] (d={self.degree})"

    @property
    def zeta(self):
        return self.gen()

    def zeta_power(self, k: int):
        return self.pow(self.zeta, k % self.root_order)

    def _frobenius_matrix(self):
        d = self.degree
        cols = [self.zeta_power(self.p * j) for j in range(d)]
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def frobenius(self, a, times: int = 1):
        """Apply ``sigma^times``; coordinates are fixed, ``zeta -> zeta^p``."""
        m = self._mod
        for _ in range(times % self.degree):
            fm = self.frobenius_matrix
            a = tuple(sum(fm[i][j] * a[j] for j in range(self.degree)) % m
                      for i in range(self.degree))
        return a

    def valuation(self, a) -> int:
        return min(self.base.valuation(x) for x in a)

    def is_unit(self, a):
        return any(x % self.p for x in a) and self._unit_mod_p(a)

    def _unit_mod_p(self, a) -> bool:
        try:
            self.inv(a)
        except NotInvertibleError:
            return False
        return True

    def with_precision(self, nu: int) -> "UnramifiedRing":
        if nu == self.nu:
            return self
        if nu > self.nu:
            raise ValueError("cannot raise precision of an existing ring")
        m = self.p**nu
        return _unramified(self.p, nu, tuple(c % m for c in self.modulus), self.root_order)

    def reduce_from(self, ring, value):
        if isinstance(ring, UnramifiedRing) and ring.p == self.p and ring.degree == self.degree \
                and ring.nu >= self.nu:
            m = self._mod
            return tuple(c % m for c in value)
        return super().reduce_from(ring, value)

    def div_int(self, a, n):
        return tuple(self.base.div_int(x, n) for x in a)


@lru_cache(maxsize=None)
def _unramified(p, nu, modulus, root_order):
    return UnramifiedRing(p, nu, modulus, root_order)


class CyclotomicBasis:
    """A basis ``zeta^e_1, ..., zeta^e_d`` of an unramified ring over ``Z/p^nu``."""

    def __init__(self, ring: UnramifiedRing, exponents: Sequence[int] | None = None):
        d = ring.degree
        if exponents is None:
            exponents = range(d)
        exponents = tuple(int(e) % ring.root_order for e in exponents)
        if len(exponents) != d:
            raise ValueError(f"need {d} exponents, got {len(exponents)}")
        self.ring = ring
        self.root_order = ring.root_order
        self.exponents = exponents
        self.elements = [ring.zeta_power(e) for e in exponents]
        self.from_basis = [[self.elements[j][i] for j in range(d)] for i in range(d)]
        try:
            self.to_basis = invert_matrix(ring.base, self.from_basis)
        except NotInvertibleError:
            raise ValueError(f"exponents {exponents} do not give a basis") from None

    def decompose(self, v) -> list[int]:
        m = self.ring._mod
        tb = self.to_basis
        return [sum(tb[i][j] * v[j] for j in range(len(v))) % m for i in range(len(v))]

    def resum(self, coeffs: Sequence[int]):
        m = self.ring._mod
        fb = self.from_basis
        d = len(coeffs)
        return tuple(sum(fb[i][j] * coeffs[j] for j in range(d)) % m for i in range(d))

    def __repr__(self):
        return f"CyclotomicBasis(m={self.root_order}, exponents={self.exponents})"


# ---------------------------------------------------------------------------
# polynomials over F_p (int lists, low degree first)


def _trim(f):
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def _fp_mulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_mod(prod, f, p)


def _fp_mod(a, f, p):
    a = [x % p for x in a]
    d = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            for j in range(d + 1):
                a[k - d + j] = (a[k - d + j] - c * f[j]) % p
    return _trim(a[:d] if d > 0 else [0]) if len(a) > d else _trim(a)


def _fp_powmod(a, e, f, p):
    result, base = [1], _fp_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _fp_mulmod(base, base, f, p)
    return result


def _fp_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b != [0]:
        a, b = b, _fp_mod(a, b, p)
    if a != [0]:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic ``f`` over ``F_p``."""
    f = _trim([c % p for c in f])
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _fp_powmod(x, p**d, f, p) != _trim(_fp_mod(x, f, p)):
        return False
    for r in prime_factors(d):
        h = _fp_powmod(x, p ** (d // r), f, p)
        h = h + [0] * (2 - len(h)) if len(h) < 2 else list(h)
        h[1] = (h[1] - 1) % p
        if _fp_gcd(f, _trim(h), p) != [1]:
            return False
    return True


def lowest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``d`` over ``F_p``.

    Ordering compares coefficients from ``x^(d-1)`` down to ``x^0``.
    """
    for idx in range(p**d):
        digits = []
        n = idx
        for _ in range(d):
            digits.append(n % p)
            n //= p
        # most significant digit of idx is the x^(d-1) coefficient
        coeffs = tuple(digits) + (1,)
        if is_irreducible_mod_p(list(coeffs), p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {d} over F_{p}")


def _lex_key(coeffs):
    return tuple(reversed(coeffs[:-1]))


# ---------------------------------------------------------------------------
# unramified ring construction


def cyclotomic_factors_mod_p(p: int, m: int) -> list[tuple[int, ...]]:
    """Distinct irreducible factors of ``Phi_m`` over ``F_p`` (sorted lexicographically)."""
    d = multiplicative_order(p, m)
    fld = PolynomialQuotientRing(zmod(p, 1), lowest_irreducible(p, d))
    z = primitive_root_of_unity(fld, p, d, m)
    seen, factors = set(), []
    for k in range(1, m + 1):
        if gcd(k, m) != 1 or k in seen:
            continue
        orbit = {k * pow(p, j, m) % m for j in range(d)}
        seen |= orbit
        root = fld.pow(z, k)
        poly = [fld.one]
        c = root
        for _ in range(d):
            # poly *= (X - c)
            new = [fld.zero] * (len(poly) + 1)
            for i, a in enumerate(poly):
                new[i + 1] = fld.add(new[i + 1], a)
                new[i] = fld.sub(new[i], fld.mul(a, c))
            poly = new
            c = fld.pow(c, p)
        if not all(fld.in_base(a) for a in poly):
            raise AssertionError("minimal polynomial escaped F_p")
        factors.append(tuple(a[0] for a in poly))
    return sorted(factors, key=_lex_key)


def primitive_root_of_unity(fld: PolynomialQuotientRing, p: int, d: int, m: int):
    """A primitive ``m``-th root of unity in ``F_{p^d}`` (deterministic search)."""
    size = p**d
    if (size - 1) % m:
        raise ValueError(f"F_{p}^{d} has no primitive {m}-th root of unity")
    primes = prime_factors(m)
    for idx in range(1, size):
        coords, n = [], idx
        for _ in range(d):
            coords.append(n % p)
            n //= p
        z = fld.pow(tuple(coords), (size - 1) // m)
        if all(not fld.eq(fld.pow(z, m // r), fld.one) for r in primes):
            return z
    raise AssertionError("no primitive root found")


def build_unramified(p: int, m: int, nu: int = 4, power: int = 1) -> tuple[UnramifiedRing, CyclotomicBasis]:
    """Unramified ring of degree ``ord_m(p)`` generated by a primitive ``m``-th root of unity.

    The residue polynomial is the lexicographically lowest irreducible factor of
    ``Phi_m`` mod ``p``; its root is replaced by its ``power``-th power (a unit
    mod ``m``) to select another conjugacy class.  The root is lifted to its
    Teichmueller representative, whose minimal polynomial over ``Z/p^nu``
    becomes the modulus.  Returns the ring and the default basis
    ``zeta^0, ..., zeta^(d-1)``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1 or gcd(p, m) != 1:
        raise ValueError(f"root order {m} must be a positive integer prime to {p}")
    if nu < 1:
        raise ValueError(f"precision nu must be >= 1, got {nu}")
    if gcd(power, m) != 1:
        raise ValueError(f"power {power} must be prime to {m}")
    return _build_unramified(p, m, nu, power % m if m > 1 else 0)


@lru_cache(maxsize=None)
def _build_unramified(p, m, nu, power):
    d = multiplicative_order(p, m)
    residue = cyclotomic_factors_mod_p(p, m)[0]
    lifted = PolynomialQuotientRing(zmod(p, nu), residue)
    x = lifted.gen()
    if power != 1 and m > 1:
        x = lifted.pow(x, power)
    zeta = x
    for _ in range(nu - 1):
        zeta = lifted.pow(zeta, p**d)
    # minimal polynomial of zeta over Z/p^nu: prod (X - zeta^(p^j))
    poly = [lifted.one]
    c = zeta
    for _ in range(d):
        new = [lifted.zero] * (len(poly) + 1)
        for i, a in enumerate(poly):
            new[i + 1] = lifted.add(new[i + 1], a)
            new[i] = lifted.sub(new[i], lifted.mul(a, c))
        poly = new
        c = lifted.pow(c, p)
    if not all(lifted.in_base(a) for a in poly):
        raise AssertionError("Teichmueller minimal polynomial is not defined over Z/p^nu")
    ring = _unramified(p, nu, tuple(a[0] for a in poly), m)
    if not ring.eq(ring.pow(ring.zeta, m), ring.one):
        raise AssertionError("zeta^m != 1 after lifting")
    return ring, CyclotomicBasis(ring)


def frobenius(x: "RingElement") -> "RingElement":
    """Frobenius ``sigma`` on an element of an unramified ring."""
    if not isinstance(x.ring, UnramifiedRing):
        raise TypeError("frobenius needs an element of an unramified ring")
    return RingElement(x.ring, x.ring.frobenius(x.value))


def basis_decompose(v: "RingElement", basis: CyclotomicBasis) -> list[int]:
    if v.ring != basis.ring:
        raise ValueError("basis belongs to a different ring")
    return basis.decompose(v.value)


# ---------------------------------------------------------------------------
# finite fields and dual numbers


class FiniteField(PolynomialQuotientRing):
    """``F_{l^m}`` as ``F_l[x]/(g)`` with ``g`` the lowest irreducible of degree ``m``."""

    def __init__(self, ell: int, m: int = 1):
        if not is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        modulus = lowest_irreducible(ell, m) if m > 1 else (0, 1)
        super().__init__(zmod(ell, 1), modulus, var="w")
        self.ell = ell
        self.ext_degree = m
        self.size = ell**m
        self.key = ("GF", ell, m)

    @property
    def name(self):
        return f"GF({self.ell}^{self.ext_degree})"

    def element(self, index: int):
        """Element whose coordinates are the base-``ell`` digits of ``index``."""
        coords = []
        for _ in range(self.ext_degree):
            coords.append(index % self.ell)
            index //= self.ell
        return tuple(coords)

    def index(self, a) -> int:
        n = 0
        for c in reversed(a):
            n = n * self.ell + c
        return n

    def is_unit(self, a):
        return not self.is_zero(a)

    def inv(self, a):
        if self.is_zero(a):
            raise NotInvertibleError("division by zero in a finite field")
        return self.pow(a, self.size - 2)


class DualNumbers(Ring):
    """``base[eps]/(eps^2)``; raw values are ``(value, derivative)`` pairs."""

    def __init__(self, base: Ring):
        self.base = base
        self.key = ("Dual", base.key)
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.characteristic = base.characteristic

    @property
    def name(self):
        return f"{self.base.name}[eps]"

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def sub(self, a, b):
        return (self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def mul(self, a, b):
        B = self.base
        return (B.mul(a[0], b[0]), B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0])))

    def scale(self, n, a):
        return (self.base.scale(n, a[0]), self.base.scale(n, a[1]))

    def is_zero(self, a):
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def is_unit(self, a):
        return self.base.is_unit(a[0])

    def inv(self, a):
        B = self.base
        iv = B.inv(a[0])
        return (iv, B.neg(B.mul(a[1], B.mul(iv, iv))))

    def div_int(self, a, n):
        return (self.base.div_int(a[0], n), self.base.div_int(a[1], n))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def from_rational(self, x):
        return (self.base.from_rational(x), self.base.zero)

    def make(self, value, deriv):
        return (self.base.coerce(value), self.base.coerce(deriv))

    def coerce(self, value):
        if isinstance(value, tuple) and len(value) == 2:
            return value
        return super().coerce(value)

    def reduce_from(self, ring, value):
        return (self.base.coerce(RingElement(ring, value)), self.base.zero)

    def fmt(self, a):
        return f"({self.base.fmt(a[0])} + {self.base.fmt(a[1])}*eps)"


# ---------------------------------------------------------------------------


class RingElement:
    """A raw value bundled with its ring; supports the usual operators."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: Ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise TypeError(f"mixed rings {self.ring} and {other.ring}")
            return other.value
        return self.ring.coerce(other)

    def __add__(self, other):
        return RingElement(self.ring, self.ring.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.ring, self.ring.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return RingElement(self.ring, self.ring.sub(self._other(other), self.value))

    def __mul__(self, other):
        return RingElement(self.ring, self.ring.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, k: int):
        return RingElement(self.ring, self.ring.pow(self.value, k))

    def __truediv__(self, other):
        return RingElement(self.ring, self.ring.mul(self.value, self.ring.inv(self._other(other))))

    def __rtruediv__(self, other):
        return RingElement(self.ring, self.ring.mul(self._other(other), self.ring.inv(self.value)))

    def inverse(self):
        return RingElement(self.ring, self.ring.inv(self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def __eq__(self, other):
        try:
            return self.ring.eq(self.value, self._other(other))
        except (TypeError, NotInvertibleError):
            return False

    def __hash__(self):
        return hash((self.ring, self.value))

    def __repr__(self):
        return self.ring.fmt(self.value)
