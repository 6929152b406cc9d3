"""Theta-product factorizations and the explicit symbol pairing.

A function on the Tate curve is written ``a0 u^n prod (1 - a_i u^i)^e``,
where factors with ``i > 0`` have ``ord a_i >= 0`` and factors with ``i < 0``
have ``ord a_i > 0``.  Coefficients are Laurent series in the base variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .rings import QQ, ZZ, NotInvertibleError, PolynomialQuotientRing, Ring, RingElement
from .series import LaurentSeries, SeriesUnit


@dataclass(frozen=True)
class ElementaryFactor:
    """``(1 - a u^i)^e``."""

    i: int
    a: LaurentSeries
    e: int = 1

    def __post_init__(self):
        if self.i == 0:
            raise ValueError("u-exponent of an elementary factor must be nonzero")
        if self.a.is_zero():
            raise ValueError("elementary factor coefficient must be nonzero")
        if self.i > 0 and self.a.lo < 0:
            raise ValueError("factor (1 - a u^i) with i > 0 needs ord(a) >= 0")
        if self.i < 0 and self.a.lo <= 0:
            raise ValueError("factor (1 - a u^i) with i < 0 needs ord(a) > 0")

    @property
    def order(self) -> int:
        return self.a.lo


@dataclass
class CanonicalProduct:
    a0: LaurentSeries
    n: int = 0
    factors: list[ElementaryFactor] = field(default_factory=list)

    def __post_init__(self):
        if self.a0.is_zero():
            raise ValueError("a0 must be nonzero")
        self.factors = sorted(self.factors, key=lambda f: (abs(f.i), f.order, f.i))

    @property
    def ring(self) -> Ring:
        return self.a0.ring

    def __mul__(self, other: "CanonicalProduct") -> "CanonicalProduct":
        return CanonicalProduct(self.a0 * other.a0, self.n + other.n, self.factors + other.factors)

    def __pow__(self, k: int) -> "CanonicalProduct":
        return CanonicalProduct(self.a0**k, self.n * k,
                                [ElementaryFactor(f.i, f.a, f.e * k) for f in self.factors])

    def inverse(self) -> "CanonicalProduct":
        return self**-1

    def scale(self, c: LaurentSeries) -> "CanonicalProduct":
        """Multiply by a nonzero constant of the base field."""
        return CanonicalProduct(self.a0 * c, self.n, list(self.factors))

    def truncate(self, N: int) -> "CanonicalProduct":
        """Drop factors whose coefficient has q-order at least ``N``."""
        return CanonicalProduct(self.a0, self.n, [f for f in self.factors if f.order < N])

    def evaluate(self, u: LaurentSeries) -> LaurentSeries:
        """Value at ``u`` in the base field (factors must converge there)."""
        val = self.a0 * u**self.n
        for f in self.factors:
            val = val * (1 - f.a * u**f.i) ** f.e
        return val


def _series_unit(x, ring: Ring, N: int) -> LaurentSeries:
    if isinstance(x, SeriesUnit):
        return x.series()
    if isinstance(x, LaurentSeries):
        return x
    return LaurentSeries.monomial(ring, 0, N, x)


def canonical_of_theta(alpha, N: int, period: int = 1, ring: Ring | None = None) -> CanonicalProduct:
    """Canonical form of ``theta(alpha u)`` with Tate parameter ``q = q0^period``.

    ``alpha`` is a Laurent series in ``q0`` (or a :class:`SeriesUnit`).  Factors
    ``(1 - c u)`` with ``ord c < 0`` become ``-c u (1 - c^-1 u^-1)`` and factors
    ``(1 - c u^-1)`` with ``ord c <= 0`` become ``-c u^-1 (1 - c^-1 u)``.  Factors
    of q0-order at least ``N`` are dropped.
    """
    ring = ring or QQ
    alpha = _series_unit(alpha, ring, N)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    R = alpha.ring
    a0 = LaurentSeries.one(R, N)
    n_u = 0
    factors = []
    ainv = alpha.invert()

    def add(i, c):
        nonlocal a0, n_u
        if (i > 0 and c.lo < 0) or (i < 0 and c.lo <= 0):
            a0 = a0 * (-c)
            n_u += i
            factors.append((-i, c.invert()))
        else:
            factors.append((i, c))

    m = 0
    while True:
        c1 = alpha.shift(m * period)
        c2 = ainv.shift(m * period) if m >= 1 else None
        if c1.lo >= N and (c2 is None or c2.lo >= N) and m >= 1:
            break
        add(1, c1)
        if c2 is not None:
            add(-1, c2)
        m += 1
    kept = [ElementaryFactor(i, c, 1) for i, c in factors if c.lo < N]
    return CanonicalProduct(a0, n_u, kept)


def theta_quotient(alphas: Sequence, betas: Sequence, N: int, period: int = 1,
                   ring: Ring | None = None) -> CanonicalProduct:
    """``prod theta(alpha_i u) / prod theta(beta_i u)``."""
    ring = ring or QQ
    out = CanonicalProduct(LaurentSeries.one(_series_unit(
        (alphas or betas)[0], ring, N).ring, N))
    for a in alphas:
        out = out * canonical_of_theta(a, N, period, ring)
    for b in betas:
        out = out * canonical_of_theta(b, N, period, ring).inverse()
    return out


def canonical_of_rational(c, roots: Sequence[tuple[LaurentSeries, int]], N: int,
                          ring: Ring | None = None) -> CanonicalProduct:
    """Canonical form of ``c prod (u - alpha)^e``."""
    ring = ring or QQ
    a0 = _series_unit(c, ring, N)
    n_u = 0
    factors = []
    for alpha, e in roots:
        if alpha.is_zero():
            n_u += e
        elif alpha.lo > 0:
            # u - alpha = u (1 - alpha u^-1)
            n_u += e
            factors.append(ElementaryFactor(-1, alpha, e))
        else:
            # u - alpha = -alpha (1 - alpha^-1 u)
            a0 = a0 * (-alpha) ** e
            factors.append(ElementaryFactor(1, alpha.invert(), e))
    return CanonicalProduct(a0, n_u, factors)


def _relative(x: LaurentSeries, N: int) -> SeriesUnit:
    su = x.unit_decompose()
    u = su.unit_part
    return SeriesUnit(su.order, u.truncate(min(u.prec, N)))


class _Accumulator:
    """Running product ``q^order * unit`` with the unit kept to ``O(q^N)``."""

    def __init__(self, ring: Ring, N: int):
        self.order = 0
        self.unit = LaurentSeries.one(ring, N)
        self.N = N

    def mul(self, x: LaurentSeries, k: int = 1):
        if k == 0:
            return
        su = x.unit_decompose()
        u = su.unit_part
        if u.prec > self.N:
            u = u.truncate(self.N)
        self.order += su.order * k
        prod = self.unit * (u**k)
        self.unit = prod.truncate(min(prod.prec, self.N))

    def result(self) -> SeriesUnit:
        return SeriesUnit(self.order, self.unit)


def pair(f: CanonicalProduct, g: CanonicalProduct, N: int) -> SeriesUnit:
    """The explicit pairing ``<f, g>``.

    ``(-1)^(nm) a0^m / b0^n`` times, for each factor ``(1 - a u^i)^e`` of ``f``
    and ``(1 - b u^-j)^e'`` of ``g`` with ``i, j > 0``, the term
    ``(1 - a^(j/d) b^(i/d))^(d e e')`` with ``d = gcd(i, j)``, and the inverse of
    the analogous term for ``i < 0`` in ``f`` against ``j > 0`` in ``g``.
    The unit part of the result is accurate to ``O(q^N)``.
    """
    R = f.ring if f.ring == g.ring else None
    if R is None:
        raise TypeError("pairing needs both products over the same ring")
    acc = _Accumulator(R, N)
    n, m = f.n, g.n
    acc.mul(f.a0, m)
    acc.mul(g.a0, -n)
    if (n * m) % 2:
        acc.mul(LaurentSeries.monomial(R, 0, N, R.neg(R.one)))
    for fa in f.factors:
        for gb in g.factors:
            if (fa.i > 0) == (gb.i > 0):
                continue
            i, j = abs(fa.i), abs(gb.i)
            d = gcd(i, j)
            ai, bj = j // d, i // d
            # minimal q-order of the cross term, checked before expansion
            if fa.order * ai + gb.order * bj >= N:
                continue
            x = fa.a**ai * gb.a**bj
            sign = 1 if fa.i > 0 else -1
            term = 1 - x
            acc.mul(term, sign * d * fa.e * gb.e)
    return acc.result()


@dataclass
class MilnorSymbol:
    """Formal sum of symbols ``{f_k, g_k}`` with integer multiplicities."""

    terms: list[tuple[CanonicalProduct, CanonicalProduct, int]] = field(default_factory=list)

    def __add__(self, other: "MilnorSymbol") -> "MilnorSymbol":
        return MilnorSymbol(self.terms + other.terms)


def tau_infinity(sym: MilnorSymbol, N: int, ring: Ring | None = None) -> SeriesUnit:
    if not sym.terms:
        R = ring or QQ
        return SeriesUnit(0, LaurentSeries.one(R, N))
    R = sym.terms[0][0].ring
    acc = _Accumulator(R, N)
    for f, g, mult in sym.terms:
        v = pair(f, g, N)
        acc.mul(v.series(), mult)
    return acc.result()


def boundary(h) -> int:
    """q-order of a value of the pairing (or of any nonzero series)."""
    if isinstance(h, SeriesUnit):
        return h.order
    if isinstance(h, LaurentSeries):
        if h.is_zero():
            raise ValueError("boundary of zero")
        return h.lo
    return 0


# ---------------------------------------------------------------------------
# Eisenstein symbols


def _m_series(c: int, i: int, N: int) -> LaurentSeries:
    """``M_i = prod_{n>=1} (1-q0^(nc-c+i))^(nc-c+i) / (1-q0^(nc-i))^(nc-i)`` over ``Z``."""
    one = LaurentSeries.one(ZZ, N)
    out = one
    n = 1
    while n * c - c + i < N or n * c - i < N:
        e1, e2 = n * c - c + i, n * c - i
        if e1 < N:
            out = out * (one - LaurentSeries.monomial(ZZ, e1, N)) ** e1
        if e2 < N:
            out = out * (one - LaurentSeries.monomial(ZZ, e2, N)) ** (-e2)
        n += 1
    return out


def eisenstein_value(a: int, b: int, c: int, N: int) -> SeriesUnit:
    """``(-q0)^(a(b-a)(b-c)) (M_b / (M_(b-a) M_a))^c`` with the unit part to ``O(q0^N)``."""
    if not 0 < a < b < c:
        raise ValueError("need 0 < a < b < c")
    k = a * (b - a) * (b - c)
    unit = (_m_series(c, b, N) * (_m_series(c, b - a, N) * _m_series(c, a, N)).invert()) ** c
    if k % 2:
        unit = -unit
    return SeriesUnit(k, unit)


def eisenstein_symbol(a: int, b: int, c: int, N: int) -> MilnorSymbol:
    """The symbol ``{f/f(q0^-b), g/g(q0^-a)}`` built from theta quotients with ``q = q0^c``.

    ``f = (-u)^a (theta(q0^a u)/theta(u))^c`` and ``g = (-u)^b (theta(q0^b u)/theta(u))^c``.
    """
    if not 0 < a < b < c:
        raise ValueError("need 0 < a < b < c")
    from .tate import theta_eval

    q0 = LaurentSeries.gen(QQ, N + 2 * c * c + 2)
    prec = q0.prec

    def build(s):
        th = theta_quotient([q0**s], [LaurentSeries.one(QQ, prec)], prec, c)
        prod = CanonicalProduct(LaurentSeries.monomial(QQ, 0, prec, (-1) ** s), s) * th**c
        return prod

    def value(s, at):
        x = q0**at
        return (-x) ** s * (theta_eval(q0**s * x, c) * theta_eval(x, c).invert()) ** c

    f = build(a)
    g = build(b)
    f = f.scale(value(a, -b).invert())
    g = g.scale(value(b, -a).invert())
    return MilnorSymbol([(f, g, 1)])


def cyclotomic_polynomial(n: int) -> list[int]:
    """Coefficients of ``Phi_n`` (low degree first)."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, cyclotomic_polynomial(d))
    return num


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] // den[-1]
        out[k - dd] = c
        for j in range(dd + 1):
            num[k - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


def norm_to_q(h: SeriesUnit, c: int) -> SeriesUnit:
    """``prod_{s<c} h(zeta_c^s q0)`` rewritten as a series in ``q = q0^c``.

    Computed over ``Q(zeta_c)``; raises if the product is not a series in ``q``
    with rational coefficients.
    """
    unit = h.unit_part.change_ring(QQ)
    if c == 1:
        return SeriesUnit(h.order, unit)
    K = PolynomialQuotientRing(QQ, cyclotomic_polynomial(c), var="zeta")
    zeta = K.gen()
    lifted = unit.map_coeffs(K.from_base, K)
    prod = None
    for s in range(c):
        t = lifted.twist(K.pow(zeta, s))
        prod = t if prod is None else prod * t
    # the q0^order factor contributes prod_s zeta^(s*order) q0^(c*order)
    root_factor = K.pow(zeta, h.order * (c * (c - 1) // 2))
    prod = prod.scale(root_factor)
    coeffs = []
    for k in range(0, prod.prec, c):
        v = prod[k]
        if not K.in_base(v):
            raise ArithmeticError("norm has coefficients outside the base ring")
        coeffs.append(v[0])
    for k in range(prod.prec):
        if k % c and not K.is_zero(prod[k]):
            raise ArithmeticError("norm is not a series in q0^c")
    series = LaurentSeries(QQ, coeffs, 0, prod.prec // c)
    return SeriesUnit(h.order, series)


def norm_by_determinant(h: SeriesUnit, c: int) -> SeriesUnit:
    """Norm via the determinant of multiplication by ``h`` on ``1, q0, ..., q0^(c-1)``."""
    unit = h.unit_part.change_ring(QQ)
    M = (unit.prec + c - 1) // c
    # h = sum_r q0^r h_r(q)
    parts = []
    for r in range(c):
        coeffs = [unit[k] if k < unit.prec else QQ.zero for k in range(r, c * M, c)]
        parts.append(LaurentSeries(QQ, coeffs, 0, unit.prec // c if r else (unit.prec + c - 1) // c))
    prec = unit.prec // c
    parts = [p.truncate(prec) if p.prec > prec else p for p in parts]
    q = LaurentSeries.gen(QQ, prec)
    # column s = coordinates of h * q0^s
    mat = [[None] * c for _ in range(c)]
    for s in range(c):
        for r in range(c):
            k = r + s
            mat[k % c][s] = parts[r] * q if k >= c else parts[r]
    det = _series_det(mat)
    order = h.order
    sign_root = 1
    # N(q0) = (-1)^(c-1) q, so N(q0^order) = (-1)^((c-1)order) q^order
    if ((c - 1) * order) % 2:
        sign_root = -1
    return SeriesUnit(order, det.scale(sign_root))


def _series_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _series_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def tame_symbol_sum(f_c, f_roots, g_c, g_roots, N: int) -> SeriesUnit:
    """``prod_{ord alpha > 0} tau_alpha{f, g}`` for rational functions ``c prod (u - alpha)^e``.

    ``tau_alpha{f, g} = (-1)^(v(f)v(g)) (f^v(g) / g^v(f))(alpha)``; roots are
    matched by exact equality of their series.
    """
    points = []
    for alpha, _ in list(f_roots) + list(g_roots):
        if (alpha.is_zero() or alpha.lo > 0) and not any(_same(alpha, p) for p in points):
            points.append(alpha)
    acc = None
    for alpha in points:
        vf = sum(e for r, e in f_roots if _same(r, alpha))
        vg = sum(e for r, e in g_roots if _same(r, alpha))
        val = _rest_at(f_c, f_roots, alpha) ** vg * _rest_at(g_c, g_roots, alpha) ** (-vf)
        if (vf * vg) % 2:
            val = -val
        acc = val if acc is None else acc * val
    if acc is None:
        R = (f_c if isinstance(f_c, LaurentSeries) else g_c).ring
        acc = LaurentSeries.one(R, N)
    su = acc.unit_decompose()
    return SeriesUnit(su.order, su.unit_part.truncate(min(N, su.unit_part.prec)))


def _same(a: LaurentSeries, b: LaurentSeries) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a.lo == b.lo and a.agrees(b)


def _rest_at(c, roots, alpha):
    val = c
    for r, e in roots:
        if not _same(r, alpha):
            val = val * (alpha - r) ** e
    return val


__all__ = [
    "ElementaryFactor",
    "CanonicalProduct",
    "MilnorSymbol",
    "canonical_of_theta",
    "canonical_of_rational",
    "theta_quotient",
    "pair",
    "tau_infinity",
    "boundary",
    "eisenstein_value",
    "eisenstein_symbol",
    "norm_to_q",
    "norm_by_determinant",
    "tame_symbol_sum",
    "cyclotomic_polynomial",
]
