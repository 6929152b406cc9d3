"""Truncated Laurent series over a pluggable coefficient ring.

A series is ``sum_{k=lo}^{prec-1} c_k q^k + O(q^prec)``.  Precision rules:

* ``f + g``: ``min(N_f, N_g)``.
* ``f * g``: ``min(N_f + v_g, N_g + v_f)``.
* ``1 / f``: ``N - 2v``.
* ``q f'/f``: ``N - v``.
* ``f(g)`` for ``v(g) = w >= 1``: ``min(N_f * w, N_g + (max(lo_f, 1) - 1) * w)``.
* ``f(q^k)``: ``k N``.

The zero series is stored with ``lo = prec`` and no coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log
from typing import Callable, Sequence

from .rings import (
    QQ,
    ZZ,
    IntegersModPrimePower,
    NotInvertibleError,
    Ring,
    RingElement,
    UnramifiedRing,
    int_valuation,
)


def _is_padic(ring: Ring) -> bool:
    return isinstance(ring, (IntegersModPrimePower, UnramifiedRing))


def common_ring(r1: Ring, r2: Ring) -> Ring:
    """Ring both operands can be coerced into; mixed precision goes down."""
    if r1 == r2:
        return r1
    if _is_padic(r1) and _is_padic(r2) and r1.p == r2.p and type(r1) is type(r2):
        if isinstance(r1, UnramifiedRing) and r1.modulus != tuple(c % r1._mod for c in r2.modulus) \
                and r2.modulus != tuple(c % r2._mod for c in r1.modulus):
            raise TypeError(f"incompatible rings {r1} and {r2}")
        return r1 if r1.nu <= r2.nu else r2
    for a, b in ((r1, r2), (r2, r1)):
        if a in (ZZ, QQ) and b not in (ZZ, QQ):
            return b
        if a == ZZ and b == QQ:
            return QQ
    raise TypeError(f"incompatible rings {r1} and {r2}")


class LaurentSeries:
    __slots__ = ("ring", "lo", "coeffs", "prec")

    def __init__(self, ring: Ring, coeffs: Sequence, lo: int = 0, prec: int | None = None):
        if prec is None:
            prec = lo + len(coeffs)
        coeffs = list(coeffs[: max(prec - lo, 0)])
        coeffs += [ring.zero] * (prec - lo - len(coeffs))
        start = 0
        while start < len(coeffs) and ring.is_zero(coeffs[start]):
            start += 1
        self.ring = ring
        if start == len(coeffs):
            self.lo, self.coeffs = prec, []
        else:
            self.lo, self.coeffs = lo + start, coeffs[start:]
        self.prec = prec

    # -- constructors
    @classmethod
    def from_values(cls, ring: Ring, values: Sequence, lo: int = 0, prec: int | None = None):
        """Build from ints, Fractions or ring elements (coerced into ``ring``)."""
        return cls(ring, [ring.coerce(v) for v in values], lo, prec)

    @classmethod
    def zero(cls, ring: Ring, prec: int):
        return cls(ring, [], prec, prec)

    @classmethod
    def one(cls, ring: Ring, prec: int):
        return cls.monomial(ring, 0, prec)

    @classmethod
    def monomial(cls, ring: Ring, k: int, prec: int, c=None):
        c = ring.one if c is None else ring.coerce(c)
        if k >= prec:
            return cls.zero(ring, prec)
        return cls(ring, [c], k, prec)

    @classmethod
    def gen(cls, ring: Ring, prec: int):
        """The variable ``q``."""
        return cls.monomial(ring, 1, prec)

    # -- access
    def valuation(self) -> int:
        return self.lo

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        if k >= self.prec:
            raise IndexError(f"coefficient of q^{k} is beyond the precision O(q^{self.prec})")
        if k < self.lo:
            return self.ring.zero
        return self.coeffs[k - self.lo]

    def coefficient(self, k: int) -> RingElement:
        return RingElement(self.ring, self[k])

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def dense(self, start: int, stop: int | None = None) -> list:
        """Coefficients for exponents ``start .. stop-1`` (default up to prec)."""
        stop = self.prec if stop is None else min(stop, self.prec)
        return [self[k] for k in range(start, stop)]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                yield self.lo + i, c

    # -- coercion
    def change_ring(self, ring: Ring) -> "LaurentSeries":
        if ring == self.ring:
            return self
        return LaurentSeries(ring, [ring.coerce(RingElement(self.ring, c)) for c in self.coeffs],
                             self.lo, self.prec)

    def map_coeffs(self, fn: Callable, ring: Ring | None = None) -> "LaurentSeries":
        ring = ring or self.ring
        return LaurentSeries(ring, [fn(c) for c in self.coeffs], self.lo, self.prec)

    def _scalar(self, c):
        return self.ring.coerce(c)

    def _align(self, other):
        if not isinstance(other, LaurentSeries):
            return self, None
        if other.ring == self.ring:
            return self, other
        ring = common_ring(self.ring, other.ring)
        return self.change_ring(ring), other.change_ring(ring)

    # -- arithmetic
    def __add__(self, other):
        f, g = self._align(other)
        if g is None:
            return f._add_scalar(f._scalar(other))
        R = f.ring
        prec = min(f.prec, g.prec)
        lo = min(f.lo, g.lo, prec)
        out = [R.zero] * (prec - lo)
        for k, c in enumerate(f.coeffs):
            if f.lo + k < prec:
                out[f.lo + k - lo] = c
        for k, c in enumerate(g.coeffs):
            e = g.lo + k
            if e < prec:
                out[e - lo] = R.add(out[e - lo], c)
        return LaurentSeries(R, out, lo, prec)

    __radd__ = __add__

    def _add_scalar(self, c):
        if self.prec <= 0:
            return self
        R = self.ring
        lo = min(self.lo, 0)
        out = self.dense(lo)
        out[-lo] = R.add(out[-lo], c)
        return LaurentSeries(R, out, lo, self.prec)

    def __neg__(self):
        R = self.ring
        return LaurentSeries(R, [R.neg(c) for c in self.coeffs], self.lo, self.prec)

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return self + (-other)
        return self._add_scalar(self.ring.neg(self._scalar(other)))

    def __rsub__(self, other):
        return (-self)._add_scalar(self._scalar(other))

    def scale(self, c) -> "LaurentSeries":
        R = self.ring
        c = self._scalar(c)
        return LaurentSeries(R, [R.mul(c, x) for x in self.coeffs], self.lo, self.prec)

    def __mul__(self, other):
        f, g = self._align(other)
        if g is None:
            return f.scale(other)
        R = f.ring
        prec = min(f.prec + g.lo, g.prec + f.lo)
        lo = f.lo + g.lo
        if not f.coeffs or not g.coeffs or lo >= prec:
            return LaurentSeries.zero(R, prec)
        n = prec - lo
        return LaurentSeries(R, R.convolve(f.coeffs, g.coeffs, n), lo, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``q^k``."""
        return LaurentSeries(self.ring, self.coeffs, self.lo + k, self.prec + k)

    def invert(self) -> "LaurentSeries":
        if not self.coeffs:
            raise NotInvertibleError("cannot invert the zero series")
        R = self.ring
        c = self.coeffs[0]
        if not R.is_unit(c):
            raise NotInvertibleError("leading coefficient is not a unit")
        ci = R.inv(c)
        n = len(self.coeffs)
        a = self.coeffs
        g = [ci]
        for k in range(1, n):
            acc = R.zero
            for j in range(1, k + 1):
                acc = R.add(acc, R.mul(a[j], g[k - j]))
            g.append(R.neg(R.mul(ci, acc)))
        return LaurentSeries(R, g, -self.lo, self.prec - 2 * self.lo)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.invert()
        return self.scale(self.ring.inv(self._scalar(other)))

    def __rtruediv__(self, other):
        return self.invert().scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        if k == 0:
            return LaurentSeries.one(self.ring, self.prec - self.lo)
        result, base = None, self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.ring == other.ring and self.prec == other.prec and self.lo == other.lo
                and all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None

    def agrees(self, other: "LaurentSeries", prec: int | None = None) -> bool:
        """Coefficients agree up to ``prec`` (default: the smaller precision)."""
        f, g = self._align(other)
        prec = min(f.prec, g.prec) if prec is None else prec
        if prec > min(f.prec, g.prec):
            return False
        return all(f.ring.eq(f[k], g[k]) for k in range(min(f.lo, g.lo, prec), prec))

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {prec}")
        return LaurentSeries(self.ring, self.coeffs, self.lo, prec)

    # -- calculus
    def q_deriv(self) -> "LaurentSeries":
        """``q d/dq``."""
        R = self.ring
        return LaurentSeries(R, [R.scale(self.lo + i, c) for i, c in enumerate(self.coeffs)],
                             self.lo, self.prec)

    def deriv(self) -> "LaurentSeries":
        """``d/dq``."""
        return self.q_deriv().shift(-1)

    def unit_decompose(self) -> "SeriesUnit":
        if not self.coeffs:
            raise NotInvertibleError("zero series has no unit decomposition")
        if not self.ring.is_unit(self.coeffs[0]):
            raise NotInvertibleError("leading coefficient is not a unit")
        return SeriesUnit(self.lo, self.shift(-self.lo))

    def q_dlog(self) -> "LaurentSeries":
        """``q f'/f``; equals ``v + q u'/u`` for ``f = q^v u``."""
        su = self.unit_decompose()
        u = su.unit_part
        return (u.q_deriv() * u.invert())._add_scalar(self.ring.from_int(su.order))

    def substitute_power(self, k: int) -> "LaurentSeries":
        """``f(q^k)`` for ``k >= 1``."""
        if k < 1:
            raise ValueError("substitution power must be positive")
        R = self.ring
        out = [R.zero] * (k * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return LaurentSeries(R, out, k * self.lo, k * self.prec)

    def twist(self, c) -> "LaurentSeries":
        """``f(c q) = sum c^k a_k q^k``; ``c`` must be a unit if ``lo < 0``."""
        R = self.ring
        c = self._scalar(c)
        ck = R.pow(c, self.lo)
        out = []
        for a in self.coeffs:
            out.append(R.mul(ck, a))
            ck = R.mul(ck, c)
        return LaurentSeries(R, out, self.lo, self.prec)

    def compose(self, g: "LaurentSeries") -> "LaurentSeries":
        """``f(g)`` for ``v(g) >= 1``."""
        f, g = self._align(g)
        w = g.lo
        if not g.coeffs or w < 1:
            raise ValueError("inner series must have positive valuation")
        R = f.ring
        cap = f.prec * w
        result = LaurentSeries.zero(R, cap)
        if not f.coeffs:
            return result
        start = f.lo
        power = g ** start if start != 0 else LaurentSeries.one(R, cap)
        for k in range(start, f.prec):
            c = f[k]
            if not R.is_zero(c):
                result = result + power.scale(c)
            if k + 1 < f.prec:
                power = power * g
        prec = min(result.prec, cap)
        return result.truncate(prec)

    def reversion(self) -> "LaurentSeries":
        """Compositional inverse of ``f = c_1 q + O(q^2)`` by Newton doubling."""
        if self.lo != 1:
            raise ValueError("reversion needs f(0) = 0 and a nonzero linear term")
        R = self.ring
        c1 = self.coeffs[0]
        if not R.is_unit(c1):
            raise NotInvertibleError("linear coefficient is not a unit")
        N = self.prec
        fprime = self.deriv()
        g = LaurentSeries(R, [R.inv(c1)], 1, min(2, N))
        m = min(2, N)
        while m < N:
            m = min(2 * m, N)
            g = LaurentSeries(R, g.coeffs, g.lo, m)
            f_m = self.truncate(m)
            resid = f_m.compose(g) - LaurentSeries.gen(R, m)
            denom = fprime.truncate(m - 1).compose(g)
            g = (g - resid * denom.invert()).truncate(m)
        return g.truncate(N)

    def nth_root(self, n: int) -> "LaurentSeries":
        """``g`` with ``g^n = f`` and ``g = 1 + O(q)``, by Newton doubling."""
        R = self.ring
        if n < 1:
            raise ValueError("root degree must be positive")
        if self.lo != 0 or not R.eq(self.coeffs[0], R.one):
            raise ValueError("nth_root needs f = 1 + O(q)")
        if _is_padic(R) and n % R.p == 0:
            raise NotInvertibleError(f"{n} is not invertible in {R}")
        if n == 1:
            return self
        N = self.prec
        g = LaurentSeries.one(R, 1)
        m = 1
        while m < N:
            m = min(2 * m, N)
            g = LaurentSeries(R, g.coeffs, g.lo, m)
            gn1 = g ** (n - 1)
            resid = gn1 * g - self.truncate(m)
            step = resid * gn1.invert()
            g = (g - step.map_coeffs(lambda c: R.div_int(c, n))).truncate(m)
        return g

    def log1(self) -> "LaurentSeries":
        """``log(1 + g)``.

        Over ``Q`` the input must be ``1 + O(q)``.  Over ``Z/p^nu`` and its
        unramified extensions every coefficient of ``g`` must be divisible by
        ``p``; the result lives in the ring of precision
        ``nu - ceil(log_p N) - 1`` with ``N`` the series precision.
        """
        R = self.ring
        g = self - 1
        if R in (QQ,):
            if g.lo < 1:
                raise ValueError("log1 over QQ needs f = 1 + O(q)")
            return _log_rational(g, self.prec)
        if not _is_padic(R):
            raise TypeError(f"log1 is not available over {R}")
        p = R.p
        if any(R.valuation(c) < 1 for c in g.coeffs):
            raise ValueError("log1 needs f = 1 + p*(...)")
        N = max(self.prec, 1)
        loss = (ceil(log(N, p) - 1e-12) if N > 1 else 0) + 1
        nu_out = R.nu - loss
        if nu_out < 1:
            raise NotInvertibleError(
                f"log1 at precision O(q^{N}) needs nu > {loss}; got nu = {R.nu}")
        out_ring = R.with_precision(nu_out)

        vg = min(R.valuation(c) for c in g.coeffs) if g.coeffs else R.nu
        terms = []
        power, i = g, 1
        # i*vg - v_p(i) grows with i, so stop once it reaches nu_out
        while not power.is_zero() and power.lo < self.prec and i * vg - log(i, p) < nu_out:
            if int_valuation(i, p) > loss:
                raise NotInvertibleError(f"division by {i} not representable")
            coeffs = [out_ring.reduce_from(R, R.div_int(c, i)) if not isinstance(c, tuple)
                      else tuple(x % out_ring._mod for x in R.div_int(c, i))
                      for c in power.coeffs]
            term = LaurentSeries(out_ring, coeffs, power.lo, power.prec)
            terms.append(term if i % 2 else -term)
            power = power * g
            i += 1
        total = LaurentSeries.zero(out_ring, self.prec)
        for t in terms:
            total = total + t
        return total

    def exp(self) -> "LaurentSeries":
        """``exp(g)`` for ``g = O(q)`` over ``Q``."""
        if self.ring != QQ:
            raise TypeError("exp is only provided over QQ")
        if self.lo < 1 and self.coeffs:
            raise ValueError("exp needs g = O(q)")
        N = self.prec
        result = LaurentSeries.one(QQ, N)
        term = LaurentSeries.one(QQ, N)
        for i in range(1, N):
            term = (term * self).scale(Fraction(1, i))
            if term.is_zero():
                break
            result = result + term
        return result

    # -- display
    def __str__(self):
        R = self.ring
        out = ""
        for k, c in self.items():
            cs = R.fmt(c)
            neg = cs.startswith("-") and not cs.startswith("(")
            if neg:
                cs = cs[1:]
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            term = cs if not mono else (mono if cs == "1" else f"{cs}*{mono}")
            if not out:
                out = ("-" if neg else "") + term
            else:
                out += (" - " if neg else " + ") + term
        tail = f"O(q^{self.prec})"
        return f"{out} + {tail}" if out else tail

    def __repr__(self):
        return f"LaurentSeries({self}, ring={self.ring.name})"


def _log_rational(g: LaurentSeries, prec: int) -> LaurentSeries:
    total = LaurentSeries.zero(QQ, prec)
    power, i = g, 1
    while not power.is_zero() and power.lo < prec:
        term = power.scale(Fraction(1, i))
        total = total + (term if i % 2 else -term)
        power = power * g
        i += 1
    return total


@dataclass(frozen=True)
class SeriesUnit:
    """``f = q^order * unit_part`` with ``unit_part`` having a unit constant term."""

    order: int
    unit_part: LaurentSeries

    def series(self) -> LaurentSeries:
        return self.unit_part.shift(self.order)
