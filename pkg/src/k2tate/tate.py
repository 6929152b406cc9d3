"""Tate curve expansions.

The curve is ``y^2 + xy = x^3 + a4(q) x + a6(q)``.  Functions of the
uniformizing variable ``u`` are evaluated at a fixed unit ``u0`` (possibly a
dual number) and returned as series in ``q``; the ``u``-support of the
``q^0`` layer is unbounded, so bivariate series are never formed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import ZZ, NotInvertibleError, Ring
from .series import LaurentSeries


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


@dataclass(frozen=True)
class TateExpansions:
    a4: LaurentSeries
    a6: LaurentSeries
    e4: LaurentSeries
    delta: LaurentSeries
    j: LaurentSeries
    prec: int

    def change_ring(self, ring: Ring) -> "TateExpansions":
        return TateExpansions(*(s.change_ring(ring) for s in
                                (self.a4, self.a6, self.e4, self.delta, self.j)), self.prec)


def delta_series(N: int) -> LaurentSeries:
    """``q prod (1 - q^n)^24`` over ``Z``."""
    coeffs = [1] + [0] * (N - 2)  # prod part, exponents 0..N-2
    for n in range(1, N - 1):
        for _ in range(24):
            for k in range(N - 2, n - 1, -1):
                coeffs[k] -= coeffs[k - n]
    return LaurentSeries(ZZ, coeffs, 1, N)


def e4_series(N: int) -> LaurentSeries:
    return LaurentSeries(ZZ, [1] + [240 * sigma(n, 3) for n in range(1, N)], 0, N)


def tate_coefficients(N: int) -> TateExpansions:
    """Exact integer expansions ``a4, a6, E4, Delta`` to ``O(q^N)`` and ``j`` to ``O(q^(N-2))``."""
    if N < 2:
        raise ValueError("tate_coefficients needs N >= 2")
    a4 = LaurentSeries(ZZ, [0] + [-5 * sigma(n, 3) for n in range(1, N)], 0, N)
    a6 = []
    for n in range(1, N):
        num = 5 * sigma(n, 3) + 7 * sigma(n, 5)
        assert num % 12 == 0
        a6.append(-(num // 12))
    a6 = LaurentSeries(ZZ, [0] + a6, 0, N)
    e4 = e4_series(N)
    delta = delta_series(N)
    j = e4**3 * delta.invert()
    return TateExpansions(a4, a6, e4, delta, j, N)


def j_series(N: int) -> LaurentSeries:
    """``j = q^-1 + 744 + ...`` known to ``O(q^N)``."""
    return tate_coefficients(N + 2).j


def _check_point(ring: Ring, u0):
    one_minus = ring.sub(ring.one, u0)
    if not ring.is_unit(u0) or not ring.is_unit(one_minus):
        raise NotInvertibleError("u0 and 1 - u0 must be units")
    return ring.inv(u0), ring.inv(one_minus)


def x_at(ring: Ring, u0, N: int) -> LaurentSeries:
    """``x(u0)`` as a series in ``q`` to ``O(q^N)``.

    Uses ``x = u/(1-u)^2 + sum_{K>=1} q^K sum_{m | K} m (u^m + u^-m - 2)``.
    """
    u0 = ring.coerce(u0)
    ui, w = _check_point(ring, u0)
    coeffs = [ring.mul(u0, ring.mul(w, w))]
    pos, neg = [ring.one], [ring.one]
    for _ in range(1, N):
        pos.append(ring.mul(pos[-1], u0))
        neg.append(ring.mul(neg[-1], ui))
    two = ring.from_int(2)
    for K in range(1, N):
        acc = ring.zero
        for m in range(1, K + 1):
            if K % m == 0:
                acc = ring.add(acc, ring.scale(m, ring.sub(ring.add(pos[m], neg[m]), two)))
        coeffs.append(acc)
    return LaurentSeries(ring, coeffs, 0, N)


def y_at(ring: Ring, u0, N: int) -> LaurentSeries:
    """``y(u0)`` as a series in ``q`` to ``O(q^N)``."""
    u0 = ring.coerce(u0)
    ui, w = _check_point(ring, u0)
    coeffs = [ring.mul(ring.mul(u0, u0), ring.mul(w, ring.mul(w, w)))]
    pos, neg = [ring.one], [ring.one]
    for _ in range(1, N):
        pos.append(ring.mul(pos[-1], u0))
        neg.append(ring.mul(neg[-1], ui))
    for K in range(1, N):
        acc = ring.from_int(sigma(K, 1))
        for m in range(1, K + 1):
            if K % m == 0:
                # (q^n u)^m and (q^n u^-1)^m with n m = K
                acc = ring.add(acc, ring.scale(m * (m - 1) // 2, pos[m]))
                acc = ring.sub(acc, ring.scale(m * (m + 1) // 2, neg[m]))
        coeffs.append(acc)
    return LaurentSeries(ring, coeffs, 0, N)


def weierstrass_residual(x: LaurentSeries, y: LaurentSeries, tate: TateExpansions) -> LaurentSeries:
    """``y^2 + xy - x^3 - a4 x - a6``."""
    R = x.ring
    a4, a6 = tate.a4.change_ring(R), tate.a6.change_ring(R)
    return y * y + x * y - x * x * x - a4 * x - a6


def theta_at(ring: Ring, u0, N: int, shift: int = 0) -> LaurentSeries:
    """``theta(q^shift u0)`` as a series in ``q``.

    ``theta(u) = (1-u) prod_{n>=1} (1-q^n u)(1-q^n/u)``; a shift is removed
    with ``theta(q^k u) = (-1)^k u^-k q^(-k(k-1)/2) theta(u)``.
    """
    u0 = ring.coerce(u0)
    ui, _ = _check_point(ring, u0)
    coeffs = [ring.zero] * N
    coeffs[0] = ring.sub(ring.one, u0)
    series = LaurentSeries(ring, coeffs, 0, N)
    for n in range(1, N):
        a = [ring.zero] * N
        a[0] = ring.one
        a[n] = ring.neg(u0)
        b = [ring.zero] * N
        b[0] = ring.one
        b[n] = ring.neg(ui)
        series = series * LaurentSeries(ring, a, 0, N) * LaurentSeries(ring, b, 0, N)
    if shift:
        k = shift
        c = ring.pow(ui, k)
        if k % 2:
            c = ring.neg(c)
        series = series.scale(c).shift(-k * (k - 1) // 2)
    return series


def theta_eval(x: LaurentSeries, period: int = 1) -> LaurentSeries:
    """``theta(x)`` for a Laurent series ``x`` in ``q0`` with ``q = q0^period``.

    ``x = c q0^v (1 + ...)`` is written as ``q^k x'`` with ``0 <= ord x' < period``
    before the product is expanded; the result has the relative precision of ``x``.
    """
    if x.is_zero():
        raise NotInvertibleError("theta of zero")
    R = x.ring
    v = x.lo
    k = v // period
    xr = x.shift(-k * period)
    rel = x.prec - x.lo
    prec = xr.lo + rel
    one = LaurentSeries.one(R, prec)
    q = period
    series = one - xr
    xi = xr.invert()
    n = 1
    while True:
        t1 = xr.shift(n * q)
        t2 = xi.shift(n * q)
        if t1.lo >= series.prec and t2.lo >= series.prec:
            break
        if t1.lo < series.prec:
            series = series * (one - t1)
        if t2.lo < series.prec:
            series = series * (one - t2)
        n += 1
    if k:
        # theta(q^k x') = (-1)^k x'^-k q^(-k(k-1)/2) theta(x')
        series = series * xi ** k
        if k % 2:
            series = -series
        series = series.shift(-period * k * (k - 1) // 2)
    return series
