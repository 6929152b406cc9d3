"""Fourier decomposition over a cyclotomic basis and the map phi.

A series ``f = sum_k c_k q^k`` over an unramified ring is written uniquely as
``sum_{k>=1} sum_i a_k^(i) zeta_i q^k / (1 - zeta_i q^k)`` plus its principal
part, i.e. ``c_k = sum_{m | k} sum_i a_m^(i) zeta_i^(k/m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import CyclotomicBasis, IntegersModPrimePower, UnramifiedRing, build_unramified
from .series import LaurentSeries


@dataclass
class FourierDecomposition:
    basis: CyclotomicBasis
    prec: int
    a: dict[int, list[int]]
    principal: dict[int, tuple] = field(default_factory=dict)

    @property
    def ring(self) -> UnramifiedRing:
        return self.basis.ring

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def nu(self) -> int:
        return self.ring.nu


def _as_unramified(f: LaurentSeries, basis: CyclotomicBasis | None):
    R = f.ring
    if isinstance(R, UnramifiedRing):
        return f, basis or CyclotomicBasis(R)
    if isinstance(R, IntegersModPrimePower):
        U, B = build_unramified(R.p, 1, R.nu)
        return f.map_coeffs(lambda c: (c,), U), basis or B
    raise TypeError(f"decomposition needs an unramified coefficient ring, got {R}")


def _zeta_powers(basis: CyclotomicBasis):
    R = basis.ring
    m = R.root_order
    pw = [R.one]
    for _ in range(1, m):
        pw.append(R.mul(pw[-1], R.zeta))
    return pw


def decompose(f: LaurentSeries, basis: CyclotomicBasis | None = None) -> FourierDecomposition:
    """Solve the divisor system for ``a_k^(i)``, ``1 <= k < prec``."""
    f, basis = _as_unramified(f, basis)
    R = basis.ring
    if f.ring != R:
        raise ValueError("basis belongs to a different ring")
    pw = _zeta_powers(basis)
    mo = R.root_order
    mod = R._mod
    d = R.degree
    a: dict[int, list[int]] = {}
    for k in range(1, f.prec):
        v = list(f[k])
        for m in range(1, k):
            if k % m:
                continue
            am = a[m]
            t = k // m
            for i, e in enumerate(basis.exponents):
                if am[i]:
                    z = pw[e * t % mo]
                    c = am[i]
                    for s in range(d):
                        v[s] -= c * z[s]
        a[k] = basis.decompose(tuple(x % mod for x in v))
    principal = {k: f[k] for k in range(min(f.lo, 1), 1) if k < f.prec}
    return FourierDecomposition(basis, f.prec, a, principal)


def resum(dec: FourierDecomposition) -> LaurentSeries:
    R = dec.ring
    pw = _zeta_powers(dec.basis)
    mo = R.root_order
    lo = min(list(dec.principal) + [1])
    coeffs = []
    for k in range(lo, dec.prec):
        if k <= 0:
            coeffs.append(dec.principal.get(k, R.zero))
            continue
        acc = R.zero
        for m in range(1, k + 1):
            if k % m:
                continue
            for i, e in enumerate(dec.basis.exponents):
                c = dec.a[m][i]
                if c:
                    acc = R.add(acc, R.scale(c, pw[e * (k // m) % mo]))
        coeffs.append(acc)
    return LaurentSeries(R, coeffs, lo, dec.prec)


def from_array(basis: CyclotomicBasis, a: dict[int, list[int]], prec: int) -> FourierDecomposition:
    m = basis.ring._mod
    return FourierDecomposition(basis, prec, {k: [x % m for x in a.get(k, [0] * basis.ring.degree)]
                                              for k in range(1, prec)})


def _vp(k: int, p: int) -> int:
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def phi_modulus_exponent(k: int, p: int, nu: int) -> int:
    """Exponent ``min(nu, 2 v_p(k))`` of the modulus used at ``k``."""
    return min(nu, 2 * _vp(k, p))


@dataclass
class PhiValue:
    p: int
    nu: int
    entries: dict[int, tuple[int, list[int]]]  # k -> (modulus, residues)

    def is_zero(self) -> bool:
        return all(not any(v) for _, v in self.entries.values())

    def nonzero(self) -> dict[int, list[int]]:
        return {k: v for k, (mod, v) in self.entries.items() if mod > 1}


def phi_mu(dec: FourierDecomposition, K_max: int | None = None) -> PhiValue:
    """``a_k^(i) mod p^min(nu, 2 v_p(k))`` for ``1 <= k <= K_max``."""
    p, nu = dec.p, dec.nu
    if nu < 2:
        raise ValueError("phi needs nu >= 2 to see data modulo k^2")
    K_max = dec.prec - 1 if K_max is None else K_max
    if K_max > dec.prec - 1:
        raise ValueError(f"K_max = {K_max} exceeds the decomposition precision {dec.prec - 1}")
    out = {}
    for k in range(1, K_max + 1):
        mod = p ** phi_modulus_exponent(k, p, nu)
        out[k] = (mod, [x % mod for x in dec.a[k]])
    return PhiValue(p, nu, out)


def in_theorem_A_kernel(dec: FourierDecomposition, K_max: int | None = None) -> bool:
    return phi_mu(dec, K_max).is_zero()


def frobenius_lift(h: LaurentSeries) -> LaurentSeries:
    """``sigma`` on coefficients together with ``q -> q^p``."""
    R = h.ring
    if isinstance(R, UnramifiedRing):
        g = h.map_coeffs(R.frobenius)
    elif isinstance(R, IntegersModPrimePower):
        g = h
    else:
        raise TypeError("Frobenius lift needs a p-adic coefficient ring")
    return g.substitute_power(R.p)


def l_phi(h: LaurentSeries) -> LaurentSeries:
    """``p^-1 log(phi(h) / h^p)``.

    The logarithm loses ``ceil(log_p N) + 1`` digits and the division by ``p``
    one more, so the result lives at precision ``nu - ceil(log_p N) - 2``.
    """
    R = h.ring
    p = R.p
    ratio = frobenius_lift(h) * (h**p).invert()
    ratio = ratio.truncate(min(ratio.prec, h.prec - h.lo))
    lg = ratio.log1()
    S = lg.ring
    if S.nu < 2:
        raise ValueError(f"l_phi needs more guard digits: log result has nu = {S.nu}")
    T = S.with_precision(S.nu - 1)
    return lg.map_coeffs(lambda c: _div_p(S, T, c), T)


def _div_p(S, T, c):
    if isinstance(c, tuple):
        return tuple(x % T._mod for x in S.div_int(c, S.p))
    return T.reduce_from(S, S.div_int(c, S.p))


def is_q_exact(f: LaurentSeries) -> bool:
    """``f = q dg/dq`` is solvable: ``c_0 = 0`` and ``v_p(c_k) >= v_p(k)``."""
    R = f.ring
    for k in range(f.lo, f.prec):
        c = f[k]
        if R.is_zero(c):
            continue
        if k == 0:
            return False
        if R.valuation(c) < min(_vp(abs(k), R.p), R.nu):
            return False
    return True
