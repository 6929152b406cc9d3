"""The family ``Y^2 = X^3 + X^2 + t^n``: cusp expansions, phi tables and the rank bound.

Near the ``I_1`` fiber at ``t' = zeta_n^i`` the local parameter is
``t_i = zeta_n^-i t' - 1`` and the Tate period ``q_i`` is defined by
``1/j = -(t_i+1)^n ((t_i+1)^n - 1) / 432``.  Generators of the log 2-forms
are written as ``f(q_i) dq_i/q_i du/u``:

* ``PolyDt(a, e)``: ``zeta^e t'^a dt'``, i.e. ``zeta^e zeta_n^(i(a+1)) (t_i+1)^a q dt_i/dq``,
* ``DlogT``: ``sqrt(-1) dt'/t'``, i.e. ``sqrt(-1) (t_i+1)^-1 q dt_i/dq``,
* ``CuspForm(b)``: ``dt'/(t' - zeta_n^b)``, i.e. ``(t_i + 1 - zeta_n^(b-i))^-1 q dt_i/dq``,

each multiplied by ``E4^(1/4)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, gcd

from .fourier import decompose, in_theorem_A_kernel, phi_modulus_exponent
from .rings import (
    QQ,
    CyclotomicBasis,
    Ring,
    build_unramified,
    is_prime,
    multiplicative_order,
    zmod,
)
from .series import LaurentSeries
from .tate import e4_series, j_series
from .zpmat import ZpeMatrix, kernel_mod, rank_mod_p


# ---------------------------------------------------------------------------
# configuration


def surface_degree(n: int, p: int) -> tuple[int, int]:
    """Unramified degree and root order for the family at ``p``.

    The degree is the least ``d`` with ``zeta_4n`` in ``F_{p^d}`` and ``-4/27``
    an ``n``-th power there; the root order is the least multiple of ``4n``
    whose residue field is exactly ``F_{p^d}``.
    """
    m = 4 * n
    d0 = multiplicative_order(p, m)
    c = (-4 * pow(27, -1, p)) % p
    d = d0
    while True:
        size = p**d
        g = gcd(n, size - 1)
        # c lies in F_p^*, an n-th power in F_{p^d} iff c^((size-1)/g) = 1
        if pow(c, (size - 1) // g, p) == 1:
            break
        d += d0
    if d == d0:
        return d, m
    r = m
    while True:
        if (p**d - 1) % r == 0 and multiplicative_order(p, r) == d:
            return d, r
        r += m


@dataclass(frozen=True)
class FormGenerator:
    kind: str  # "poly", "dlog" or "cusp"
    a: int = 0
    e: int = 0
    b: int = 0

    def __str__(self):
        if self.kind == "poly":
            return f"PolyDt(a={self.a}, e={self.e})"
        if self.kind == "dlog":
            return "DlogT"
        return f"CuspForm(b={self.b})"

    @staticmethod
    def poly(a: int, e: int) -> "FormGenerator":
        return FormGenerator("poly", a=a, e=e)

    @staticmethod
    def dlog() -> "FormGenerator":
        return FormGenerator("dlog")

    @staticmethod
    def cusp(b: int) -> "FormGenerator":
        return FormGenerator("cusp", b=b)


@dataclass
class SurfaceConfig:
    n: int
    p: int
    nu: int = 4
    K_max: int | None = None
    N: int | None = None
    power: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if (6 * self.n) % self.p == 0:
            raise ValueError(f"p = {self.p} divides 6n = {6 * self.n}")
        if self.nu < 2:
            raise ValueError("nu must be >= 2 to see data modulo p^2")
        if self.K_max is None:
            self.K_max = 4 * self.p
        if self.N is None:
            self.N = self.K_max + 8
        if self.N <= self.K_max:
            raise ValueError("series precision N must exceed K_max")

    @property
    def k(self) -> int:
        return (self.n - 1) // 6

    @property
    def l(self) -> int:
        return self.n - 6 * self.k

    @cached_property
    def _ring_data(self):
        d, m = surface_degree(self.n, self.p)
        ring, basis = build_unramified(self.p, m, self.nu, self.power)
        n = self.n
        if n % 2:
            # zeta = sqrt(-1) zeta_n with zeta_n = zeta^e1, sqrt(-1) = zeta^e2 (for m = 4n)
            e1 = next(x for x in range(0, 4 * n, 4) if x % n == 1 % n)
            e2 = next(x for x in range(1, 4 * n, 4) if x % n == 0)
            scale = m // (4 * n)
            zn, sq = e1 * scale, e2 * scale
        else:
            zn, sq = m // n, m // 4
        return ring, basis, zn, sq

    @property
    def ring(self):
        return self._ring_data[0]

    @property
    def basis(self) -> CyclotomicBasis:
        return self._ring_data[1]

    @property
    def zeta_n_exponent(self) -> int:
        """``zeta_n = zeta^(this)``."""
        return self._ring_data[2]

    @property
    def sqrt_minus_one_exponent(self) -> int:
        return self._ring_data[3]

    def generators(self) -> list[FormGenerator]:
        gens = [FormGenerator.poly(a, e) for a in range(self.k) for e in self.basis.exponents]
        gens.append(FormGenerator.dlog())
        gens += [FormGenerator.cusp(b) for b in range(1, self.n + 1)]
        return gens


# ---------------------------------------------------------------------------
# q-expansions


def inverse_j_in_t(n: int, N: int, ring: Ring = QQ) -> LaurentSeries:
    """``1/j = -(t+1)^n ((t+1)^n - 1) / 432`` as a polynomial in ``t``."""
    coeffs = [ring.from_rational(Fraction(-(comb(2 * n, k) - comb(n, k)), 432)) for k in range(N)]
    return LaurentSeries(ring, coeffs, 0, N)


def t_series(n: int, N: int, ring: Ring = QQ) -> LaurentSeries:
    """``t_i`` as a series in ``q_i`` to ``O(q^N)`` (the same for every cusp).

    The coefficients have denominators made of 2, 3 and ``n`` only, so the
    series can be computed directly in ``Z/p^nu`` for ``p`` prime to ``6n``.
    """
    s = inverse_j_in_t(n, N, ring)
    inv_j = j_series(N - 1).invert().truncate(N).change_ring(ring)  # q + O(q^N)
    return s.reversion().compose(inv_j).truncate(N)


def q_expansion_of_t(config: SurfaceConfig, cusp: int = 1, exact: bool = False) -> LaurentSeries:
    if not 1 <= cusp <= config.n:
        raise ValueError(f"cusp must be in 1..{config.n}")
    if exact:
        return t_series(config.n, config.N, QQ)
    return t_series(config.n, config.N, zmod(config.p, config.nu))


class _CuspData:
    """Base-ring series shared by every generator at a cusp."""

    def __init__(self, config: SurfaceConfig):
        self.config = config
        base = zmod(config.p, config.nu)
        N = config.N
        t = t_series(config.n, N, base)
        self.t = t
        e4q = e4_series(N).change_ring(base).nth_root(4)
        self.measure = e4q * t.q_deriv()  # E4^(1/4) q dt/dq
        # B_m = measure * (-t)^m for the geometric expansion of 1/(t + 1 - c)
        self.B = []
        cur = self.measure
        for _ in range(N):
            self.B.append(cur)
            cur = (cur * (-t)).truncate(N)
            if cur.is_zero():
                break
        self.over_t = e4q * t.q_dlog()  # E4^(1/4) q t'/t


def _lift(config: SurfaceConfig, series: LaurentSeries, const) -> LaurentSeries:
    R = config.ring
    return series.map_coeffs(lambda c: R.scale(c, const), R)


def _geometric(config: SurfaceConfig, data: _CuspData, c) -> LaurentSeries:
    """``E4^(1/4) (t + 1 - c)^-1 q dt/dq`` for ``1 - c`` a unit."""
    R = config.ring
    N = config.N
    w = R.inv(R.sub(R.one, c))
    mod = R._mod
    d = R.degree
    acc = [[0] * d for _ in range(N)]
    wp = w
    for Bm in data.B:
        for k, coeff in Bm.items():
            if coeff:
                row = acc[k]
                for s in range(d):
                    row[s] += coeff * wp[s]
        wp = R.mul(wp, w)
    return LaurentSeries(R, [tuple(x % mod for x in row) for row in acc], 0, N)


def form_series(config: SurfaceConfig, gen: FormGenerator, cusp: int,
                data: _CuspData | None = None) -> LaurentSeries:
    """``f(q_i)`` with ``gen = f(q_i) dq_i/q_i du/u`` at cusp ``i``."""
    n = config.n
    if not 1 <= cusp <= n:
        raise ValueError(f"cusp must be in 1..{n}")
    data = data or _CuspData(config)
    R = config.ring
    zn = config.zeta_n_exponent
    if gen.kind == "poly":
        if not 0 <= gen.a < config.k:
            raise ValueError(f"PolyDt exponent a must lie in 0..{config.k - 1}")
        const = R.zeta_power(gen.e + zn * cusp * (gen.a + 1))
        base = data.measure
        if gen.a:
            base = base * (data.t + 1) ** gen.a
        return _lift(config, base, const)
    if gen.kind == "dlog":
        series = _geometric(config, data, R.zero)
        return series.scale(R.zeta_power(config.sqrt_minus_one_exponent))
    if gen.kind == "cusp":
        if not 1 <= gen.b <= n:
            raise ValueError(f"cusp index b must lie in 1..{n}")
        if (gen.b - cusp) % n == 0:
            return _lift(config, data.over_t, R.one)
        return _geometric(config, data, R.zeta_power(zn * (gen.b - cusp)))
    raise ValueError(f"unknown generator kind {gen.kind!r}")


# ---------------------------------------------------------------------------
# phi tables and the rank bound


@dataclass
class PhiTable:
    config: SurfaceConfig
    cusp: int
    ks: list[int]
    rows: list[tuple[FormGenerator, dict[int, list[int]]]]
    modulus: int

    def row(self, gen: FormGenerator) -> dict[int, list[int]]:
        for g, r in self.rows:
            if g == gen:
                return r
        raise KeyError(str(gen))

    def as_dict(self) -> dict:
        return {
            "n": self.config.n,
            "p": self.config.p,
            "cusp": self.cusp,
            "modulus": self.modulus,
            "ks": self.ks,
            "basis_exponents": list(self.config.basis.exponents),
            "rows": [{"generator": str(g), "values": {str(k): v[k] for k in self.ks}}
                     for g, v in self.rows],
        }


def _phi_rows(config: SurfaceConfig, gens, cusp: int, ks, data=None):
    data = data or _CuspData(config)
    p = config.p
    mod = p**2
    out = []
    for g in gens:
        dec = decompose(form_series(config, g, cusp, data), config.basis)
        vals = {}
        for k in ks:
            e = phi_modulus_exponent(k, p, config.nu)
            vals[k] = [x % p ** min(e, 2) for x in dec.a[k]] if e else [0] * config.ring.degree
        out.append((g, vals))
    return out, mod


def phi_table(config: SurfaceConfig, cusp: int = 1, gens=None) -> PhiTable:
    """``a_k^(i) mod p^2`` for ``k = p, 2p, ..., K_max`` and every generator."""
    ks = [k for k in range(config.p, config.K_max + 1, config.p)]
    gens = config.generators() if gens is None else gens
    rows, mod = _phi_rows(config, gens, cusp, ks)
    return PhiTable(config, cusp, ks, rows, mod)


def zeta_multiple_rows(config: SurfaceConfig, cusp: int = 1, exponents=None) -> PhiTable:
    """Tables for ``zeta^r E4^(1/4) q dt/dq``, labelled by the total exponent ``r``."""
    R = config.ring
    exponents = list(config.basis.exponents) if exponents is None else exponents
    data = _CuspData(config)
    ks = [k for k in range(config.p, config.K_max + 1, config.p)]
    rows = []
    p = config.p
    for r in exponents:
        dec = decompose(_lift(config, data.measure, R.zeta_power(r)), config.basis)
        rows.append((FormGenerator.poly(0, r), {k: [x % p**2 for x in dec.a[k]] for k in ks}))
    return PhiTable(config, cusp, ks, rows, p**2)


def boundary_of(config: SurfaceConfig, gen: FormGenerator) -> list[int]:
    """``partial_DR`` of a generator: PolyDt -> 0, DlogT -> -e_0, CuspForm(b) -> e_b."""
    v = [0] * (config.n + 1)
    if gen.kind == "dlog":
        v[0] = -1
    elif gen.kind == "cusp":
        v[gen.b] = 1
    return v


def residue_at_cusps(config: SurfaceConfig, form: dict[FormGenerator, int]) -> list[int]:
    """Residue vector of an integral combination of generators."""
    out = [0] * (config.n + 1)
    for g, c in form.items():
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("residues need integral coefficients")
            c = c.numerator
        if not isinstance(c, int):
            raise ValueError("residues need integral coefficients")
        for idx, x in enumerate(boundary_of(config, g)):
            out[idx] += c * x
    return out


def explicit_symbol_boundaries(n: int) -> list[list[int]]:
    """Boundaries of the two explicit symbols: ``(n, 0, ..., 0)`` and ``(0, 1, ..., 1)``."""
    return [[n] + [0] * n, [0] + [1] * n]


def explicit_forms(config: SurfaceConfig) -> list[dict[FormGenerator, int]]:
    """dlog of the explicit symbols: ``n DlogT`` and ``sum_b CuspForm(b)``."""
    return [{FormGenerator.dlog(): config.n},
            {FormGenerator.cusp(b): 1 for b in range(1, config.n + 1)}]


def _rank_q(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class RankBound:
    upper: int
    lower: int
    diagnostics: dict = field(default_factory=dict)


def _cusp_rows(args):
    config, gens, cusp, ks = args
    return _phi_rows(config, gens, cusp, ks)[0]


def rank_bound(config: SurfaceConfig, cusps=(1,), K_max: int | None = None,
               workers: int = 1) -> RankBound:
    """Upper bound ``dim_Fp partial(V)`` and the lower bound from the explicit symbols.

    ``M`` collects the conditions ``sum_g x_g a_k^(i)(g) = 0 mod p^2`` for the
    chosen cusps and ``k = p, 2p, ..., K_max``; ``V`` is its kernel reduced
    mod ``p``.  The diagnostics include the bound obtained for each smaller
    ``K``.
    """
    cusps = list(cusps)
    if not cusps:
        raise ValueError("need at least one cusp")
    K_max = config.K_max if K_max is None else K_max
    if K_max >= config.N:
        raise ValueError("K_max must be below the series precision N")
    p = config.p
    gens = config.generators()
    ks = [k for k in range(p, K_max + 1, p)]
    jobs = [(config, gens, i, ks) for i in cusps]
    if workers > 1 and len(cusps) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(workers, len(cusps))) as ex:
            per_cusp = dict(zip(cusps, ex.map(_cusp_rows, jobs)))
    else:
        per_cusp = {i: _cusp_rows(job) for i, job in zip(cusps, jobs)}
    d = config.ring.degree
    bnd = [boundary_of(config, g) for g in gens]

    def bound_for(kset):
        M = []
        for i in cusps:
            rows = per_cusp[i]
            for k in kset:
                for s in range(d):
                    M.append([rows[j][1][k][s] for j in range(len(gens))])
        if not M:
            M = [[0] * len(gens)]
        gens_ker, dim_v = kernel_mod(ZpeMatrix(p, 2, M))
        images = [[sum(x[j] * bnd[j][c] for j in range(len(gens))) for c in range(config.n + 1)]
                  for x in gens_ker]
        return rank_mod_p(images, p), dim_v, len(M)

    upper, dim_v, nrows = bound_for(ks)
    by_k = {k: bound_for([x for x in ks if x <= k])[0] for k in ks}
    lower = _rank_q(explicit_symbol_boundaries(config.n))
    diag = {
        "K_max": K_max,
        "ks": ks,
        "cusps": cusps,
        "generators": [str(g) for g in gens],
        "matrix_shape": [nrows, len(gens)],
        "kernel_dim_mod_p": dim_v,
        "bound_by_K": by_k,
        "ring_degree": d,
        "root_order": config.ring.root_order,
    }
    return RankBound(upper, lower, diag)


def combination_series(config: SurfaceConfig, form: dict[FormGenerator, int], cusp: int,
                       data: _CuspData | None = None) -> LaurentSeries:
    """``sum c_g g`` as a q-expansion at ``cusp``."""
    data = data or _CuspData(config)
    R = config.ring
    out = LaurentSeries.zero(R, config.N)
    for g, c in form.items():
        out = out + form_series(config, g, cusp, data).scale(R.from_int(c))
    return out


def explicit_forms_in_kernel(config: SurfaceConfig, cusps=None, K_max: int | None = None) -> dict:
    """``{(symbol index, cusp): bool}``: does phi vanish on the explicit 2-forms."""
    cusps = range(1, config.n + 1) if cusps is None else cusps
    K_max = config.K_max if K_max is None else K_max
    data = _CuspData(config)
    out = {}
    for j, form in enumerate(explicit_forms(config)):
        for i in cusps:
            dec = decompose(combination_series(config, form, i, data), config.basis)
            out[(j, i)] = in_theorem_A_kernel(dec, K_max)
    return out
