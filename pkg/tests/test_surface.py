import json
import time
from fractions import Fraction
from pathlib import Path

import pytest

from k2tate.fourier import decompose
from k2tate.rings import QQ
from k2tate.series import LaurentSeries as L
from k2tate.surface import (
    FormGenerator, SurfaceConfig, _CuspData, boundary_of, combination_series,
    explicit_forms, explicit_forms_in_kernel, explicit_symbol_boundaries, form_series,
    inverse_j_in_t, phi_table, q_expansion_of_t, rank_bound, residue_at_cusps, surface_degree,
    t_series, zeta_multiple_rows,
)
from k2tate.tate import j_series

TABLES = json.loads((Path(__file__).parent / "data" / "tables_n7_p11.json").read_text())


@pytest.fixture(scope="module")
def cfg7():
    return SurfaceConfig(7, 11)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7])
def test_t_leading_terms(n):
    t = t_series(n, 6, QQ)
    assert t[1] == Fraction(-432, n)
    assert t[2] == Fraction(41472 * n + 93312, n * n)


def test_j_round_trip():
    n, N = 3, 10
    t = t_series(n, N, QQ)
    inv = inverse_j_in_t(n, N, QQ).compose(t)
    j = j_series(N)
    assert (inv * j).agrees(L.one(QQ, N - 2), N - 2)


def test_config_validation():
    with pytest.raises(ValueError):
        SurfaceConfig(7, 7)
    with pytest.raises(ValueError):
        SurfaceConfig(5, 3)
    with pytest.raises(ValueError):
        SurfaceConfig(7, 11, K_max=44, N=44)
    c = SurfaceConfig(13, 5)
    assert (c.k, c.l) == (2, 1)
    assert (c.K_max, c.N, c.nu) == (20, 28, 4)


def test_surface_degree():
    assert surface_degree(7, 11) == (6, 28)
    d, m = surface_degree(2, 5)
    assert m % 8 == 0 and (5**d - 1) % m == 0


def test_generators_order(cfg7):
    gens = cfg7.generators()
    assert gens[:6] == [FormGenerator.poly(0, e) for e in range(6)]
    assert gens[6] == FormGenerator.dlog()
    assert gens[7:] == [FormGenerator.cusp(b) for b in range(1, 8)]


def test_chart_exponents(cfg7):
    R = cfg7.ring
    z7 = R.zeta_power(cfg7.zeta_n_exponent)
    i = R.zeta_power(cfg7.sqrt_minus_one_exponent)
    assert R.eq(R.pow(z7, 7), R.one) and not R.eq(z7, R.one)
    assert R.eq(R.mul(i, i), R.neg(R.one))
    assert R.eq(R.mul(i, z7), R.zeta)


def test_f_tables_match(cfg7):
    order = list(range(1, 7)) + [0]
    gens = [FormGenerator.cusp(s + 1) for s in order]  # cusp 1: b - i = b - 1
    tab = phi_table(cfg7, 1, gens)
    for s, g in zip(order, gens):
        row = tab.row(g)
        for k in (11, 22, 33, 44):
            assert row[k] == TABLES["f"][str(s)][str(k)], (s, k)


def test_g_tables_match(cfg7):
    tab = zeta_multiple_rows(cfg7, 1)
    for g, row in tab.rows:
        for k in (11, 22, 33, 44):
            assert row[k] == TABLES["g"][str(g.e)][str(k)], (g.e, k)


def test_poly_generator_equals_g_row(cfg7):
    # zeta^b dt' = zeta^(b + 8i) dt_i
    data = _CuspData(cfg7)
    for b in range(3):
        f = form_series(cfg7, FormGenerator.poly(0, b), 1, data)
        g = zeta_multiple_rows(cfg7, 1, [b + 8]).rows[0][1]
        dec = decompose(f, cfg7.basis)
        for k in (11, 22):
            assert [x % 121 for x in dec.a[k]] == g[k]


def test_zero_rows_and_absent_columns(cfg7):
    tab = phi_table(cfg7, 1)
    assert tab.ks == [11, 22, 33, 44]
    assert all(not any(v) for v in tab.row(FormGenerator.dlog()).values())
    total = combination_series(cfg7, explicit_forms(cfg7)[1], 1)
    dec = decompose(total, cfg7.basis)
    assert all(x % 121 == 0 for k in tab.ks for x in dec.a[k])


def test_cusp_form_at_own_cusp_has_constant_one(cfg7):
    f = form_series(cfg7, FormGenerator.cusp(3), 3)
    assert cfg7.ring.eq(f[0], cfg7.ring.one)


def test_chart_consistency(cfg7):
    data = _CuspData(cfg7)
    a = form_series(cfg7, FormGenerator.cusp(3), 1, data)
    b = form_series(cfg7, FormGenerator.cusp(5), 3, data)
    assert a == b


def test_table_stable_in_precision():
    c1 = SurfaceConfig(7, 11)
    c2 = SurfaceConfig(7, 11, N=c1.N + 10)
    t1, t2 = phi_table(c1, 2), phi_table(c2, 2)
    assert [r for _, r in t1.rows] == [r for _, r in t2.rows]


def test_residues(cfg7):
    forms = explicit_forms(cfg7)
    vecs = [residue_at_cusps(cfg7, f) for f in forms]
    want = explicit_symbol_boundaries(7)
    assert vecs[1] == want[1]
    assert vecs[0] == [-x for x in want[0]]  # DlogT -> -e_0
    assert boundary_of(cfg7, FormGenerator.poly(0, 2)) == [0] * 8
    with pytest.raises(ValueError):
        residue_at_cusps(cfg7, {FormGenerator.dlog(): Fraction(1, 2)})


def test_explicit_forms_in_kernel_all_cusps(cfg7):
    res = explicit_forms_in_kernel(cfg7)
    assert len(res) == 14 and all(res.values())


def test_rank_bound_n7(cfg7):
    t = time.perf_counter()
    rb = rank_bound(cfg7)
    assert (rb.upper, rb.lower) == (2, 2)
    by_k = list(rb.diagnostics["bound_by_K"].values())
    assert all(a >= b for a, b in zip(by_k, by_k[1:]))
    assert time.perf_counter() - t < 60


def test_rank_bound_monotone_in_cusps(cfg7):
    one = rank_bound(cfg7, (1,), K_max=22).upper
    two = rank_bound(cfg7, (1, 2), K_max=22).upper
    assert two <= one


@pytest.mark.parametrize("n,p", [(2, 5), (3, 5), (5, 7)])
def test_rank_bound_small_n(n, p):
    assert rank_bound(SurfaceConfig(n, p)).upper == 2


def test_q_expansion_of_t_cusp_range(cfg7):
    with pytest.raises(ValueError):
        q_expansion_of_t(cfg7, 0)
    assert q_expansion_of_t(cfg7, 4) == q_expansion_of_t(cfg7, 1)
