import itertools
import random

from hypothesis import given, settings, strategies as st

from k2tate.zpmat import ZpeMatrix, howell_form, kernel_mod, rank_mod_p, span_mod_p


def brute_kernel(Z, m, cols):
    return {x for x in itertools.product(range(m), repeat=cols) if not any(Z.apply(x))}


def span(gens, m, cols):
    out = {(0,) * cols}
    for g in gens:
        out = {tuple((a + k * b) % m for a, b in zip(s, g)) for s in out for k in range(m)}
    return out


def test_kernel_against_brute_force():
    rng = random.Random(3)
    p, e, m = 3, 2, 9
    for _ in range(40):
        rows = [[rng.randrange(m) if rng.random() < 0.7 else 3 * rng.randrange(3) for _ in range(3)]
                for _ in range(rng.randint(1, 4))]
        Z = ZpeMatrix(p, e, rows)
        gens, dim = kernel_mod(Z)
        brute = brute_kernel(Z, m, 3)
        assert span(gens, m, 3) == brute
        assert dim == rank_mod_p([list(x) for x in brute], p)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 24), min_size=3, max_size=3), min_size=1, max_size=4))
def test_howell_rows_span_row_space(rows):
    p, e, m = 5, 2, 25
    H = howell_form(rows, p, e)
    assert span(H, m, 3) == span(rows, m, 3)


def test_rank_mod_p():
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert rank_mod_p([[5, 10], [0, 0]], 5) == 0
    assert rank_mod_p([[1, 0], [0, 1], [1, 1]], 2) == 2
    assert span_mod_p([[2, 4], [1, 3]], 5) == [[1, 0], [0, 1]]


def test_transpose_and_apply():
    Z = ZpeMatrix(3, 2, [[1, 2, 3], [4, 5, 6]])
    assert Z.transpose().entries == [[1, 4], [2, 5], [3, 6]]
    assert Z.apply([1, 1, 1]) == [6, 15 % 9]
