"""Dense matrices over ``Z/p^e``: Howell form, kernels, ranks mod p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def _val(x: int, p: int, e: int) -> int:
    if x == 0:
        return e
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class ZpeMatrix:
    p: int
    e: int
    entries: list[list[int]]

    def __post_init__(self):
        m = self.p**self.e
        self.entries = [[x % m for x in row] for row in self.entries]
        if self.entries and len({len(r) for r in self.entries}) != 1:
            raise ValueError("rows must have equal length")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def transpose(self) -> "ZpeMatrix":
        return ZpeMatrix(self.p, self.e, [list(c) for c in zip(*self.entries)])

    def apply(self, x: Sequence[int]) -> list[int]:
        m = self.p**self.e
        return [sum(a * b for a, b in zip(row, x)) % m for row in self.entries]


def howell_form(rows: Sequence[Sequence[int]], p: int, e: int) -> list[list[int]]:
    """Howell form of the row span over ``Z/p^e``.

    Column by column, the pivot is the first remaining row of minimal
    valuation; it is normalized to ``p^v`` and cleared above and below, and
    ``p^(e-v)`` times the pivot row is fed back as a new row.  The rows of the
    result whose first ``j`` entries vanish span every vector of the row space
    with that property.
    """
    m = p**e
    work = [[x % m for x in r] for r in rows if any(x % m for x in r)]
    if not work:
        return []
    ncols = len(work[0])
    done: list[list[int]] = []
    for col in range(ncols):
        best, bv = None, e
        for idx, r in enumerate(work):
            v = _val(r[col], p, e)
            if v < bv:
                best, bv = idx, v
        if best is None:
            continue
        piv = work.pop(best)
        unit = piv[col] // p**bv
        inv = pow(unit, -1, m)
        piv = [x * inv % m for x in piv]
        pv = p**bv
        rest = []
        for r in work:
            if r[col]:
                f = r[col] // pv
                r = [(x - f * y) % m for x, y in zip(r, piv)]
            if any(r):
                rest.append(r)
        ann = [x * p ** (e - bv) % m for x in piv]
        if any(ann):
            rest.append(ann)
        for i, r in enumerate(done):
            if r[col] >= pv:
                f = r[col] // pv
                done[i] = [(x - f * y) % m for x, y in zip(r, piv)]
        done.append(piv)
        work = rest
    return done


def kernel_mod(M: ZpeMatrix) -> tuple[list[list[int]], int]:
    """Generators of ``{x : M x = 0 mod p^e}`` and ``dim_Fp`` of their reduction mod ``p``."""
    p, e = M.p, M.e
    r, c = M.rows, M.cols
    aug = []
    for j in range(c):
        col = [M.entries[i][j] for i in range(r)]
        aug.append(col + [1 if k == j else 0 for k in range(c)])
    H = howell_form(aug, p, e)
    gens = [row[r:] for row in H if not any(row[:r])]
    return gens, rank_mod_p(gens, p)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over ``F_p`` of the reductions of ``rows``."""
    work = [[x % p for x in r] for r in rows]
    work = [r for r in work if any(r)]
    if not work:
        return 0
    rank = 0
    ncols = len(work[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [x * inv % p for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def span_mod_p(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Reduced row echelon basis over ``F_p``."""
    work = [[x % p for x in r] for r in rows if any(x % p for x in r)]
    if not work:
        return []
    out = []
    ncols = len(work[0])
    for col in range(ncols):
        piv = next((i for i, r in enumerate(work) if r[col]), None)
        if piv is None:
            continue
        row = work.pop(piv)
        inv = pow(row[col], -1, p)
        row = [x * inv % p for x in row]
        work = [[(x - r[col] * y) % p for x, y in zip(r, row)] for r in work]
        work = [r for r in work if any(r)]
        out = [[(x - o[col] * y) % p for x, y in zip(o, row)] for o in out]
        out.append(row)
    return out
