"""Linear algebra over GF(2) with rows packed into Python integers.

Bit ``i`` of a row integer is column ``i``.  Pivots are taken on the highest
set bit, so a reduced basis is unique for a given row space.
"""

from __future__ import annotations

from collections.abc import Iterable


def parity(v: int) -> int:
    return v.bit_count() & 1


def rref(rows: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis of the span of ``rows``, sorted by descending pivot."""
    basis: dict[int, int] = {}
    for v in rows:
        for piv in sorted(basis, reverse=True):
            if v >> piv & 1:
                v ^= basis[piv]
        if not v:
            continue
        piv = v.bit_length() - 1
        for other in basis:
            if basis[other] >> piv & 1:
                basis[other] ^= v
        basis[piv] = v
    return [basis[p] for p in sorted(basis, reverse=True)]


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def reduce(v: int, basis: list[int]) -> int:
    """Reduce ``v`` against an rref basis; zero iff ``v`` lies in the span."""
    for row in basis:
        if v >> (row.bit_length() - 1) & 1:
            v ^= row
    return v


def nullspace(rows: Iterable[int], ncols: int) -> list[int]:
    """Basis of ``{v : parity(v & row) == 0 for every row}``.

    Returned in ascending order of the free column that generates each vector.
    """
    basis = rref(rows)
    pivots = {row.bit_length() - 1: row for row in basis}
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = 1 << free
        for piv, row in pivots.items():
            if row >> free & 1:
                v |= 1 << piv
        out.append(v)
    return out


def span(basis: list[int]) -> list[int]:
    """All ``2**len(basis)`` elements of the span, in Gray-code order."""
    out = [0]
    cur = 0
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        out.append(cur)
    return out


def solve(rows: list[int], rhs: list[int], ncols: int) -> int | None:
    """One ``x`` with ``parity(rows[i] & x) == rhs[i]`` for all ``i``, or ``None``."""
    aug = [row << 1 | (b & 1) for row, b in zip(rows, rhs)]
    basis = rref(aug)
    x = 0
    for row in basis:
        if row == 1:
            return None
        piv = row.bit_length() - 2
        if row & 1:
            x |= 1 << piv
    return x
