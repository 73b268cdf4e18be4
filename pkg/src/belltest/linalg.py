"""Small exact linear-algebra kernels over Z and Q."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence


def integerize(values: Sequence) -> list[int]:
    """Positive rational multiple of ``values`` with integer entries of gcd 1.

    The zero vector is returned unchanged (as ints).
    """
    fracs = [Fraction(x) for x in values]
    den = reduce(lcm, (f.denominator for f in fracs), 1)
    ints = [int(f * den) for f in fracs]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def primitive(values: Sequence[int]) -> list[int]:
    g = reduce(gcd, values, 0)
    if g > 1:
        return [x // g for x in values]
    return list(values)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v) if x and y)


def rref(rows: Sequence[Sequence], ncols: int, column_order: Sequence[int] | None = None):
    """Reduced row echelon form over Q.

    ``column_order`` sets the order in which columns are tried as pivots.
    Returns ``(rows, pivots)``: the nonzero reduced rows as Fraction lists and
    the pivot column of each row.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    order = list(range(ncols)) if column_order is None else list(column_order)
    pivots = []
    r = 0
    for col in order:
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][col]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        prow = m[r]
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(len(m)):
            if i != r:
                f = m[i][col]
                if f:
                    row = m[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column (ascending)."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[free]
        basis.append(x)
    return basis


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        p = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        prow = m[rank]
        pv = prow[col]
        for i in range(rank + 1, len(m)):
            row = m[i]
            f = row[col]
            if f:
                m[i] = [(pv * x - f * y) // prev for x, y in zip(row, prow)]
            elif pv != prev:
                m[i] = [pv * x // prev for x in row]
        prev = pv
        rank += 1
        if rank == len(m):
            break
    return rank


def independent_rows(rows: Sequence[Sequence], ncols: int, limit: int | None = None) -> list[int]:
    """Indices of a greedy maximal independent subset of ``rows`` (first come first kept)."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for pc, b in basis:
            f = v[pc]
            if f:
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is None:
            continue
        pv = v[pc]
        v = [x / pv for x in v]
        basis.append((pc, v))
        chosen.append(idx)
        if limit is not None and len(chosen) == limit:
            break
    return chosen


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve a consistent linear system exactly; ``None`` when inconsistent.

    Free variables are set to zero.
    """
    n = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, n + 1, column_order=range(n + 1))
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug, 2 * n, column_order=range(n))
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]
