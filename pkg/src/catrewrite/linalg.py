"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of Fractions.  Nothing here ever touches floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], inner: int, cols: int) -> Matrix:
    """``a`` is (r x inner), ``b`` is (inner x cols)."""
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        acc = out[i]
        for k in range(inner):
            aik = row[k]
            if not aik:
                continue
            brow = b[k]
            for j in range(cols):
                if brow[j]:
                    acc[j] += aik * brow[j]
    return out


def rref(m: Sequence[Sequence[Fraction]], cols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.  Input is not modified."""
    a = [list(row) for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[: len(pivots)], pivots


def rank(m: Sequence[Sequence[Fraction]], cols: int) -> int:
    return len(rref(m, cols)[1])


def nullspace(m: Sequence[Sequence[Fraction]], cols: int) -> list[list[Fraction]]:
    """Basis of {x : m x = 0}, one vector per free column (1 at that column)."""
    return [v for _, v in nullspace_by_free_column(m, cols)]


def nullspace_by_free_column(m: Sequence[Sequence[Fraction]], cols: int) -> list[tuple[int, list[Fraction]]]:
    reduced, pivots = rref(m, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[free]
        basis.append((free, v))
    return basis


def solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction], cols: int) -> list[Fraction] | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    reduced, pivots = rref(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[cols]
    return x
