"""Exact rational row reduction (fixed left-to-right pivot order)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of the points (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in points[1:]])


def nullspace_vector(rows: Sequence[Sequence]) -> list[Fraction] | None:
    """A nonzero kernel vector when the kernel is exactly one-dimensional, else None."""
    R, piv = rref(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in piv]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * n
    v[f] = Fraction(1)
    for row, c in zip(R, piv):
        v[c] = -row[f]
    return v
