"""Exact integer and rational matrix routines (no floating point).

Matrices are lists or tuples of rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Iterator, Sequence

IntMatrix = Sequence[Sequence[int]]


def bareiss_det(M: IntMatrix) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pivot = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * pivot - A[i][k] * A[k][j]) // prev
        prev = pivot
    return sign * A[n - 1][n - 1]


def rational_inverse(M: IntMatrix) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        p = next((i for i in range(col, n) if A[i][col]), None)
        if p is None:
            raise ValueError("matrix is singular")
        A[col], A[p] = A[p], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [row[n:] for row in A]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*A)]


def quad(v: Sequence, M: Sequence[Sequence], w: Sequence | None = None):
    """``v M w^T`` (``w`` defaults to ``v``)."""
    if w is None:
        w = v
    return sum(v[i] * sum(M[i][j] * w[j] for j in range(len(w)) if w[j]) for i in range(len(v)) if v[i])


def hnf(rows: IntMatrix, ncols: int) -> list[list[int]]:
    """Row Hermite normal form: positive pivots, entries above each pivot reduced into [0, pivot)."""
    A = [list(r) for r in rows if any(r)]
    r = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[p] = A[p], A[r]
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            piv = A[r][col]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    f = A[i][col] // piv
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    clean = clean and A[i][col] == 0
            if clean:
                break
        if r < len(A) and A[r][col] > 0 and all(A[i][col] == 0 for i in range(r + 1, len(A))):
            piv = A[r][col]
            for i in range(r):
                f = A[i][col] // piv
                if f:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
            r += 1
        A = A[:r] + [row for row in A[r:] if any(row)]
    return A[:r]


def ldl(M: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``x M x^T = sum_i d_i (x_i + sum_{j>i} mu[i][j] x_j)^2`` for symmetric M.

    Raises ValueError if some ``d_i <= 0`` (M not positive definite).
    """
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    d: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = A[i][i]
        if di <= 0:
            raise ValueError(f"not positive definite (pivot {i} is {di})")
        d.append(di)
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / di
        for j in range(i + 1, n):
            if A[i][j]:
                for l in range(j, n):
                    A[j][l] -= A[i][j] * mu[i][l]
                    if l != j:
                        A[l][j] = A[j][l]
    return d, mu


def is_positive_definite(M: Sequence[Sequence]) -> bool:
    try:
        ldl(M)
    except ValueError:
        return False
    return True


def short_vectors(M: Sequence[Sequence], bound, shift: Sequence | None = None) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Fincke-Pohst: all integer x with ``(x+s) M (x+s)^T <= bound``, with their norms.

    Coordinates are fixed from the last one down; each range comes from an
    integer square-root bound and is then filtered exactly.
    """
    n = len(M)
    d, mu = ldl(M)
    bound = Fraction(bound)
    s = [Fraction(v) for v in shift] if shift is not None else [Fraction(0)] * n
    x = [0] * n
    # y_j = x_j + s_j for already-fixed coordinates
    y = [Fraction(0)] * n

    def rec(i: int, remaining: Fraction):
        c = s[i] + sum(mu[i][j] * y[j] for j in range(i + 1, n) if mu[i][j] and y[j])
        r2 = remaining / d[i]
        rad = isqrt(floor(r2)) + 1
        lo, hi = floor(-c) - rad, ceil(-c) + rad
        for xi in range(lo, hi + 1):
            t = xi + c
            val = d[i] * t * t
            if val > remaining:
                continue
            x[i] = xi
            y[i] = xi + s[i]
            if i == 0:
                yield tuple(x), bound - remaining + val
            else:
                yield from rec(i - 1, remaining - val)
        y[i] = Fraction(0)

    if n == 0:
        yield (), Fraction(0)
        return
    yield from rec(n - 1, bound)
