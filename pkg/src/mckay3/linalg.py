"""Exact integer/rational matrix routines (fraction-free elimination)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrix

Matrix = list[list[Fraction]]


def _integer_rows(A: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Clear denominators: returns (integer matrix, common denominator)."""
    den = 1
    for row in A:
        for x in row:
            den = math.lcm(den, Fraction(x).denominator)
    return [[int(Fraction(x) * den) for x in row] for row in A], den


def bareiss_inverse(A: Sequence[Sequence]) -> tuple[Fraction, Matrix]:
    """Return ``(det(A), A^-1)`` for a square rational matrix.

    Fraction-free Gauss-Jordan on ``[A | I]``: every intermediate entry is an
    integer minor, so nothing is rounded, and the final pivot is the
    determinant (up to the row-swap sign).
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1), []
    M, den = _integer_rows(A)
    M = [row + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    sign = 1
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {k})")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(n):
            if i == k:
                continue
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(2 * n):
                row_i[j] = (pk * row_i[j] - mik * row_k[j]) // prev
        prev = pk
    d = M[0][0]
    det_int = sign * d
    inv = [[Fraction(M[i][n + j] * den, d) for j in range(n)] for i in range(n)]
    return Fraction(det_int, den**n), inv


def determinant(A: Sequence[Sequence]) -> Fraction:
    try:
        return bareiss_inverse(A)[0]
    except SingularMatrix:
        return Fraction(0)


def exact_rank(A: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free row reduction."""
    if not A:
        return 0
    M, _ = _integer_rows(A)
    rows, cols = len(M), len(M[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pk = M[rank][c]
        for i in range(rank + 1, rows):
            mic = M[i][c]
            M[i] = [(pk * a - mic * b) // prev for a, b in zip(M[i], M[rank])]
        prev = pk
        rank += 1
        if rank == rows:
            break
    return rank


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    return [
        [sum((Fraction(A[i][k]) * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*A)]
