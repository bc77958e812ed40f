"""Fraction-free integer linear algebra.

Python integers are arbitrary precision, so the Bareiss recurrence below never
overflows; intermediate values stay bounded by Hadamard's inequality anyway.
"""

from __future__ import annotations

from typing import Sequence


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix.

    Uses Bareiss' fraction-free Gaussian elimination with row pivoting; every
    division in the recurrence is exact.

    >>> bareiss_determinant([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    2
    """
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def integer_quadratic_form(matrix: Sequence[Sequence[int]], vector: Sequence[int]) -> int:
    """Exact value of ``v^T M v`` for integer ``M`` and ``v``."""
    v = [int(x) for x in vector]
    total = 0
    for vi, row in zip(v, matrix):
        if vi:
            total += vi * sum(int(m) * vj for m, vj in zip(row, v) if vj)
    return total
