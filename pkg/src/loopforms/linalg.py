"""Small dense matrices of rational functions, as tuples of row tuples."""

from __future__ import annotations

from typing import Sequence

from .errors import InputError, SingularMatrixError
from .poly import PolyRing
from .ratfun import RatFun

Matrix = tuple[tuple[RatFun, ...], ...]


def as_matrix(rows: Sequence[Sequence[RatFun]]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    n = len(m)
    if any(len(r) != n for r in m):
        raise InputError("matrix must be square")
    return m


def identity(ring: PolyRing, n: int) -> Matrix:
    one = RatFun.const(ring, 1)
    zero = RatFun.const(ring, 0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _dot(xs, ys) -> RatFun:
    acc = None
    for x, y in zip(xs, ys):
        if x.is_zero() or y.is_zero():
            continue
        p = x * y
        acc = p if acc is None else acc + p
    if acc is None:
        return RatFun.const(xs[0].ring, 0)
    return acc


def is_zero_matrix(m: Matrix) -> bool:
    return all(x.is_zero() for row in m for x in row)


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def matrix_inverse(m: Sequence[Sequence[RatFun]]) -> Matrix:
    """Inverse by Gauss-Jordan elimination over the rational function field."""
    m = as_matrix(m)
    n = len(m)
    if n == 0:
        return ()
    ring = m[0][0].ring
    one = RatFun.const(ring, 1)
    zero = RatFun.const(ring, 0)
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            x = a[r][col]
            if not x.is_zero():
                size = len(x.num.terms) + len(x.den.terms)
                if best is None or size < best:
                    pivot, best = r, size
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv if not x.is_zero() else x for x in a[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y if not y.is_zero() else x for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def determinant(m: Sequence[Sequence[RatFun]]) -> RatFun:
    m = as_matrix(m)
    n = len(m)
    ring = m[0][0].ring
    a = [list(row) for row in m]
    det = RatFun.const(ring, 1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            return RatFun.const(ring, 0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = a[r][col]
            if f.is_zero():
                continue
            f = f * inv
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
