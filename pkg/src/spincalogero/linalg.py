"""Exact Gaussian elimination over cyclotomic fields."""

from __future__ import annotations

from .scalars import Cyclotomic, as_scalar


def row_reduce(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    a = [[as_scalar(v) for v in row] for row in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def solve(matrix, rhs):
    """One solution x of matrix @ x = rhs, or None when inconsistent."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(matrix[i]) + [rhs[i]] for i in range(nrows)]
    red, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Cyclotomic.zero() for _ in range(ncols)]
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return x
