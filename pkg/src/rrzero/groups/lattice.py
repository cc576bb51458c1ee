"""Exact integer linear algebra for small lattices.

Only what the group layer needs: determinants, integer kernels and a
canonical (Hermite) basis for sublattices of Z^r.
"""

from __future__ import annotations

from typing import Sequence

import sympy

IntMatrix = tuple[tuple[int, ...], ...]


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and len({len(row) for row in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a:
        return a
    inner = len(b)
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols))
        for i in range(len(a))
    )


def matvec(a: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(a: IntMatrix) -> int:
    if not a:
        return 1
    return int(sympy.Matrix(a).det())


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Z-basis of {v in Z^ncols : A v = 0}, in Hermite normal form.

    Column-style Euclidean reduction: A U = [H | 0] with U unimodular, so the
    trailing columns of U span the kernel over the integers.
    """
    a = [list(map(int, row)) for row in rows]
    u = [list(row) for row in identity(ncols)]

    def col_sub(p: int, j: int, q: int) -> None:
        for row in a:
            row[p] -= q * row[j]
        for row in u:
            row[p] -= q * row[j]

    def col_swap(p: int, j: int) -> None:
        for row in a:
            row[p], row[j] = row[j], row[p]
        for row in u:
            row[p], row[j] = row[j], row[p]

    p = 0
    for i in range(len(a)):
        if p >= ncols:
            break
        for j in range(p + 1, ncols):
            while a[i][j] != 0:
                col_sub(p, j, a[i][p] // a[i][j])
                col_swap(p, j)
        if a[i][p] != 0:
            p += 1
    basis = [tuple(u[r][c] for r in range(ncols)) for c in range(p, ncols)]
    return hermite_rows(basis)


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into [0, pivot).
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = rest
        col += 1
    for i, piv in enumerate(out):
        c = next(k for k, x in enumerate(piv) if x != 0)
        for j in range(i):
            q = out[j][c] // piv[c]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], piv)]
    return [tuple(r) for r in out]
