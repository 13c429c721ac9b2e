"""Gaussian elimination over a FieldSpec (rows of FieldElem)."""

from __future__ import annotations


def rref(rows, spec):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                t = rows[i][c]
                rows[i] = [x - t * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows, spec) -> int:
    return len(rref(rows, spec)[1])


def nullspace(rows, spec, ncols=None):
    """Basis of {v : rows . v = 0}, canonical (from the RREF free columns)."""
    if not rows:
        n = ncols
        return [[spec.one() if i == j else spec.zero() for i in range(n)] for j in range(n)]
    ncols = len(rows[0])
    red, pivots = rref(rows, spec)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [spec.zero()] * ncols
        v[f] = spec.one()
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis
