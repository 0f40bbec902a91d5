"""Exact dense linear algebra over Q or Q(t).

All routines take lists of rows whose entries support +, -, *, / and truthy
zero-testing (Fraction and RatFunc both do).  Elimination picks the
lowest-complexity nonzero pivot in each column, which over Q(t) means the
lowest-degree entry and keeps coefficient growth in check.
"""

from __future__ import annotations

from .scalars import exact_div, scalar_complexity


def rref(rows, ncols):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns); zero rows are dropped.  Input rows
    are not modified.
    """
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        best = None
        for i in range(rank, len(m)):
            if m[i][col]:
                score = scalar_complexity(m[i][col])
                if best is None or score < best[0]:
                    best = (score, i)
        if best is None:
            continue
        i = best[1]
        m[rank], m[i] = m[i], m[rank]
        piv = m[rank][col]
        if piv != 1:
            inv_row = m[rank]
            for j in range(col, ncols):
                if inv_row[j]:
                    inv_row[j] = exact_div(inv_row[j], piv)
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                ri, rp = m[i], m[rank]
                for j in range(col, ncols):
                    if rp[j]:
                        ri[j] = ri[j] - f * rp[j]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    return m[:rank], pivots


def rank(rows, ncols) -> int:
    return len(rref(rows, ncols)[0])


def nullspace(rows, ncols):
    """Basis of {x : A x = 0}, echelonised with free variables set to 1.

    Basis vectors are ordered by their free-variable column index.
    """
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for r, pc in zip(red, pivots):
            if r[free]:
                vec[pc] = -r[free]
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols):
    """One solution x of A x = b, or None if inconsistent.

    Returns (particular_solution, nullspace_basis); the solution is the one
    with all free variables zero.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    null = nullspace([r[:ncols] for r in red], ncols)
    return x, null


def in_span(basis_rred, pivots, vec):
    """Membership test against a precomputed rref basis; returns residual or None.

    The residual is vec reduced modulo the span (zeros at pivot columns);
    None signals vec lies in the span.
    """
    res = list(vec)
    for r, pc in zip(basis_rred, pivots):
        if res[pc]:
            f = res[pc]
            for j in range(len(res)):
                if r[j]:
                    res[j] = res[j] - f * r[j]
    return None if not any(res) else res


def det(rows):
    """Determinant by fraction-free-ish Gaussian elimination (exact division)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    acc = 1
    for col in range(n):
        piv_i = None
        best = None
        for i in range(col, n):
            if m[i][col]:
                score = scalar_complexity(m[i][col])
                if best is None or score < best:
                    best, piv_i = score, i
        if piv_i is None:
            return 0 * acc
        if piv_i != col:
            m[col], m[piv_i] = m[piv_i], m[col]
            sign = -sign
        piv = m[col][col]
        acc = acc * piv
        for i in range(col + 1, n):
            if m[i][col]:
                f = exact_div(m[i][col], piv)
                for j in range(col, n):
                    if m[col][j]:
                        m[i][j] = m[i][j] - f * m[col][j]
    return sign * acc
