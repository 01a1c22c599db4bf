# cython: boundscheck=False, wraparound=False
"""Fraction-free row elimination, compiled kernel.

Behavioural twin of ``_elim_py.bareiss``: same pivot rule, same output.
Entries are arbitrary-precision Python ints; the win over the pure kernel
is the typed inner loop, not the arithmetic.
"""

from math import gcd

KERNEL_NAME = "cython"


def bareiss(rows, ncols_arg):
    cdef Py_ssize_t ncols = ncols_arg
    cdef list mat = [list(r) for r in rows]
    cdef Py_ssize_t nrows = len(mat)
    cdef list pivot_cols = []
    cdef Py_ssize_t k = 0, col = 0, i, j, best, nnz, best_nnz
    cdef list row_i, piv_row
    prev = 1
    while k < nrows and col < ncols:
        best = -1
        best_nnz = -1
        for i in range(k, nrows):
            row_i = <list>mat[i]
            if row_i[col] != 0:
                nnz = 0
                for j in range(col, ncols):
                    if row_i[j] != 0:
                        nnz += 1
                if best < 0 or nnz < best_nnz:
                    best = i
                    best_nnz = nnz
        if best < 0:
            col += 1
            continue
        if best != k:
            mat[k], mat[best] = mat[best], mat[k]
        piv_row = <list>mat[k]
        piv = piv_row[col]
        for i in range(k + 1, nrows):
            row_i = <list>mat[i]
            f = row_i[col]
            for j in range(col + 1, ncols):
                row_i[j] = (piv * row_i[j] - f * piv_row[j]) // prev
            row_i[col] = 0
        pivot_cols.append(col)
        prev = piv
        k += 1
        col += 1
    echelon = []
    for i in range(k):
        row_i = <list>mat[i]
        g = 0
        for x in row_i:
            g = gcd(g, x)
        if g == 0:
            continue
        lead = row_i[<Py_ssize_t>pivot_cols[i]]
        if lead < 0:
            g = -g
        echelon.append([x // g for x in row_i])
    return echelon, pivot_cols
