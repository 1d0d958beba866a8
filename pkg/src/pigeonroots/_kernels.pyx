# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled inner loops for the collision searches.

Signatures mirror ``pigeonroots._kernels_py`` exactly; ``pigeonroots.kernels``
picks whichever is importable.
"""
from libc.math cimport floor, fabs
from libcpp.unordered_map cimport unordered_map
from libc.stdint cimport int64_t

import numpy as np
cimport numpy as cnp

cnp.import_array()


def first_collision(
    const double[:, ::1] lo_tab,
    const double[:, ::1] hi_tab,
    int nlo,
    int64_t total,
    double inv_h,
    int64_t L,
    double guard,
    exact_key,
):
    """Scan selection indices ``0..total-1`` and return the first repeated cell.

    Returns ``(t_prev, t, enumerated, occupied)`` or ``(-1, -1, enumerated,
    occupied)`` when ``total`` indices produce no repeat.
    """
    cdef int m = lo_tab.shape[1]
    cdef int64_t lo_mask = (<int64_t>1 << nlo) - 1
    cdef unordered_map[int64_t, int64_t] seen
    cdef int64_t t, key, mult, c, lo_i, hi_i
    cdef double v, q, r, fq, tol
    cdef int j
    cdef bint ambiguous
    seen.reserve(<size_t>min(total, <int64_t>(1 << 22)))
    for t in range(total):
        lo_i = t & lo_mask
        hi_i = t >> nlo
        key = 0
        mult = 1
        ambiguous = False
        for j in range(m):
            v = lo_tab[lo_i, j] + hi_tab[hi_i, j]
            q = v * inv_h
            fq = floor(q)
            r = q - fq
            tol = guard * (1.0 + q)
            if r < tol or 1.0 - r < tol:
                ambiguous = True
                break
            c = <int64_t>fq
            if c < 0:
                c = 0
            elif c >= L:
                c = L - 1
            key += c * mult
            mult *= L
        if ambiguous:
            key = exact_key(t)
        if seen.count(key):
            return (seen[key], t, t + 1, seen.size())
        seen[key] = t
    return (-1, -1, total, seen.size())


def window_sweep(
    const double[:, ::1] A,
    const double[:, ::1] B,
    double h,
    double slack,
    int64_t skip_a,
    int64_t skip_b,
    int64_t budget,
    verify,
):
    """Two-pointer sweep over ``A`` and ``B`` sorted by column 0.

    Candidate pairs with every coordinate gap below ``h + slack`` are handed
    to ``verify(i, j)`` for the exact test. Returns ``(i, j, checks)`` with
    ``i = j = -1`` when nothing verified within ``budget`` pair checks.
    """
    cdef Py_ssize_t nA = A.shape[0], nB = B.shape[0]
    cdef int m = A.shape[1]
    cdef Py_ssize_t i, jj, lo = 0
    cdef int64_t checks = 0
    cdef double a0, lim = h + slack
    cdef int c
    cdef bint close
    if budget <= 0:
        return (-1, -1, 0)
    for i in range(nA):
        a0 = A[i, 0]
        while lo < nB and B[lo, 0] <= a0 - lim:
            lo += 1
        jj = lo
        while jj < nB and B[jj, 0] < a0 + lim:
            checks += 1
            if not (i == skip_a and jj == skip_b):
                close = True
                for c in range(1, m):
                    if fabs(A[i, c] - B[jj, c]) >= lim:
                        close = False
                        break
                if close and verify(i, jj):
                    return (i, jj, checks)
            if checks >= budget:
                return (-1, -1, checks)
            jj += 1
    return (-1, -1, checks)
