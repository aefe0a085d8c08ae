# cython: language_level=3
"""Compiled hot loops. Signatures mirror :mod:`roosperm._pykernels`."""

import numpy as np

from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

# re-derive the column sums from scratch this often to stop add/subtract drift
cdef enum:
    RESYNC_MASK = 1023

NAME = "compiled"


cdef void _column_sums(const double[:, ::1] a, unsigned long long gray,
                       double *c, int *size) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], N = a.shape[1], i, j
    size[0] = 0
    for j in range(N):
        c[j] = 0.0
    for i in range(n):
        if (gray >> i) & 1:
            size[0] += 1
            for j in range(N):
                c[j] += a[i, j]


cdef double _ryser_range(const double[:, ::1] a, unsigned long long start,
                         unsigned long long stop, bint compensated) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], N = a.shape[1], j, m, top
    cdef double *c = <double *> malloc(N * sizeof(double))
    cdef double *e = <double *> malloc((n + 1) * sizeof(double))
    cdef unsigned long long k, gray
    cdef int size = 0, bit
    cdef double total = 0.0, comp = 0.0, term, x, y, t

    gray = start ^ (start >> 1)
    _column_sums(a, gray, c, &size)
    k = start
    while k < stop:
        if k > start:
            bit = __builtin_ctzll(k)
            gray ^= (<unsigned long long> 1) << bit
            if (k & RESYNC_MASK) == 0:
                _column_sums(a, gray, c, &size)
            elif (gray >> bit) & 1:
                size += 1
                for j in range(N):
                    c[j] += a[bit, j]
            else:
                size -= 1
                for j in range(N):
                    c[j] -= a[bit, j]
        if size > 0:
            e[0] = 1.0
            for m in range(1, n + 1):
                e[m] = 0.0
            for j in range(N):
                x = c[j]
                top = j + 1 if j + 1 < n else n
                for m in range(top, 0, -1):
                    e[m] += x * e[m - 1]
            term = e[n] if ((n - size) & 1) == 0 else -e[n]
            if compensated:
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            else:
                total += term
        k += 1
    free(c)
    free(e)
    return total


def ryser_range(a, start, stop, bint compensated=False):
    """Signed inclusion-exclusion terms for Gray-code indices ``[start, stop)``.

    ``a`` is the wide (n x N, n <= N) matrix; row subsets are the summation index.
    """
    cdef const double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef unsigned long long s = start, t = stop
    cdef double out
    with nogil:
        out = _ryser_range(av, s, t, compensated)
    return out


cdef double _brute(const double[:, ::1] z, Py_ssize_t col, char *used) noexcept nogil:
    cdef Py_ssize_t N = z.shape[0], n = z.shape[1], j
    cdef double total = 0.0, v
    if col == n:
        return 1.0
    for j in range(N):
        if used[j]:
            continue
        v = z[j, col]
        if v == 0.0:
            continue
        used[j] = 1
        total += v * _brute(z, col + 1, used)
        used[j] = 0
    return total


def bruteforce(z):
    """Sum over all injections column -> row of the entry products (thin N x n)."""
    cdef const double[:, ::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t N = zv.shape[0], j
    cdef char *used = <char *> malloc(N)
    cdef double out
    for j in range(N):
        used[j] = 0
    with nogil:
        out = _brute(zv, 0, used)
    free(used)
    return out


cdef bint _next_combination(Py_ssize_t *idx, Py_ssize_t k, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i = k - 1, j
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return True


def kappa_argmax(sq, int nu):
    """Row/column ``nu``-subsets whose removal leaves the largest square-sum.

    ``sq`` holds the squared entries. For every row subset J the column
    square-sums are corrected for the rows of J once, so each (J, R) pair
    costs ``nu`` additions. Ties go to the first pair in lexicographic
    (rows outer, columns inner) order.
    """
    cdef const double[:, ::1] s = np.ascontiguousarray(sq, dtype=np.float64)
    cdef Py_ssize_t N = s.shape[0], n = s.shape[1], a, b, r
    cdef double[::1] rowsq = np.ascontiguousarray(np.sum(sq, axis=1), dtype=np.float64)
    cdef double[::1] colsq = np.ascontiguousarray(np.sum(sq, axis=0), dtype=np.float64)
    cdef double[::1] g = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] J = np.arange(nu, dtype=np.intp)
    cdef Py_ssize_t[::1] R = np.arange(nu, dtype=np.intp)
    cdef Py_ssize_t[::1] bestJ = np.arange(nu, dtype=np.intp)
    cdef Py_ssize_t[::1] bestR = np.arange(nu, dtype=np.intp)
    cdef double rowpart, removed, best = np.inf
    cdef bint more_rows = True, more_cols
    with nogil:
        while more_rows:
            rowpart = 0.0
            for a in range(nu):
                rowpart += rowsq[J[a]]
            # column square-sums minus the part already removed with the rows of J
            for r in range(n):
                g[r] = colsq[r]
                for a in range(nu):
                    g[r] -= s[J[a], r]
            for b in range(nu):
                R[b] = b
            more_cols = True
            while more_cols:
                removed = rowpart
                for b in range(nu):
                    removed += g[R[b]]
                if removed < best:
                    best = removed
                    for a in range(nu):
                        bestJ[a] = J[a]
                        bestR[a] = R[a]
                more_cols = _next_combination(&R[0], nu, n)
            more_rows = _next_combination(&J[0], nu, N)
    return tuple(int(x) for x in bestJ), tuple(int(x) for x in bestR)
