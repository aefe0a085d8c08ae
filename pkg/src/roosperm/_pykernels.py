"""Pure-Python versions of the hot loops, used when the extension is absent.

Same signatures and semantics as the compiled ``_kernels`` module, so the
two can be differentially tested and benchmarked against each other.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

NAME = "python"

RESYNC_MASK = 1023


def _column_sums(rows, gray):
    N = len(rows[0])
    c = [0.0] * N
    size = 0
    for i, row in enumerate(rows):
        if (gray >> i) & 1:
            size += 1
            for j in range(N):
                c[j] += row[j]
    return c, size


def ryser_range(a, start, stop, compensated=False):
    """Signed inclusion-exclusion terms for Gray-code indices ``[start, stop)``."""
    rows = np.asarray(a, dtype=np.float64).tolist()
    n = len(rows)
    N = len(rows[0])
    gray = start ^ (start >> 1)
    c, size = _column_sums(rows, gray)
    total = 0.0
    comp = 0.0
    for k in range(start, stop):
        if k > start:
            bit = (k & -k).bit_length() - 1
            gray ^= 1 << bit
            if (k & RESYNC_MASK) == 0:
                c, size = _column_sums(rows, gray)
            elif (gray >> bit) & 1:
                size += 1
                row = rows[bit]
                for j in range(N):
                    c[j] += row[j]
            else:
                size -= 1
                row = rows[bit]
                for j in range(N):
                    c[j] -= row[j]
        if size == 0:
            continue
        e = [1.0] + [0.0] * n
        for j in range(N):
            x = c[j]
            for m in range(min(j + 1, n), 0, -1):
                e[m] += x * e[m - 1]
        term = e[n] if (n - size) % 2 == 0 else -e[n]
        if compensated:
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        else:
            total += term
    return total


def bruteforce(z):
    """Sum over all injections column -> row of the entry products (thin N x n)."""
    cols = np.asarray(z, dtype=np.float64).T.tolist()
    n = len(cols)
    N = len(cols[0]) if n else 0
    used = [False] * N

    def walk(col):
        if col == n:
            return 1.0
        total = 0.0
        column = cols[col]
        for j in range(N):
            v = column[j]
            if used[j] or v == 0.0:
                continue
            used[j] = True
            total += v * walk(col + 1)
            used[j] = False
        return total

    return walk(0)


def kappa_argmax(sq, nu, chunk=4096):
    """Row/column ``nu``-subsets whose removal leaves the largest square-sum.

    Vectorised over all column subsets and a chunk of row subsets at a time;
    ties go to the first pair in lexicographic (rows outer, columns inner) order.
    """
    sq = np.asarray(sq, dtype=np.float64)
    N, n = sq.shape
    rowsq = sq.sum(axis=1)
    colsq = sq.sum(axis=0)
    col_sets = np.array(list(combinations(range(n), nu)), dtype=np.intp)
    col_ind = np.zeros((len(col_sets), n))
    np.put_along_axis(col_ind, col_sets, 1.0, axis=1)
    col_part = colsq[col_sets].sum(axis=1)

    best = np.inf
    best_pair = None
    row_iter = combinations(range(N), nu)
    while True:
        block = np.array(list(_take(row_iter, chunk)), dtype=np.intp)
        if block.size == 0:
            break
        row_ind = np.zeros((len(block), N))
        np.put_along_axis(row_ind, block, 1.0, axis=1)
        cross = (row_ind @ sq) @ col_ind.T
        removed = rowsq[block].sum(axis=1)[:, None] + col_part[None, :] - cross
        flat = int(np.argmin(removed))
        i, k = divmod(flat, removed.shape[1])
        if removed[i, k] < best:
            best = removed[i, k]
            best_pair = (tuple(int(x) for x in block[i]), tuple(int(x) for x in col_sets[k]))
    return best_pair


def _take(it, count):
    for _, item in zip(range(count), it):
        yield item
