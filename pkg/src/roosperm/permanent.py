"""Exact permanents of rectangular nonnegative matrices.

Two methods:

* brute force: the defining sum over every injection of columns into rows,
  O(N!/(N-n)!) leaves. Used as the test oracle.
* Ryser-type inclusion-exclusion over subsets of the *smaller* dimension.
  With A the wide n x N transpose and c^S the column sums of the rows in S,

      per(A) = sum_{S subset rows} (-1)^(n-|S|) e_n(c^S)

  where e_n is the n-th elementary symmetric polynomial of the N column sums.
  Subsets are visited in Gray-code order so c^S changes by one row per step.
  Cost O(2^n N n), exponential only in the target count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _backend
from .matrices import ThinMatrix, to_thin

DEFAULT_BRUTEFORCE_CAP = 10**8
DEFAULT_RYSER_CAP = 2**30


class PermanentInfeasible(RuntimeError):
    """The requested exact method exceeds its enumeration cap."""


@dataclass(frozen=True)
class PermanentValue:
    value: float
    method: str

    @property
    def log_value(self):
        return math.log(self.value) if self.value > 0 else -math.inf

    def to_dict(self):
        return {"value": self.value, "log_value": self.log_value, "method": self.method}


def _thin(Z):
    return Z if isinstance(Z, ThinMatrix) else to_thin(Z)


def permanent_bruteforce(Z, cap=DEFAULT_BRUTEFORCE_CAP):
    Z = _thin(Z)
    N, n = Z.shape
    count = math.perm(N, n)
    if count > cap:
        raise PermanentInfeasible(
            f"brute force needs {count} injections for a {N}x{n} matrix (cap {cap})"
        )
    return PermanentValue(float(_backend.kernels().bruteforce(Z.entries)), "bruteforce")


def _partitions(total, parts):
    parts = max(1, min(parts, total))
    edges = [total * k // parts for k in range(parts + 1)]
    return list(zip(edges[:-1], edges[1:]))


def permanent_ryser(Z, cap=DEFAULT_RYSER_CAP, compensated=False, workers=1):
    """Inclusion-exclusion permanent, exponential in the number of columns of ``Z``.

    ``workers`` splits the Gray-code sequence into that many contiguous
    ranges; partial sums are added in range order, so a fixed worker count
    always gives the same bits.
    """
    Z = _thin(Z)
    N, n = Z.shape
    if 2**n > cap:
        raise PermanentInfeasible(f"Ryser needs 2^{n} subsets (cap {cap})")
    if not Z.entries.any(axis=0).all():
        # a target with no nonzero option; skip the cancelling alternating sum
        return PermanentValue(0.0, "ryser")
    a, shift = _balanced_rows(Z.entries.T)
    kern = _backend.kernels()
    ranges = _partitions(2**n, workers)
    if len(ranges) == 1:
        parts = [kern.ryser_range(a, 0, 2**n, compensated)]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(pool.map(lambda r: kern.ryser_range(a, r[0], r[1], compensated), ranges))
    total = math.fsum(parts) if compensated else sum(parts)
    # inclusion-exclusion of nonnegative data is nonnegative; clip round-off
    return PermanentValue(float(np.ldexp(max(float(total), 0.0), shift)), "ryser")


def _balanced_rows(a):
    """Scale each row of the wide matrix by the power of two nearest its mean.

    The permanent is linear in each row, so the scales come back out as one
    exact exponent shift. Rows of very different magnitude inflate the
    cancellation in the alternating sum; balancing them keeps the result
    stable under per-row rescaling. Powers of two add no rounding.
    """
    _, exps = np.frexp(a.mean(axis=1))
    return np.ascontiguousarray(np.ldexp(a, -exps[:, None])), int(exps.sum())


def _elementary_top(c, n):
    e = [1.0] + [0.0] * n
    for j, x in enumerate(c):
        for m in range(min(j + 1, n), 0, -1):
            e[m] += x * e[m - 1]
    return e[n]


def permanent_ryser_naive(Z):
    """Same formula, recomputing every column sum from scratch. For differential tests."""
    Z = _thin(Z)
    a = Z.entries.T
    n = a.shape[0]
    total = 0.0
    for size in range(1, n + 1):
        sign = -1.0 if (n - size) % 2 else 1.0
        for S in combinations(range(n), size):
            total += sign * _elementary_top(a[list(S)].sum(axis=0).tolist(), n)
    return PermanentValue(max(total, 0.0), "ryser")


def permanent_exact(Z, bruteforce_cap=DEFAULT_BRUTEFORCE_CAP, ryser_cap=DEFAULT_RYSER_CAP,
                    compensated=False, workers=1):
    """Pick the cheaper exact method whose cap allows it."""
    Z = _thin(Z)
    N, n = Z.shape
    brute_ops = math.perm(N, n)
    ryser_ops = 2**n * N * n
    brute_ok = brute_ops <= bruteforce_cap
    ryser_ok = 2**n <= ryser_cap
    if not (brute_ok or ryser_ok):
        raise PermanentInfeasible(
            f"exact permanent infeasible for {N}x{n}: {brute_ops} injections > {bruteforce_cap} "
            f"and 2^{n} subsets > {ryser_cap}"
        )
    if brute_ok and (not ryser_ok or brute_ops <= ryser_ops):
        return permanent_bruteforce(Z, cap=bruteforce_cap)
    return permanent_ryser(Z, cap=ryser_cap, compensated=compensated, workers=workers)
