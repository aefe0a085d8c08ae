"""First- and second-order Roos approximations of rectangular permanents.

Notation follows the thin-matrix convention: ``Z`` is N x n with N >= n,
``zt`` the column means, ``y[u, v, r] = z[u, r] - z[v, r]`` the row
differences. Error bounds are only produced for n >= 5; smaller n returns
the estimate with the half-width marked unavailable, except where the
estimate is provably exact (n = 1 first order, n <= 2 second order).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import _backend
from .matrices import ThinMatrix, to_thin

MIN_BOUND_COLS = 5
ORDERS = (2, 3, 4)


def _thin(Z):
    return Z if isinstance(Z, ThinMatrix) else to_thin(Z)


# ------------------------------------------------------------ scalar pieces


def falling_factorial_ratio(N, n):
    """N!/(N-n)! as a float product N (N-1) ... (N-n+1)."""
    if not N >= n >= 0:
        raise ValueError(f"need N >= n >= 0, got N={N}, n={n}")
    out = 1.0
    for k in range(N - n + 1, N + 1):
        out *= k
    return out


def log_falling_factorial_ratio(N, n):
    if not N >= n >= 0:
        raise ValueError(f"need N >= n >= 0, got N={N}, n={n}")
    return math.lgamma(N + 1) - math.lgamma(N - n + 1)


def alpha(N, n, d):
    """(N-d)!/N! * sqrt((n-d)!/n!), built from reciprocal products."""
    if n < d:
        return None
    return (1.0 / falling_factorial_ratio(N, d)) * math.sqrt(1.0 / falling_factorial_ratio(n, d))


def eval_f(d, n, x1, x2):
    """Power sums f_2, f_3, f_4 at (x1, x2); 0 ** 0 is 1 and an empty range gives 0."""
    total = 0.0
    for k in range(d, n + 1):
        if d == 2:
            coef = k - 1
        elif d == 3:
            coef = (n + k - 2) * (n - k + 1)
        elif d == 4:
            coef = (k - 3) * (n + k - 2) * (n - k + 1)
        else:
            raise ValueError(f"d must be 2, 3 or 4, got {d}")
        total += coef * x1 ** (n - k) * x2 ** (k - d)
    return total


# ------------------------------------------------------------ column-mean terms


def column_means(Z):
    return _thin(Z).entries.mean(axis=0)


def product_except(zt, skip):
    """Product of column means over all columns not in ``skip`` (empty product is 1)."""
    keep = np.ones(len(zt), dtype=bool)
    keep[list(skip)] = False
    return float(np.prod(zt[keep]))


def _centred_cross(z):
    """sum_j (z_jr - zt_r)(z_js - zt_s), via (1/N) sum_{j<k} y_jk;r y_jk;s.

    The row-difference form is exactly zero for identical rows and does not
    cancel against a rounded mean.
    """
    iu, iv = np.triu_indices(z.shape[0], 1)
    y = z[iu] - z[iv]
    return (y.T @ y) / z.shape[0]


def p_second(Z, zt=None):
    """Sum over column pairs R of prod(zt outside R) * sum_j prod_{r in R}(z_jr - zt_r)."""
    z = _thin(Z).entries
    zt = z.mean(axis=0) if zt is None else zt
    n = z.shape[1]
    if n < 2:
        return 0.0
    cov = _centred_cross(z)
    total = 0.0
    for r, s in combinations(range(n), 2):
        total += product_except(zt, (r, s)) * cov[r, s]
    return float(total)


def _p_second_relative(z, zt):
    """p2 / p1 without forming p1; requires every column mean to be positive."""
    cov = _centred_cross(z) / zt[:, None] / zt[None, :]
    iu = np.triu_indices(z.shape[1], 1)
    return float(cov[iu].sum())


# ------------------------------------------------------------ kappa


def kappa(Z, nu):
    """Largest mean square over (N-nu) x (n-nu) submatrices left by deleting nu rows and columns.

    Returns ``None`` when ``n <= nu`` or ``N <= nu``. The search finds the
    deleted subsets with the fast kernel, then sums the surviving squares
    directly in row-major order so the value does not depend on the search.
    """
    z = _thin(Z).entries
    N, n = z.shape
    if n <= nu or N <= nu:
        return None
    sq = z * z
    J, R = _backend.kernels().kappa_argmax(sq, nu)
    return _remaining_mean(sq, J, R, nu)


def _remaining_mean(sq, J, R, nu):
    N, n = sq.shape
    rows = [j for j in range(N) if j not in J]
    cols = [r for r in range(n) if r not in R]
    total = 0.0
    for j in rows:
        for r in cols:
            total += sq[j, r]
    return total / ((n - nu) * (N - nu))


def kappa_naive(Z, nu):
    """Exhaustive double loop over row and column subsets, no precomputation."""
    z = _thin(Z).entries
    N, n = z.shape
    if n <= nu or N <= nu:
        return None
    sq = z * z
    best = -math.inf
    for J in combinations(range(N), nu):
        for R in combinations(range(n), nu):
            v = _remaining_mean(sq, J, R, nu)
            if v > best:
                best = v
    return best


# ------------------------------------------------------------ theta


def _abs_differences(z):
    return np.abs(z[:, None, :] - z[None, :, :])


def theta_naive(Z, d):
    """Definition-level theta_d: the inner sum runs over all ordered distinct
    row tuples, selected by an explicit distinctness mask.
    """
    z = _thin(Z).entries
    N, n = z.shape
    if n < d or N < d:
        return 0.0
    y = _abs_differences(z)
    idx = np.arange(N)
    if d == 2:
        mask = idx[:, None] != idx[None, :]
        inner = np.einsum("uv,uvr,uvs->rs", mask, y, y)
    elif d == 3:
        u, v, w = np.ix_(idx, idx, idx)
        mask = (u != v) & (u != w) & (v != w)
        inner = np.einsum("uvw,uvr,uvs,uwt->rst", mask, y, y, y, optimize=True)
    elif d == 4:
        u, v, w, x = np.ix_(idx, idx, idx, idx)
        mask = (u != v) & (u != w) & (u != x) & (v != w) & (v != x) & (w != x)
        inner = np.einsum("uvwx,uvq,uvr,wxs,wxt->qrst", mask, y, y, y, y, optimize=True)
    else:
        raise ValueError(f"d must be 2, 3 or 4, got {d}")
    total = 0.0
    for cols in permutations(range(n), d):
        total += inner[cols] ** 2
    return alpha(N, n, d) * math.sqrt(total)


def _distinct_mask(n, d):
    idx = np.arange(n)
    grids = np.ix_(*([idx] * d))
    mask = np.ones((n,) * d, dtype=bool)
    for a, b in combinations(range(d), 2):
        mask &= grids[a] != grids[b]
    return mask


def theta_fast(Z, d):
    """theta_d with the row-tuple sums factorised into pair sums.

    * d=2: twice the sum over unordered pairs p of a_p(r) a_p(s).
    * d=3: sum_u B_u(rs) T_u(t) - 2 sum_p a_p(r) a_p(s) a_p(t), where
      B_u(rs) = sum_v |y_uvr y_uvs| and T_u(t) = sum_w |y_uwt|.
    * d=4: P(qr) P(st) - 4 sum_u B_u(qr) B_u(st) + 4 sum_p b_p(qr) b_p(st),
      i.e. all pair-of-pairs minus those sharing one row (4 ways) plus back
      the two ways of sharing both rows that were subtracted twice.
    """
    z = _thin(Z).entries
    N, n = z.shape
    if n < d or N < d:
        return 0.0
    iu, iv = np.triu_indices(N, 1)
    a = np.abs(z[iu] - z[iv])  # (pairs, n)
    if d == 2:
        inner = 2.0 * (a.T @ a)
    else:
        y = _abs_differences(z)
        B = np.einsum("uvr,uvs->urs", y, y)  # (N, n, n)
        if d == 3:
            T = y.sum(axis=1)  # (N, n)
            inner = np.einsum("urs,ut->rst", B, T) - 2.0 * np.einsum("pr,ps,pt->rst", a, a, a)
        elif d == 4:
            Bf = B.reshape(N, n * n)
            P = Bf.sum(axis=0)
            b = (a[:, :, None] * a[:, None, :]).reshape(len(a), n * n)
            inner = np.outer(P, P) - 4.0 * (Bf.T @ Bf) + 4.0 * (b.T @ b)
            inner = inner.reshape(n, n, n, n)
        else:
            raise ValueError(f"d must be 2, 3 or 4, got {d}")
    total = float(np.sum(np.square(inner[_distinct_mask(n, d)])))
    return alpha(N, n, d) * math.sqrt(total)


# ------------------------------------------------------------ results


@dataclass
class RoosDiagnostics:
    """Every intermediate quantity of both approximations.

    Entries that are undefined for the matrix size (e.g. kappa_4 when
    n <= 4) are ``None``.
    """

    N: int
    n: int
    col_means: np.ndarray
    p1: float
    p2: float
    beta: float
    kappa: dict = field(default_factory=dict)
    theta: dict = field(default_factory=dict)
    alpha: dict = field(default_factory=dict)
    f_values: dict = field(default_factory=dict)
    ff_ratio: float = 1.0
    ff_ratio_2: float | None = None
    raw_lower: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "N": self.N,
            "n": self.n,
            "z_tilde": [float(v) for v in self.col_means],
            "p1": self.p1,
            "p2": self.p2,
            "beta": self.beta,
        }
        for name, table in (("kappa", self.kappa), ("theta", self.theta),
                            ("alpha", self.alpha), ("f", self.f_values)):
            for d in ORDERS:
                out[f"{name}{d}"] = table.get(d)
        out["ff_ratio"] = self.ff_ratio
        out["ff_ratio_2"] = self.ff_ratio_2
        out["raw_lower_first"] = self.raw_lower.get("first")
        out["raw_lower_second"] = self.raw_lower.get("second")
        return out


@dataclass(frozen=True)
class BoundedEstimate:
    """Point estimate with a rigorous interval when one is available.

    Without a half-width the interval is the trivial ``[0, inf)``.
    """

    estimate: float
    half_width: float | None
    order: str
    log_estimate: float | None = None

    @property
    def available(self):
        return self.half_width is not None

    @property
    def lower(self):
        if self.half_width is None:
            return 0.0
        return max(0.0, self.estimate - self.half_width)

    @property
    def upper(self):
        if self.half_width is None:
            return math.inf
        return self.estimate + self.half_width

    def contains(self, value, rel=0.0):
        slack = rel * max(abs(value), abs(self.estimate))
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self):
        return {
            "order": self.order,
            "estimate": self.estimate,
            "half_width": self.half_width,
            "lower": self.lower,
            "upper": self.upper if self.half_width is not None else None,
            "log_estimate": self.log_estimate,
        }


def _needed(orders):
    kappas, thetas = set(), set()
    if 1 in orders:
        kappas.add(2)
        thetas.add(2)
    if 2 in orders:
        kappas.update((3, 4))
        thetas.update((3, 4))
    return kappas, thetas


def diagnostics(Z, orders=(1, 2), theta=theta_fast):
    """Compute the quantities needed by the requested approximation orders.

    The default computes everything. Restricting ``orders`` skips the
    kappa/theta terms only the other order uses.
    """
    Z = _thin(Z)
    z = Z.entries
    N, n = z.shape
    zt = z.mean(axis=0)
    diag = RoosDiagnostics(
        N=N,
        n=n,
        col_means=zt,
        p1=float(np.prod(zt)),
        p2=p_second(Z, zt),
        beta=float(np.mean(zt * zt)),
        ff_ratio=falling_factorial_ratio(N, n),
        ff_ratio_2=falling_factorial_ratio(N - 2, n - 2) if n >= 2 else None,
    )
    kappas, thetas = _needed(orders)
    for d in ORDERS:
        diag.alpha[d] = alpha(N, n, d)
        diag.kappa[d] = kappa(Z, d) if d in kappas else None
        diag.theta[d] = (theta(Z, d) if n >= d else None) if d in thetas else None
        if diag.kappa[d] is not None:
            diag.f_values[d] = eval_f(d, n, math.sqrt(diag.beta), math.sqrt(diag.kappa[d]))
        else:
            diag.f_values[d] = None
    return diag


def _first_from(diag, z):
    N, n = diag.N, diag.n
    if n == 1:
        # N * mean is the column sum; add it up directly so it is bit-identical
        est = sum(z[:, 0].tolist())
        hw = 0.0
    elif n >= MIN_BOUND_COLS:
        est = diag.ff_ratio * diag.p1
        hw = diag.ff_ratio * diag.theta[2] / (2 * N) * diag.f_values[2]
        diag.raw_lower["first"] = est - hw
    else:
        est = diag.ff_ratio * diag.p1
        hw = None
    log_est = None
    if np.all(diag.col_means > 0):
        log_est = log_falling_factorial_ratio(N, n) + float(np.sum(np.log(diag.col_means)))
    return BoundedEstimate(est, hw, "first", log_est)


def _second_from(diag, z):
    N, n = diag.N, diag.n
    if n == 1:
        # p2 is the empty sum; same value as the first order
        est = sum(z[:, 0].tolist())
    else:
        est = diag.ff_ratio * diag.p1 - diag.ff_ratio_2 * diag.p2
    if n <= 2:
        hw = 0.0
    elif n >= MIN_BOUND_COLS:
        hw = diag.ff_ratio * (
            diag.theta[3] / (2 * N**2) * diag.f_values[3]
            + diag.theta[4] / (8 * N**2) * diag.f_values[4]
        )
        diag.raw_lower["second"] = est - hw
    else:
        hw = None
    log_est = None
    zt = diag.col_means
    if np.all(zt > 0):
        rel = _p_second_relative(z, zt) / (N * (N - 1)) if n >= 2 else 0.0
        if rel < 1.0:
            log_est = (log_falling_factorial_ratio(N, n) + float(np.sum(np.log(zt)))
                       + math.log1p(-rel))
    return BoundedEstimate(est, hw, "second", log_est)


def approx_first(Z, diag=None):
    Z = _thin(Z)
    diag = diag if diag is not None else diagnostics(Z, orders=(1,))
    return _first_from(diag, Z.entries)


def approx_second(Z, diag=None):
    Z = _thin(Z)
    diag = diag if diag is not None else diagnostics(Z, orders=(2,))
    return _second_from(diag, Z.entries)


def approx(Z, order):
    """``order`` 1 or 2 (also accepts "first"/"second")."""
    if order in (1, "1", "first"):
        return approx_first(Z)
    if order in (2, "2", "second"):
        return approx_second(Z)
    raise ValueError(f"order must be 1 or 2, got {order!r}")
