"""Optimal and k-best association hypotheses on a wide likelihood matrix.

Costs are ``-ln z``; a zero likelihood becomes ``+inf`` and is never chosen
while a finite alternative exists. Ties are broken towards the
lexicographically smallest row -> column vector, so results do not depend on
solver internals: the assignment solver minimises the pair
(cost, sum_i col_i * W**(T-1-i)) lexicographically, and the secondary key is
an exact integer.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .matrices import CostMatrix, as_wide, neg_log_cost

DEFAULT_ENUMERATION_CAP = 10**7

_INF = (math.inf, math.inf)


class AssignmentInfeasible(RuntimeError):
    """No full assignment with finite cost exists."""


@dataclass(frozen=True)
class Assignment:
    row_to_col: tuple
    weight: float
    cost: float

    def to_dict(self):
        return {"assignment": list(self.row_to_col), "weight": self.weight, "cost": self.cost}


@dataclass
class KBestResult:
    assignments: list = field(default_factory=list)

    @property
    def weights(self):
        return [a.weight for a in self.assignments]

    @property
    def cumulative_weights(self):
        out, running = [], 0.0
        for a in self.assignments:
            running += a.weight
            out.append(running)
        return out

    def __len__(self):
        return len(self.assignments)

    def to_dict(self):
        return {
            "assignments": [a.to_dict() for a in self.assignments],
            "cumulative_weights": self.cumulative_weights,
        }


def _cost_matrix(C):
    if isinstance(C, CostMatrix):
        return C.entries
    return np.asarray(C, dtype=np.float64)


def assignment_cost(cost, cols):
    """Row-order sum of selected costs (the canonical ordering key)."""
    total = 0.0
    for i, j in enumerate(cols):
        total += cost[i][j]
    return total


def assignment_weight(z, cols):
    w = 1.0
    for i, j in enumerate(cols):
        w *= z[i][j]
    return w


def _solve(cost, rows, cols, forbidden, ncols_total, nrows_total):
    """Lexicographic-pair Hungarian on the submatrix ``rows x cols``.

    Shortest augmenting path with potentials; returns {row: col} or raises.
    """
    n, m = len(rows), len(cols)
    if n > m:
        raise AssignmentInfeasible("more rows than columns")
    W = ncols_total
    sec = [[cols[j] * W ** (nrows_total - 1 - rows[i]) for j in range(m)] for i in range(n)]
    prim = [[math.inf if (rows[i], cols[j]) in forbidden else cost[rows[i]][cols[j]]
             for j in range(m)] for i in range(n)]

    u = [(0.0, 0)] * (n + 1)
    v = [(0.0, 0)] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            ui = u[i0]
            delta = _INF
            j1 = -1
            prow, srow = prim[i0 - 1], sec[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                vj = v[j]
                cur = (prow[j - 1] - ui[0] - vj[0], srow[j - 1] - ui[1] - vj[1])
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if j1 < 0 or delta[0] == math.inf:
                raise AssignmentInfeasible("every completion uses a zero-likelihood entry")
            for j in range(m + 1):
                if used[j]:
                    k = p[j]
                    u[k] = (u[k][0] + delta[0], u[k][1] + delta[1])
                    v[j] = (v[j][0] - delta[0], v[j][1] - delta[1])
                else:
                    minv[j] = (minv[j][0] - delta[0], minv[j][1] - delta[1])
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    return {rows[p[j] - 1]: cols[j - 1] for j in range(1, m + 1) if p[j]}


def _make(cost, z, cols):
    cols = tuple(int(c) for c in cols)
    return Assignment(cols, float(assignment_weight(z, cols)), float(assignment_cost(cost, cols)))


def munkres(C):
    """Minimum-cost assignment of every row of a wide cost matrix.

    >>> munkres([[1, 2], [2, 1]]).row_to_col
    (0, 1)
    """
    cost = _cost_matrix(C)
    T, N = cost.shape
    if T > N:
        raise ValueError(f"cost matrix must be wide (rows <= cols), got {T}x{N}")
    sol = _solve(cost.tolist(), list(range(T)), list(range(N)), frozenset(), N, T)
    cols = tuple(sol[i] for i in range(T))
    z = C.source if isinstance(C, CostMatrix) else np.exp(-cost)
    return _make(cost, z, cols)


@dataclass(order=True)
class _Node:
    key: tuple
    forced: tuple = field(compare=False)
    forbidden: frozenset = field(compare=False)


def _node_solution(cost, forced, forbidden, T, N):
    fixed_rows = {i for i, _ in forced}
    fixed_cols = {j for _, j in forced}
    rows = [i for i in range(T) if i not in fixed_rows]
    cols = [j for j in range(N) if j not in fixed_cols]
    sol = _solve(cost, rows, cols, forbidden, N, T) if rows else {}
    sol.update(dict(forced))
    return tuple(sol[i] for i in range(T))


def murty_kbest(L, K):
    """The K most likely hypotheses, best first.

    Murty partitioning: each popped node's optimum is split into children
    that forbid its i-th pair while forcing its first i-1 pairs. Nodes are
    keyed by (cost, assignment), and every node solution is the
    lexicographically smallest optimum of its subspace, so the pop order is
    the global (cost, assignment) order. Hypotheses with zero weight are
    never produced; fewer than K come back if fewer have positive weight.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    C = neg_log_cost(L)
    z = C.source
    cost = C.entries.tolist()
    T, N = C.shape
    first = _node_solution(cost, (), frozenset(), T, N)
    heap = [_Node((assignment_cost(cost, first), first), (), frozenset())]
    out = []
    while heap and len(out) < K:
        node = heapq.heappop(heap)
        cols = node.key[1]
        out.append(_make(cost, z, cols))
        forced = list(node.forced)
        fixed_rows = {i for i, _ in forced}
        free = [i for i in range(T) if i not in fixed_rows]
        for k, i in enumerate(free):
            forbid = node.forbidden | {(i, cols[i])}
            child_forced = tuple(forced + [(r, cols[r]) for r in free[:k]])
            try:
                sol = _node_solution(cost, child_forced, forbid, T, N)
            except AssignmentInfeasible:
                continue
            heapq.heappush(heap, _Node((assignment_cost(cost, sol), sol), child_forced, forbid))
    return KBestResult(out)


def enumerate_all(L, cap=DEFAULT_ENUMERATION_CAP):
    """Every injective row -> column map, sorted by (cost, assignment).

    Zero-weight hypotheses are included, so the weights sum to the permanent.
    """
    z = as_wide(L)
    T, N = z.shape
    count = math.perm(N, T)
    if count > cap:
        raise AssignmentInfeasible(f"{count} hypotheses exceed the enumeration cap {cap}")
    C = neg_log_cost(z)
    cost = C.entries.tolist()
    zl = z.tolist()
    items = [_make(cost, zl, cols) for cols in permutations(range(N), T)]
    items.sort(key=lambda a: (a.cost, a.row_to_col))
    return KBestResult(items)
