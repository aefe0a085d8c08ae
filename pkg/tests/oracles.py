"""Definition-level reference computations, deliberately slow and loop-based.

Nothing here imports the package's numerical code.
"""
import math
from itertools import combinations, permutations


def permanent(z):
    """Sum over injections sigma: columns -> rows of prod z[sigma(r)][r]."""
    N, n = len(z), len(z[0])
    total = 0.0
    for rows in permutations(range(N), n):
        p = 1.0
        for r, j in enumerate(rows):
            p *= z[j][r]
        total += p
    return total


def col_means(z):
    N, n = len(z), len(z[0])
    return [sum(z[j][r] for j in range(N)) / N for r in range(n)]


def theta(z, d):
    N, n = len(z), len(z[0])

    def y(j, k, r):
        return z[j][r] - z[k][r]

    def term(rows, cols):
        if d == 2:
            (u, v), (r, s) = rows, cols
            return abs(y(u, v, r) * y(u, v, s))
        if d == 3:
            (u, v, w), (r, s, t) = rows, cols
            return abs(y(u, v, r) * y(u, v, s) * y(u, w, t))
        (u, v, w, x), (q, r, s, t) = rows, cols
        return abs(y(u, v, q) * y(u, v, r) * y(w, x, s) * y(w, x, t))

    outer = 0.0
    for cols in permutations(range(n), d):
        inner = sum(term(rows, cols) for rows in permutations(range(N), d))
        outer += inner**2
    alpha = math.factorial(N - d) / math.factorial(N) * math.sqrt(math.factorial(n - d) / math.factorial(n))
    return alpha * math.sqrt(outer)


def kappa(z, nu):
    N, n = len(z), len(z[0])
    best = -1.0
    for J in combinations(range(N), nu):
        for R in combinations(range(n), nu):
            s = sum(z[j][r] ** 2 for j in range(N) if j not in J for r in range(n) if r not in R)
            best = max(best, s)
    return best / ((n - nu) * (N - nu))


def p2(z):
    N, n = len(z), len(z[0])
    zt = col_means(z)
    total = 0.0
    for R in combinations(range(n), 2):
        rest = 1.0
        for r in range(n):
            if r not in R:
                rest *= zt[r]
        total += rest * sum(math.prod(z[j][r] - zt[r] for r in R) for j in range(N))
    return total


def hypotheses(wide):
    """All injective row -> column maps with their weights."""
    T, N = len(wide), len(wide[0])
    out = []
    for cols in permutations(range(N), T):
        w = 1.0
        for i, j in enumerate(cols):
            w *= wide[i][j]
        out.append((cols, w))
    return out


def min_cost_assignment(cost):
    T, N = len(cost), len(cost[0])
    return min(sum(cost[i][j] for i, j in enumerate(cols)) for cols in permutations(range(N), T))
