import math

import numpy as np
import pytest

import oracles
from roosperm.assignment import AssignmentInfeasible, enumerate_all, munkres, murty_kbest
from roosperm.matrices import gen_random, neg_log_cost, to_thin
from roosperm.permanent import permanent_exact


def test_munkres_examples():
    a = munkres([[1.0, 2.0], [2.0, 1.0]])
    assert a.row_to_col == (0, 1) and a.cost == 2.0
    a = munkres([[1.0, 9.0, 9.0], [9.0, 1.0, 9.0]])
    assert a.row_to_col == (0, 1) and a.cost == 2.0
    a = munkres([[0.0, 0.0], [0.0, 0.0]])
    assert a.row_to_col == (0, 1) and a.cost == 0.0


def test_munkres_lexicographic_tie_break():
    # optima (1, 0, 2) and (2, 0, 1) tie at cost 0; (0, ...) is worse
    cost = [[5.0, 0.0, 0.0], [0.0, 5.0, 5.0], [5.0, 0.0, 0.0]]
    assert munkres(cost).row_to_col == (1, 0, 2)
    assert munkres(np.zeros((3, 5))).row_to_col == (0, 1, 2)


def test_munkres_infeasible():
    with pytest.raises(AssignmentInfeasible):
        munkres([[math.inf, math.inf], [0.0, 1.0]])
    with pytest.raises(AssignmentInfeasible):
        munkres([[0.0, math.inf], [0.0, math.inf]])


def test_munkres_avoids_forbidden():
    a = munkres([[math.inf, 100.0], [0.0, math.inf]])
    assert a.row_to_col == (1, 0)


def test_munkres_optimal_vs_bruteforce():
    rng = np.random.default_rng(0)
    for trial in range(500):
        T = int(rng.integers(1, 6))
        N = int(rng.integers(T, T + 4))
        cost = rng.random((T, N)) * 10
        if trial % 3 == 0:
            cost[rng.random((T, N)) < 0.2] = math.inf
        best = oracles.min_cost_assignment(cost.tolist())
        if math.isinf(best):
            with pytest.raises(AssignmentInfeasible):
                munkres(cost)
            continue
        assert munkres(cost).cost == pytest.approx(best, rel=1e-12, abs=1e-12)


def test_munkres_eight_rows():
    rng = np.random.default_rng(1)
    for _ in range(5):
        cost = rng.random((8, 9))
        assert munkres(cost).cost == pytest.approx(oracles.min_cost_assignment(cost.tolist()), rel=1e-12)


def test_murty_two_by_two():
    r = murty_kbest(np.array([[0.7, 0.3], [0.4, 0.6]]), 2)
    assert r.weights == pytest.approx([0.42, 0.12], rel=1e-15)
    assert r.cumulative_weights == pytest.approx([0.42, 0.54], rel=1e-15)


def test_murty_toy_matches_enumeration():
    L = gen_random(4, 4, seed=7)
    got = murty_kbest(L, 50)
    ref = enumerate_all(L)
    assert len(ref) == 11880
    assert [a.row_to_col for a in got.assignments] == [a.row_to_col for a in ref.assignments[:50]]


def test_murty_exhausts():
    L = gen_random(3, 2, seed=1)
    ref = [a for a in enumerate_all(L).assignments if a.weight > 0]
    got = murty_kbest(L, 10_000)
    assert len(got) == len(ref)
    assert [a.row_to_col for a in got.assignments] == [a.row_to_col for a in ref]
    assert got.cumulative_weights[-1] == pytest.approx(permanent_exact(to_thin(L)).value, rel=1e-10)


def test_murty_topk_randomised():
    rng = np.random.default_rng(42)
    for trial in range(200):
        T = int(rng.integers(1, 5))
        M = int(rng.integers(0, 4))
        L = gen_random(T, M, seed=[3, trial])
        K = int(rng.integers(1, 40))
        ref = enumerate_all(L).assignments
        got = murty_kbest(L, K).assignments
        assert [a.row_to_col for a in got] == [a.row_to_col for a in ref[: len(got)]]
        positive = sum(a.weight > 0 for a in ref)
        assert len(got) == min(K, positive)


def test_murty_never_selects_structural_zero():
    L = gen_random(4, 3, seed=5)
    for a in murty_kbest(L, 200).assignments:
        assert a.weight > 0
        assert all(L.entries[i, j] > 0 for i, j in enumerate(a.row_to_col))


def test_murty_order_and_invariants():
    L = gen_random(4, 5, seed=2)
    r = murty_kbest(L, 100)
    w = r.weights
    assert all(x >= y for x, y in zip(w, w[1:]))
    cum = r.cumulative_weights
    assert cum[0] == w[0]
    assert all(b - a == pytest.approx(x, rel=1e-12) for a, b, x in zip(cum, cum[1:], w[1:]))
    for a in r.assignments:
        assert len(set(a.row_to_col)) == 4
        assert a.weight == pytest.approx(math.exp(-a.cost), rel=1e-10)


def test_murty_ties_lexicographic():
    z = np.ones((2, 3))
    r = murty_kbest(z, 6)
    assert [a.row_to_col for a in r.assignments] == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def test_murty_infeasible():
    z = np.array([[0.0, 0.0], [0.5, 0.5]])
    with pytest.raises(AssignmentInfeasible):
        murty_kbest(z, 3)


def test_enumerate_all_examples():
    r = enumerate_all(np.array([[0.7, 0.3], [0.4, 0.6]]))
    assert sum(r.weights) == pytest.approx(0.54, rel=1e-15)
    L = gen_random(4, 4, seed=7)
    assert sum(enumerate_all(L).weights) == pytest.approx(permanent_exact(to_thin(L)).value, rel=1e-10)


def test_enumerate_zero_row():
    z = np.array([[0.0, 0.0, 0.0], [0.2, 0.3, 0.4]])
    r = enumerate_all(z)
    assert len(r) == 6 and sum(r.weights) == 0.0
    assert permanent_exact(to_thin(z)).value == 0.0


def test_enumerate_cap():
    with pytest.raises(AssignmentInfeasible):
        enumerate_all(np.ones((6, 20)), cap=1000)


def test_assignment_json_shape():
    d = murty_kbest(np.array([[0.7, 0.3], [0.4, 0.6]]), 1).to_dict()
    assert d["assignments"][0] == {"assignment": [0, 1], "weight": 0.42, "cost": d["assignments"][0]["cost"]}
    assert d["assignments"][0]["cost"] == pytest.approx(-math.log(0.42), rel=1e-14)


def test_cost_matrix_input():
    C = neg_log_cost(np.array([[0.7, 0.3], [0.4, 0.6]]))
    a = munkres(C)
    assert a.row_to_col == (0, 1)
    assert a.weight == pytest.approx(0.42, rel=1e-15)
