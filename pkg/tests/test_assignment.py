import random

import numpy as np
import pytest

from dpmatch import BipartiteCandidates, linear_assignment_max, max_bipartite_matching
from oracles import brute_assignment_max, brute_max_matching, is_injective


def test_identity_pattern_full_matching():
    c = BipartiteCandidates(4, 4, [(i, i) for i in range(4)])
    m = max_bipartite_matching(c)
    assert m == {i: i for i in range(4)}


def test_all_to_one_cardinality_one():
    c = BipartiteCandidates(5, 3, [(i, 0) for i in range(5)])
    m = max_bipartite_matching(c)
    assert len(m) == 1
    assert set(m.values()) == {0}


def test_matching_empty_candidates():
    c = BipartiteCandidates(3, 3, [])
    assert max_bipartite_matching(c) == {}


def test_candidates_validate_and_dedupe():
    c = BipartiteCandidates(2, 2, [(1, 1), (0, 0), (1, 1)])
    assert c.edges == [(0, 0), (1, 1)]
    with pytest.raises(ValueError):
        BipartiteCandidates(2, 2, [(0, 2)])
    with pytest.raises(ValueError):
        BipartiteCandidates(2, 2, [(-1, 0)])


def test_matching_matches_brute_force():
    rng = random.Random(33)
    for _ in range(60):
        n_l = rng.randint(1, 8)
        n_r = rng.randint(1, 8)
        edges = [(u, v) for u in range(n_l) for v in range(n_r) if rng.random() < 0.3]
        c = BipartiteCandidates(n_l, n_r, edges)
        m = max_bipartite_matching(c)
        assert is_injective(m)
        assert set(m.items()) <= set(c.edges)
        assert len(m) == brute_max_matching(n_l, n_r, edges)


def test_assignment_identity_dominant():
    m = np.eye(5)
    assignment, value = linear_assignment_max(m)
    assert assignment == {i: i for i in range(5)}
    assert value == 5.0


def test_assignment_all_zeros():
    assignment, value = linear_assignment_max(np.zeros((3, 3)))
    assert value == 0.0
    assert is_injective(assignment)


def test_assignment_matches_brute_force():
    rng = np.random.default_rng(77)
    for _ in range(40):
        m = rng.integers(-5, 20, size=(6, 6)).astype(float)
        _, value = linear_assignment_max(m)
        assert value == brute_assignment_max(m.tolist())


def test_assignment_rectangular_padding():
    # wide: all rows assignable
    m = np.array([[1.0, 0.0, 9.0], [2.0, 3.0, 1.0]])
    assignment, value = linear_assignment_max(m)
    assert value == 12.0
    assert assignment == {0: 2, 1: 1}
    # tall: the worst row is left unassigned rather than forced
    m2 = np.array([[5.0], [7.0], [1.0]])
    assignment2, value2 = linear_assignment_max(m2)
    assert value2 == 7.0
    assert assignment2 == {1: 0}


def test_assignment_rectangular_matches_brute():
    rng = np.random.default_rng(13)
    for _ in range(30):
        n_a = int(rng.integers(1, 6))
        n_b = int(rng.integers(1, 6))
        m = rng.integers(-4, 10, size=(n_a, n_b)).astype(float)
        _, value = linear_assignment_max(m)
        assert value == brute_assignment_max(m.tolist())


def test_assignment_square_negative_entries_forced():
    # square inputs get no padding, so the best of the bad pairings wins
    m = np.array([[-3.0, -1.0], [-2.0, -5.0]])
    assignment, value = linear_assignment_max(m)
    assert value == -3.0
    assert assignment == {0: 1, 1: 0}
    assert value == brute_assignment_max(m.tolist())


def test_assignment_rectangular_negative_row_unassigned():
    # the padded dummy column absorbs one row; the all-negative row loses it
    m = np.array([[-3.0], [-2.0], [-5.0]])
    assignment, value = linear_assignment_max(m)
    assert assignment == {1: 0}
    assert value == -2.0


def test_assignment_row_shift_invariance():
    rng = np.random.default_rng(101)
    for _ in range(20):
        m = rng.integers(0, 15, size=(5, 5)).astype(float)
        _, value = linear_assignment_max(m)
        shifted = m.copy()
        shifted[2] += 7.0
        _, value2 = linear_assignment_max(shifted)
        assert value2 == value + 7.0


def test_assignment_rejects_bad_input():
    with pytest.raises(ValueError):
        linear_assignment_max(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        linear_assignment_max(np.array([[np.inf, 1.0], [0.0, 2.0]]))
    with pytest.raises(ValueError):
        linear_assignment_max(np.array([[np.nan]]))


def test_assignment_empty_matrix():
    assignment, value = linear_assignment_max(np.zeros((0, 3)))
    assert assignment == {} and value == 0.0
