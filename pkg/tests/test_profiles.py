import math
import random

import numpy as np
import pytest

from dpmatch import (
    ErdosRenyi,
    degree_profile,
    distance_matrix,
    from_edge_list,
    permute,
    read_distance_matrix,
    sample_bernoulli,
    w1_distance,
    write_distance_matrix,
)
from oracles import w1_cdf_oracle, w1_quantile_oracle

PAW = [(0, 1), (0, 2), (1, 2), (0, 3)]  # triangle 0,1,2 plus pendant 3-0


def test_profile_path_center():
    g = from_edge_list(3, [(0, 1), (1, 2)])
    assert list(degree_profile(g, 1)) == [1, 1]


def test_profile_star():
    g = from_edge_list(4, [(0, 1), (0, 2), (0, 3)])
    assert list(degree_profile(g, 1)) == [3]
    assert list(degree_profile(g, 0)) == [1, 1, 1]


def test_profile_paw():
    g = from_edge_list(4, PAW)
    assert list(degree_profile(g, 0)) == [1, 2, 2]
    assert list(degree_profile(g, 3)) == [3]


def test_profile_isolated_and_length():
    g = from_edge_list(4, [(0, 1)])
    assert list(degree_profile(g, 2)) == []
    for i in range(4):
        assert len(degree_profile(g, i)) == g.degree(i)


def test_profile_out_of_range():
    g = from_edge_list(2, [(0, 1)])
    with pytest.raises(ValueError):
        degree_profile(g, 2)


def test_w1_identical():
    assert w1_distance([1, 2, 3], [1, 2, 3]) == 0.0


def test_w1_single_atom_translation():
    assert w1_distance([0], [5]) == 5.0


def test_w1_frozen_values():
    assert abs(w1_distance([1, 3], [2, 2]) - 1.0) < 1e-12
    assert abs(w1_distance([1, 1, 4], [2, 2]) - 4 / 3) < 1e-12


def test_w1_empty_conventions():
    assert w1_distance([], []) == 0.0
    assert w1_distance([], [1]) == math.inf
    assert w1_distance([2, 3], []) == math.inf


def test_w1_equal_distributions_different_sizes():
    # [3] and [3,3] are the same point mass
    assert w1_distance([3], [3, 3]) == 0.0


def test_w1_matches_cdf_oracle():
    rng = random.Random(91)
    for _ in range(300):
        mu = [rng.randint(0, 30) for _ in range(rng.randint(1, 12))]
        nu = [rng.randint(0, 30) for _ in range(rng.randint(1, 12))]
        assert abs(w1_distance(mu, nu) - w1_cdf_oracle(mu, nu)) < 1e-9


def test_w1_equal_length_quantile_formula():
    rng = random.Random(17)
    for _ in range(200):
        m = rng.randint(1, 10)
        mu = [rng.randint(0, 20) for _ in range(m)]
        nu = [rng.randint(0, 20) for _ in range(m)]
        assert abs(w1_distance(mu, nu) - w1_quantile_oracle(mu, nu)) < 1e-9


def _normalized(p):
    return tuple(sorted((v, p.count(v) / len(p)) for v in set(p)))


def test_w1_metric_properties():
    rng = random.Random(5)
    pool = [[rng.randint(0, 8) for _ in range(rng.randint(1, 6))] for _ in range(40)]
    for _ in range(200):
        x, y, z = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        dxy = w1_distance(x, y)
        assert abs(dxy - w1_distance(y, x)) < 1e-12
        assert (dxy < 1e-12) == (_normalized(x) == _normalized(y))
        assert dxy <= w1_distance(x, z) + w1_distance(z, y) + 1e-9


def test_distance_matrix_triangle_self():
    tri = from_edge_list(3, [(0, 1), (1, 2), (0, 2)])
    w = distance_matrix(tri, tri)
    assert np.array_equal(w, np.zeros((3, 3)))


def test_distance_matrix_isolated_row():
    a = from_edge_list(3, [(0, 1)])  # vertex 2 isolated
    b = from_edge_list(2, [(0, 1)])
    w = distance_matrix(a, b)
    assert np.all(np.isinf(w[2]))
    assert np.all(np.isfinite(w[:2]))


def test_distance_matrix_isolated_both_sides_zero():
    a = from_edge_list(2, [])
    b = from_edge_list(2, [])
    w = distance_matrix(a, b)
    assert np.array_equal(w, np.zeros((2, 2)))


def test_distance_matrix_equals_naive_loop():
    spec = ErdosRenyi(20, 0.3)
    a = sample_bernoulli(spec, 41)
    b = sample_bernoulli(spec, 42)
    w = distance_matrix(a, b)
    for i in range(a.n):
        for j in range(b.n):
            expected = w1_distance(degree_profile(a, i), degree_profile(b, j))
            if math.isinf(expected):
                assert math.isinf(w[i, j])
            else:
                assert abs(w[i, j] - expected) < 1e-9


def test_distance_matrix_row_permutation():
    spec = ErdosRenyi(15, 0.3)
    a = sample_bernoulli(spec, 7)
    b = sample_bernoulli(spec, 8)
    rng = np.random.default_rng(3)
    sigma = rng.permutation(a.n).tolist()
    w = distance_matrix(a, b)
    w_perm = distance_matrix(permute(a, sigma), b)
    for i in range(a.n):
        assert np.array_equal(w_perm[sigma[i]], w[i])


def test_profiles_local_under_disjoint_union():
    g = from_edge_list(4, PAW)
    shifted = [(u + 4, v + 4) for u, v in PAW]
    union = from_edge_list(8, PAW + shifted)
    for i in range(4):
        assert list(degree_profile(union, i)) == list(degree_profile(g, i))


def test_distance_matrix_round_trip(tmp_path):
    a = from_edge_list(3, [(0, 1)])
    b = from_edge_list(2, [(0, 1)])
    w = distance_matrix(a, b)
    path = tmp_path / "w.txt"
    write_distance_matrix(w, path)
    w2 = read_distance_matrix(path)
    assert w.shape == w2.shape
    assert np.array_equal(np.isinf(w), np.isinf(w2))
    finite = np.isfinite(w)
    assert np.allclose(w[finite], w2[finite])
