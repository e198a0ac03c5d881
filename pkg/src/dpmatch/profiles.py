"""Degree profiles and 1-Wasserstein distances between them.

The degree profile of vertex i is the multiset of its neighbors' degrees,
viewed as an empirical distribution with equal atom weights. Profiles use
the full degree of each neighbor, including its edge back to i.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .graphs import Graph


def degree_profile(g: Graph, i: int) -> tuple[int, ...]:
    """Sorted degrees of the neighbors of i; empty for isolated vertices."""
    if not 0 <= i < g.n:
        raise ValueError(f"vertex {i} out of range")
    deg = g.degrees
    return tuple(sorted(int(deg[k]) for k in g.adj[i]))


def w1_distance(mu, nu) -> float:
    """W1 distance between two empirical distributions of integers.

    Computed exactly as the integral of |F_mu - F_nu| by a two-pointer
    merge over the sorted atoms. If exactly one profile is empty the
    distance is +inf; if both are empty it is 0.
    """
    mu = sorted(mu)
    nu = sorted(nu)
    m, n = len(mu), len(nu)
    if m == 0 and n == 0:
        return 0.0
    if m == 0 or n == 0:
        return float("inf")
    i = j = 0
    cdf_gap = 0.0  # current F_mu - F_nu
    total = 0.0
    prev = None
    while i < m or j < n:
        if j >= n or (i < m and mu[i] <= nu[j]):
            v = mu[i]
        else:
            v = nu[j]
        if prev is not None and v != prev:
            total += abs(cdf_gap) * (v - prev)
        while i < m and mu[i] == v:
            i += 1
            cdf_gap += 1.0 / m
        while j < n and nu[j] == v:
            j += 1
            cdf_gap -= 1.0 / n
        prev = v
    return total


def _cdf_rows(g: Graph, grid_size: int) -> np.ndarray:
    """Per-vertex profile CDFs sampled on the integer grid [0, grid_size)."""
    deg = g.degrees
    counts = np.zeros((g.n, grid_size), dtype=np.float64)
    owners = np.repeat(np.arange(g.n), deg)
    flat = np.fromiter((j for row in g.adj for j in row), dtype=np.int64, count=int(deg.sum()))
    if len(flat):
        np.add.at(counts, (owners, deg[flat]), 1.0)
    np.cumsum(counts, axis=1, out=counts)
    scale = np.where(deg > 0, deg, 1).astype(np.float64)
    counts /= scale[:, None]
    return counts


def distance_matrix(a: Graph, b: Graph) -> np.ndarray:
    """Dense n_A x n_B matrix of pairwise W1 profile distances.

    Vectorized over the shared integer degree grid; exact for integer
    profiles up to float rounding. Rows/columns of isolated vertices are
    +inf, except both-isolated pairs which are 0.
    """
    w = np.zeros((a.n, b.n), dtype=np.float64)
    if a.n == 0 or b.n == 0:
        return w
    max_deg = int(max(a.degrees.max(initial=0), b.degrees.max(initial=0)))
    if max_deg > 0:
        # grid covers 0..max_deg; at max_deg both CDFs are 1 so that column
        # contributes nothing and the integral is complete
        fa = _cdf_rows(a, max_deg + 1)
        fb = _cdf_rows(b, max_deg + 1)
        w = cdist(fa, fb, metric="cityblock")
    iso_a = a.degrees == 0
    iso_b = b.degrees == 0
    w[iso_a, :] = np.inf
    w[:, iso_b] = np.inf
    w[np.ix_(iso_a, iso_b)] = 0.0
    return w


def write_distance_matrix(w, path) -> None:
    """Debug dump of W, row-major, header "nA nB"."""
    w = np.asarray(w, dtype=np.float64)
    with open(path, "w") as f:
        f.write(f"{w.shape[0]} {w.shape[1]}\n")
        for row in w:
            f.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_distance_matrix(path) -> np.ndarray:
    with open(path) as f:
        na, nb = (int(tok) for tok in f.readline().split())
        rows = [[float(tok) for tok in f.readline().split()] for _ in range(na)]
    w = np.array(rows, dtype=np.float64).reshape(na, nb)
    return w
