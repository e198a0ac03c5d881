"""Samplers for Bernoulli networks and correlated partially-overlapping
child-graph pairs.

All samplers are pure functions of (inputs, seed) using numpy's PCG64
streams, so results are bit-reproducible across platforms and thread
counts. Seeds may be ints, SeedSequences, or Generators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, from_edge_list, permute


@dataclass(frozen=True)
class ErdosRenyi:
    n: int
    q: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0,1]")


@dataclass(frozen=True)
class StochasticBlockModel:
    block_sizes: tuple
    p: tuple  # K x K symmetric matrix of probabilities, row tuples

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        p = tuple(tuple(float(x) for x in row) for row in self.p)
        object.__setattr__(self, "block_sizes", sizes)
        object.__setattr__(self, "p", p)
        k = len(sizes)
        if k == 0 or any(s < 1 for s in sizes):
            raise ValueError("block sizes must be positive")
        if len(p) != k or any(len(row) != k for row in p):
            raise ValueError("P must be K x K")
        for i in range(k):
            for j in range(k):
                if not 0.0 <= p[i][j] <= 1.0:
                    raise ValueError("P entries must lie in [0,1]")
                if p[i][j] != p[j][i]:
                    raise ValueError("P must be symmetric")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)


def sbm_from_rate(n: int, k: int, q: float) -> StochasticBlockModel:
    """Equal-size SBM with within-probability q and between-probability q/2.

    Leading blocks absorb the remainder when k does not divide n.
    """
    if k < 1 or n < k:
        raise ValueError("need at least one vertex per block")
    base = n // k
    sizes = tuple(base + (1 if i < n % k else 0) for i in range(k))
    p = tuple(tuple(q if i == j else q / 2.0 for j in range(k)) for i in range(k))
    return StochasticBlockModel(sizes, p)


def sbm_theta(spec) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic block membership labels plus the probability matrix.

    The first block_sizes[0] vertices belong to block 0, and so on. An ER
    spec is the one-block special case.
    """
    if isinstance(spec, ErdosRenyi):
        return np.zeros(spec.n, dtype=np.int64), np.array([[spec.q]])
    labels = np.repeat(np.arange(len(spec.block_sizes)), spec.block_sizes)
    return labels, np.array(spec.p, dtype=np.float64)


def sample_bernoulli(spec, seed) -> Graph:
    """Sample a graph with independent upper-triangle Bernoulli edges."""
    labels, p = sbm_theta(spec)
    n = len(labels)
    rng = np.random.default_rng(seed)
    neighbors = [[] for _ in range(n)]
    for i in range(n - 1):
        probs = p[labels[i], labels[i + 1 :]]
        hits = np.nonzero(rng.random(n - 1 - i) < probs)[0]
        for off in hits:
            j = i + 1 + int(off)
            neighbors[i].append(j)
            neighbors[j].append(i)
    return Graph(n, [sorted(row) for row in neighbors])


@dataclass(eq=False)
class ChildSample:
    graph: Graph
    parent_of: np.ndarray  # child index -> parent index, strictly increasing


@dataclass(eq=False)
class ChildPair:
    a: ChildSample
    b: ChildSample
    pi_star: np.ndarray
    truth: dict  # a-vertex -> b-vertex, defined on the overlap only


def sample_child(g: Graph, s: float, rho: float, seed) -> ChildSample:
    """Keep each vertex with probability s, then each surviving edge with
    probability rho."""
    if not (0.0 <= s <= 1.0 and 0.0 <= rho <= 1.0):
        raise ValueError("s and rho must lie in [0,1]")
    rng = np.random.default_rng(seed)
    kept = np.nonzero(rng.random(g.n) < s)[0]
    pos = {int(old): new for new, old in enumerate(kept)}
    sub_edges = [
        (pos[i], pos[j])
        for i in map(int, kept)
        for j in g.adj[i]
        if j > i and j in pos
    ]
    if sub_edges:
        keep_edge = rng.random(len(sub_edges)) < rho
        sub_edges = [e for e, k in zip(sub_edges, keep_edge) if k]
    return ChildSample(from_edge_list(len(kept), sub_edges), kept)


def make_pair(g: Graph, s: float, rho: float, seed, pi_star=None) -> ChildPair:
    """Sample two correlated children of g with ground truth.

    a is sampled from g and b from permute(g, pi_star), independently.
    pi_star defaults to a uniform permutation of all parent vertices; a
    fixed permutation may be supplied for regression tests.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seed_pi, seed_a, seed_b = ss.spawn(3)
    if pi_star is None:
        pi_star = np.random.default_rng(seed_pi).permutation(g.n).tolist()
    else:
        pi_star = [int(p) for p in pi_star]
        if sorted(pi_star) != list(range(g.n)):
            raise ValueError("pi_star is not a bijection")
    a = sample_child(g, s, rho, seed_a)
    b = sample_child(permute(g, pi_star), s, rho, seed_b)
    b_pos = {int(p): j for j, p in enumerate(b.parent_of)}
    truth = {}
    for i, parent in enumerate(a.parent_of):
        j = b_pos.get(pi_star[parent])
        if j is not None:
            truth[i] = j
    return ChildPair(a, b, pi_star, truth)
