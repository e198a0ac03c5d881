"""SCORE spectral clustering and community-aware matching.

Communities are found independently in both graphs, matched across all K!
community bijections, and the best bijection's within-community matching
can seed a full-graph refinement pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, induced_subgraph
from .matchers import MatchResult, dp_match, ee_post, refine_matching

_EIG_TOL = 1e-8
_V1_GUARD = 1e-12
_KMEANS_RESTARTS = 10
_KMEANS_ITERS = 100
_KMEANS_SEED = 20210513


@dataclass
class CommunityPartition:
    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.min(initial=0) < 0 or labels.max(initial=-1) >= self.k:
            raise ValueError("label out of range")
        if len(np.unique(labels)) != self.k:
            raise ValueError("every community must be non-empty")
        self.labels = labels

    def members(self, community: int) -> list:
        return [int(i) for i in np.nonzero(self.labels == community)[0]]


@dataclass
class CommunityMatchOutcome:
    community_bijection: tuple
    global_result: MatchResult
    eval_score: float


def _leading_eigenvectors(g: Graph, k: int) -> np.ndarray:
    """K leading eigenvectors of the adjacency matrix by |eigenvalue|.

    Orthogonal iteration with tolerance 1e-8 and a 10n iteration cap;
    deterministic seeded start. Raises when fewer than K numerically
    nonzero eigenpairs exist.
    """
    n = g.n
    a = g.to_csr()
    rng = np.random.default_rng(_KMEANS_SEED)
    v = np.linalg.qr(rng.standard_normal((n, k)))[0]
    for _ in range(10 * n):
        w = a @ v
        v_new = np.linalg.qr(w)[0]
        # subspace residual: how far v_new leaves span(v)
        resid = np.linalg.norm(v_new - v @ (v.T @ v_new))
        v = v_new
        if resid < _EIG_TOL:
            break
    h = v.T @ (a @ v)
    evals, evecs = np.linalg.eigh(h)
    order = np.argsort(-np.abs(evals), kind="stable")
    evals = evals[order]
    u = v @ evecs[:, order]
    scale = max(1.0, float(np.abs(evals).max(initial=0.0)))
    if np.sum(np.abs(evals) > _EIG_TOL * scale) < k:
        raise ValueError("graph has fewer than K numerically distinct leading eigenpairs")
    return u


def kmeans(points: np.ndarray, k: int, restarts: int = _KMEANS_RESTARTS,
           iters: int = _KMEANS_ITERS, seed: int = _KMEANS_SEED):
    """Plain Lloyd k-means, seeded restarts, best inertia kept.

    Returns (labels, inertia). Deterministic for fixed arguments.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    rng = np.random.default_rng(seed)
    best_labels, best_obj = None, np.inf
    for _ in range(restarts):
        centers = points[rng.choice(n, size=k, replace=False)]
        labels = None
        for _ in range(iters):
            d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = d2.argmin(axis=1)
            if labels is not None and np.array_equal(new_labels, labels):
                break
            labels = new_labels
            for c in range(k):
                mask = labels == c
                if mask.any():
                    centers[c] = points[mask].mean(axis=0)
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        obj = float(d2[np.arange(n), labels].sum())
        if obj < best_obj:
            best_obj = obj
            best_labels = labels
    return best_labels, best_obj


def _ratio_matrix(a: Graph, k: int) -> np.ndarray:
    """Clamped entrywise ratios u_j / v_1 (j = 2..K), one column per j."""
    u = _leading_eigenvectors(a, k)
    v1 = u[:, 0]
    if v1.sum() < 0:  # sign convention: entry sum non-negative
        v1 = -v1
        u = u.copy()
        u[:, 0] = v1
    bound = np.log(max(a.n, 2))
    safe = np.abs(v1) >= _V1_GUARD
    ratios = np.empty((a.n, k - 1), dtype=np.float64)
    for j in range(1, k):
        col = u[:, j]
        r = np.where(safe, col / np.where(safe, v1, 1.0), np.sign(col) * bound)
        ratios[:, j - 1] = np.clip(r, -bound, bound)
    return ratios


def score(a: Graph, k: int) -> CommunityPartition:
    """Spectral clustering on ratios of leading eigenvectors.

    Entrywise ratios u_j / v_1 (j = 2..K) are clamped to [-log n, log n],
    with near-zero v_1 entries mapped straight to the clamp bound; k-means
    on the ratio rows yields the labels.
    """
    if k < 2:
        raise ValueError("K must be at least 2")
    if a.n == 0:
        raise ValueError("graph is empty")
    labels, _ = kmeans(_ratio_matrix(a, k), k)
    return CommunityPartition(labels, k)


def _community_eval(result: MatchResult, matcher: str) -> int:
    """Matched count for dp, converged count for ee-post."""
    if matcher == "dp":
        return len(result.assignment)
    return sum(result.flags.values())


def community_match_all(a: Graph, b: Graph, k: int, matcher: str, *,
                        d: int = 10, n_rep: int = 50, tau=None):
    """Match every community bijection, returning (mu, union) per mu.

    For each permutation mu of [0, K), community j of a is matched against
    community mu[j] of b with the selected matcher (dp or ee-post) on the
    induced subgraphs, indices translated back to the host graphs. The K!
    permutations come out in lexicographic order.
    """
    if matcher not in ("dp", "ee-post"):
        raise ValueError(f"unknown matcher {matcher!r}")
    if not 2 <= k <= 6:
        raise ValueError("K must lie in [2, 6] so that K! stays enumerable")
    part_a = score(a, k)
    part_b = score(b, k)
    members_a = [part_a.members(c) for c in range(k)]
    members_b = [part_b.members(c) for c in range(k)]
    subs_a = [induced_subgraph(a, m)[0] for m in members_a]
    subs_b = [induced_subgraph(b, m)[0] for m in members_b]
    local_cache = {}

    def local_match(c, t):
        # each (community, target) pair is matched once across all mus
        if (c, t) not in local_cache:
            sub_a, sub_b = subs_a[c], subs_b[t]
            if sub_a.n == 0 or sub_b.n == 0:
                local_cache[(c, t)] = None
            elif matcher == "dp":
                local_cache[(c, t)] = dp_match(sub_a, sub_b)
            else:
                local_cache[(c, t)] = ee_post(sub_a, sub_b, d, n_rep, tau)
        return local_cache[(c, t)]

    outcomes = []
    for mu in itertools.permutations(range(k)):
        assignment, flags, history = {}, {}, {}
        for c in range(k):
            local = local_match(c, mu[c])
            if local is None:
                continue
            va, vb = members_a[c], members_b[mu[c]]
            for i_loc, j_loc in local.assignment.items():
                i_glob = va[i_loc]
                assignment[i_glob] = vb[j_loc]
                flags[i_glob] = local.flags[i_loc]
                history[i_glob] = local.history[i_loc]
        outcomes.append((mu, MatchResult(assignment, flags, history)))
    return outcomes


def select_best_mu(outcomes, matcher: str):
    """Best community bijection by the matcher's evaluation metric.

    Ties resolve to the lexicographically smallest mu; outcomes arrive in
    lexicographic order, so first-strictly-better wins.
    """
    best = None
    best_eval = -1
    for mu, result in outcomes:
        ev = _community_eval(result, matcher)
        if ev > best_eval:
            best = (mu, result)
            best_eval = ev
    return best[0], best[1], best_eval


def community_match_refined(a: Graph, b: Graph, k: int, d: int, n_rep: int,
                            tau=None, matcher: str = "ee-post") -> CommunityMatchOutcome:
    """Community matching followed by full-graph refinement.

    The best bijection's union seeds the iterated linear-assignment loop
    on the whole graphs, with the usual flag tracking.
    """
    outcomes = community_match_all(a, b, k, matcher, d=d, n_rep=n_rep, tau=tau)
    mu, union, ev = select_best_mu(outcomes, matcher)
    init_rows = [(union.assignment[i],) if i in union.assignment else () for i in range(a.n)]
    refined = refine_matching(a, b, init_rows, n_rep, tau)
    return CommunityMatchOutcome(mu, refined, ev)
