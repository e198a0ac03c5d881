"""Matching algorithms on degree profiles.

Four matchers: nearest-profile matching through a maximum bipartite
matching (dp_match), the edge-exploited one-to-d variant (ee_match), the
seeded variant that bootstraps common-neighbor similarity from
high-confidence pairs (ee_pre), and iterative refinement of the candidate
matrix by repeated linear assignment with per-vertex convergence flags
(ee_post).

All tie-breaking is by lowest index; quantiles are nearest-rank (type 1)
everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .assignment import BipartiteCandidates, linear_assignment_max, max_bipartite_matching
from .graphs import Graph
from .profiles import distance_matrix

TAU1_LEVELS = (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8)
TAU2_LEVELS = (0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)


@dataclass
class CandidateMatrix:
    """Per-left-vertex candidate lists, each sorted and of size min(d, n_b)."""

    n_a: int
    n_b: int
    d: int
    rows: list  # tuple of candidate b-indices per a-vertex


@dataclass
class MatchResult:
    """A partial injective assignment with convergence bookkeeping.

    flags and history are keyed by assigned a-vertices only; flag is 1
    iff the streak counter exceeded tau at the final iteration.
    """

    assignment: dict
    flags: dict = field(default_factory=dict)
    history: dict = field(default_factory=dict)


@dataclass
class SeedSet:
    pairs: list  # (a-vertex, b-vertex), injective on both coordinates

    def __len__(self):
        return len(self.pairs)


def nearest_rank_quantile(values, level: float) -> float:
    """Type-1 empirical quantile: smallest x with F(x) >= level."""
    xs = np.sort(np.asarray(values, dtype=np.float64))
    m = len(xs)
    if m == 0:
        raise ValueError("quantile of empty collection")
    # the epsilon guards against 0.55*20 = 11.000000000000002 style error
    k = max(1, math.ceil(level * m - 1e-9))
    return float(xs[min(k, m) - 1])


def dp_match(a: Graph, b: Graph, w=None) -> MatchResult:
    """Match each a-vertex to its nearest profile, then resolve collisions
    with a maximum bipartite matching.

    Rows whose minimum distance is +inf (isolated vertex against a graph
    with no isolated vertices) contribute no candidate edge. Flags are all
    zero; this matcher has no convergence notion.
    """
    if w is None:
        w = distance_matrix(a, b)
    edges = []
    for i in range(a.n):
        row = w[i]
        j = int(np.argmin(row))  # ties resolve to the lowest index
        if np.isfinite(row[j]):
            edges.append((i, j))
    assignment = max_bipartite_matching(BipartiteCandidates(a.n, b.n, edges))
    return MatchResult(
        assignment,
        flags={i: 0 for i in assignment},
        history={i: 0 for i in assignment},
    )


def ee_match(a: Graph, b: Graph, d: int, w=None) -> CandidateMatrix:
    """Keep the d nearest b-vertices per a-vertex, no bipartite step.

    Ties break to the lowest index; d larger than n_b truncates.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if w is None:
        w = distance_matrix(a, b)
    d_eff = min(d, b.n)
    rows = []
    for i in range(a.n):
        picked = np.argsort(w[i], kind="stable")[:d_eff]
        rows.append(tuple(sorted(int(j) for j in picked)))
    return CandidateMatrix(a.n, b.n, d_eff, rows)


def _prune_to_injective(pairs, w) -> list:
    """Greedy injectivity pruning, best (smallest) distance first."""
    order = sorted(pairs, key=lambda p: (w[p[0], p[1]], p[0], p[1]))
    used_a, used_b = set(), set()
    kept = []
    for i, k in order:
        if i not in used_a and k not in used_b:
            kept.append((i, k))
            used_a.add(i)
            used_b.add(k)
    kept.sort()
    return kept


def grid_search_thresholds(a: Graph, b: Graph, w) -> tuple[float, float, SeedSet]:
    """Grid search for the degree and distance thresholds of the seed set.

    tau1 candidates are pooled degree quantiles, tau2 candidates are
    quantiles of the per-a-vertex row minima of W. Returns the pair whose
    seed relation is largest after injectivity pruning; grid scanned in
    (tau1 level, tau2 level) order with first-wins ties. An empty seed set
    signals the caller to fall back to plain ee_match. Vertices of degree
    zero never seed: their zero distances are the empty-profile convention,
    not evidence.
    """
    if a.n == 0 or b.n == 0:
        return 0.0, 0.0, SeedSet([])
    deg_a = a.degrees
    deg_b = b.degrees
    pool = np.concatenate([deg_a, deg_b])
    row_min = w.min(axis=1)
    tau1_cands = [nearest_rank_quantile(pool, lv) for lv in TAU1_LEVELS]
    tau2_cands = [nearest_rank_quantile(row_min, lv) for lv in TAU2_LEVELS]
    positive = (deg_a >= 1)[:, None] & (deg_b >= 1)[None, :]
    best = (0.0, 0.0, [])
    best_count = -1
    for t1 in tau1_cands:
        deg_ok = (deg_a >= t1)[:, None] & (deg_b >= t1)[None, :] & positive
        for t2 in tau2_cands:
            ii, kk = np.nonzero(deg_ok & (w <= t2))
            kept = _prune_to_injective(zip(ii.tolist(), kk.tolist()), w)
            if len(kept) > best_count:
                best = (float(t1), float(t2), kept)
                best_count = len(kept)
    return best[0], best[1], SeedSet(best[2])


def similarity_common_neighbors(a: Graph, b: Graph, pi) -> np.ndarray:
    """Common-neighbor counts under a partial map or candidate matrix.

    Entry (i, j) counts pairs (k, l) with k adjacent to i, l adjacent to j,
    and l among the images of k under pi. Computed sparsely as A P B.
    """
    if isinstance(pi, CandidateMatrix):
        items = [(i, j) for i, row in enumerate(pi.rows) for j in row]
    elif isinstance(pi, dict):
        items = sorted(pi.items())
    else:
        items = sorted(pi)
    p = sparse.csr_matrix(
        (
            np.ones(len(items), dtype=np.float64),
            (
                np.array([i for i, _ in items], dtype=np.int64),
                np.array([j for _, j in items], dtype=np.int64),
            ),
        ),
        shape=(a.n, b.n),
    )
    return np.asarray((a.to_csr() @ p @ b.to_csr()).todense())


def ee_pre(a: Graph, b: Graph, d: int, w=None) -> CandidateMatrix:
    """Seeded edge-exploited matching.

    Seeds from the threshold grid search extend to the remaining vertices
    through a 0/1 common-neighbor matrix U (thresholded at the (n-1)/n
    quantile, n = min(n_a, n_b)) and a maximum bipartite matching; the
    combined map scores all pairs by common neighbors and the top d per
    row (largest similarity, ties to lowest index) become the candidates.
    With no seeds at all this is exactly ee_match.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if w is None:
        w = distance_matrix(a, b)
    tau1, tau2, seeds = grid_search_thresholds(a, b, w)
    if not seeds.pairs:
        return ee_match(a, b, d, w=w)
    pi0 = dict(seeds.pairs)
    t1_verts = sorted(pi0)
    t2_verts = sorted(pi0[i] for i in t1_verts)
    a_csr = a.to_csr()
    b_csr = b.to_csr()
    # common neighbors through seeds: C[i,k] = sum_l A[i,l] B[k, pi0(l)]
    cols_a = np.array(t1_verts, dtype=np.int64)
    cols_b = np.array([pi0[l] for l in t1_verts], dtype=np.int64)
    c_all = np.asarray((a_csr[:, cols_a] @ b_csr[:, cols_b].T).todense())
    seeded_a = set(t1_verts)
    seeded_b = set(t2_verts)
    free_a = np.array([i for i in range(a.n) if i not in seeded_a], dtype=np.int64)
    free_b = np.array([k for k in range(b.n) if k not in seeded_b], dtype=np.int64)
    pi1 = {}
    if len(free_a) and len(free_b):
        c_free = c_all[np.ix_(free_a, free_b)]
        n_ref = min(a.n, b.n)
        tau3 = nearest_rank_quantile(c_free.ravel(), (n_ref - 1) / n_ref)
        ui, uk = np.nonzero(c_free >= tau3)
        cand = BipartiteCandidates(len(free_a), len(free_b), list(zip(ui.tolist(), uk.tolist())))
        local = max_bipartite_matching(cand)
        pi1 = {int(free_a[i]): int(free_b[k]) for i, k in local.items()}
    pi = dict(pi0)
    pi.update(pi1)
    sim = similarity_common_neighbors(a, b, pi)
    d_eff = min(d, b.n)
    rows = []
    for i in range(a.n):
        picked = np.argsort(-sim[i], kind="stable")[:d_eff]
        rows.append(tuple(sorted(int(j) for j in picked)))
    return CandidateMatrix(a.n, b.n, d_eff, rows)


def refine_matching(a: Graph, b: Graph, init_rows, n_rep: int, tau=None) -> MatchResult:
    """Iterate linear assignment on the common-neighbor score matrix.

    Starting from per-a-vertex candidate sets, each round scores every
    pair by common neighbors under the current matrix and re-solves the
    assignment. A per-row streak counter increments when the row of the
    matching matrix is unchanged from the previous round and resets to 0
    otherwise; final flag is 1 iff streak > tau (default n_rep/10).
    """
    if n_rep < 1:
        raise ValueError("n_rep must be at least 1")
    if tau is None:
        tau = n_rep / 10
    a_csr = a.to_csr()
    b_csr = b.to_csr()
    prev_sets = [frozenset(row) for row in init_rows]
    ri, ci = [], []
    for i, row in enumerate(prev_sets):
        for j in sorted(row):
            ri.append(i)
            ci.append(j)
    ri = np.array(ri, dtype=np.int64)
    ci = np.array(ci, dtype=np.int64)
    streak = np.zeros(a.n, dtype=np.int64)
    assign_prev = None
    assignment = {}
    for t in range(n_rep):
        p = sparse.csr_matrix(
            (np.ones(len(ri), dtype=np.float64), (ri, ci)), shape=(a.n, b.n)
        )
        score = np.asarray((a_csr @ p @ b_csr).todense())
        assignment, _ = linear_assignment_max(score)
        assign_arr = np.full(a.n, -1, dtype=np.int64)
        for i, j in assignment.items():
            assign_arr[i] = j
        if t == 0:
            # row-vs-row comparison against the initial candidate matrix
            unchanged = np.array(
                [
                    (assign_arr[i] >= 0 and prev_sets[i] == frozenset((int(assign_arr[i]),)))
                    or (assign_arr[i] < 0 and not prev_sets[i])
                    for i in range(a.n)
                ]
            )
        else:
            unchanged = assign_arr == assign_prev
        streak = np.where(unchanged, streak + 1, 0)
        assign_prev = assign_arr
        ri = np.array(sorted(assignment), dtype=np.int64)
        ci = np.array([assignment[i] for i in sorted(assignment)], dtype=np.int64)
    flags = {i: int(streak[i] > tau) for i in assignment}
    history = {i: int(streak[i]) for i in assignment}
    return MatchResult(assignment, flags, history)


def ee_post(a: Graph, b: Graph, d: int, n_rep: int, tau=None, w=None) -> MatchResult:
    """Edge-exploited matching refined by iterated linear assignment."""
    cand = ee_match(a, b, d, w=w)
    return refine_matching(a, b, cand.rows, n_rep, tau)
