"""Assignment engines: maximum-cardinality bipartite matching and
maximum-weight linear assignment.

Both are deterministic: Hopcroft-Karp scans vertices and adjacency in
index order; the linear assignment solver's tie choice is fixed for a
given input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass
class BipartiteCandidates:
    """Candidate edges of a bipartite matching instance.

    Edges are deduplicated and sorted on construction; out-of-range
    endpoints raise.
    """

    n_left: int
    n_right: int
    edges: list = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n_left and 0 <= v < self.n_right):
                raise ValueError(f"candidate edge ({u},{v}) out of range")
            seen.add((u, v))
        self.edges = sorted(seen)


_INF = float("inf")


def max_bipartite_matching(c: BipartiteCandidates) -> dict[int, int]:
    """Maximum-cardinality matching via Hopcroft-Karp.

    Returns a partial injective map left -> right.
    """
    adj = [[] for _ in range(c.n_left)]
    for u, v in c.edges:
        adj[u].append(v)

    match_l = [-1] * c.n_left
    match_r = [-1] * c.n_right
    dist = [0.0] * c.n_left

    def bfs() -> bool:
        queue = []
        for u in range(c.n_left):
            if match_l[u] == -1:
                dist[u] = 0.0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(c.n_left):
            if match_l[u] == -1:
                dfs(u)
    return {u: v for u, v in enumerate(match_l) if v != -1}


def linear_assignment_max(m) -> tuple[dict[int, int], float]:
    """Assignment maximizing the sum of selected entries, plus that sum.

    Rectangular inputs are zero-padded to square; vertices matched to a
    padding row or column are reported as unassigned, so the returned map
    is total on the smaller side.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("score matrix must be 2-dimensional")
    n_a, n_b = m.shape
    if n_a == 0 or n_b == 0:
        return {}, 0.0
    if not np.isfinite(m).all():
        raise ValueError("score matrix entries must be finite")
    k = max(n_a, n_b)
    padded = np.zeros((k, k), dtype=np.float64)
    padded[:n_a, :n_b] = m
    rows, cols = linear_sum_assignment(padded, maximize=True)
    assignment = {}
    value = 0.0
    for r, cc in zip(rows, cols):
        if r < n_a and cc < n_b:
            assignment[int(r)] = int(cc)
            value += m[r, cc]
    return assignment, float(value)
