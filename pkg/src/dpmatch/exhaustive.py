"""Exhaustive ground truth for the matching objective on tiny instances.

Maximizes the edge-agreement inner product over all subset pairs and all
permutations between them. Only useful for validating heuristics; refuses
anything beyond 8 vertices on the smaller side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass
class OracleResult:
    best_value: int
    best_assignment: dict
    subset_sizes: tuple


def exhaustive_match(a, b, max_n: int = 8) -> OracleResult:
    """Brute-force maximum of the edge-agreement objective.

    The objective counts ordered vertex pairs, so a single shared edge
    contributes 2. Enumeration order is subset size ascending, then both
    subsets lexicographic, then permutations lexicographic; the first
    witness of the best value is returned, which fixes ties.
    """
    if max_n > 8:
        raise ValueError("max_n above 8 is refused; the search is factorial")
    m_cap = min(a.n, b.n)
    if m_cap > max_n:
        raise ValueError(f"smaller side has {m_cap} vertices, above the cap {max_n}")
    adj_a = [set(row) for row in a.adj]
    adj_b = [set(row) for row in b.adj]
    best_value = 0
    best_assignment = {}
    sizes = tuple(range(m_cap + 1))
    for m in range(1, m_cap + 1):
        pair_idx = list(itertools.combinations(range(m), 2))
        for sub_a in itertools.combinations(range(a.n), m):
            edges_a = [(x, y) for x, y in pair_idx if sub_a[y] in adj_a[sub_a[x]]]
            if 2 * len(edges_a) <= best_value:
                continue  # even a perfect permutation cannot beat the best
            for sub_b in itertools.combinations(range(b.n), m):
                for perm in itertools.permutations(range(m)):
                    agree = 0
                    for x, y in edges_a:
                        if sub_b[perm[y]] in adj_b[sub_b[perm[x]]]:
                            agree += 1
                    value = 2 * agree
                    if value > best_value:
                        best_value = value
                        best_assignment = {
                            sub_a[x]: sub_b[perm[x]] for x in range(m)
                        }
    return OracleResult(best_value, best_assignment, sizes)
