"""Undirected simple graphs stored as sorted adjacency lists.

Vertices are 0-based. Graphs are immutable after construction; every
constructor enforces symmetry, no self-loops, and strictly increasing
neighbor lists.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse


class Graph:
    """Immutable undirected simple graph.

    ``adj[i]`` is the strictly increasing tuple of neighbors of vertex i.
    Values are safe to share across threads; nothing mutates after init.
    """

    __slots__ = ("n", "adj", "_degrees", "_csr")

    def __init__(self, n: int, adj):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = tuple(tuple(row) for row in adj)
        if len(adj) != n:
            raise ValueError("adjacency length does not match vertex count")
        for i, row in enumerate(adj):
            prev = -1
            for j in row:
                if not 0 <= j < n:
                    raise ValueError(f"neighbor {j} of vertex {i} out of range")
                if j == i:
                    raise ValueError(f"self-loop at vertex {i}")
                if j <= prev:
                    raise ValueError(f"adjacency of vertex {i} not strictly increasing")
                prev = j
        # symmetry check via edge multiset equality in both directions
        fwd = {(i, j) for i, row in enumerate(adj) for j in row}
        for i, j in fwd:
            if (j, i) not in fwd:
                raise ValueError(f"edge ({i},{j}) lacks its mirror")
        self.n = n
        self.adj = adj
        self._degrees = None
        self._csr = None

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = np.array([len(row) for row in self.adj], dtype=np.int64)
        return self._degrees

    def degree(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError(f"vertex {i} out of range")
        return len(self.adj[i])

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adj) // 2

    def edges(self):
        """Yield edges (i, j) with i < j in lexicographic order."""
        for i, row in enumerate(self.adj):
            for j in row:
                if j > i:
                    yield (i, j)

    def has_edge(self, i: int, j: int) -> bool:
        row = self.adj[i]
        lo, hi = 0, len(row)
        while lo < hi:
            mid = (lo + hi) // 2
            if row[mid] < j:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(row) and row[lo] == j

    def to_csr(self) -> sparse.csr_matrix:
        """Adjacency as a float CSR matrix (cached)."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(self.degrees, out=indptr[1:])
            indices = np.fromiter(
                (j for row in self.adj for j in row), dtype=np.int64, count=int(indptr[-1])
            )
            data = np.ones(len(indices), dtype=np.float64)
            self._csr = sparse.csr_matrix((data, indices, indptr), shape=(self.n, self.n))
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def from_edge_list(n: int, edges) -> Graph:
    """Build a graph from an edge list.

    Self-loops and duplicate edges are dropped silently; endpoints outside
    [0, n) raise ValueError.
    """
    neighbor_sets = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) has an endpoint outside [0,{n})")
        if u == v:
            continue
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    return Graph(n, [sorted(s) for s in neighbor_sets])


def induced_subgraph(g: Graph, s) -> tuple[Graph, dict[int, int]]:
    """Subgraph on vertex set ``s`` plus the old->new index map.

    New indices follow the sorted order of ``s``.
    """
    s = list(s)
    if len(set(s)) != len(s):
        raise ValueError("vertex set contains duplicates")
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    s.sort()
    old_to_new = {old: new for new, old in enumerate(s)}
    adj = [[old_to_new[j] for j in g.adj[old] if j in old_to_new] for old in s]
    return Graph(len(s), adj), old_to_new


def permute(g: Graph, pi) -> Graph:
    """Relabel vertices: edge (i, j) in g becomes (pi[i], pi[j])."""
    pi = list(pi)
    if len(pi) != g.n or sorted(pi) != list(range(g.n)):
        raise ValueError("pi is not a bijection on the vertex set")
    adj = [()] * g.n
    for i, row in enumerate(g.adj):
        adj[pi[i]] = sorted(pi[j] for j in row)
    return Graph(g.n, adj)


def threshold_to_graph(w, t: float) -> Graph:
    """Graph with an edge wherever the symmetric matrix meets the threshold.

    Edge (i, j) present iff i != j and w[i][j] >= t.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(w, w.T):
        raise ValueError("matrix must be symmetric")
    mask = w >= t
    np.fill_diagonal(mask, False)
    return Graph(w.shape[0], [tuple(np.nonzero(row)[0]) for row in mask])


def read_edge_list(path, one_based: bool = False) -> Graph:
    """Parse an edge-list text file.

    One edge per line as two whitespace-separated integers; lines starting
    with '#' are ignored. An optional header line "n <count>" fixes the
    vertex count, otherwise n = max index + 1. With ``one_based`` the
    endpoints are shifted down by one on ingest.
    """
    n_declared = None
    pairs = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if tokens[0] == "n":
                if len(tokens) != 2:
                    raise ValueError(f"line {lineno}: malformed header")
                if n_declared is not None:
                    raise ValueError(f"line {lineno}: duplicate header")
                n_declared = int(tokens[1])
                continue
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: expected two endpoints")
            u, v = int(tokens[0]), int(tokens[1])
            if one_based:
                u, v = u - 1, v - 1
            pairs.append((u, v))
    if n_declared is not None:
        n = n_declared
    else:
        n = max((max(u, v) for u, v in pairs), default=-1) + 1
    return from_edge_list(n, pairs)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as f:
        f.write(f"n {g.n}\n")
        for i, j in g.edges():
            f.write(f"{i} {j}\n")


def read_matrix(path) -> np.ndarray:
    """Parse a dense matrix file: header line "n <count>", then the rows."""
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "n":
        raise ValueError('matrix file must start with a "n <count>" header')
    n = int(header[1])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [float(tok) for tok in ln.split()]
        if len(row) != n:
            raise ValueError("matrix row width does not match header")
        rows.append(row)
    return np.array(rows, dtype=np.float64)


def write_matrix(w, path) -> None:
    w = np.asarray(w, dtype=np.float64)
    with open(path, "w") as f:
        f.write(f"n {w.shape[0]}\n")
        for row in w:
            f.write(" ".join(repr(float(x)) for x in row) + "\n")
