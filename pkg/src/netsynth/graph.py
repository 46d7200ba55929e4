"""Undirected simple graphs and the hop-distance measures built on them."""
from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

import numpy as np

from . import _kernels


class GraphError(ValueError):
    """Base class for graph mutation and measurement errors."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class MissingEdgeError(GraphError):
    pass


class NodeRangeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Neighbors are stored as sets; ``degree`` is kept in sync on every
    mutation so ``sum(degree) == 2 * m`` always holds.
    """

    __slots__ = ("n", "adj", "degree", "m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n = int(n)
        self.adj: list[set[int]] = [set() for _ in range(self.n)]
        self.degree: list[int] = [0] * self.n
        self.m = 0
        for u, v in edges:
            self.add_edge(u, v)

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise NodeRangeError(f"node {u} outside 0..{self.n - 1}")

    def add_edge(self, u: int, v: int) -> "Graph":
        u, v = int(u), int(v)
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise SelfLoopError(f"self-loop at node {u}")
        if v in self.adj[u]:
            raise DuplicateEdgeError(f"edge ({u}, {v}) already present")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.degree[u] += 1
        self.degree[v] += 1
        self.m += 1
        return self

    def remove_edge(self, u: int, v: int) -> "Graph":
        """Remove edge (u, v).  Connectivity is not checked."""
        u, v = int(u), int(v)
        self._check_node(u)
        self._check_node(v)
        if v not in self.adj[u]:
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.degree[u] -= 1
        self.degree[v] -= 1
        self.m -= 1
        return self

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adj[u]

    def neighbors(self, u: int) -> list[int]:
        return sorted(self.adj[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)

    def edge_array(self) -> np.ndarray:
        return np.array(list(self.edges()), dtype=np.int64).reshape(-1, 2)

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g.adj = [set(s) for s in self.adj]
        g.degree = list(self.degree)
        g.m = self.m
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def to_table(self, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Padded neighbor table and degree vector used by the kernels."""
        width = self.n if cap is None else max(cap, max(self.degree, default=0))
        nbr = np.zeros((self.n, max(width, 1)), dtype=np.int32)
        deg = np.zeros(self.n, dtype=np.int64)
        for u, nb in enumerate(self.adj):
            row = sorted(nb)
            nbr[u, : len(row)] = row
            deg[u] = len(row)
        return nbr, deg

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, edges)


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    g = path_graph(n)
    if n > 2:
        g.add_edge(n - 1, 0)
    return g


def star_graph(n: int) -> Graph:
    """Star on n nodes with center 0."""
    return Graph(n, ((0, i) for i in range(1, n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise GraphError("graph has no nodes")
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                queue.append(y)
    return count == g.n


def _require_connected(g: Graph, min_nodes: int = 1) -> None:
    if g.n < min_nodes:
        raise GraphError(f"need at least {min_nodes} nodes, got {g.n}")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs hop counts from n BFS traversals."""
    _require_connected(g)
    nbr, deg = g.to_table()
    return _kernels.all_pairs_hops(nbr, deg, g.n)


def _mean_distance(g: Graph, sources: np.ndarray) -> float:
    nbr, deg = g.to_table()
    total = _kernels.bfs_distance_sum(nbr, deg, sources, g.n)
    if total < 0:
        raise DisconnectedGraphError("graph is not connected")
    return total / (len(sources) * (g.n - 1))


def avg_shortest_path(g: Graph) -> float:
    """Mean hop distance over all unordered pairs of distinct nodes."""
    if g.n < 2:
        raise GraphError("average shortest path needs at least 2 nodes")
    return _mean_distance(g, np.arange(g.n, dtype=np.int64))


def approx_avg_shortest_path(g: Graph, sample_size: int, seed: int) -> float:
    """Mean hop distance estimated from BFS trees of ``sample_size`` sources.

    Sources are drawn without replacement, so ``sample_size == n`` gives the
    exact value.
    """
    if g.n < 2:
        raise GraphError("average shortest path needs at least 2 nodes")
    if not 1 <= sample_size <= g.n:
        raise ValueError(f"sample_size must be in 1..{g.n}")
    rng = np.random.default_rng(seed)
    sources = np.sort(rng.choice(g.n, size=sample_size, replace=False)).astype(np.int64)
    return _mean_distance(g, sources)


def diameter(g: Graph) -> int:
    if g.n < 1:
        raise GraphError("graph has no nodes")
    nbr, deg = g.to_table()
    d = _kernels.bfs_eccentricity_max(nbr, deg, g.n)
    if d < 0:
        raise DisconnectedGraphError("graph is not connected")
    return int(d)


def local_clustering(g: Graph) -> list[float]:
    out = []
    for v in range(g.n):
        k = g.degree[v]
        if k < 2:
            out.append(0.0)
            continue
        nb = g.adj[v]
        links = sum(len(g.adj[x] & nb) for x in nb) // 2
        out.append(links / (k * (k - 1) / 2))
    return out


def clustering_coefficient(g: Graph) -> float:
    """Mean local clustering; nodes with degree < 2 count as 0."""
    if g.n < 3:
        raise GraphError("clustering needs at least 3 nodes")
    return float(np.mean(local_clustering(g)))
