"""Node-degree and edge-degree objectives plus the analytic power-law forms.

The edge degree of edge (i, j) relative to node i is ``x_i**a * x_j**b``.
F1 is the total node degree, F2 the total edge degree over ordered adjacent
pairs, so every undirected edge contributes once from each side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, GraphError


class InfeasibleParams(ValueError):
    """Raised when model parameters admit no connected graph."""


@dataclass(frozen=True)
class ModelParams:
    n: int
    a: float
    b: float
    x_min: int
    c: float
    e: int

    def __post_init__(self):
        validate_params(self.n, self.a, self.b, self.x_min, self.c, self.e)

    @property
    def f1(self) -> int:
        return 2 * self.e


def validate_params(n: int, a: float, b: float, x_min: int, c: float, e: int) -> None:
    problems = []
    if a < 0 or b < 0:
        problems.append("exponents a, b must be non-negative")
    if not n > x_min >= 1:
        problems.append(f"need n > x_min >= 1 (n={n}, x_min={x_min})")
    if c < 1:
        problems.append(f"target path length c={c} below 1")
    if e < n - 1:
        problems.append(f"e={e} edges cannot connect {n} nodes")
    if e < math.ceil(n * x_min / 2):
        problems.append(f"e={e} edges cannot give {n} nodes degree >= {x_min}")
    if e > n * (n - 1) // 2:
        problems.append(f"e={e} exceeds the complete graph on {n} nodes")
    if problems:
        raise InfeasibleParams("; ".join(problems))


@dataclass(frozen=True)
class ObjectiveValues:
    f1: int
    f2: float


def edge_degree(x_i: float, x_j: float, a: float, b: float) -> float:
    """Degree of edge (i, j) as seen from node i."""
    return float(x_i) ** a * float(x_j) ** b


def f1(g: Graph) -> int:
    return sum(g.degree)


def f2(g: Graph, a: float, b: float) -> float:
    nbr, deg = g.to_table()
    labels = np.zeros(g.n, dtype=np.int64)
    return float(_kernels.total_f2(nbr, deg, g.n, float(a), float(b), labels, 1.0))


def objective_values(g: Graph, a: float, b: float) -> ObjectiveValues:
    return ObjectiveValues(f1(g), f2(g, a, b))


def f2_delta(
    g: Graph,
    removed: tuple[int, int],
    added: tuple[int, int],
    a: float,
    b: float,
) -> float:
    """Change in F2 when ``removed`` is replaced by ``added``.

    The two edges may share an endpoint or be disjoint.  Only edges incident
    to a node whose degree changes are re-evaluated.
    """
    p, q = removed
    r, t = added
    if not g.has_edge(p, q):
        raise GraphError(f"removed edge {removed} not present")
    if r == t:
        raise GraphError("added edge is a self-loop")
    if (min(r, t), max(r, t)) == (min(p, q), max(p, q)):
        return 0.0
    if g.has_edge(r, t):
        raise GraphError(f"added edge {added} already present")

    touched = {p, q, r, t}

    def local(h: Graph) -> float:
        seen = set()
        total = 0.0
        for x in touched:
            for y in h.adj[x]:
                key = (x, y) if x < y else (y, x)
                if key in seen:
                    continue
                seen.add(key)
                dx, dy = h.degree[x], h.degree[y]
                total += edge_degree(dx, dy, a, b) + edge_degree(dy, dx, a, b)
        return total

    before = local(g)
    g.remove_edge(p, q)
    g.add_edge(r, t)
    try:
        if min(g.degree[x] for x in touched) < 1:
            raise GraphError("move leaves an isolated node")
        after = local(g)
    finally:
        g.remove_edge(r, t)
        g.add_edge(p, q)
    return after - before


def predicted_exponent(a: float, b: float) -> float:
    """Degree-distribution exponent the model predicts for proper c."""
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")
    return 1.0 + a + b


def discrete_power_pdf(x: int, a: float, b: float, n: int) -> float:
    """Normalised ``x**-(1+a+b)`` over the support ``1..n-1``."""
    if a + b <= 0:
        raise ValueError("a + b = 0 is the random-network regime; no power law")
    if not 1 <= x <= n - 1:
        raise ValueError(f"degree {x} outside support 1..{n - 1}")
    gamma = 1.0 + a + b
    support = np.arange(1, n, dtype=np.float64)
    norm = 1.0 / np.sum(support ** -gamma)
    return float(norm * float(x) ** -gamma)


def continuous_power_pdf(x: float, gamma: float, x_min: float) -> float:
    if gamma <= 1:
        raise ValueError("gamma must exceed 1 for a normalisable density")
    if x < x_min:
        raise ValueError("x below x_min")
    return (gamma - 1.0) / x_min * (x / x_min) ** -gamma
