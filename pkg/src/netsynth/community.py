"""Planted-community variant of the model.

Nodes carry a community label.  An edge between two communities has its
edge degree multiplied by an attenuation factor ``s`` in (0, 1]; ``s = 1``
is the base model.  The two-level similarity distance (0 inside a
community, 1 across) is the exponent of ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph
from .objectives import ModelParams
from .optimizer import OptimizerConfig, RunTrace, _search


@dataclass(frozen=True)
class CommunityParams:
    model: ModelParams
    k: int
    assignment: tuple[int, ...]
    s: float = 0.5

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need at least two communities")
        if len(self.assignment) != self.model.n:
            raise ValueError("assignment must label every node")
        if not 0 < self.s <= 1:
            raise ValueError("attenuation s must lie in (0, 1]")
        if set(self.assignment) - set(range(self.k)):
            raise ValueError(f"labels must lie in 0..{self.k - 1}")

    @classmethod
    def planted(cls, model: ModelParams, k: int, s: float = 0.5, seed: int = 0) -> "CommunityParams":
        return cls(model, k, tuple(assign_communities(model.n, k, seed)), s)

    def labels(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)


def assign_communities(n: int, k: int, seed: int) -> list[int]:
    """Balanced random partition of ``n`` nodes into ``k`` labelled groups."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > n:
        raise ValueError(f"cannot split {n} nodes into {k} communities")
    rng = np.random.default_rng(seed)
    labels = [0] * n
    for i, v in enumerate(rng.permutation(n)):
        labels[int(v)] = i % k
    return labels


def f2_community(g: Graph, params: CommunityParams) -> float:
    nbr, deg = g.to_table()
    m = params.model
    return float(_kernels.total_f2(nbr, deg, g.n, float(m.a), float(m.b), params.labels(), float(params.s)))


def optimize_community(params: CommunityParams, config: OptimizerConfig = OptimizerConfig()) -> tuple[Graph, RunTrace]:
    g, trace = _search(params.model, config, labels=params.labels(), attenuation=params.s)
    trace.extra["k"] = params.k
    trace.extra["s"] = params.s
    return g, trace


def modularity(g: Graph, assignment) -> float:
    """Newman-Girvan modularity of a labelled partition."""
    if len(assignment) != g.n:
        raise ValueError("assignment must label every node")
    if g.m == 0:
        return 0.0
    inside: dict[int, int] = {}
    degree_sum: dict[int, int] = {}
    for v in range(g.n):
        c = assignment[v]
        degree_sum[c] = degree_sum.get(c, 0) + g.degree[v]
    for u, v in g.edges():
        if assignment[u] == assignment[v]:
            inside[assignment[u]] = inside.get(assignment[u], 0) + 1
    two_m = 2.0 * g.m
    return sum(inside.get(c, 0) / g.m - (d / two_m) ** 2 for c, d in degree_sum.items())
