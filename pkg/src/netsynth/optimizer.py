"""Greedy edge-rewiring search for the fixed-edge-budget model.

The edge budget fixes F1, so the search maximises F2 alone while steering
the average shortest path length ``y`` toward the target ``c``.  The default
move keeps one endpoint ``u`` of an edge (u, v) and swaps ``v`` for a new
endpoint ``w``; the ``"swap"`` move instead replaces the edge by a uniformly
drawn non-edge.  Either way edge count and connectivity are preserved.
"""
from __future__ import annotations

import heapq
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .graph import Graph
from .objectives import InfeasibleParams, ModelParams, ObjectiveValues, validate_params

log = logging.getLogger(__name__)

_STATUS = {
    _kernels.ST_BUDGET: "budget",
    _kernels.ST_STALLED: "stalled",
    _kernels.ST_NO_MOVES: "no_valid_moves",
}


@dataclass(frozen=True)
class OptimizerConfig:
    """Search hyperparameters.

    ``rule`` picks the greedy test. ``"strict"`` takes a move only when F2
    rises and ``|y - c|`` shrinks.  ``"lexicographic"`` also takes moves that
    raise F2 while leaving ``|y - c|`` unchanged, and moves that keep F2 and
    bring y closer.

    ``aspl_slack`` is the half-width of the band around ``c`` inside which
    path-length differences are ignored by the acceptance rule; with the
    default 0 the rule compares raw ``|y - c|``.
    """

    max_iters: int = 5_000_000
    stall_limit: int = 50_000
    aspl_tolerance: float = 0.05
    aspl_slack: float = 0.0
    seed: int = 0
    acceptance: str = "greedy"
    rule: str = "strict"
    move: str = "endpoint"
    anneal_t0: float = 0.05
    anneal_decay: float = 0.995
    aspl_mode: str = "exact"
    aspl_samples: int = 64

    def __post_init__(self):
        if self.max_iters <= 0:
            raise ValueError("max_iters must be positive")
        if self.stall_limit <= 0:
            raise ValueError("stall_limit must be positive")
        if self.aspl_tolerance <= 0:
            raise ValueError("aspl_tolerance must be positive")
        if not 0 <= self.aspl_slack <= self.aspl_tolerance:
            raise ValueError("aspl_slack must lie in [0, aspl_tolerance]")
        if self.acceptance not in ("greedy", "anneal"):
            raise ValueError(f"unknown acceptance mode {self.acceptance!r}")
        if self.rule not in ("strict", "lexicographic"):
            raise ValueError(f"unknown acceptance rule {self.rule!r}")
        if self.move not in ("endpoint", "swap"):
            raise ValueError(f"unknown move kind {self.move!r}")
        if not 0 < self.anneal_decay < 1:
            raise ValueError("anneal_decay must lie in (0, 1)")
        if self.anneal_t0 < 0:
            raise ValueError("anneal_t0 must be non-negative")
        if self.aspl_mode not in ("exact", "sampled"):
            raise ValueError(f"unknown aspl_mode {self.aspl_mode!r}")
        if self.aspl_samples < 1:
            raise ValueError("aspl_samples must be at least 1")


@dataclass(frozen=True)
class Move:
    removed: tuple[int, int]
    added: tuple[int, int]


@dataclass
class RunTrace:
    """Accepted-move history of one search.

    Row k of ``moves`` is (p, q, r, t): edge (p, q) was replaced by (r, t) at
    iteration ``iterations[k]``, after which the objective was ``f2[k]`` and
    the path length ``y[k]``.
    """

    c: float
    initial_edges: np.ndarray
    initial_f2: float
    initial_y: float
    iterations: np.ndarray
    moves: np.ndarray
    f2: np.ndarray
    y: np.ndarray
    final: ObjectiveValues
    final_y: float
    accepted: int
    rejected: int
    iterations_run: int
    status: str
    converged: bool
    wall_time: float
    extra: dict = field(default_factory=dict)

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.y - self.c)


def _prufer_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    seq = rng.integers(0, n, size=n - 2).tolist()
    count = [1] * n
    for x in seq:
        count[x] += 1
    leaves = [i for i in range(n) if count[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        count[x] -= 1
        if count[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _reaches(g: Graph, src: int, dst: int) -> bool:
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y == dst:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def init_random_connected(n: int, e: int, x_min: int, seed: int) -> Graph:
    """Random connected graph with exactly ``e`` edges and min degree ``x_min``.

    Built as a random labelled tree plus uniform extra edges, followed by a
    repair pass that rewires edges onto under-degree nodes.
    """
    validate_params(n, 0.0, 0.0, x_min, 1.0, e)
    rng = np.random.default_rng(seed)
    g = Graph(n, _prufer_tree(n, rng))
    extra = e - g.m
    total_pairs = n * (n - 1) // 2
    if extra > 0 and e > total_pairs // 2:
        free = [(i, j) for i in range(n) for j in range(i + 1, n) if not g.has_edge(i, j)]
        for k in rng.choice(len(free), size=extra, replace=False):
            g.add_edge(*free[k])
    else:
        while g.m < e:
            i, j = rng.integers(0, n, size=2)
            if i != j and not g.has_edge(i, j):
                g.add_edge(i, j)

    attempts = 0
    limit = 1000 * max(e, 1)
    edge_list = list(g.edges())
    while True:
        low = [v for v in range(n) if g.degree[v] < x_min]
        if not low:
            break
        z = low[0]
        attempts += 1
        if attempts > limit:
            raise InfeasibleParams(f"could not lift node {z} to degree {x_min}")
        k = int(rng.integers(len(edge_list)))
        p, q = edge_list[k]
        if rng.random() < 0.5:
            p, q = q, p
        if g.degree[q] <= x_min or p == z or q == z or g.has_edge(p, z):
            continue
        g.remove_edge(p, q)
        g.add_edge(p, z)
        if _reaches(g, q, p):
            edge_list[k] = (p, z)
        else:
            g.remove_edge(p, z)
            g.add_edge(p, q)
    return g


def propose_move(g: Graph, x_min: int, rng: np.random.Generator) -> Optional[Move]:
    """Draw one candidate rewiring; ``None`` if the draw breaks a constraint.

    An edge is picked uniformly, an endpoint ``u`` is kept at random and the
    other endpoint is replaced by a uniformly drawn node ``w``.
    """
    edges = list(g.edges())
    u, v = edges[int(rng.integers(len(edges)))]
    if rng.random() < 0.5:
        u, v = v, u
    w = int(rng.integers(g.n))
    return check_move(g, u, v, w, x_min)


def check_move(g: Graph, u: int, v: int, w: int, x_min: int) -> Optional[Move]:
    if w == u or w == v or not g.has_edge(u, v) or g.has_edge(u, w):
        return None
    if g.degree[v] <= x_min:
        return None
    g.remove_edge(u, v)
    g.add_edge(u, w)
    ok = _reaches(g, v, u)
    g.remove_edge(u, w)
    g.add_edge(u, v)
    return Move((u, v), (u, w)) if ok else None


def apply_move(g: Graph, move: Move) -> Graph:
    g.remove_edge(*move.removed)
    g.add_edge(*move.added)
    return g


def accept(
    before: tuple[float, float],
    after: tuple[float, float],
    c: float,
    mode: str = "greedy",
    temperature: float = 0.0,
    slack: float = 0.0,
    rng: Optional[np.random.Generator] = None,
    rule: str = "strict",
) -> bool:
    """Acceptance rule on (f2, y) pairs; see ``OptimizerConfig.rule``.

    In ``anneal`` mode a move failing the greedy test may still pass with
    probability ``exp(-penalty / temperature)``.
    """
    f2, y = before
    f2_new, y_new = after
    dev = max(abs(y - c), slack)
    dev_new = max(abs(y_new - c), slack)
    if rule == "strict":
        if f2_new > f2 and dev_new < dev:
            return True
    elif (f2_new > f2 and dev_new <= dev) or (f2_new >= f2 and dev_new < dev):
        return True
    if mode != "anneal" or temperature <= 0:
        return False
    penalty = 0.0
    if f2_new < f2:
        penalty += (f2 - f2_new) / abs(f2) if f2 else f2 - f2_new
    if dev_new > dev:
        penalty += (dev_new - dev) / c
    rng = rng if rng is not None else np.random.default_rng()
    return bool(rng.random() < math.exp(-penalty / temperature))


def _search(
    params: ModelParams,
    config: OptimizerConfig,
    labels: Optional[np.ndarray] = None,
    attenuation: float = 1.0,
) -> tuple[Graph, RunTrace]:
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    init_seed, kernel_seed, sample_seed = (int(x) for x in rng.integers(0, 2**31 - 1, size=3))
    g0 = init_random_connected(params.n, params.e, params.x_min, init_seed)
    n = params.n

    if config.aspl_mode == "exact" or config.aspl_samples >= n:
        sources = np.arange(n, dtype=np.int64)
    else:
        srng = np.random.default_rng(sample_seed)
        sources = np.sort(srng.choice(n, size=config.aspl_samples, replace=False)).astype(np.int64)
    pair_norm = float(len(sources) * (n - 1))

    if labels is None:
        labels = np.zeros(n, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)

    nbr, deg = g0.to_table()
    edges = g0.edge_array()
    initial_edges = edges.copy()
    initial_f2 = float(_kernels.total_f2(nbr, deg, n, params.a, params.b, labels, attenuation))
    initial_y = _kernels.bfs_distance_sum(nbr, deg, sources, n) / pair_norm

    mode = _kernels.ANNEAL if config.acceptance == "anneal" else _kernels.GREEDY
    out = _kernels.rewire_loop(
        nbr, deg, edges, n, params.x_min, float(params.a), float(params.b),
        labels, float(attenuation), float(params.c), float(config.aspl_slack),
        sources, pair_norm, int(config.max_iters), int(config.stall_limit),
        int(100 * params.e), mode, config.rule == "strict", config.move == "swap",
        float(config.anneal_t0), float(config.anneal_decay), kernel_seed,
    )
    status, iters, rejected, _, _, move_log, value_log, n_acc, best_edges, best_f2, best_dist = out

    g = Graph(n, (tuple(map(int, e)) for e in best_edges))
    final_y = best_dist / pair_norm
    converged = abs(final_y - params.c) <= config.aspl_tolerance
    trace = RunTrace(
        c=params.c,
        initial_edges=initial_edges,
        initial_f2=initial_f2,
        initial_y=initial_y,
        iterations=move_log[:, 0].copy(),
        moves=move_log[:, 2:6].copy(),
        f2=value_log[:, 0].copy(),
        y=value_log[:, 1].copy(),
        final=ObjectiveValues(2 * g.m, float(best_f2)),
        final_y=float(final_y),
        accepted=int(n_acc),
        rejected=int(rejected),
        iterations_run=int(iters),
        status=_STATUS[int(status)],
        converged=bool(converged),
        wall_time=time.perf_counter() - start,
    )
    log.debug("search done: %s after %d iterations, y=%.4f f2=%.1f",
              trace.status, iters, final_y, best_f2)
    return g, trace


def optimize(params: ModelParams, config: OptimizerConfig = OptimizerConfig()) -> tuple[Graph, RunTrace]:
    """Maximise F2 at fixed edge budget with y pulled toward ``params.c``.

    The returned trace has ``converged`` False when the budget ran out (or
    the search stalled) outside the ``aspl_tolerance`` band; the graph is
    still the best one found.
    """
    return _search(params, config)


@dataclass
class SweepPoint:
    e: int
    graph: Optional[Graph]
    values: Optional[ObjectiveValues]
    trace: Optional[RunTrace]
    error: Optional[str] = None


def _sweep_one(args):
    params, config = args
    try:
        g, trace = optimize(params, config)
        return SweepPoint(params.e, g, trace.final, trace)
    except (InfeasibleParams, ValueError) as exc:
        return SweepPoint(params.e, None, None, None, str(exc))


def pareto_sweep(
    n: int,
    a: float,
    b: float,
    x_min: int,
    c: float,
    e_grid: Sequence[int],
    config: OptimizerConfig = OptimizerConfig(),
    workers: int = 1,
) -> list[SweepPoint]:
    """One optimise run per edge budget; sorted by budget.

    Infeasible grid points come back with ``error`` set instead of aborting
    the sweep.
    """
    jobs = []
    points = []
    for e in sorted(e_grid):
        try:
            jobs.append((ModelParams(n, a, b, x_min, c, e), config))
        except InfeasibleParams as exc:
            points.append(SweepPoint(e, None, None, None, str(exc)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points.extend(pool.map(_sweep_one, jobs))
    else:
        points.extend(_sweep_one(j) for j in jobs)
    return sorted(points, key=lambda p: p.e)


def replay(trace: RunTrace, n: int):
    """Yield the graph after every accepted move (one object, mutated)."""
    g = Graph(n, (tuple(map(int, e)) for e in trace.initial_edges))
    for p, q, r, t in trace.moves:
        g.remove_edge(int(p), int(q))
        g.add_edge(int(r), int(t))
        yield g
