"""The six reference networks (N = 300, a = 0, b = 1) and their check."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .analysis import FitError, fit_power_law_mle
from .community import CommunityParams, modularity, optimize_community
from .graph import Graph, avg_shortest_path
from .objectives import ModelParams
from .optimizer import OptimizerConfig, RunTrace, optimize

GAMMA_TOL = 0.3
Y_TOL = 0.05


@dataclass(frozen=True)
class Row:
    label: str
    e: int
    c: float
    x_min: int
    gamma: float
    y: float
    community: bool = False

    def model(self, n: int = 300) -> ModelParams:
        return ModelParams(n, 0.0, 1.0, self.x_min, self.c, self.e)


ROWS = (
    Row("a", 762, 3.9, 2, 2.10, 3.9),
    Row("b", 762, 5.5, 2, 2.11, 5.5, community=True),
    Row("c", 762, 7.0, 2, 2.13, 7.0),
    Row("d", 1157, 3.1, 3, 2.16, 3.1),
    Row("e", 1157, 4.5, 3, 2.19, 4.5, community=True),
    Row("f", 1157, 5.0, 3, 2.28, 5.0),
)
ROW_BY_LABEL = {r.label: r for r in ROWS}


@dataclass
class RowResult:
    row: Row
    seed: int
    graph: Graph
    trace: RunTrace
    gamma: Optional[float]
    y: float
    modularity: Optional[float] = None
    wall_time: float = 0.0

    @property
    def gamma_ok(self) -> bool:
        return self.gamma is not None and abs(self.gamma - self.row.gamma) <= GAMMA_TOL

    @property
    def y_ok(self) -> bool:
        return abs(self.y - self.row.c) <= Y_TOL

    @property
    def passed(self) -> bool:
        return self.gamma_ok and self.y_ok


def run_row(row: Row, seed: int = 0, config: Optional[OptimizerConfig] = None,
            k: int = 2, s: float = 0.5) -> RowResult:
    """Generate one reference network; y is re-measured from the graph."""
    start = time.perf_counter()
    cfg = replace(config or OptimizerConfig(), seed=seed)
    model = row.model()
    q = None
    if row.community:
        cp = CommunityParams.planted(model, k, s, seed)
        g, trace = optimize_community(cp, cfg)
        q = modularity(g, cp.assignment)
    else:
        g, trace = optimize(model, cfg)
    try:
        gamma = fit_power_law_mle(g.degree, row.x_min).gamma_hat
    except FitError:
        gamma = None
    y = avg_shortest_path(g)
    return RowResult(row, seed, g, trace, gamma, y, q, time.perf_counter() - start)


def _job(args):
    return run_row(*args)


def run_table(rows: Iterable[Row] = ROWS, seeds: Sequence[int] = (0,),
              config: Optional[OptimizerConfig] = None, workers: int = 1) -> list[RowResult]:
    jobs = [(r, s, config) for r in rows for s in seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_job, jobs))
    return [_job(j) for j in jobs]


def format_table(results: Sequence[RowResult]) -> str:
    head = f"{'row':<4}{'seed':>5}{'E':>6}{'c':>6}{'x_min':>6}{'gamma':>8}{'ref':>6}{'y':>8}{'ref':>6}  result"
    lines = [head]
    for r in results:
        g = f"{r.gamma:.2f}" if r.gamma is not None else "-"
        lines.append(
            f"{r.row.label:<4}{r.seed:>5}{r.row.e:>6}{r.row.c:>6.1f}{r.row.x_min:>6}"
            f"{g:>8}{r.row.gamma:>6.2f}{r.y:>8.3f}{r.row.y:>6.1f}  {'pass' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
