"""Degree statistics, power-law fits, box covering and type classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    avg_shortest_path,
    clustering_coefficient,
    diameter,
    distance_matrix,
)


class FitError(ValueError):
    pass


class InsufficientTail(FitError):
    pass


class DegenerateSample(FitError):
    """All tail samples share one value; no finite exponent exists."""


class TooFewScales(ValueError):
    pass


@dataclass(frozen=True)
class DegreeHistogram:
    degrees: tuple[int, ...]
    counts: tuple[int, ...]
    probabilities: tuple[float, ...]

    def rows(self):
        return list(zip(self.degrees, self.counts, self.probabilities))


def degree_histogram(g: Graph) -> DegreeHistogram:
    values, counts = np.unique(np.asarray(g.degree, dtype=np.int64), return_counts=True)
    total = counts.sum()
    return DegreeHistogram(
        tuple(int(v) for v in values),
        tuple(int(c) for c in counts),
        tuple(float(c / total) for c in counts),
    )


@dataclass(frozen=True)
class PowerLawFit:
    gamma_hat: float
    x_min_used: int
    ks_statistic: float
    n_tail: int
    method: str = "exact"


def _discrete_ks(tail: np.ndarray, gamma: float, x_min: int) -> float:
    tail = np.sort(tail)
    xs = np.arange(x_min, tail[-1] + 1, dtype=np.float64)
    model_cdf = np.cumsum(xs ** -gamma) / zeta(gamma, x_min)
    emp_cdf = np.searchsorted(tail, xs, side="right") / len(tail)
    return float(np.max(np.abs(emp_cdf - model_cdf)))


def _approx_gamma(tail: np.ndarray, x_min: int) -> float:
    return 1.0 + len(tail) / float(np.sum(np.log(tail / (x_min - 0.5))))


def _exact_gamma(tail: np.ndarray, x_min: int) -> float:
    # negative log-likelihood of the zeta distribution truncated below at x_min
    n = len(tail)
    log_sum = float(np.sum(np.log(tail)))

    def nll(g: float) -> float:
        return g * log_sum + n * math.log(zeta(g, x_min))

    start = _approx_gamma(tail, x_min)
    hi = max(8.0, 2.0 * start)
    res = minimize_scalar(nll, bounds=(1.0 + 1e-6, hi), method="bounded",
                          options={"xatol": 1e-8})
    return float(res.x)


def fit_power_law_mle(degrees: Sequence[int], x_min: int, method: str = "exact") -> PowerLawFit:
    """Discrete power-law exponent for the samples at or above ``x_min``.

    ``method="exact"`` maximises the Hurwitz-zeta likelihood numerically;
    ``method="approx"`` uses the closed form
    ``1 + n / sum(ln(x / (x_min - 1/2)))``, which is biased for small x_min.
    """
    if x_min < 1:
        raise ValueError("x_min must be at least 1")
    arr = np.asarray(degrees, dtype=np.float64)
    tail = arr[arr >= x_min]
    if len(tail) < 10:
        raise InsufficientTail(f"only {len(tail)} samples >= {x_min}")
    if np.all(tail == tail[0]):
        raise DegenerateSample(f"all {len(tail)} tail samples equal {int(tail[0])}")
    if method == "exact":
        gamma = _exact_gamma(tail, x_min)
    elif method == "approx":
        gamma = _approx_gamma(tail, x_min)
    else:
        raise ValueError(f"unknown method {method!r}")
    ks = _discrete_ks(tail, gamma, x_min)
    return PowerLawFit(gamma, int(x_min), ks, int(len(tail)), method)


def fit_power_law_scan(degrees: Sequence[int], min_tail: int = 10, method: str = "exact") -> PowerLawFit:
    """Pick the cutoff minimising the KS distance, for graphs of unknown x_min."""
    arr = np.asarray(degrees, dtype=np.int64)
    best = None
    for cut in np.unique(arr[arr >= 1]):
        if np.count_nonzero(arr >= cut) < min_tail:
            break
        try:
            fit = fit_power_law_mle(arr, int(cut), method)
        except DegenerateSample:
            continue
        if best is None or fit.ks_statistic < best.ks_statistic:
            best = fit
    if best is None:
        raise InsufficientTail("no cutoff leaves a usable tail")
    return best


def sample_discrete_power_law(gamma: float, x_min: int, size: int, seed: int) -> np.ndarray:
    """Exact draws from p(x) proportional to x**-gamma on x >= x_min."""
    if gamma <= 1:
        raise ValueError("gamma must exceed 1")
    rng = np.random.default_rng(seed)
    out = np.empty(0, dtype=np.int64)
    while len(out) < size:
        draw = rng.zipf(gamma, size=2 * (size - len(out)) + 16)
        out = np.concatenate([out, draw[draw >= x_min]])
    return out[:size]


@njit(cache=True)
def _greedy_boxes(dist, order, l_b):
    """First-fit box count for one node order; boxes are linked lists."""
    n = order.shape[0]
    head = np.full(n, -1, np.int64)
    nxt = np.full(n, -1, np.int64)
    n_boxes = 0
    for idx in range(n):
        v = order[idx]
        placed = False
        for b in range(n_boxes):
            u = head[b]
            ok = True
            while u >= 0:
                if dist[u, v] >= l_b:
                    ok = False
                    break
                u = nxt[u]
            if ok:
                nxt[v] = head[b]
                head[b] = v
                placed = True
                break
        if not placed:
            head[n_boxes] = v
            n_boxes += 1
    return n_boxes


@dataclass(frozen=True)
class BoxCoverResult:
    sizes: tuple[int, ...]
    counts: tuple[int, ...]
    d_b: float
    r2: float
    n_fit: int = 0  # box sizes used by the fit

    def rows(self):
        return list(zip(self.sizes, self.counts))


def box_cover_curve(g: Graph, max_l: int, repeats: int = 10, seed: int = 0,
                    dist: Optional[np.ndarray] = None) -> list[int]:
    """Greedy box counts for l_B = 1..max_l.

    Each size takes the best of ``repeats`` random node orders.  A covering
    with diameter below l is also valid for any larger l, so counts are
    carried forward as a running minimum.
    """
    if max_l < 1:
        raise ValueError("box diameter must be at least 1")
    if dist is None:
        dist = distance_matrix(g)
    n = g.n
    rng = np.random.default_rng(seed)
    orders = [rng.permutation(n).astype(np.int64) for _ in range(repeats)]
    diam = int(dist.max())
    counts = []
    best = n
    for l_b in range(1, max_l + 1):
        if l_b == 1:
            cur = n
        elif l_b > diam:
            cur = 1
        else:
            cur = min(_greedy_boxes(dist, order, l_b) for order in orders)
        best = min(best, cur)
        counts.append(best)
    return counts


def box_cover(g: Graph, l_b: int, repeats: int = 10, seed: int = 0) -> int:
    """Number of boxes whose members are pairwise closer than ``l_b`` hops."""
    return box_cover_curve(g, l_b, repeats, seed)[-1]


def fractal_dimension(g: Graph, repeats: int = 10, seed: int = 0, min_boxes: int = 3,
                      min_scales: int = 4) -> BoxCoverResult:
    """Log-log fit of box count against box diameter.

    The whole curve 1..diameter is returned, but the fit skips the saturated
    end where fewer than ``min_boxes`` boxes remain; there the count can only
    step between 1 and 2 and says nothing about scaling.
    """
    dist = distance_matrix(g)
    diam = int(dist.max())
    counts = box_cover_curve(g, max(diam, 1), repeats, seed, dist)
    sizes = np.arange(1, len(counts) + 1, dtype=np.float64)
    keep = np.asarray(counts) >= min_boxes
    if diam < min_scales or keep.sum() < min_scales:
        raise TooFewScales(f"diameter {diam} leaves {int(keep.sum())} usable box sizes")
    lx = np.log(sizes[keep])
    ly = np.log(np.asarray(counts, dtype=np.float64)[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return BoxCoverResult(tuple(int(s) for s in sizes), tuple(counts), float(-slope), r2, int(keep.sum()))


def fractal_scaling_exponent(n: int, y: float) -> float:
    """Exponent w in c ~ n**(1/w) implied by one (n, y) pair."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if y <= 1:
        raise ValueError("y must exceed 1")
    return math.log(n) / math.log(y)


def max_path_length(n: int) -> float:
    """Largest average shortest path of a connected graph on n nodes (the path)."""
    return (n + 1) / 3.0


def rewired_clustering_baseline(g: Graph, samples: int = 20, seed: int = 0, swaps_per_edge: int = 10) -> float:
    """Mean clustering of degree-preserving randomisations of ``g``."""
    rng = np.random.default_rng(seed)
    base_edges = list(g.edges())
    m = len(base_edges)
    if m < 2:
        return 0.0
    values = []
    for _ in range(samples):
        h = g.copy()
        edges = list(base_edges)
        for _ in range(swaps_per_edge * m):
            i, j = rng.integers(m, size=2)
            if i == j:
                continue
            a, b = edges[i]
            c, d = edges[j]
            if rng.random() < 0.5:
                c, d = d, c
            if len({a, b, c, d}) < 4 or h.has_edge(a, d) or h.has_edge(c, b):
                continue
            h.remove_edge(a, b)
            h.remove_edge(c, d)
            h.add_edge(a, d)
            h.add_edge(c, b)
            edges[i] = (a, d)
            edges[j] = (c, b)
        values.append(clustering_coefficient(h))
    return float(np.mean(values))


LABELS = (
    "complete",
    "delta_distribution",
    "compact",
    "community",
    "small_world",
    "ultra_small_world",
    "fractal",
    "linear_regular",
    "random",
)


@dataclass(frozen=True)
class ClassifierThresholds:
    """Boundaries of the path-length classifier.

    The small-world reference line sits at ``ln n`` for x_min = 1 and moves
    left by ``xmin_shift`` per unit of x_min.
    """

    delta: float = 0.1
    delta_sw: float = 0.5
    xmin_shift: float = 1.0
    fractal_r2: float = 0.9
    linear_fraction: float = 0.1
    delta_mass: float = 0.9
    hub_fraction: float = 0.5
    baseline_samples: int = 20


@dataclass
class NetworkClass:
    label: str
    evidence: dict = field(default_factory=dict)
    low_confidence: bool = False


def small_world_line(n: int, x_min: int, thresholds: ClassifierThresholds = ClassifierThresholds()) -> float:
    return math.log(n) - thresholds.xmin_shift * (max(x_min, 1) - 1)


def classify(
    g: Graph,
    params=None,
    fit: Optional[PowerLawFit] = None,
    frac: Optional[BoxCoverResult] = None,
    thresholds: ClassifierThresholds = ClassifierThresholds(),
    y: Optional[float] = None,
    clustering: Optional[float] = None,
    baseline: Optional[float] = None,
) -> NetworkClass:
    """Place a network on the path-length spectrum.

    ``params`` (a ModelParams, optional) supplies x_min and the exponents;
    without it x_min is the smallest degree and the random-network test is
    skipped.  Measurements not passed in are computed here.
    """
    n = g.n
    t = thresholds
    y = avg_shortest_path(g) if y is None else y
    x_min = params.x_min if params is not None else max(1, min(g.degree))
    ln_n = math.log(n)
    line = small_world_line(n, x_min, t)
    ev: dict = {"y": y, "ln_n": ln_n, "small_world_line": line, "x_min": x_min}

    def done(label: str, low: bool = False) -> NetworkClass:
        ev["label"] = label
        return NetworkClass(label, ev, low)

    ev["complete"] = y <= 1 + t.delta
    if ev["complete"]:
        return done("complete")

    y_max = max_path_length(n)
    ev["max_path_length"] = y_max
    ev["linear_regular"] = y >= (1 - t.linear_fraction) * y_max
    if ev["linear_regular"]:
        return done("linear_regular")

    hist = degree_histogram(g)
    top_two = sum(sorted(hist.probabilities, reverse=True)[:2])
    hub = max(g.degree) >= t.hub_fraction * (n - 1)
    ev["top_two_mass"] = top_two
    ev["dominant_hub"] = hub
    ev["delta_distribution"] = top_two >= t.delta_mass and hub
    if ev["delta_distribution"]:
        return done("delta_distribution")

    ev["ultra_small_world"] = y < math.log(ln_n) + t.delta
    if ev["ultra_small_world"]:
        return done("ultra_small_world")

    if abs(y - line) <= t.delta_sw:
        if clustering is None:
            clustering = clustering_coefficient(g)
        if baseline is None:
            baseline = rewired_clustering_baseline(g, t.baseline_samples)
        ev["clustering"] = clustering
        ev["clustering_baseline"] = baseline
        ev["small_world"] = clustering > baseline
        if ev["small_world"]:
            return done("small_world")
    else:
        ev["small_world"] = False

    if params is not None and params.a == 0 and params.b == 0:
        ev["random"] = True
        return done("random")

    if fit is None:
        try:
            fit = fit_power_law_mle(g.degree, x_min)
        except FitError:
            fit = None
    ev["gamma_hat"] = fit.gamma_hat if fit is not None else None
    power_tail = fit is not None and fit.gamma_hat > 1
    ev["compact"] = y < line and power_tail
    if ev["compact"]:
        return done("compact")

    if frac is None and y > line:
        try:
            frac = fractal_dimension(g)
        except TooFewScales:
            frac = None
    ev["box_r2"] = frac.r2 if frac is not None else None
    ev["d_b"] = frac.d_b if frac is not None else None
    ev["fractal"] = y > line and frac is not None and frac.r2 >= t.fractal_r2
    if ev["fractal"]:
        return done("fractal")

    return done("compact" if y < line else "fractal", low=True)
