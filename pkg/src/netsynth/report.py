"""Assemble the measurement report for one network."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .analysis import (
    BoxCoverResult,
    DegreeHistogram,
    FitError,
    NetworkClass,
    PowerLawFit,
    TooFewScales,
    classify,
    degree_histogram,
    fit_power_law_mle,
    fractal_dimension,
)
from .graph import DisconnectedGraphError, Graph, avg_shortest_path, clustering_coefficient, is_connected
from .objectives import ModelParams, f1, f2

# beyond this size the exact re-check is skipped and the search value kept
EXACT_RECHECK_LIMIT = 2000


@dataclass
class Report:
    meta: dict
    params: dict
    f1: int
    f2: float
    y: float
    y_verified: bool
    clustering: float
    histogram: DegreeHistogram
    fit: Optional[PowerLawFit]
    box: Optional[BoxCoverResult]
    classification: NetworkClass
    extra: dict = field(default_factory=dict)

    def summary_row(self) -> dict:
        """The Table-1 columns: E, c, x_min, gamma', y."""
        p = self.params
        return {
            "E": p.get("e", self.f1 // 2),
            "c": p.get("c"),
            "x_min": p.get("x_min"),
            "gamma": self.fit.gamma_hat if self.fit else None,
            "y": self.y,
        }

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "params": self.params,
            "objectives": {"f1": self.f1, "f2": self.f2},
            "y": self.y,
            "y_verified": self.y_verified,
            "clustering": self.clustering,
            "histogram": [list(r) for r in self.histogram.rows()],
            "fit": asdict(self.fit) if self.fit else None,
            "box": asdict(self.box) if self.box else None,
            "classification": {
                "label": self.classification.label,
                "low_confidence": self.classification.low_confidence,
                "evidence": _clean(self.classification.evidence),
            },
            "extra": _clean(self.extra),
        }


def _clean(d: dict) -> dict:
    # JSON has no NaN/inf
    out = {}
    for k, v in d.items():
        if isinstance(v, float) and not math.isfinite(v):
            v = None
        out[k] = v
    return out


def build_report(
    g: Graph,
    params: Optional[ModelParams] = None,
    seed: Optional[int] = None,
    y_hint: Optional[float] = None,
    wall_time: Optional[float] = None,
    extra: Optional[dict] = None,
) -> Report:
    """Measure ``g`` and classify it.

    ``y`` is always recomputed exactly from the graph when ``n`` is at most
    ``EXACT_RECHECK_LIMIT``; ``y_hint`` (e.g. the search's own value) is used
    only above that size.
    """
    start = time.perf_counter()
    if not is_connected(g):
        raise DisconnectedGraphError("the network is disconnected")
    if g.n <= EXACT_RECHECK_LIMIT or y_hint is None:
        y = avg_shortest_path(g)
        verified = True
    else:
        y = float(y_hint)
        verified = False

    a = params.a if params else 0.0
    b = params.b if params else 1.0
    x_min = params.x_min if params else max(1, min(g.degree))
    hist = degree_histogram(g)
    try:
        fit = fit_power_law_mle(g.degree, x_min)
    except FitError:
        fit = None
    try:
        box = fractal_dimension(g)
    except TooFewScales:
        box = None
    cc = clustering_coefficient(g) if g.n >= 3 else 0.0
    label = classify(g, params, fit=fit, frac=box, y=y, clustering=cc)

    if params is not None:
        pdict = asdict(params)
    else:
        pdict = {"n": g.n, "e": g.m, "x_min": x_min}
    meta = {
        "version": __version__,
        "seed": seed,
        "wall_time": wall_time if wall_time is not None else time.perf_counter() - start,
    }
    return Report(
        meta=meta,
        params=pdict,
        f1=f1(g),
        f2=f2(g, a, b),
        y=y,
        y_verified=verified,
        clustering=cc,
        histogram=hist,
        fit=fit,
        box=box,
        classification=label,
        extra=dict(extra or {}),
    )

