"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary block
at the end of the session lists every criterion.
"""
import math
import random
import time

import numpy as np
import pytest

from netsynth.analysis import (
    box_cover_curve,
    classify,
    fit_power_law_mle,
    fractal_dimension,
    sample_discrete_power_law,
)
from netsynth.cli import main
from netsynth.community import CommunityParams, optimize_community
from netsynth.graph import Graph, avg_shortest_path, diameter, is_connected, path_graph
from netsynth.io import (
    format_edge_list,
    parse_edge_list,
    read_assignment,
    read_edge_list,
    read_tsv,
    write_assignment,
    write_edge_list,
    write_tsv,
)
from netsynth.objectives import ModelParams, f1, f2, f2_delta
from netsynth import _kernels
from netsynth.optimizer import OptimizerConfig, optimize, replay
from netsynth.table1 import GAMMA_TOL, ROWS, Y_TOL, run_row

from oracles import brute_f2, connected, edge_list, fw_aspl, linked, random_graph_edges

SEEDS = (0, 1, 2)


@pytest.fixture(scope="module")
def table():
    return {(r.label, s): run_row(r, s) for r in ROWS for s in SEEDS}


def test_criterion_1_table1(table, criterion):
    lines = []
    per_seed = {}
    best = {}
    for (label, seed), res in sorted(table.items()):
        per_seed.setdefault(seed, 0)
        per_seed[seed] += res.passed
        best[label] = best.get(label, False) or res.passed
        lines.append(f"{label}/{seed}: gamma'={res.gamma:.3f} (ref {res.row.gamma}) "
                     f"y={res.y:.4f} (c {res.row.c}) {'ok' if res.passed else 'off'} "
                     f"{res.wall_time:.0f}s")
        assert res.wall_time < 15 * 60
    print("\n".join(lines))
    seeds_ok = all(v >= 5 for v in per_seed.values())
    rows_ok = all(best.values())
    detail = (f"per-seed passes {per_seed}, best-of-{len(SEEDS)} rows "
              f"{sum(best.values())}/6 (gamma' +-{GAMMA_TOL}, y +-{Y_TOL}); "
              f"failing rows: {[k for k, v in best.items() if not v]}")
    assert criterion(1, "Table 1 reproduction", seeds_ok and rows_ok, detail)


def test_criterion_2_exponent_law(criterion):
    settings = [(2, 3.9, 762), (3, 3.1, 1157)]
    results = []
    ok = True
    for a, b in [(0, 1), (1, 1)]:
        gamma = 1 + a + b
        for x_min, c, e in settings:
            g, trace = optimize(ModelParams(300, a, b, x_min, c, e), OptimizerConfig(seed=0))
            got = fit_power_law_mle(g.degree, x_min).gamma_hat
            good = abs(got - gamma) <= 0.4 and trace.converged
            ok &= good
            results.append(f"(a,b)=({a},{b}) x_min={x_min}: gamma'={got:.3f} vs {gamma} {'ok' if good else 'off'}")
    # flat objective: the strict rule never sees an F2 gain, so use the
    # lexicographic rule to get a non-empty trace
    flat = ModelParams(300, 0, 0, 2, 4.5, 762)
    g, trace = optimize(flat, OptimizerConfig(seed=0, rule="lexicographic"))
    flat_ok = trace.accepted > 0 and trace.initial_f2 == 2 * flat.e
    flat_ok &= bool(np.all(trace.f2 == 2 * flat.e))
    for h in replay(trace, flat.n):
        flat_ok &= f2(h, 0, 0) == f1(h)
    results.append(f"(0,0): f2 == f1 over {trace.accepted} steps: {flat_ok}")
    print("\n".join(results))
    assert criterion(2, "exponent law", ok and flat_ok, "; ".join(results))


def _invariant_run(seed):
    params = ModelParams(1200, 0.5, 0.5, 2, 2.8, 7000)
    cfg = OptimizerConfig(seed=seed, rule="lexicographic", aspl_slack=0.05, aspl_mode="sampled",
                          aspl_samples=64, max_iters=20_000_000, stall_limit=20_000)
    return params, optimize(params, cfg)


def _check_invariants(params, g, trace):
    """Independent replay; returns (violations, moves checked).

    Each move is removal of (p, q) plus insertion of (r, t), so the edge
    count is constant by construction once both steps are checked to be
    legal; a connected graph stays connected iff p still reaches q.
    """
    n = params.n
    adj = [set() for _ in range(n)]
    for u, v in trace.initial_edges:
        adj[u].add(int(v))
        adj[v].add(int(u))
    m = params.e
    full = [(u, v) for u in range(n) for v in adj[u] if u < v]
    bad = int(len(full) != m or not connected(n, full))
    prev_f2, prev_dev = trace.initial_f2, abs(trace.initial_y - params.c)
    checkpoints = set(np.linspace(0, len(trace.moves) - 1, 10).astype(int).tolist())
    for k, (p, q, r, t) in enumerate(trace.moves.tolist()):
        if q not in adj[p] or t in adj[r] or r == t:
            bad += 1
            continue
        adj[p].discard(q)
        adj[q].discard(p)
        adj[r].add(t)
        adj[t].add(r)
        bad += len(adj[p]) < params.x_min or len(adj[q]) < params.x_min
        bad += not linked(adj, p, q)
        f2k = float(trace.f2[k])
        dev = abs(float(trace.y[k]) - params.c)
        bad += f2k < prev_f2
        if not f2k > prev_f2:
            bad += dev > prev_dev
        if k in checkpoints:
            edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
            bad += len(edges) != m
            bad += min(len(s) for s in adj) < params.x_min
            bad += abs(brute_f2(n, edges, params.a, params.b) - f2k) > 1e-9 * abs(f2k)
        prev_f2, prev_dev = f2k, dev
    final = sorted((u, v) for u in range(n) for v in adj[u] if u < v)
    bad += final != edge_list(g)
    return bad, len(trace.moves)


def test_criterion_3_invariants(criterion):
    total = 0
    violations = 0
    parts = []
    for seed in range(3):
        params, (g, trace) = _invariant_run(seed)
        bad, moves = _check_invariants(params, g, trace)
        total += moves
        violations += bad
        parts.append(f"seed {seed}: {moves} moves, {bad} violations, {trace.wall_time:.0f}s")
    print("\n".join(parts))
    ok = violations == 0 and total >= 100_000
    assert criterion(3, "optimizer invariants", ok, f"{total} accepted moves, {violations} violations")


def test_criterion_4_oracles(criterion):
    rng = random.Random(2024)
    worst_f2 = worst_delta = 0.0
    graphs = 0
    while graphs < 1000:
        n = rng.randint(2, 50)
        edges = random_graph_edges(n, rng.uniform(0.02, 0.6), rng)
        if len(edges) < 2:
            continue
        graphs += 1
        a, b = rng.choice([0.0, 0.5, 1.0, 2.0]), rng.choice([0.0, 1.0, 1.5])
        g = Graph(n, edges)
        ref = brute_f2(n, edges, a, b)
        worst_f2 = max(worst_f2, abs(f2(g, a, b) - ref) / max(1.0, abs(ref)))
        p, q = rng.choice(edges)
        r, t = rng.sample(range(n), 2)
        if g.has_edge(r, t):
            continue
        moved = [e for e in edges if e != (p, q)] + [(min(r, t), max(r, t))]
        expect = brute_f2(n, moved, a, b) - ref
        scale = max(1.0, abs(ref))
        nbr, deg = g.to_table()
        zero = np.zeros(n, dtype=np.int64)
        got_k = _kernels.f2_swap_delta(nbr, deg, p, q, r, t, a, b, zero, 1.0)
        worst_delta = max(worst_delta, abs(got_k - expect) / scale)
        degs = [0] * n
        for u, v in moved:
            degs[u] += 1
            degs[v] += 1
        if min(degs) >= 1:
            worst_delta = max(worst_delta, abs(f2_delta(g, (p, q), (r, t), a, b) - expect) / scale)

    worst_aspl = 0.0
    tested = 0
    for i in range(10_000):
        n = rng.randint(2, 8)
        edges = random_graph_edges(n, rng.uniform(0.2, 0.9), rng)
        exact = fw_aspl(n, edges)
        if exact is None:
            continue
        tested += 1
        worst_aspl = max(worst_aspl, abs(avg_shortest_path(Graph(n, edges)) - float(exact)))
    ok = worst_f2 <= 1e-9 and worst_delta <= 1e-9 and worst_aspl <= 1e-12
    detail = (f"f2 rel err {worst_f2:.1e}, delta rel err {worst_delta:.1e} over 1000 graphs; "
              f"aspl err {worst_aspl:.1e} over {tested} connected graphs of a 10^4 corpus")
    assert criterion(4, "oracle equivalence", ok, detail)


def test_criterion_5_fractality(table, criterion):
    parts = []
    ok = True
    graphs = [path_graph(256)]
    for label in ("c", "f"):
        g = table[(label, 0)].graph
        graphs.append(g)
        res = fractal_dimension(g)
        good = res.r2 >= 0.9 and res.n_fit >= 4
        ok &= good
        parts.append(f"row {label}: r2={res.r2:.3f} over {res.n_fit} scales, d_B={res.d_b:.2f}")
    chain = fractal_dimension(path_graph(256))
    ok &= abs(chain.d_b - 1.0) <= 0.15
    parts.append(f"chain-256 d_B={chain.d_b:.3f}")
    rng = random.Random(5)
    while len(graphs) < 15:
        n = rng.randint(10, 80)
        h = Graph(n, random_graph_edges(n, rng.uniform(0.05, 0.3), rng))
        if is_connected(h):
            graphs.append(h)
    ends_ok = True
    for h in graphs:
        d = diameter(h)
        curve = box_cover_curve(h, d + 1)
        ends_ok &= curve[0] == h.n and curve[-1] == 1
        ends_ok &= all(x >= y for x, y in zip(curve, curve[1:]))
    parts.append(f"endpoints/monotone on {len(graphs)} graphs: {ends_ok}")
    assert criterion(5, "fractality", ok and ends_ok, "; ".join(parts))


def test_criterion_6_classification(table, criterion):
    k20 = ModelParams(20, 0, 1, 2, 1.0, 190)
    g, _ = optimize(k20, OptimizerConfig(seed=0))
    labels = [classify(g, k20).label]
    for label in ("a", "c"):
        res = table[(label, 0)]
        labels.append(classify(res.graph, res.row.model()).label)
    spectrum_ok = labels == ["complete", "compact", "fractal"]
    f = table[("f", 0)]
    f_label = classify(f.graph, f.row.model()).label
    sw = ModelParams(300, 0, 1, 1, math.log(300), 762)
    g, _ = optimize(sw, OptimizerConfig(seed=0))
    sw_label = classify(g, sw).label
    ok = spectrum_ok and f_label == "fractal" and sw_label == "small_world"
    detail = f"c sweep {labels}; row f {f_label}; x_min=1 at ln n {sw_label}"
    assert criterion(6, "classification spectrum", ok, detail)


def test_criterion_7_fit_calibration(criterion):
    parts = []
    ok = True
    for gamma in (2.0, 2.5, 3.0):
        for x_min in (1, 2, 3):
            sample = sample_discrete_power_law(gamma, x_min, 100_000, seed=int(gamma * 10) + x_min)
            t0 = time.perf_counter()
            fit = fit_power_law_mle(sample, x_min)
            dt = time.perf_counter() - t0
            good = abs(fit.gamma_hat - gamma) <= 0.1 and dt <= 5.0
            ok &= good
            parts.append(f"{gamma}/{x_min}: {fit.gamma_hat:.3f} in {dt:.2f}s")
    assert criterion(7, "power-law fit calibration", ok, "; ".join(parts))


def test_criterion_8_determinism_round_trip(tmp_path, criterion):
    params = ModelParams(300, 0, 1, 2, 5.5, 762)
    cp = CommunityParams.planted(params, 2, 0.5, seed=4)
    texts = []
    for _ in range(2):
        g, _ = optimize(params, OptimizerConfig(seed=4))
        texts.append(format_edge_list(g))
    det_ok = texts[0] == texts[1]
    gc1, _ = optimize_community(cp, OptimizerConfig(seed=4))
    gc2, _ = optimize_community(cp, OptimizerConfig(seed=4))
    det_ok &= format_edge_list(gc1) == format_edge_list(gc2)

    cli_bytes = []
    for d in ("x", "y"):
        out = tmp_path / d
        main(["generate", "--n", "120", "--e", "260", "--c", "4.5", "--k", "2", "--seed", "9",
              "--out-dir", str(out)])
        cli_bytes.append((out / "net.edges").read_bytes())
    det_ok &= cli_bytes[0] == cli_bytes[1]

    rt_ok = True
    for g in (parse_edge_list(texts[0]), gc1):
        p = tmp_path / "rt.edges"
        write_edge_list(g, p)
        h = read_edge_list(p)
        rt_ok &= h == g and format_edge_list(h) == p.read_text()
    out = tmp_path / "x"
    for path in out.glob("*.edges"):
        rt_ok &= format_edge_list(read_edge_list(path)) == path.read_text()
    labels = read_assignment(out / "net.communities", 120)
    write_assignment(labels, tmp_path / "rt.communities")
    rt_ok &= (tmp_path / "rt.communities").read_text() == (out / "net.communities").read_text()
    header, rows = read_tsv(out / "net.trace.tsv")
    write_tsv(tmp_path / "rt.tsv", header, rows)
    rt_ok &= (tmp_path / "rt.tsv").read_text() == (out / "net.trace.tsv").read_text()
    detail = f"same seed identical: {det_ok}; read/write identity: {rt_ok}"
    assert criterion(8, "determinism and round trip", det_ok and rt_ok, detail)
