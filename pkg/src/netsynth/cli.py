"""Command-line driver.

Exit codes: 0 success, 2 config error, 3 infeasible parameters (or a
disconnected input), 4 search did not reach the ASPL band, 5 I/O or parse
error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import fields
from pathlib import Path
from typing import Optional, Sequence

from .community import CommunityParams, f2_community, modularity, optimize_community
from .config import ConfigError, RunConfig, load_config
from .graph import DisconnectedGraphError
from .io import (
    ParseError,
    read_edge_list,
    write_assignment,
    write_edge_list,
    write_json,
    write_tsv,
)
from .objectives import InfeasibleParams, ModelParams
from .optimizer import OptimizerConfig, RunTrace, optimize, pareto_sweep
from .report import Report, build_report
from .table1 import ROW_BY_LABEL, ROWS, format_table, run_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_SOFT = 4
EXIT_IO = 5

log = logging.getLogger("netsynth")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--print-config", action="store_true", help="print the effective config and exit")
    group = p.add_argument_group("config overrides")
    for f in fields(RunConfig):
        kind = {"int": int, "float": float, "Optional[int]": int}.get(f.type, str)
        group.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=kind, default=None)


def _config(args, check_model: bool = True) -> RunConfig:
    overrides = {f.name: getattr(args, f.name, None) for f in fields(RunConfig)}
    cfg = load_config(args.config, overrides)
    cfg.validate(check_model)
    return cfg


def _trace_rows(trace: RunTrace):
    yield (0, -1, -1, -1, -1, trace.initial_f2, trace.initial_y, abs(trace.initial_y - trace.c))
    for it, (p, q, r, t), f2, y in zip(trace.iterations, trace.moves, trace.f2, trace.y):
        yield (int(it), int(p), int(q), int(r), int(t), float(f2), float(y), abs(float(y) - trace.c))


TRACE_HEADER = ("iteration", "removed_u", "removed_v", "added_u", "added_v", "f2", "y", "deviation")


def _summary(report: Report) -> str:
    row = report.summary_row()
    gamma = f"{row['gamma']:.2f}" if row["gamma"] is not None else "-"
    return (f"E={row['E']}  c={row['c']}  x_min={row['x_min']}  gamma'={gamma}  "
            f"y={row['y']:.4f}  label={report.classification.label}")


def _emit_report(report: Report, path: Path, fmt: str) -> None:
    if fmt == "json":
        write_json(path, report.to_dict())
    else:
        doc = report.to_dict()
        lines = [f"{k} = {doc[k]}" for k in sorted(doc)]
        path.write_text("\n".join(lines) + "\n")


def cmd_generate(args) -> int:
    cfg = _config(args)
    if args.print_config:
        sys.stdout.write(cfg.as_text())
        return EXIT_OK
    model = cfg.model()
    opt = cfg.optimizer()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    extra: dict = {}
    if cfg.k:
        cp = CommunityParams.planted(model, cfg.k, cfg.s, cfg.community_seed)
        g, trace = optimize_community(cp, opt)
        write_assignment(cp.assignment, out / f"{cfg.prefix}.communities")
        extra = {"k": cfg.k, "s": cfg.s, "modularity": modularity(g, cp.assignment),
                 "f2_community": f2_community(g, cp)}
    else:
        g, trace = optimize(model, opt)
    extra.update(status=trace.status, accepted=trace.accepted, iterations=trace.iterations_run,
                 converged=trace.converged)
    write_edge_list(g, out / f"{cfg.prefix}.edges")
    write_tsv(out / f"{cfg.prefix}.trace.tsv", TRACE_HEADER, _trace_rows(trace))
    report = build_report(g, model, seed=cfg.seed, y_hint=trace.final_y,
                          wall_time=time.perf_counter() - start, extra=extra)
    _emit_report(report, out / f"{cfg.prefix}.report.{cfg.report_format}", cfg.report_format)
    print(_summary(report))
    if abs(report.y - model.c) > opt.aspl_tolerance:
        print(f"warning: |y - c| = {abs(report.y - model.c):.4f} exceeds tolerance "
              f"{opt.aspl_tolerance} ({trace.status})", file=sys.stderr)
        return EXIT_SOFT
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = read_edge_list(args.edges)
    params = None
    if args.x_min is not None or args.c is not None:
        x_min = args.x_min if args.x_min is not None else max(1, min(g.degree))
        c = args.c if args.c is not None else 1.0
        params = ModelParams(g.n, args.a, args.b, x_min, c, g.m)
    report = build_report(g, params, seed=None)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or Path(args.edges).stem
    write_json(out / f"{prefix}.report.json", report.to_dict())
    write_tsv(out / f"{prefix}.hist.tsv", ("degree", "count", "pdf"), report.histogram.rows())
    if report.box is not None:
        write_tsv(out / f"{prefix}.box.tsv", ("l_b", "n_b"), report.box.rows())
    print(_summary(report))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args, check_model=False)
    if args.print_config:
        sys.stdout.write(cfg.as_text())
        return EXIT_OK
    try:
        grid = sorted({int(x) for x in args.e_grid.split(",") if x.strip()})
    except ValueError:
        raise ConfigError(f"bad --e-grid {args.e_grid!r}") from None
    if not grid:
        raise ConfigError("empty --e-grid")
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    points = pareto_sweep(cfg.n, cfg.a, cfg.b, cfg.x_min, cfg.c, grid, cfg.optimizer(), args.workers)
    rows = []
    soft = infeasible = False
    for p in points:
        if p.error is not None:
            print(f"e={p.e}: {p.error}", file=sys.stderr)
            infeasible = True
            continue
        write_edge_list(p.graph, out / f"{cfg.prefix}_e{p.e}.edges")
        rows.append((p.e, p.values.f1, p.values.f2, p.trace.final_y))
        soft = soft or not p.trace.converged
        print(f"e={p.e}  f1={p.values.f1}  f2={p.values.f2:.6g}  y={p.trace.final_y:.4f}  {p.trace.status}")
    write_tsv(out / f"{cfg.prefix}.front.tsv", ("e", "f1", "f2", "y"), rows)
    if infeasible:
        return EXIT_INFEASIBLE
    return EXIT_SOFT if soft else EXIT_OK


def cmd_reproduce_table1(args) -> int:
    labels = args.rows or "".join(r.label for r in ROWS)
    unknown = set(labels) - set(ROW_BY_LABEL)
    if unknown:
        raise ConfigError(f"unknown rows: {''.join(sorted(unknown))}")
    seeds = [int(x) for x in args.seeds.split(",")]
    config = OptimizerConfig(max_iters=args.max_iters) if args.max_iters else OptimizerConfig()
    results = run_table([ROW_BY_LABEL[c] for c in labels], seeds, config, args.workers)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            write_edge_list(r.graph, out / f"table1_{r.row.label}_{r.seed}.edges")
    print(format_table(results))
    # a row passes if any of its seeds does
    best = {}
    for r in results:
        best[r.row.label] = best.get(r.row.label, False) or r.passed
    n_pass = sum(best.values())
    print(f"{n_pass}/{len(best)} rows within tolerance")
    return EXIT_OK if n_pass == len(best) else EXIT_SOFT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netsynth", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="optimise one network")
    _add_config_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="measure and classify an edge list")
    p.add_argument("edges")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--x-min", dest="x_min", type=int)
    p.add_argument("--c", type=float)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--prefix")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="one run per edge budget")
    _add_config_flags(p)
    p.add_argument("--e-grid", required=True, help="comma-separated edge counts")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce-table1", help="regenerate the six reference networks")
    p.add_argument("--rows", help="subset of row letters, e.g. ac")
    p.add_argument("--seeds", default="0")
    p.add_argument("--max-iters", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_reproduce_table1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleParams, DisconnectedGraphError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParseError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
