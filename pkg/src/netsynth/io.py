"""Edge-list, assignment and TSV serialisation.

Canonical edge-list format::

    # nodes=5
    0 1
    1 2

One edge per line, ``u < v``, sorted lexicographically.  ``#`` lines are
comments; a ``# nodes=N`` comment sets the node count, otherwise it is
``max id + 1``.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Sequence

from .graph import DuplicateEdgeError, Graph, SelfLoopError

_NODES_RE = re.compile(r"#\s*nodes\s*=\s*(\d+)\s*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_edge_list(text: str) -> Graph:
    n_header = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NODES_RE.match(line)
            if m:
                n_header = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node ids, got {len(parts)} fields", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative node id", lineno)
        if u == v:
            raise ParseError(f"self-loop at node {u}", lineno)
        edges.append((u, v, lineno))
    n = max((max(u, v) for u, v, _ in edges), default=-1) + 1
    if n_header is not None:
        if n_header < n:
            raise ParseError(f"nodes={n_header} but id {n - 1} present", 1)
        n = n_header
    g = Graph(n)
    for u, v, lineno in edges:
        try:
            g.add_edge(u, v)
        except DuplicateEdgeError:
            raise ParseError(f"duplicate edge ({u}, {v})", lineno) from None
        except SelfLoopError:  # pragma: no cover - caught above
            raise ParseError(f"self-loop at node {u}", lineno) from None
    return g


def format_edge_list(g: Graph) -> str:
    lines = [f"# nodes={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g))


def write_assignment(assignment: Sequence[int], path) -> None:
    Path(path).write_text("".join(f"{v} {c}\n" for v, c in enumerate(assignment)))


def read_assignment(path, n: int | None = None) -> list[int]:
    pairs = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected node id and community id", lineno)
        try:
            v, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        if v in pairs:
            raise ParseError(f"node {v} assigned twice", lineno)
        pairs[v] = c
    size = n if n is not None else max(pairs, default=-1) + 1
    missing = [v for v in range(size) if v not in pairs]
    if missing:
        raise ValueError(f"{len(missing)} nodes lack a community, first {missing[0]}")
    return [pairs[v] for v in range(size)]


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_tsv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    out = ["\t".join(header)]
    out.extend("\t".join(_fmt(x) for x in row) for row in rows)
    Path(path).write_text("\n".join(out) + "\n")


def read_tsv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text().splitlines()
    return lines[0].split("\t"), [ln.split("\t") for ln in lines[1:] if ln]


def write_json(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    import numpy as np

    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")
