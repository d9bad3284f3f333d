"""Text formats for configurations, cell lists, lifts and flip graphs.

Configuration::

    points <n> <d> [homogeneous]
    <label> <scalar> ... <scalar>

Cells (triangulations and subdivisions): one cell per line, labels separated
by spaces.  Lifts: ``<label> <scalar>`` per line.  ``#`` starts a comment
everywhere.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

from .config import ConfigurationError, PointConfiguration
from .exact import Scalar, ScalarParseError
from .regular import Lift
from .subdivision import Subdivision, Triangulation

__all__ = [
    "FormatError",
    "read_config",
    "write_config",
    "read_cells",
    "write_cells",
    "read_lift",
    "write_lift",
    "write_graph",
    "read_graph",
]


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def _text(src) -> str:
    # a Path is read from disk; a str is the file content itself
    if isinstance(src, Path):
        return src.read_text()
    return src


def _tokens(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield ``(line_no, [(column, token), ...])`` for non-empty lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in line.split():
            col = line.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield lineno, toks


def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"expected {what}, got {tok!r}", line, col) from None
    return v


def _scalar(tok: str, line: int, col: int) -> Scalar:
    try:
        return Scalar.parse(tok)
    except ScalarParseError as e:
        raise ScalarParseError(f"malformed scalar {tok!r}", line, col) from e


def read_config(src) -> PointConfiguration:
    lines = list(_tokens(_text(src)))
    if not lines:
        raise FormatError("empty configuration file", 1, 1)
    lineno, head = lines[0]
    words = [t for _, t in head]
    if words[0] != "points" or len(words) not in (3, 4) or (len(words) == 4 and words[3] != "homogeneous"):
        raise FormatError("header must be 'points <n> <d> [homogeneous]'", lineno, head[0][0])
    n = _int(words[1], lineno, head[1][0], "point count")
    d = _int(words[2], lineno, head[2][0], "dimension")
    homogeneous = len(words) == 4
    width = d + 1 if homogeneous else d
    pts = {}
    for lineno, toks in lines[1:]:
        col, lab_tok = toks[0]
        lab = _int(lab_tok, lineno, col, "label")
        if lab < 1:
            raise FormatError("labels must be positive", lineno, col)
        if lab in pts:
            raise FormatError(f"duplicate label {lab}", lineno, col)
        if len(toks) - 1 != width:
            raise FormatError(f"expected {width} coordinates, got {len(toks) - 1}", lineno, col)
        pts[lab] = [_scalar(t, lineno, c) for c, t in toks[1:]]
    if len(pts) != n:
        raise FormatError(f"header announces {n} points, found {len(pts)}", lines[0][0], 1)
    try:
        cfg = PointConfiguration(pts, homogeneous=homogeneous)
    except ConfigurationError as e:
        raise FormatError(str(e)) from e
    if cfg.dim != d:
        raise FormatError(f"header dimension {d} does not match the points ({cfg.dim})", lines[0][0], 1)
    return cfg


def write_config(cfg: PointConfiguration) -> str:
    head = f"points {cfg.n} {cfg.dim}" + (" homogeneous" if cfg.homogeneous else "")
    rows = [head]
    for lab in cfg.labels:
        rows.append(" ".join([str(lab)] + [str(x) for x in cfg.coords(lab)]))
    return "\n".join(rows) + "\n"


def read_cells(src, triangulation: bool = True) -> Subdivision:
    cells = []
    for lineno, toks in _tokens(_text(src)):
        cells.append(tuple(_int(t, lineno, c, "label") for c, t in toks))
    if not cells:
        raise FormatError("no cells", 1, 1)
    return Triangulation(cells) if triangulation else Subdivision(cells)


def write_cells(S: Iterable[Iterable[int]]) -> str:
    cells = S.cells if isinstance(S, Subdivision) else sorted(tuple(sorted(c)) for c in S)
    return "".join(" ".join(map(str, c)) + "\n" for c in cells)


def read_lift(src) -> Lift:
    vals = {}
    for lineno, toks in _tokens(_text(src)):
        if len(toks) != 2:
            raise FormatError("expected '<label> <scalar>'", lineno, toks[0][0])
        lab = _int(toks[0][1], lineno, toks[0][0], "label")
        if lab in vals:
            raise FormatError(f"duplicate label {lab}", lineno, toks[0][0])
        vals[lab] = _scalar(toks[1][1], lineno, toks[1][0])
    return Lift(vals)


def write_lift(w) -> str:
    return "".join(f"{lab} {w[lab]}\n" for lab in sorted(w))


def write_graph(g) -> str:
    """Node table plus edge list annotated with flip type and circuit."""
    out = [f"graph {len(g.nodes)} {len(g.edges)}" + (" truncated" if g.truncated else "")]
    for i, T in enumerate(g.nodes):
        out.append(f"node {i} " + " | ".join(" ".join(map(str, c)) for c in T.cells))
    for i, j, (p, q), C in g.edges:
        out.append(f"edge {i} {j} ({p},{q}) {C}")
    return "\n".join(out) + "\n"


def read_graph(src) -> tuple[list[Triangulation], list[tuple[int, int, tuple[int, int], str]], bool]:
    nodes, edges, truncated = [], [], False
    for lineno, toks in _tokens(_text(src)):
        kind = toks[0][1]
        rest = " ".join(t for _, t in toks[1:])
        if kind == "graph":
            truncated = rest.endswith("truncated")
        elif kind == "node":
            idx, _, body = rest.partition(" ")
            if int(idx) != len(nodes):
                raise FormatError("node indices must be consecutive", lineno, toks[1][0])
            nodes.append(Triangulation(tuple(int(x) for x in c.split()) for c in body.split("|")))
        elif kind == "edge":
            i, j, typ, circ = rest.split(" ", 3)
            p, q = typ.strip("()").split(",")
            edges.append((int(i), int(j), (int(p), int(q)), circ))
        else:
            raise FormatError(f"unknown record {kind!r}", lineno, toks[0][0])
    return nodes, edges, truncated
