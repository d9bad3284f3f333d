"""Command-line interface.

Exit codes: 0 success or true, 1 checked false (invalid, infeasible,
failed verification), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, formats, scenarios
from .config import ConfigurationError, PointConfiguration
from .exact import ScalarParseError
from .flips import DegenerateLiftError, InapplicableFlipError, find_flips, flip_graph, flip_to, monotone_flip_sequence
from .regular import gkz_vector, is_regular, secondary_polytope_summary, standard_lift
from .subdivision import (
    CapExceededError,
    InvalidSubdivisionError,
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    is_valid_subdivision,
    is_valid_triangulation,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _load_config(arg: str) -> PointConfiguration:
    path = Path(arg)
    if path.is_file():
        return formats.read_config(path)
    try:
        return catalog.build(arg)
    except ValueError:
        raise UsageError(f"{arg}: no such file or catalog name") from None


def _load_cells(arg: str, triangulation: bool = True) -> Subdivision:
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"{arg}: no such file")
    return formats.read_cells(path, triangulation=triangulation)


def _labels(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad label list {text!r}") from None


def _load_lift(cfg: PointConfiguration, spec: str, order: str | None):
    if spec.startswith("file:"):
        path = Path(spec[5:])
        if not path.is_file():
            raise UsageError(f"{path}: no such file")
        return formats.read_lift(path)
    if spec not in ("delaunay", "pulling", "pushing"):
        raise UsageError(f"unknown lift {spec!r}")
    return standard_lift(cfg, spec, _labels(order) if order else None)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.payload: dict = {"schema_version": SCHEMA_VERSION}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def put(self, **kw) -> None:
        self.payload.update(kw)

    def flush(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.as_json:
            stream.write(json.dumps(self.payload, indent=2, sort_keys=True) + "\n")
        else:
            stream.write("".join(line + "\n" for line in self.lines))


def _cells_json(S) -> list[list[int]]:
    return [list(c) for c in S]


def _write_or_print(out: Output, text: str, dest: str | None) -> None:
    if dest:
        Path(dest).write_text(text)
    else:
        for line in text.splitlines():
            out.line(line)


# -- verbs ---------------------------------------------------------------------


def cmd_check_tri(a, out: Output) -> int:
    cfg = _load_config(a.config)
    S = _load_cells(a.tri, triangulation=False)
    simplicial = S.is_simplicial(cfg.dim)
    rep = is_valid_triangulation(cfg, S) if simplicial else is_valid_subdivision(cfg, S)
    kind = "triangulation" if simplicial else "subdivision"
    out.line(f"{'valid' if rep.ok else 'invalid'} {kind}")
    for v in rep.violations:
        out.line(f"  {v}")
    out.put(valid=rep.ok, kind=kind, violations=[str(v) for v in rep.violations])
    return 0 if rep.ok else 1


def cmd_triangulate(a, out: Output) -> int:
    cfg = _load_config(a.config)
    w = _load_lift(cfg, a.lift, a.order)
    from .regular import subdivision_from_lift

    S = subdivision_from_lift(cfg, w)
    out.put(cells=_cells_json(S), triangulation=isinstance(S, Triangulation), lift={str(k): str(w[k]) for k in w})
    _write_or_print(out, formats.write_cells(S), a.output)
    return 0


def cmd_flips(a, out: Output) -> int:
    cfg = _load_config(a.config)
    T = _load_cells(a.tri)
    fl = find_flips(cfg, T)
    for f in fl:
        i, j = f.type
        out.line(f"{f.circuit} type=({i},{j}) from={f.from_side}")
    out.put(flips=[{"circuit": str(f.circuit), "support": sorted(f.circuit.support),
                    "type": list(f.type), "from": f.from_side} for f in fl])
    return 0


def cmd_flip(a, out: Output) -> int:
    cfg = _load_config(a.config)
    T = _load_cells(a.tri)
    rep = is_valid_triangulation(cfg, T)
    if not rep.ok:
        raise InvalidSubdivisionError(f"invalid triangulation: {rep.violations[0]}")
    T2 = flip_to(cfg, T, _labels(a.circuit), reverse=a.reverse)
    out.put(cells=_cells_json(T2))
    _write_or_print(out, formats.write_cells(T2), a.output)
    return 0


def cmd_flipgraph(a, out: Output) -> int:
    cfg = _load_config(a.config)
    seeds = [_load_cells(a.seed)] if a.seed else None
    g = flip_graph(cfg, seeds, cap=a.cap, diameter=a.diameter, threads=a.threads)
    text = f"nodes={len(g.nodes)} components={len(g.components)}"
    if a.diameter:
        text += " diameter=" + ",".join(str(x) for x in g.diameters)
    if g.truncated:
        text += " truncated=true"
    out.line(text)
    out.put(nodes=len(g.nodes), edges=len(g.edges), components=[len(c) for c in g.components],
            diameters=g.diameters if a.diameter else None, truncated=g.truncated)
    if a.output:
        Path(a.output).write_text(formats.write_graph(g))
    return 0


def cmd_regular(a, out: Output) -> int:
    cfg = _load_config(a.config)
    S = _load_cells(a.tri, triangulation=False)
    if S.is_simplicial(cfg.dim):
        S = Triangulation(S.cells)
    cert = is_regular(cfg, S)
    if cert is None:
        out.line("INFEASIBLE")
        out.put(regular=False, certificate=None)
        return 1
    for line in formats.write_lift(cert).splitlines():
        out.line(line)
    out.put(regular=True, certificate={str(k): str(cert[k]) for k in cert})
    return 0


def cmd_gkz(a, out: Output) -> int:
    cfg = _load_config(a.config)
    T = _load_cells(a.tri)
    v = gkz_vector(cfg, T)
    out.line(" ".join(str(x) for x in v.as_tuple()))
    out.put(gkz={str(k): str(x) for k, x in v.entries})
    return 0


def cmd_secondary(a, out: Output) -> int:
    cfg = _load_config(a.config)
    tris = enumerate_triangulations_bruteforce(cfg, cap=a.cap)
    s = secondary_polytope_summary(cfg, tris)
    fv = ",".join(map(str, s.f_vector))
    out.line(f"dim={s.dim} f_vector={fv} vertices={len(s.vertices)} faces={s.total_faces} "
             f"triangulations={len(tris)}")
    out.put(dim=s.dim, f_vector=list(s.f_vector), vertices=[_cells_json(T) for T in s.vertices],
            faces=s.total_faces, triangulations=len(tris))
    return 0


def cmd_monotone(a, out: Output) -> int:
    cfg = _load_config(a.config)
    T = _load_cells(a.tri)
    w = _load_lift(cfg, a.lift, a.order)
    res = monotone_flip_sequence(cfg, T, w, policy=a.policy)
    for f, v in zip(res.flips, res.values[1:]):
        i, j = f.type
        out.line(f"flip {f.circuit} type=({i},{j}) value={v}")
    out.line(f"steps={len(res.flips)} stuck={str(res.stuck).lower()}")
    for c in res.final:
        out.line(" ".join(map(str, c)))
    out.put(steps=[{"circuit": str(f.circuit), "type": list(f.type)} for f in res.flips],
            values=[str(v) for v in res.values], stuck=res.stuck, final=_cells_json(res.final))
    return 0


def cmd_catalog(a, out: Output) -> int:
    if a.action == "list":
        for name in catalog.NAMES:
            params = catalog._PARAMS.get(name, ())
            out.line(name + (" " + " ".join(f"{p}=..." for p in params) if params else ""))
        out.put(names=list(catalog.NAMES))
        return 0
    if not a.name:
        raise UsageError("catalog emit needs a configuration name")
    params = {}
    for kv in a.params:
        if "=" not in kv:
            raise UsageError(f"parameter {kv!r} must look like key=value")
        k, v = kv.split("=", 1)
        params[k] = v
    cfg = catalog.build(a.name, params)
    text = formats.write_config(cfg)
    out.put(config=text)
    _write_or_print(out, text, a.output)
    return 0


def cmd_verify(a, out: Output) -> int:
    kw = {}
    if a.name == "rigid-k":
        kw["budget"] = a.budget
    rep = scenarios.run(a.name, **kw)
    out.line(rep.data.get("summary", ""))
    if a.verbose or not rep.ok:
        out.line(str(rep))
    out.put(name=a.name, ok=rep.ok, checks=rep.checks,
            data={k: (v if isinstance(v, (int, str, bool, list, type(None))) else str(v))
                  for k, v in rep.data.items()})
    return 0 if rep.ok else 1


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bistellar", description="Exact triangulations and bistellar flips.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check-tri", help="validate a triangulation or subdivision")
    s.add_argument("config")
    s.add_argument("tri")
    s.set_defaults(fn=cmd_check_tri)

    s = sub.add_parser("triangulate", help="regular subdivision from a lift")
    s.add_argument("config")
    s.add_argument("--lift", required=True, help="delaunay | pulling | pushing | file:<path>")
    s.add_argument("--order", help="label order for pulling/pushing, e.g. 1,2,3")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_triangulate)

    s = sub.add_parser("flips", help="list the flips of a triangulation")
    s.add_argument("config")
    s.add_argument("tri")
    s.set_defaults(fn=cmd_flips)

    s = sub.add_parser("flip", help="apply the flip on a circuit")
    s.add_argument("config")
    s.add_argument("tri")
    s.add_argument("--circuit", required=True, help="labels of the circuit support")
    s.add_argument("--reverse", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_flip)

    s = sub.add_parser("flipgraph", help="explore the flip graph")
    s.add_argument("config")
    s.add_argument("--seed")
    s.add_argument("--cap", type=int, default=100_000)
    s.add_argument("--diameter", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("-o", "--output", help="write the graph file here")
    s.set_defaults(fn=cmd_flipgraph)

    s = sub.add_parser("regular", help="regularity certificate or INFEASIBLE")
    s.add_argument("config")
    s.add_argument("tri")
    s.set_defaults(fn=cmd_regular)

    s = sub.add_parser("gkz", help="GKZ vector of a triangulation")
    s.add_argument("config")
    s.add_argument("tri")
    s.set_defaults(fn=cmd_gkz)

    s = sub.add_parser("secondary", help="f-vector of the secondary polytope")
    s.add_argument("config")
    s.add_argument("--cap", type=int, default=100_000)
    s.set_defaults(fn=cmd_secondary)

    s = sub.add_parser("monotone", help="w-monotone flip sequence")
    s.add_argument("config")
    s.add_argument("tri")
    s.add_argument("--lift", required=True)
    s.add_argument("--order")
    s.add_argument("--policy", choices=("first", "steepest"), default="first")
    s.set_defaults(fn=cmd_monotone)

    s = sub.add_parser("catalog", help="named configurations")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("params", nargs="*", help="key=value")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_catalog)

    s = sub.add_parser("verify", help="run a worked-example scenario")
    s.add_argument("name", choices=sorted(scenarios.SCENARIOS))
    s.add_argument("--budget", type=float, default=600.0, help="seconds (rigid-k only)")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(fn=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    out = Output(a.json)
    try:
        code = a.fn(a, out)
    except (UsageError, ScalarParseError, formats.FormatError, ConfigurationError,
            InvalidSubdivisionError, InapplicableFlipError, DegenerateLiftError,
            CapExceededError, ValueError) as e:
        if a.json:
            json.dump({"schema_version": SCHEMA_VERSION, "error": str(e)}, sys.stdout)
            sys.stdout.write("\n")
        print(f"error: {e}", file=sys.stderr)
        return 2
    out.flush()
    return code


def main() -> None:
    sys.exit(run())
