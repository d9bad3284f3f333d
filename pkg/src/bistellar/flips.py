"""Bistellar flips, flip graphs, monotone flipping and incremental construction."""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .config import Circuit, PointConfiguration
from .exact import ZERO, Scalar, as_scalar
from .regular import lift_value, subdivision_from_lift
from .subdivision import InvalidSubdivisionError, Triangulation, is_valid_triangulation

__all__ = [
    "Flip",
    "FlipGraph",
    "MonotoneResult",
    "InapplicableFlipError",
    "DegenerateLiftError",
    "find_flips",
    "apply_flip",
    "flip_graph",
    "monotone_flip_sequence",
    "incremental_construction",
]


class InapplicableFlipError(ValueError):
    pass


class DegenerateLiftError(ValueError):
    """The lift does not define a triangulation; ``subdivision`` says why."""

    def __init__(self, message: str, subdivision=None):
        super().__init__(message)
        self.subdivision = subdivision


_OTHER = {"+": "-", "-": "+"}


@dataclass(frozen=True)
class Flip:
    circuit: Circuit
    from_side: str
    link: frozenset  # of label tuples

    @property
    def type(self) -> tuple[int, int]:
        c = self.circuit
        return (len(c.side(self.from_side)), len(c.side(_OTHER[self.from_side])))

    @property
    def key(self):
        return (self.circuit.sort_key(), self.from_side)

    def _cells(self, side: str) -> list[tuple[int, ...]]:
        out = []
        for tau in self.circuit.triangulation(side):
            for rho in self.link:
                out.append(tuple(sorted(tau + rho)))
        return out

    @property
    def removed(self) -> list[tuple[int, ...]]:
        return self._cells(self.from_side)

    @property
    def added(self) -> list[tuple[int, ...]]:
        return self._cells(_OTHER[self.from_side])

    def reverse(self) -> "Flip":
        return Flip(self.circuit, _OTHER[self.from_side], self.link)

    def __str__(self) -> str:
        i, j = self.type
        return f"{self.circuit} from {self.from_side} type ({i},{j})"


def _as_tri(T) -> Triangulation:
    return T if isinstance(T, Triangulation) else Triangulation(T)


def _link(cells: Sequence[tuple], tau: Iterable[int]) -> frozenset:
    ts = set(tau)
    return frozenset(tuple(x for x in c if x not in ts) for c in cells if ts <= set(c))


def _flip_on(cells: Sequence[tuple], C: Circuit, side: str) -> Flip | None:
    link = None
    for tau in C.triangulation(side):
        lk = _link(cells, tau)
        if not lk or (link is not None and lk != link):
            return None
        link = lk
    return Flip(C, side, link)


def _insertion_circuit(cfg: PointConfiguration, cells, a: int) -> Circuit:
    for c in cells:
        signs = cfg.in_cell_signs(c, a)
        if all(s >= 0 for s in signs.values()):
            tau = [x for x in c if signs[x] > 0]
            return cfg.circuit_of(tau + [a])
    raise InvalidSubdivisionError(f"label {a} is not covered by the triangulation")


def find_flips(cfg: PointConfiguration, T, check: bool = True) -> list[Flip]:
    """All flips supported by ``T``: wall circuits plus insertion flips.

    Sorted by circuit then side, deduplicated on that key.
    """
    T = _as_tri(T)
    if check:
        rep = is_valid_triangulation(cfg, T)
        if not rep.ok:
            raise InvalidSubdivisionError(f"invalid triangulation: {rep.violations[0]}")
    cells = T.cells
    d = cfg.dim
    ridges: dict[tuple, list] = {}
    for c in cells:
        for r in itertools.combinations(c, d):
            ridges.setdefault(r, []).append(c)
    circuits = {}
    for r, owners in ridges.items():
        if len(owners) == 2:
            C = cfg.circuit_of(set(owners[0]) | set(owners[1]))
            circuits[C.sort_key()] = C
    used = T.used_labels
    for a in cfg.labels:
        if a not in used:
            C = _insertion_circuit(cfg, cells, a)
            circuits[C.sort_key()] = C
    out = {}
    for C in circuits.values():
        for side in ("+", "-"):
            f = _flip_on(cells, C, side)
            if f is not None:
                out[f.key] = f
    return [out[k] for k in sorted(out)]


def apply_flip(cfg: PointConfiguration, T, f: Flip) -> Triangulation:
    """Replace ``{rho+tau : tau in T^C_from}`` by ``{rho+tau : tau in T^C_other}``."""
    T = _as_tri(T)
    if _flip_on(T.cells, f.circuit, f.from_side) != f:
        raise InapplicableFlipError(f"flip {f} does not apply")
    removed = set(f.removed)
    cells = [c for c in T.cells if c not in removed]
    return Triangulation(cells + f.added)


def flip_to(cfg: PointConfiguration, T, support: Iterable[int], reverse: bool = False) -> Triangulation:
    """Apply the flip of ``T`` on the circuit with the given support.

    ``reverse`` selects the side ``T`` does *not* contain, which only makes
    sense when both sides are present (never, for a valid triangulation);
    it is accepted so the CLI can round-trip a flip on the result.
    """
    supp = frozenset(support)
    for f in find_flips(cfg, T, check=False):
        if f.circuit.support == supp:
            return apply_flip(cfg, T, f.reverse() if reverse else f)
    raise InapplicableFlipError(f"no flip of T on circuit {sorted(supp)}")


# ---------------------------------------------------------------------------
# flip graph
# ---------------------------------------------------------------------------


@dataclass
class FlipGraph:
    nodes: list  # Triangulation, by discovery
    edges: list  # (i, j, (p, q), Circuit), i < j, type sorted
    truncated: bool = False
    components: list = field(default_factory=list)
    diameters: list = field(default_factory=list)  # per component, None if not computed

    def index(self, T) -> int:
        return self.nodes.index(_as_tri(T))

    def adjacency(self) -> list[set]:
        adj = [set() for _ in self.nodes]
        for i, j, _, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def is_cycle(self) -> bool:
        return len(self.components) == 1 and len(self.nodes) >= 3 and all(k == 2 for k in self.degrees())

    @property
    def diameter(self) -> int | None:
        if len(self.components) != 1:
            return None
        return self.diameters[0] if self.diameters else None

    def edge_types(self) -> list[tuple[int, int]]:
        return sorted(t for _, _, t, _ in self.edges)


def _eccentricity(adj: list[set], s: int) -> int:
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return max(dist.values())


def _neighbors(cfg, T):
    return [(f, apply_flip(cfg, T, f)) for f in find_flips(cfg, T, check=False)]


def flip_graph(cfg: PointConfiguration, seeds=None, cap: int = 100_000, diameter: bool = True,
               threads: int = 1, max_diameter_nodes: int = 10_000) -> FlipGraph:
    """Breadth-first closure of ``seeds`` under flips.

    Stops adding nodes at ``cap`` and sets ``truncated``.  Levels are
    expanded in parallel when ``threads > 1``; insertion order only depends
    on the inputs.
    """
    if seeds is None:
        seeds = [Triangulation(cfg.placing_cells(cfg.labels))]
    seeds = sorted({_as_tri(s) for s in seeds})
    for s in seeds:
        rep = is_valid_triangulation(cfg, s)
        if not rep.ok:
            raise InvalidSubdivisionError(f"invalid seed: {rep.violations[0]}")
    index: dict = {}
    nodes: list = []
    edges: dict = {}
    truncated = False
    for s in seeds:
        if s not in index and len(nodes) < cap:
            index[s] = len(nodes)
            nodes.append(s)
    frontier = list(range(len(nodes)))
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while frontier:
            if pool is not None:
                results = list(pool.map(lambda i: _neighbors(cfg, nodes[i]), frontier))
            else:
                results = [_neighbors(cfg, nodes[i]) for i in frontier]
            nxt = []
            for i, nbrs in zip(frontier, results):
                for f, T2 in nbrs:
                    j = index.get(T2)
                    if j is None:
                        if len(nodes) >= cap:
                            truncated = True
                            continue
                        j = index[T2] = len(nodes)
                        nodes.append(T2)
                        nxt.append(j)
                    key = (min(i, j), max(i, j))
                    if key not in edges:
                        edges[key] = (key[0], key[1], tuple(sorted(f.type)), f.circuit)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    g = FlipGraph(nodes, [edges[k] for k in sorted(edges)], truncated)
    adj = g.adjacency()
    seen = set()
    for s in range(len(nodes)):
        if s in seen:
            continue
        comp = []
        q = deque([s])
        seen.add(s)
        while q:
            u = q.popleft()
            comp.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    q.append(v)
        g.components.append(sorted(comp))
    for comp in g.components:
        if diameter and len(comp) <= max_diameter_nodes:
            g.diameters.append(max(_eccentricity(adj, u) for u in comp))
        else:
            g.diameters.append(None)
    return g


# ---------------------------------------------------------------------------
# monotone flips
# ---------------------------------------------------------------------------


@dataclass
class MonotoneResult:
    flips: list
    final: Triangulation
    stuck: bool
    values: list  # <w, phi_T> along the sequence


def _generic_target(cfg: PointConfiguration, w) -> Triangulation:
    S = subdivision_from_lift(cfg, w)
    if not isinstance(S, Triangulation):
        raise DegenerateLiftError("the lift does not induce a triangulation", S)
    return S


def _monotone_step(cfg, T, w, value, policy: str, restrict_to: int | None = None):
    best = None
    for f in find_flips(cfg, T, check=False):
        if restrict_to is not None and restrict_to not in f.circuit.support:
            continue
        T2 = apply_flip(cfg, T, f)
        v2 = lift_value(cfg, w, T2)
        if v2 < value:
            if policy == "first":
                return f, T2, v2
            if best is None or v2 < best[2]:
                best = (f, T2, v2)
    return best


def monotone_flip_sequence(cfg: PointConfiguration, T0, w: Mapping[int, Scalar],
                           policy: str = "first") -> MonotoneResult:
    """Apply ``w``-decreasing flips until none is left.

    ``first`` takes the first decreasing flip in canonical order,
    ``steepest`` the one with the largest drop.  ``stuck`` is true when the
    final triangulation is not ``T_w``.
    """
    if policy not in ("first", "steepest"):
        raise ValueError(f"unknown policy {policy!r}")
    target = _generic_target(cfg, w)
    T = _as_tri(T0)
    rep = is_valid_triangulation(cfg, T)
    if not rep.ok:
        raise InvalidSubdivisionError(f"invalid triangulation: {rep.violations[0]}")
    value = lift_value(cfg, w, T)
    flips, values = [], [value]
    while True:
        step = _monotone_step(cfg, T, w, value, policy)
        if step is None:
            break
        f, T, value = step
        flips.append(f)
        values.append(value)
    return MonotoneResult(flips, T, T != target, values)


# ---------------------------------------------------------------------------
# incremental construction
# ---------------------------------------------------------------------------


def _height(cfg: PointConfiguration, T, w, p: int) -> Scalar:
    for c in T:
        signs = cfg.in_cell_signs(c, p)
        if all(s >= 0 for s in signs.values()):
            lam = cfg.barycentric(c, p)
            return sum((lam[x] * as_scalar(w[x]) for x in c), ZERO)
    raise ValueError(f"label {p} is outside the triangulated region")


def _visible_ridges(cfg: PointConfiguration, T, p: int) -> list[tuple]:
    count: dict[tuple, list] = {}
    for c in T:
        for r in itertools.combinations(c, cfg.dim):
            count.setdefault(r, []).append(c)
    out = []
    for r, owners in count.items():
        if len(owners) != 1:
            continue
        opp = next(x for x in owners[0] if x not in r)
        so = cfg.orientation(r + (opp,))
        sp = cfg.orientation(r + (p,))
        if so * sp < 0:
            out.append(r)
    return out


def incremental_construction(cfg: PointConfiguration, w: Mapping[int, Scalar],
                             order: Sequence[int] | None = None) -> Triangulation:
    """Build ``T_w`` by inserting points one at a time and flipping.

    Points outside the current hull are joined to the visible boundary;
    points inside are inserted with their insertion flip, or skipped when
    lifted above the current surface.  Then ``w``-decreasing flips around
    the new point are applied until none is left.
    """
    target = _generic_target(cfg, w)
    order = list(cfg.labels) if order is None else [int(x) for x in order]
    if sorted(order) != list(cfg.labels):
        raise ValueError("order must be a permutation of the labels")
    d = cfg.dim
    first = tuple(sorted(order[: d + 1]))
    if cfg.orientation(first) == 0:
        raise ValueError("the first d+1 labels of the order must be affinely independent")
    T = Triangulation([first])
    done = list(first)
    for p in order[d + 1:]:
        done.append(p)
        sub = cfg.restrict(done)
        vis = _visible_ridges(cfg, T, p)
        if vis:
            T = Triangulation(list(T.cells) + [tuple(sorted(r + (p,))) for r in vis])
        else:
            h = _height(cfg, T, w, p)
            wp = as_scalar(w[p])
            if wp == h:
                raise DegenerateLiftError(f"label {p} lies on the lifted surface")
            if wp > h:
                continue
            C = _insertion_circuit(cfg, T.cells, p)
            f = next(f for f in find_flips(sub, T, check=False) if f.circuit == C)
            T = apply_flip(sub, T, f)
        value = lift_value(cfg, w, T)
        while True:
            step = _monotone_step(sub, T, w, value, "first", restrict_to=p)
            if step is None:
                break
            _, T, value = step
    if T != target:
        T = monotone_flip_sequence(cfg, T, w).final
    if T != target:
        raise AssertionError("incremental construction did not reach the regular triangulation")
    return T
