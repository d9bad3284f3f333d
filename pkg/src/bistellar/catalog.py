"""Named configurations and structural checks on them."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .config import PointConfiguration, is_perturbation_of
from .exact import SQRT2, ZERO, Scalar, as_scalar
from .flips import apply_flip, find_flips, flip_graph
from .subdivision import (
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    is_valid_triangulation,
)

__all__ = [
    "NAMES",
    "build",
    "parse_name",
    "A_labels",
    "F_labels",
    "boundary_complex",
    "induced_on",
    "boundary_preserving_flips",
    "verify_A0_degeneracies",
    "verify_A0_structure",
    "verify_F_lemma",
    "verify_prism",
    "search_rigid_K",
    "schoenhardt_T",
    "Report",
]

DEFAULT_EPS = Fraction(1, 100)
DEFAULT_T = Fraction(1, 8)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def five_points() -> PointConfiguration:
    return PointConfiguration([(0, 0), (3, 0), (0, 3), (3, 3), (1, 1)])


def moae() -> PointConfiguration:
    cols = [(4, 0, 0), (0, 4, 0), (0, 0, 4), (2, 1, 1), (1, 2, 1), (1, 1, 2)]
    return PointConfiguration(cols, homogeneous=True)


def _moae_outer(eps) -> list[tuple]:
    return [(4 - eps, eps, 0), (0, 4 - eps, eps), (eps, 0, 4 - eps)]


def moae_perturbed(eps=DEFAULT_EPS) -> PointConfiguration:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    cols = _moae_outer(eps) + [(2, 1, 1), (1, 2, 1), (1, 1, 2)]
    return PointConfiguration(cols, homogeneous=True)


def schoenhardt8(eps=DEFAULT_EPS) -> PointConfiguration:
    """Labels: a1 a2 a3 b1 b2 b3 c1 c2 = 1..8."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    third = Fraction(4, 3)
    cols = [c + (0,) for c in _moae_outer(eps)]
    cols += [(2, 1, 1, 1), (1, 2, 1, 1), (1, 1, 2, 1)]
    cols += [(third, third, third, 10), (third, third, third, -10)]
    return PointConfiguration(cols, homogeneous=True)


def prism() -> PointConfiguration:
    return PointConfiguration([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])


def convex_position(n: int) -> PointConfiguration:
    if n < 3:
        raise ValueError("convex_position needs n >= 3")
    return PointConfiguration([(i, i * i) for i in range(n)])


def collinear(n: int) -> PointConfiguration:
    if n < 2:
        raise ValueError("collinear needs n >= 2")
    return PointConfiguration([(i,) for i in range(n)])


def octagon() -> PointConfiguration:
    """Regular octagon with vertices (+-1, +-(1+sqrt2)) and (+-(1+sqrt2), +-1)."""
    s = 1 + SQRT2
    pts = [(s, 1), (1, s), (-1, s), (-s, 1), (-s, -1), (-1, -s), (1, -s), (s, -1)]
    return PointConfiguration(pts)


_X5 = [SQRT2, 1, 0, -1, -SQRT2, -1, 0, 1]
_X6 = [0, 1, SQRT2, 1, 0, -1, -SQRT2, -1]


def _A_columns(t) -> list[tuple]:
    t = as_scalar(t)
    plus = [(1, t, 0, 0), (-t, 1, 0, 0), (0, 0, 1, t), (0, 0, -t, 1),
            (1, -t, 0, 0), (t, 1, 0, 0), (0, 0, 1, -t), (0, 0, t, 1)]
    minus = [(-1, -t, 0, 0), (t, -1, 0, 0), (0, 0, -1, -t), (0, 0, t, -1),
             (-1, t, 0, 0), (-t, -1, 0, 0), (0, 0, -1, t), (0, 0, -t, -1)]
    cols = [(0,) * 6]
    cols += [p + (_X5[i], _X6[i]) for i, p in enumerate(plus)]
    cols += [m + (_X5[i], _X6[i]) for i, m in enumerate(minus)]
    return cols


def A_labels() -> dict[str, int]:
    """Label map: ``O`` -> 1, ``a{i}+`` -> 1+i, ``a{i}-`` -> 9+i."""
    out = {"O": 1}
    for i in range(1, 9):
        out[f"a{i}+"] = 1 + i
        out[f"a{i}-"] = 9 + i
    return out


def A(t=0) -> PointConfiguration:
    t = as_scalar(t)
    if not t.is_rational or t < 0:
        raise ValueError("A(t) requires rational t >= 0")
    return PointConfiguration(_A_columns(t))


def _signs(delta) -> tuple[int, ...]:
    words = {"+": 1, "-": -1, 1: 1, -1: -1}
    delta = tuple(words.get(x, 0) for x in delta)
    if len(delta) != 4 or 0 in delta:
        raise ValueError("F needs four signs in {+,-}")
    return delta


def F_labels(delta) -> frozenset:
    """Labels of ``F_{d1,d2,d3,d4}`` inside ``A(t)``."""
    delta = _signs(delta)
    out = []
    for i in range(8):
        s = delta[i % 4]
        out.append(2 + i if s > 0 else 10 + i)
    return frozenset(out)


def F(delta="++++", t=DEFAULT_T) -> PointConfiguration:
    return A(t).restrict(F_labels(delta))


NAMES = {
    "five_points": five_points,
    "moae": moae,
    "moae_perturbed": moae_perturbed,
    "schoenhardt8": schoenhardt8,
    "prism": prism,
    "convex_position": convex_position,
    "collinear": collinear,
    "octagon": octagon,
    "A": A,
    "F": F,
}

_PARAMS = {
    "moae_perturbed": ("eps",),
    "schoenhardt8": ("eps",),
    "convex_position": ("n",),
    "collinear": ("n",),
    "A": ("t",),
    "F": ("signs", "t"),
}


def parse_name(text: str) -> tuple[str, dict]:
    """Accept ``collinear8``, ``convex7``, ``five-points``, ``A(1/8)`` and the like."""
    s = text.strip()
    params: dict = {}
    arg = None
    if "(" in s and s.endswith(")"):
        s, arg = s[:-1].split("(", 1)
    s = s.strip().replace("-", "_")
    if arg is not None:
        args = [a.strip() for a in arg.split(",") if a.strip()]
        keys = _PARAMS.get(s, ())
        if len(args) > len(keys):
            raise ValueError(f"too many parameters for {s}")
        params = dict(zip(keys, args))
    aliases = {"convex": "convex_position", "fivepoints": "five_points", "perturbed": "moae_perturbed"}
    if s not in NAMES:
        stem = s.rstrip("0123456789")
        digits = s[len(stem):]
        stem = aliases.get(stem.rstrip("_"), stem.rstrip("_"))
        if stem in ("convex_position", "collinear") and digits:
            s, params = stem, {"n": digits}
        else:
            s = aliases.get(s, s)
    if s not in NAMES:
        raise ValueError(f"unknown configuration {text!r}")
    return s, params


def build(name: str, params: dict | None = None) -> PointConfiguration:
    """Build a named configuration; ``params`` values may be strings."""
    name, parsed = parse_name(name)
    params = {**parsed, **(params or {})}
    fn = NAMES[name]
    kw = {}
    for k, v in params.items():
        if k == "n":
            kw[k] = int(v)
        elif k == "signs":
            kw["delta"] = v
        elif k in ("t", "eps"):
            kw[k] = Fraction(v) if isinstance(v, str) else v
        else:
            raise ValueError(f"unknown parameter {k!r} for {name}")
    return fn(**kw)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class Report:
    name: str
    checks: dict = field(default_factory=dict)  # check -> bool
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def check(self, key: str, value: bool) -> bool:
        self.checks[key] = bool(value)
        return bool(value)

    def __str__(self) -> str:
        lines = [f"{self.name}: {'ok' if self.ok else 'FAILED'}"]
        for k, v in self.checks.items():
            lines.append(f"  [{'x' if v else ' '}] {k}")
        for k, v in self.data.items():
            lines.append(f"  {k} = {v}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# boundary complexes
# ---------------------------------------------------------------------------


def induced_on(T, face: Iterable[int], k: int) -> frozenset:
    """Cells of ``T`` restricted to ``face`` that have exactly ``k`` labels."""
    fs = set(face)
    out = set()
    for c in T:
        sub = tuple(x for x in c if x in fs)
        if len(sub) == k:
            out.add(sub)
    return frozenset(out)


def boundary_complex(cfg: PointConfiguration, T) -> Subdivision:
    """The triangulation ``T`` induces on the boundary of the hull."""
    out = set()
    for f in cfg.facets():
        out |= induced_on(T, f.labels, cfg.dim)
    return Subdivision(out)


def boundary_preserving_flips(cfg: PointConfiguration, T, K=None) -> tuple[bool, list]:
    """Whether every flip of ``T`` keeps the boundary complex ``K``."""
    T = T if isinstance(T, Triangulation) else Triangulation(T)
    K = boundary_complex(cfg, T) if K is None else Subdivision(K)
    bad = [f for f in find_flips(cfg, T, check=False)
           if boundary_complex(cfg, apply_flip(cfg, T, f)) != K]
    return (not bad, bad)


# ---------------------------------------------------------------------------
# A(t)
# ---------------------------------------------------------------------------


def verify_A0_degeneracies(cfg: PointConfiguration | None = None) -> Report:
    """``a_i+ + a_{i+4}+ + a_i- + a_{i+4}- = 4 O`` for i = 1..4, and non-general position."""
    cfg = A(0) if cfg is None else cfg
    rep = Report("A degeneracies")
    lab = A_labels()
    O = cfg.vector(lab["O"])
    for i in range(1, 5):
        names = (f"a{i}+", f"a{i + 4}+", f"a{i}-", f"a{i + 4}-")
        total = [ZERO] * len(O)
        for nm in names:
            total = [x + y for x, y in zip(total, cfg.vector(lab[nm]))]
        rep.check(f"identity i={i}", total == [4 * x for x in O])
    rep.check("not in general position", not cfg.is_general_position())
    return rep


def _sign_change_permutation(cfg: PointConfiguration, signs) -> dict[int, int]:
    where = {cfg.coords(lab): lab for lab in cfg.labels}
    perm = {}
    for lab in cfg.labels:
        c = cfg.coords(lab)
        img = tuple(c[i] * signs[i] for i in range(4)) + tuple(c[4:])
        if img not in where:
            raise ValueError("sign change is not a symmetry of the configuration")
        perm[lab] = where[img]
    return perm


def verify_A0_structure(check_perturbation_t=DEFAULT_T) -> Report:
    """Degeneracies, facet census, F formula, sign-change transitivity, perturbation."""
    a0 = A(0)
    rep = verify_A0_degeneracies(a0)
    rep.name = "A(0) structure"
    facets = a0.facets()
    simp = [f for f in facets if len(f.labels) == a0.dim]
    big = [f.labels for f in facets if len(f.labels) > a0.dim]
    rep.data["facets"] = f"{len(simp)} simplicial + {len(big)} non-simplicial"
    rep.check("96 simplicial facets", len(simp) == 96)
    rep.check("16 non-simplicial facets", len(big) == 16)
    rep.check("non-simplicial facets have 8 labels", all(len(b) == 8 for b in big))
    formula = {F_labels(d) for d in itertools.product((1, -1), repeat=4)}
    rep.check("facets match the F formula", set(big) == formula)
    orbit = set()
    base = F_labels((1, 1, 1, 1))
    for s in itertools.product((1, -1), repeat=4):
        perm = _sign_change_permutation(a0, s)
        orbit.add(frozenset(perm[x] for x in base))
    rep.check("sign changes act transitively on the F facets", orbit == set(big))
    if check_perturbation_t is not None:
        t = Fraction(check_perturbation_t)
        rep.check(f"A({t}) is a perturbation of A(0)", is_perturbation_of(A(t), a0))
    return rep


def _nonsimplicial_facets(cfg: PointConfiguration) -> list[frozenset]:
    return [f.labels for f in cfg.facets() if len(f.labels) > cfg.dim]


def verify_F_lemma(t=DEFAULT_T, delta="++++") -> Report:
    """Facet structure, triangulation count and flip behaviour of ``F(delta, t)``."""
    t = Fraction(t)
    cfg = F(delta, t)
    rep = Report(f"F lemma at t={t}")
    rep.data["dim"] = cfg.dim
    facets = cfg.facets()
    big = _nonsimplicial_facets(cfg)
    nsimp = sum(1 for f in facets if len(f.labels) == cfg.dim)
    rep.data["facets"] = f"{len(facets)} ({nsimp} simplicial, {len(big)} non-simplicial)"
    rep.check("12 facets", len(facets) == 12)
    rep.check("8 simplicial facets", nsimp == 8)
    rep.check("4 six-point facets", len(big) == 4 and all(len(b) == 6 for b in big))
    types_ok = True
    for b in big:
        try:
            types_ok &= sorted(cfg.circuit_of(b).type) == [3, 3] and len(cfg.circuit_of(b).support) == 6
        except ValueError:
            types_ok = False
    rep.check("each six-point facet is a (3,3) circuit", types_ok and len(big) == 4)
    choices = 1
    for b in big:
        choices *= len(enumerate_triangulations_bruteforce(cfg.restrict(b)))
    rep.data["boundary triangulations"] = choices
    rep.check("16 boundary triangulations", choices == 16)
    tris = enumerate_triangulations_bruteforce(cfg)
    rep.data["triangulations"] = len(tris)
    rep.check("8 triangulations", len(tris) == 8)
    g = flip_graph(cfg, tris)
    rep.check("flip graph is an 8-cycle", g.is_cycle() and len(g.nodes) == 8)
    one_each = True
    for i, j, _, _ in g.edges:
        changed = sum(
            induced_on(g.nodes[i], b, cfg.dim) != induced_on(g.nodes[j], b, cfg.dim) for b in big
        )
        one_each &= changed == 1
    rep.check("each flip switches exactly one six-point facet", one_each and bool(g.edges))
    return rep


def verify_prism() -> Report:
    cfg = prism()
    rep = Report("prism")
    squares = _nonsimplicial_facets(cfg)
    choices = 1
    for sq in squares:
        choices *= len(enumerate_triangulations_bruteforce(cfg.restrict(sq)))
    rep.data["boundary choices"] = choices
    rep.check("8 boundary triangulations", choices == 8)
    tris = enumerate_triangulations_bruteforce(cfg)
    rep.data["triangulations"] = len(tris)
    rep.check("6 triangulations", len(tris) == 6)
    ks = {boundary_complex(cfg, T) for T in tris}
    rep.data["extendable boundary choices"] = len(ks)
    rep.check("exactly 6 boundary triangulations extend", len(ks) == 6)
    g = flip_graph(cfg, tris)
    one_each = True
    for i, j, _, _ in g.edges:
        changed = sum(
            induced_on(g.nodes[i], sq, 3) != induced_on(g.nodes[j], sq, 3) for sq in squares
        )
        one_each &= changed == 1
    rep.check("each flip toggles exactly one square diagonal", one_each and bool(g.edges))
    return rep


# ---------------------------------------------------------------------------
# the rigid boundary complex of A(0)
# ---------------------------------------------------------------------------


@dataclass
class RigidSearchResult:
    found: bool
    exhausted: bool  # search finished within budget
    K: Subdivision | None = None
    T: Triangulation | None = None
    solutions: int = 0  # boundary complexes satisfying the constraints
    assignment: dict = field(default_factory=dict)  # F labels -> Triangulation
    preserve: bool | None = None
    violating: list = field(default_factory=list)
    trace: list = field(default_factory=list)


def search_rigid_K(cfg: PointConfiguration | None = None, budget: float = 600.0,
                   count_all: bool = True, verify: bool = True) -> RigidSearchResult:
    """Search for a boundary triangulation ``K`` of ``A(0)`` whose extensions cannot flip it.

    Each non-simplicial facet ``F`` gets one of its triangulations; facets
    sharing a six-point ridge ``G`` must agree on ``G`` and one of them must
    be unflippable on ``G``.  The first solution is extended by coning from
    the interior point ``O`` and checked with :func:`boundary_preserving_flips`.
    """
    start = time.monotonic()
    cfg = A(0) if cfg is None else cfg
    res = RigidSearchResult(False, False)
    log = res.trace.append

    def left() -> float:
        return budget - (time.monotonic() - start)

    facets = cfg.facets()
    simp = [tuple(sorted(f.labels)) for f in facets if len(f.labels) == cfg.dim]
    bigs = sorted((f.labels for f in facets if len(f.labels) > cfg.dim), key=sorted)
    log(f"facets: {len(simp)} simplicial, {len(bigs)} non-simplicial")
    # per-facet data
    dom: dict = {}
    ridges_of: dict = {}
    for B in bigs:
        sub = cfg.restrict(B)
        tris = sorted(enumerate_triangulations_bruteforce(sub))
        gs = [g for g in _nonsimplicial_facets(sub)]
        ridges_of[B] = gs
        k = sub.dim
        info = []
        for T in tris:
            ind = {g: induced_on(T, g, k) for g in gs}
            rigid = {g: True for g in gs}
            for f in find_flips(sub, T, check=False):
                T2 = apply_flip(sub, T, f)
                for g in gs:
                    if induced_on(T2, g, k) != ind[g]:
                        rigid[g] = False
            info.append((T, ind, rigid))
        dom[B] = info
        if left() <= 0:
            log("budget exhausted while preparing facet data")
            return res
    log("facet triangulations: " + ", ".join(str(len(dom[B])) for B in bigs))
    # neighbor structure via shared six-point ridges
    share: dict = {}
    for B in bigs:
        for g in ridges_of[B]:
            share.setdefault(g, []).append(B)
    pairs = [(g, bs) for g, bs in share.items() if len(bs) == 2]
    log(f"shared ridges: {len(pairs)} (unshared: {sum(1 for bs in share.values() if len(bs) != 2)})")
    nbrs = {B: [] for B in bigs}
    for g, (b1, b2) in pairs:
        nbrs[b1].append((g, b2))
        nbrs[b2].append((g, b1))

    def ok(B, i, assign):
        _, ind, rigid = dom[B][i]
        for g, B2 in nbrs[B]:
            if B2 in assign:
                _, ind2, rigid2 = dom[B2][assign[B2]]
                if ind[g] != ind2[g] or not (rigid[g] or rigid2[g]):
                    return False
        return True

    solutions = []
    order = []
    seen = set()
    # breadth-first variable order keeps constraints tight
    for root in bigs:
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            B = queue.pop(0)
            order.append(B)
            for _, B2 in nbrs[B]:
                if B2 not in seen:
                    seen.add(B2)
                    queue.append(B2)
    nodes = [0]
    timed_out = False

    def backtrack(pos, assign):
        nonlocal timed_out
        if timed_out:
            return
        if pos == len(order):
            solutions.append(dict(assign))
            return
        nodes[0] += 1
        if nodes[0] % 1000 == 0 and left() <= 0:
            timed_out = True
            return
        B = order[pos]
        for i in range(len(dom[B])):
            if ok(B, i, assign):
                assign[B] = i
                backtrack(pos + 1, assign)
                del assign[B]
                if solutions and not count_all:
                    return

    backtrack(0, {})
    res.solutions = len(solutions)
    res.exhausted = not timed_out
    log(f"assignment search: {len(solutions)} solutions, {nodes[0]} nodes, "
        f"{'complete' if not timed_out else 'budget exhausted'}")
    if not solutions:
        return res
    sol = solutions[0]
    res.assignment = {B: dom[B][sol[B]][0] for B in bigs}
    kcells = list(simp)
    for B in bigs:
        kcells.extend(dom[B][sol[B]][0].cells)
    res.K = Subdivision(kcells)
    O = A_labels()["O"]
    res.T = Triangulation([tuple(sorted(c + (O,))) for c in kcells])
    res.found = True
    log(f"K has {len(kcells)} cells; cone from O has {len(res.T)} cells")
    if verify and left() > 0:
        valid = is_valid_triangulation(cfg, res.T).ok
        log(f"cone over K valid: {valid}")
        same = boundary_complex(cfg, res.T) == res.K
        log(f"cone induces K: {same}")
        if valid and same:
            res.preserve, res.violating = boundary_preserving_flips(cfg, res.T, res.K)
            log(f"flips of T: preserve boundary = {res.preserve}, violating = {len(res.violating)}")
        else:
            res.preserve = False
    elif verify:
        log("budget exhausted before verification")
    return res


# ---------------------------------------------------------------------------
# Schoenhardt
# ---------------------------------------------------------------------------


def schoenhardt_T(cfg: PointConfiguration | None = None) -> Triangulation:
    """Seven boundary triangles of the twisted prism, each joined to both apexes."""
    cfg = schoenhardt8() if cfg is None else cfg
    a = {1: 1, 2: 2, 3: 3}
    b = {1: 4, 2: 5, 3: 6}
    c1, c2 = 7, 8
    tris = [(b[1], b[2], b[3])]
    for i in (1, 2, 3):
        j = i % 3 + 1
        tris.append((a[i], a[j], b[i]))
        tris.append((a[j], b[i], b[j]))
    cells = [tuple(sorted(t + (c,))) for t in tris for c in (c1, c2)]
    return Triangulation(cells)
