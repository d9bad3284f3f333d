"""Triangulations and polyhedral subdivisions as sets of label cells."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .config import Circuit, PointConfiguration
from .exact import ZERO, Scalar, nullspace, solve
from .lp import feasible_point

__all__ = [
    "Subdivision",
    "Triangulation",
    "Violation",
    "ValidityReport",
    "InvalidSubdivisionError",
    "CapExceededError",
    "improper_circuit",
    "is_valid_triangulation",
    "is_valid_subdivision",
    "refines",
    "flip_subdivision_refinements",
    "enumerate_triangulations_bruteforce",
    "interior_walls_ok",
]


class InvalidSubdivisionError(ValueError):
    pass


class CapExceededError(RuntimeError):
    def __init__(self, cap: int, found: int):
        self.cap = cap
        self.found = found
        super().__init__(f"more than {cap} triangulations (stopped at {found})")


def _cell(c: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(c)))


class Subdivision:
    """A set of cells; identity is the lexicographically sorted cell list."""

    __slots__ = ("cells", "_hash")

    def __init__(self, cells: Iterable[Iterable[int]]):
        self.cells: tuple[tuple[int, ...], ...] = tuple(sorted({_cell(c) for c in cells}))
        self._hash = hash(self.cells)

    @property
    def canonical_form(self) -> tuple[tuple[int, ...], ...]:
        return self.cells

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return _cell(cell) in set(self.cells)

    def __eq__(self, other) -> bool:
        if isinstance(other, Subdivision):
            return self.cells == other.cells
        return NotImplemented

    def __lt__(self, other: "Subdivision") -> bool:
        return self.cells < other.cells

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ",".join("".join(map(str, c)) if all(x < 10 for x in c) else "-".join(map(str, c)) for c in self.cells)
        return f"{type(self).__name__}({{{body}}})"

    @property
    def used_labels(self) -> frozenset:
        return frozenset(x for c in self.cells for x in c)

    def is_simplicial(self, dim: int) -> bool:
        return all(len(c) == dim + 1 for c in self.cells)

    def __reduce__(self):
        return (type(self), (self.cells,))


class Triangulation(Subdivision):
    __slots__ = ()


@dataclass(frozen=True)
class Violation:
    kind: str  # bad_cell | improper_intersection | volume_mismatch | not_contained
    cells: tuple = ()
    circuit: Circuit | None = None
    expected: Scalar | None = None
    actual: Scalar | None = None

    def __str__(self) -> str:
        parts = [self.kind]
        if self.cells:
            parts.append("cells=" + " ".join("-".join(map(str, c)) for c in self.cells))
        if self.circuit is not None:
            parts.append(f"circuit={self.circuit}")
        if self.expected is not None:
            parts.append(f"expected={self.expected} actual={self.actual}")
        return " ".join(parts)


@dataclass
class ValidityReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# pairwise intersection tests
# ---------------------------------------------------------------------------


def _bbox_disjoint(cfg: PointConfiguration, s, t) -> bool:
    lo1, hi1 = cfg.bbox(s)
    lo2, hi2 = cfg.bbox(t)
    return any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2))


def _separated_by_facet(cfg: PointConfiguration, s, t, shared) -> bool:
    # some facet hyperplane of simplex s holds the shared labels and has the
    # rest of t strictly on the far side
    rest = [x for x in t if x not in shared]
    for v in s:
        if v in shared:
            continue
        f = tuple(x for x in s if x != v)
        sv = cfg.orientation(f + (v,))
        if all(cfg.orientation(f + (x,)) * sv < 0 for x in rest):
            return True
    return False


def _proportional(u, v) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))


def _conformal_circuit(cfg: PointConfiguration, labels: list, x: list) -> Circuit:
    """Reduce a dependence ``x`` to a circuit conformal to it."""
    while True:
        supp = [i for i, v in enumerate(x) if v]
        sub = [labels[i] for i in supp]
        kernel = cfg.dependence(sub)
        if len(kernel) == 1:
            return Circuit.from_vector(sub, [x[i] for i in supp])
        xs = [x[i] for i in supp]
        y = next((cand for cand in kernel if not _proportional(xs, cand)), None)
        if y is None:
            raise AssertionError("kernel of dimension >1 with all vectors proportional")
        for yy in (y, [-v for v in y]):
            ratios = [xs[j] / yy[j] for j in range(len(xs)) if yy[j] and yy[j].sign() == xs[j].sign()]
            if ratios:
                step = min(ratios)
                new = list(x)
                for j, i in enumerate(supp):
                    new[i] = xs[j] - step * yy[j]
                x = new
                break
        else:
            raise AssertionError("no conformal step")


def improper_circuit(cfg: PointConfiguration, s, t) -> Circuit | None:
    """A circuit witnessing that simplices ``s`` and ``t`` intersect improperly.

    Returns a circuit ``Z`` with one side inside ``s`` and the other inside
    ``t``, or ``None`` when ``conv(s)`` and ``conv(t)`` meet in a common face.
    """
    s = tuple(sorted(s))
    t = tuple(sorted(t))
    if s == t:
        return None
    shared = set(s) & set(t)
    if _bbox_disjoint(cfg, s, t):
        return None
    if _separated_by_facet(cfg, s, t, shared) or _separated_by_facet(cfg, t, s, shared):
        return None
    only_s = [x for x in s if x not in shared]
    only_t = [x for x in t if x not in shared]
    if len(only_s) == 1 and len(only_t) == 1:
        c = cfg.circuit_of(set(s) | set(t))
        sset, tset = set(s), set(t)
        if (c.positive <= sset and c.negative <= tset) or (c.negative <= sset and c.positive <= tset):
            return c
        return None
    labels = only_s + only_t + sorted(shared)
    k = cfg.dim + 1
    vecs = [cfg.vector(x) for x in labels]
    # variables: x for only_s (>= 0), -x for only_t (>= 0), shared free
    sgn = [1] * len(only_s) + [-1] * len(only_t) + [1] * len(shared)
    eq = []
    for i in range(k):
        eq.append(([v[i] * g for v, g in zip(vecs, sgn)], 0))
    norm = [1] * (len(only_s) + len(only_t)) + [0] * len(shared)
    eq.append((norm, 1))
    sol = feasible_point(len(labels), eq=eq, nonneg=range(len(only_s) + len(only_t)))
    if sol is None:
        return None
    x = [v * g for v, g in zip(sol, sgn)]
    return _conformal_circuit(cfg, labels, x)


def _separating_functional(cfg: PointConfiguration, s, t) -> list[Scalar] | None:
    shared = set(s) & set(t)
    ge = []
    eq = []
    for x in s:
        if x in shared:
            eq.append((cfg.vector(x), 0))
        else:
            ge.append((cfg.vector(x), 1))
    for x in t:
        if x not in shared:
            ge.append(([-v for v in cfg.vector(x)], 1))
    return feasible_point(cfg.dim + 1, ge=ge, eq=eq)


# ---------------------------------------------------------------------------
# validity
# ---------------------------------------------------------------------------


def is_valid_triangulation(cfg: PointConfiguration, T: Iterable[Iterable[int]]) -> ValidityReport:
    """Check cells, pairwise proper intersection and covering."""
    cells = [_cell(c) for c in T]
    report = ValidityReport()
    good = []
    for c in cells:
        if any(x not in cfg for x in c) or len(c) != cfg.dim + 1 or cfg.orientation(c) == 0:
            report.violations.append(Violation("bad_cell", (c,)))
        else:
            good.append(c)
    if report.violations:
        return report
    for a, b in itertools.combinations(good, 2):
        circ = improper_circuit(cfg, a, b)
        if circ is not None:
            report.violations.append(Violation("improper_intersection", (a, b), circuit=circ))
    total = sum((cfg.normalized_volume(c) for c in good), ZERO)
    hull = cfg.hull_volume()
    if total != hull:
        report.violations.append(Violation("volume_mismatch", expected=hull, actual=total))
    return report


def _cell_volume(cfg: PointConfiguration, c) -> Scalar:
    if len(c) == cfg.dim + 1:
        return cfg.normalized_volume(c)
    return cfg.restrict(c).hull_volume()


def is_valid_subdivision(cfg: PointConfiguration, S: Iterable[Iterable[int]]) -> ValidityReport:
    """Check spanning cells, face-to-face intersection and covering."""
    cells = [_cell(c) for c in S]
    report = ValidityReport()
    good = []
    for c in cells:
        if any(x not in cfg for x in c) or len(c) < cfg.dim + 1 or cfg.rank(c) != cfg.dim + 1:
            report.violations.append(Violation("bad_cell", (c,)))
        else:
            good.append(c)
    if report.violations:
        return report
    for a, b in itertools.combinations(good, 2):
        if _bbox_disjoint(cfg, a, b):
            continue
        if _separating_functional(cfg, a, b) is None:
            report.violations.append(Violation("improper_intersection", (a, b)))
    total = sum((_cell_volume(cfg, c) for c in good), ZERO)
    hull = cfg.hull_volume()
    if total != hull:
        report.violations.append(Violation("volume_mismatch", expected=hull, actual=total))
    return report


def refines(cfg: PointConfiguration, S1, S2) -> bool:
    """True iff every cell of ``S1`` lies in a cell of ``S2`` and each cell of
    ``S2`` is subdivided by the cells of ``S1`` it contains."""
    for S in (S1, S2):
        rep = is_valid_subdivision(cfg, S)
        if not rep.ok:
            raise InvalidSubdivisionError(f"invalid subdivision: {rep.violations[0]}")
    fine = [_cell(c) for c in S1]
    coarse = [_cell(c) for c in S2]
    for c in fine:
        if not any(set(c) <= set(big) for big in coarse):
            return False
    for big in coarse:
        inside = [c for c in fine if set(c) <= set(big)]
        sub = cfg.restrict(big)
        if not is_valid_subdivision(sub, inside).ok:
            return False
    return True


def flip_subdivision_refinements(cfg: PointConfiguration, S):
    """If ``S`` contains a unique circuit, return it and its two refinements.

    Returns ``(circuit, T_plus, T_minus)`` where ``T_plus`` replaces every cell
    containing the circuit by the cones over the circuit's ``+`` triangulation
    (and likewise for ``-``); ``None`` if ``S`` is not a flip.
    """
    cells = [_cell(c) for c in S]
    circuits = set()
    for c in cells:
        extra = len(c) - (cfg.dim + 1)
        if extra == 0:
            continue
        if extra > 1 or len(cfg.dependence(c)) != 1:
            return None
        circuits.add(cfg.circuit_of(c))
    if len(circuits) != 1:
        return None
    (C,) = circuits
    supp = C.support
    out = []
    for side in ("+", "-"):
        new = []
        for c in cells:
            if supp <= set(c):
                new.extend(tuple(x for x in c if x != v) for v in C.side(side))
            else:
                new.append(c)
        out.append(Triangulation(new))
    return C, out[0], out[1]


def interior_walls_ok(cfg: PointConfiguration, T) -> bool:
    """Every ridge lies in a hull facet (once) or in exactly two cells."""
    facets = [f.labels for f in cfg.facets()]
    count: dict[tuple, int] = {}
    for c in T:
        for r in itertools.combinations(c, cfg.dim):
            count[r] = count.get(r, 0) + 1
    for r, k in count.items():
        on_boundary = any(set(r) <= f for f in facets)
        if (on_boundary and k != 1) or (not on_boundary and k != 2):
            return False
    return True


# ---------------------------------------------------------------------------
# brute-force enumeration
# ---------------------------------------------------------------------------


def _generic_probe(cfg: PointConfiguration) -> tuple[tuple, list[Scalar]]:
    base = cfg.placing_cells(cfg.labels)[0]
    rng = random.Random(1729)
    dsets = [r for r in itertools.combinations(cfg.labels, cfg.dim) if cfg.rank(r) == cfg.dim]
    for attempt in range(200):
        if attempt == 0:
            weights = [Fraction(2 ** i) for i in range(len(base))]
        else:
            weights = [Fraction(rng.randint(1, 997), rng.randint(1, 997)) for _ in base]
        tot = sum(weights)
        q = [ZERO] * (cfg.dim + 1)
        for w, lab in zip(weights, base):
            q = [a + b * (w / tot) for a, b in zip(q, cfg.vector(lab))]
        if all(cfg.det_with(r, [q]) for r in dsets):
            return base, q
    raise RuntimeError("could not find a generic probe point")


def _contains_probe(cfg: PointConfiguration, cell, q) -> bool:
    m = [[cfg.vector(x)[i] for x in cell] for i in range(cfg.dim + 1)]
    lam = solve(m, q)
    return lam is not None and all(v.sign() > 0 for v in lam)


def enumerate_triangulations_bruteforce(cfg: PointConfiguration, cap: int = 100_000) -> set:
    """All triangulations of ``cfg`` by backtracking.

    The root branches over the simplices containing a generic interior probe
    point; afterwards the search always completes the first free interior
    ridge, so every triangulation is produced exactly once.  Raises
    :class:`CapExceededError` beyond ``cap`` results.
    """
    d = cfg.dim
    facets = [f.labels for f in cfg.facets()]
    boundary_memo: dict[tuple, bool] = {}

    def on_boundary(r):
        v = boundary_memo.get(r)
        if v is None:
            rs = set(r)
            v = any(rs <= f for f in facets)
            boundary_memo[r] = v
        return v

    hull = cfg.hull_volume()
    _, q = _generic_probe(cfg)
    roots = [
        c
        for c in itertools.combinations(cfg.labels, d + 1)
        if cfg.orientation(c) != 0 and _contains_probe(cfg, c, q)
    ]
    results: set = set()
    compat: dict[tuple, bool] = {}

    def compatible(a, b):
        key = (a, b) if a < b else (b, a)
        v = compat.get(key)
        if v is None:
            v = improper_circuit(cfg, a, b) is None
            compat[key] = v
        return v

    def recurse(cells: list, ridges: dict):
        free = None
        for r in sorted(ridges):
            if len(ridges[r]) == 1 and not on_boundary(r):
                free = r
                break
        if free is None:
            vol = sum((cfg.normalized_volume(c) for c in cells), ZERO)
            if vol == hull:
                results.add(Triangulation(cells))
                if len(results) > cap:
                    raise CapExceededError(cap, len(results))
            return
        (owner,) = ridges[free]
        opp = next(x for x in owner if x not in free)
        so = cfg.orientation(free + (opp,))
        for p in cfg.labels:
            if p in owner:
                continue
            if cfg.orientation(free + (p,)) * so >= 0:
                continue
            cell = tuple(sorted(free + (p,)))
            cell_ridges = list(itertools.combinations(cell, d))
            if any(len(ridges.get(r, ())) >= 2 for r in cell_ridges):
                continue
            if not all(compatible(cell, c) for c in cells):
                continue
            for r in cell_ridges:
                ridges.setdefault(r, []).append(cell)
            cells.append(cell)
            recurse(cells, ridges)
            cells.pop()
            for r in cell_ridges:
                ridges[r].pop()
                if not ridges[r]:
                    del ridges[r]

    for root in roots:
        ridges = {r: [root] for r in itertools.combinations(root, d)}
        recurse([root], ridges)
    return results
