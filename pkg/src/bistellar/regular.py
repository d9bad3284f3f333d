"""Regular subdivisions, regularity certificates and GKZ vectors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .config import PointConfiguration
from .exact import ONE, ZERO, Scalar, as_scalar, row_reduce
from .lp import feasible_point
from .subdivision import (
    InvalidSubdivisionError,
    Subdivision,
    Triangulation,
    is_valid_subdivision,
)

__all__ = [
    "Lift",
    "GkzVector",
    "SecondaryPolytopeSummary",
    "InconsistentGkzError",
    "NotFlipRelatedError",
    "subdivision_from_lift",
    "is_regular",
    "gkz_vector",
    "lift_value",
    "secondary_polytope_summary",
    "standard_lift",
    "pulling_triangulation",
    "pushing_triangulation",
    "monotone_compare",
]


class InconsistentGkzError(ValueError):
    pass


class NotFlipRelatedError(ValueError):
    pass


class Lift(Mapping):
    """A height function ``label -> Scalar``."""

    def __init__(self, values: Mapping[int, object] | Iterable[tuple[int, object]]):
        items = values.items() if isinstance(values, Mapping) else values
        self._values = {int(k): as_scalar(v) for k, v in items}

    @classmethod
    def zero(cls, cfg: PointConfiguration) -> "Lift":
        return cls({lab: ZERO for lab in cfg.labels})

    def __getitem__(self, label: int) -> Scalar:
        return self._values[label]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __neg__(self) -> "Lift":
        return Lift({k: -v for k, v in self._values.items()})

    def __add__(self, other: "Lift") -> "Lift":
        return Lift({k: v + other[k] for k, v in self._values.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Lift):
            return self._values == other._values
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._values.items()))
        return f"Lift({{{body}}})"


@dataclass(frozen=True)
class GkzVector:
    entries: tuple  # ((label, Scalar), ...) sorted

    def __getitem__(self, label: int) -> Scalar:
        return dict(self.entries)[label]

    def as_tuple(self) -> tuple[Scalar, ...]:
        return tuple(v for _, v in self.entries)

    def total(self) -> Scalar:
        return sum(self.as_tuple(), ZERO)

    def dot(self, w: Mapping[int, Scalar]) -> Scalar:
        return sum((v * w[k] for k, v in self.entries), ZERO)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.as_tuple()) + ")"


def _check_lift(cfg: PointConfiguration, w: Mapping[int, Scalar]) -> None:
    missing = [lab for lab in cfg.labels if lab not in w]
    if missing:
        raise ValueError(f"lift is missing labels {missing}")


def _wrap(cells, dim: int) -> Subdivision:
    cells = list(cells)
    if all(len(c) == dim + 1 for c in cells):
        return Triangulation(cells)
    return Subdivision(cells)


def subdivision_from_lift(cfg: PointConfiguration, w: Mapping[int, Scalar]) -> Subdivision:
    """The regular subdivision ``T_w`` (lower facets of the lifted points).

    Each cell lists every label on its lower facet.  Returns a
    :class:`Triangulation` when all cells are simplices.
    """
    _check_lift(cfg, w)
    lifted = {lab: cfg.vector(lab) + (as_scalar(w[lab]),) for lab in cfg.labels}
    vecs = [lifted[lab] for lab in cfg.labels]
    if len(row_reduce(vecs)[1]) < cfg.dim + 2:
        return _wrap([cfg.labels], cfg.dim)
    up = PointConfiguration(lifted, homogeneous=True, _check=False)
    cells = [tuple(sorted(f.labels)) for f in up.facets() if f.normal[-1].sign() > 0]
    return _wrap(cells, cfg.dim)


def _basis_in(cfg: PointConfiguration, cell) -> tuple[int, ...]:
    if len(cell) == cfg.dim + 1:
        return tuple(cell)
    for b in itertools.combinations(cell, cfg.dim + 1):
        if cfg.orientation(b) != 0:
            return b
    raise InvalidSubdivisionError(f"cell {cell} is not full-dimensional")


def is_regular(cfg: PointConfiguration, S) -> Lift | None:
    """A certificate lift ``w`` with ``subdivision_from_lift(w) == S``, or ``None``.

    Pins ``w = 0`` on an independent cell, asks every label off a cell to be
    lifted at least 1 above that cell's interpolating hyperplane, and every
    label of a non-simplicial cell to lie on it; then solves exactly.
    """
    S = _wrap(S, cfg.dim) if not isinstance(S, Subdivision) else S
    rep = is_valid_subdivision(cfg, S)
    if not rep.ok:
        raise InvalidSubdivisionError(f"invalid subdivision: {rep.violations[0]}")
    labels = list(cfg.labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    ge, eq = [], []
    pinned = _basis_in(cfg, S.cells[0])
    for b in pinned:
        row = [ZERO] * n
        row[idx[b]] = ONE
        eq.append((row, ZERO))
    for cell in S.cells:
        basis = _basis_in(cfg, cell)
        inside = set(cell)
        for a in labels:
            if a in basis:
                continue
            beta = cfg.barycentric(basis, a)
            row = [ZERO] * n
            row[idx[a]] = ONE
            for b, coef in beta.items():
                row[idx[b]] = row[idx[b]] - coef
            if a in inside:
                eq.append((row, ZERO))
            else:
                ge.append((row, ONE))
    sol = feasible_point(n, ge=ge, eq=eq)
    if sol is None:
        return None
    cert = Lift(dict(zip(labels, sol)))
    if subdivision_from_lift(cfg, cert) != S:
        raise AssertionError("regularity certificate does not reproduce the subdivision")
    return cert


def gkz_vector(cfg: PointConfiguration, T, check: bool = True) -> GkzVector:
    """Per-label sum of normalized volumes of incident cells."""
    T = T if isinstance(T, Subdivision) else Triangulation(T)
    if check:
        from .subdivision import is_valid_triangulation

        rep = is_valid_triangulation(cfg, T)
        if not rep.ok:
            raise InvalidSubdivisionError(f"invalid triangulation: {rep.violations[0]}")
    phi = {lab: ZERO for lab in cfg.labels}
    for c in T.cells:
        vol = cfg.normalized_volume(c)
        for x in c:
            phi[x] = phi[x] + vol
    return GkzVector(tuple(sorted(phi.items())))


def lift_value(cfg: PointConfiguration, w: Mapping[int, Scalar], T) -> Scalar:
    """``<w, phi_T>`` computed straight from the cells."""
    total = ZERO
    for c in T:
        vol = cfg.normalized_volume(c)
        total = total + vol * sum((as_scalar(w[x]) for x in c), ZERO)
    return total


# ---------------------------------------------------------------------------
# secondary polytope
# ---------------------------------------------------------------------------


@dataclass
class SecondaryPolytopeSummary:
    dim: int
    f_vector: tuple  # face counts for dimensions 0..dim
    vertices: list  # triangulations that are vertices
    points: dict  # triangulation -> GKZ tuple

    @property
    def total_faces(self) -> int:
        return sum(self.f_vector)


def _face_lattice(pc: PointConfiguration) -> dict[int, int]:
    facets = [f.labels for f in pc.facets()]
    faces = set(facets)
    frontier = list(facets)
    while frontier:
        nxt = []
        for f in frontier:
            for g in facets:
                h = f & g
                if h and h not in faces:
                    faces.add(h)
                    nxt.append(h)
        frontier = nxt
    counts: dict[int, int] = {}
    for f in faces:
        k = pc.rank(f) - 1
        counts[k] = counts.get(k, 0) + 1
    return counts


def secondary_polytope_summary(cfg: PointConfiguration, triangulations) -> SecondaryPolytopeSummary:
    """f-vector and vertex triangulations of the hull of the GKZ vectors.

    ``triangulations`` must be all triangulations of ``cfg``.  The face
    lattice is obtained from brute-force facets, so this is meant for
    secondary polytopes with a few dozen vertices at most.
    """
    tris = sorted(t if isinstance(t, Triangulation) else Triangulation(t) for t in triangulations)
    if not tris:
        raise ValueError("no triangulations given")
    pts = {T: gkz_vector(cfg, T, check=False).as_tuple() for T in tris}
    uniq = sorted(set(pts.values()), key=lambda p: [(float(x), str(x)) for x in p])
    expected = cfg.n - cfg.dim - 1
    base = uniq[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in uniq[1:]]
    _, pivots = row_reduce(diffs) if diffs else ([], [])
    if len(pivots) != expected:
        raise InconsistentGkzError(
            f"GKZ vectors span dimension {len(pivots)}, expected {expected}"
        )
    if expected == 0:
        return SecondaryPolytopeSummary(0, (1,), list(tris), pts)
    proj = [tuple(p[j] for j in pivots) for p in uniq]
    pc = PointConfiguration(proj, _check=False)
    counts = _face_lattice(pc)
    counts[expected] = 1
    fvec = tuple(counts.get(k, 0) for k in range(expected + 1))
    vertex_pts = set()
    facets = [f.labels for f in pc.facets()]
    for lab in pc.labels:
        containing = [f for f in facets if lab in f]
        if containing and frozenset.intersection(*containing) == {lab}:
            vertex_pts.add(uniq[lab - 1])
    vertices = [T for T in tris if pts[T] in vertex_pts]
    return SecondaryPolytopeSummary(expected, fvec, vertices, pts)


# ---------------------------------------------------------------------------
# standard lifts
# ---------------------------------------------------------------------------


def pushing_triangulation(cfg: PointConfiguration, order: Sequence[int]) -> Triangulation:
    """Recursive pushing triangulation: place the points in ``order``."""
    return Triangulation(cfg.placing_cells(order))


def pulling_triangulation(cfg: PointConfiguration, order: Sequence[int]) -> Triangulation:
    """Recursive pulling triangulation: join the last point to the pulling
    triangulations of the facets not containing it."""
    pos = {lab: i for i, lab in enumerate(order)}
    if set(pos) != set(cfg.labels):
        raise ValueError("order must be a permutation of the labels")

    def pull(labels: frozenset) -> list[tuple[int, ...]]:
        sub = cfg.restrict(labels)
        if len(labels) == sub.dim + 1:
            return [tuple(sorted(labels))]
        last = max(labels, key=pos.__getitem__)
        out = []
        for f in sub.facets():
            if last in f.labels:
                continue
            for c in pull(f.labels):
                out.append(tuple(sorted(c + (last,))))
        return out

    return Triangulation(pull(frozenset(cfg.labels)))


def standard_lift(cfg: PointConfiguration, kind: str, order: Sequence[int] | None = None,
                  max_doublings: int = 64) -> Lift:
    """Delaunay, pulling or pushing lift.

    ``delaunay`` is the squared norm.  ``pulling``/``pushing`` use heights
    ``-t**i`` / ``t**i`` along ``order``; ``t`` is doubled until the lifted
    subdivision equals the recursive construction.
    """
    if kind == "delaunay":
        return Lift({lab: sum((x * x for x in cfg.coords(lab)), ZERO) for lab in cfg.labels})
    if kind not in ("pulling", "pushing"):
        raise ValueError(f"unknown lift kind {kind!r}")
    order = list(cfg.labels) if order is None else [int(x) for x in order]
    if sorted(order) != list(cfg.labels):
        raise ValueError("order must be a permutation of the labels")
    target = pulling_triangulation(cfg, order) if kind == "pulling" else pushing_triangulation(cfg, order)
    sgn = -1 if kind == "pulling" else 1
    t = Scalar(2)
    for _ in range(max_doublings):
        w = Lift({lab: t ** (i + 1) * sgn for i, lab in enumerate(order)})
        if subdivision_from_lift(cfg, w) == target:
            return w
        t = t * 2
    raise RuntimeError(f"{kind} lift did not stabilize after {max_doublings} doublings")


def monotone_compare(cfg: PointConfiguration, w: Mapping[int, Scalar], T1, T2) -> str:
    """Which of two flip-related triangulations lies below w.r.t. ``w``."""
    from .flips import apply_flip, find_flips

    T1 = T1 if isinstance(T1, Triangulation) else Triangulation(T1)
    T2 = T2 if isinstance(T2, Triangulation) else Triangulation(T2)
    if not any(apply_flip(cfg, T1, f) == T2 for f in find_flips(cfg, T1)):
        raise NotFlipRelatedError("triangulations are not related by a flip")
    a = lift_value(cfg, w, T1)
    b = lift_value(cfg, w, T2)
    if a < b:
        return "T1_below"
    if b < a:
        return "T2_below"
    return "incomparable_or_equal"
