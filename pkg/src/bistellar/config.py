"""Labeled point configurations and their orientation oracle.

A :class:`PointConfiguration` stores ``n`` labeled points in affine
``d``-space.  All geometric predicates reduce to signs of determinants of
homogenized ``(d+1)``-tuples; those determinants are cached per sorted label
tuple.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exact import (
    ONE,
    ZERO,
    Scalar,
    as_scalar,
    integral_det,
    integral_row,
    nullspace,
    row_reduce,
)

__all__ = [
    "ConfigurationError",
    "UnknownLabelError",
    "NoCircuitError",
    "AmbiguousCircuitError",
    "DegenerateCellError",
    "Circuit",
    "Facet",
    "PointConfiguration",
    "is_perturbation_of",
]


class ConfigurationError(ValueError):
    pass


class UnknownLabelError(ConfigurationError, KeyError):
    def __str__(self) -> str:
        return ValueError.__str__(self)


class NoCircuitError(ValueError):
    pass


class AmbiguousCircuitError(ValueError):
    pass


class DegenerateCellError(ValueError):
    pass


def _parity(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class Circuit:
    """A signed circuit ``(C+, C-)`` with its dependence coefficients.

    Coefficients are scaled so that the smallest label of the support has
    coefficient exactly 1.
    """

    positive: frozenset
    negative: frozenset
    coefficients: tuple  # ((label, Scalar), ...) sorted by label

    @classmethod
    def from_vector(cls, labels: Sequence[int], vec: Sequence[Scalar]) -> "Circuit":
        pairs = sorted((lab, v) for lab, v in zip(labels, vec) if v)
        if not pairs:
            raise ValueError("zero dependence vector")
        lead = pairs[0][1]
        pairs = [(lab, v / lead) for lab, v in pairs]
        pos = frozenset(lab for lab, v in pairs if v.sign() > 0)
        neg = frozenset(lab for lab, v in pairs if v.sign() < 0)
        return cls(pos, neg, tuple(pairs))

    @property
    def support(self) -> frozenset:
        return self.positive | self.negative

    @property
    def coefficient_map(self) -> dict[int, Scalar]:
        return dict(self.coefficients)

    @property
    def type(self) -> tuple[int, int]:
        return (len(self.positive), len(self.negative))

    def side(self, which: str) -> frozenset:
        if which == "+":
            return self.positive
        if which == "-":
            return self.negative
        raise ValueError(f"side must be '+' or '-', got {which!r}")

    def triangulation(self, which: str) -> frozenset:
        """The triangulation ``{C minus c : c on the given side}`` of the circuit."""
        supp = self.support
        return frozenset(tuple(sorted(supp - {c})) for c in self.side(which))

    def sort_key(self):
        return (tuple(sorted(self.support)), tuple(sorted(self.positive)))

    def __str__(self) -> str:
        p = ",".join(map(str, sorted(self.positive)))
        n = ",".join(map(str, sorted(self.negative)))
        return f"+{{{p}}} -{{{n}}}"


@dataclass(frozen=True)
class Facet:
    """A facet of the convex hull.

    ``labels`` lists every label on the supporting hyperplane; ``normal`` is
    an inward normal on homogenized coordinates (``normal . p >= 0`` for all
    points, with equality exactly on the facet).
    """

    labels: frozenset
    normal: tuple


class PointConfiguration:
    """A finite labeled point set affinely spanning its ambient space.

    Parameters
    ----------
    points:
        Either a mapping ``label -> coordinates`` or a sequence of coordinate
        vectors (labels then default to ``1..n``).
    homogeneous:
        If true, the vectors already include the homogenizing coordinate and
        must lie on a common affine hyperplane avoiding the origin; the
        affine dimension is then ``len(vector) - 1``.
    """

    def __init__(
        self,
        points: Mapping[int, Sequence] | Sequence[Sequence],
        homogeneous: bool = False,
        labels: Sequence[int] | None = None,
        *,
        _shared_cache: dict | None = None,
        _check: bool = True,
    ):
        if isinstance(points, Mapping):
            items = sorted(points.items())
        else:
            pts = list(points)
            if labels is None:
                labels = range(1, len(pts) + 1)
            labels = list(labels)
            if len(labels) != len(pts):
                raise ConfigurationError("labels and points differ in length")
            items = sorted(zip(labels, pts))
        if not items:
            raise ConfigurationError("empty point configuration")
        labs = [lab for lab, _ in items]
        if len(set(labs)) != len(labs):
            raise ConfigurationError("duplicate labels")
        if any(not isinstance(lab, int) or lab < 1 for lab in labs):
            raise ConfigurationError("labels must be positive integers")
        coords = {lab: tuple(as_scalar(x) for x in c) for lab, c in items}
        lengths = {len(c) for c in coords.values()}
        if len(lengths) != 1:
            raise ConfigurationError("points have differing coordinate lengths")
        (length,) = lengths
        self.labels: tuple[int, ...] = tuple(labs)
        self.homogeneous = bool(homogeneous)
        self._coords = coords
        if self.homogeneous:
            self._vectors = dict(coords)
            self.dim = length - 1
        else:
            self._vectors = {lab: (ONE,) + c for lab, c in coords.items()}
            self.dim = length
        if self.dim < 0 or (self.homogeneous and length == 0):
            raise ConfigurationError("points need at least one coordinate")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._scales = {}
        self._irows = {}
        for lab, v in self._vectors.items():
            s, ints = integral_row(v)
            self._scales[lab] = s
            self._irows[lab] = ints
        self._cache = {} if _shared_cache is None else _shared_cache
        self._lock = threading.Lock()
        self._facets = None
        self._hull_volume = None
        if _check:
            self._validate()

    def _validate(self) -> None:
        seen = {}
        for lab, v in self._vectors.items():
            if v in seen:
                raise ConfigurationError(f"labels {seen[v]} and {lab} are the same point")
            seen[v] = lab
        vecs = [self._vectors[lab] for lab in self.labels]
        if len(row_reduce(vecs)[1]) != self.dim + 1:
            raise ConfigurationError(
                f"points do not affinely span {self.dim}-space (rank deficient)"
            )
        if self.homogeneous:
            # the columns must lie on an affine hyperplane f(p) = 1
            from .exact import solve

            if solve(vecs, [ONE] * len(vecs)) is None:
                raise ConfigurationError(
                    "homogeneous vectors do not lie on an affine hyperplane off the origin"
                )

    # -- basic access ------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __repr__(self) -> str:
        h = ", homogeneous" if self.homogeneous else ""
        return f"PointConfiguration(n={self.n}, d={self.dim}{h})"

    def check_labels(self, labels: Iterable[int]) -> None:
        for lab in labels:
            if lab not in self._index:
                raise UnknownLabelError(f"unknown label {lab!r}")

    def coords(self, label: int) -> tuple[Scalar, ...]:
        self.check_labels([label])
        return self._coords[label]

    def vector(self, label: int) -> tuple[Scalar, ...]:
        """Homogenized coordinates of a point."""
        self.check_labels([label])
        return self._vectors[label]

    def same_points(self, other: "PointConfiguration") -> bool:
        return self.labels == other.labels and self._vectors == other._vectors

    # -- determinants ------------------------------------------------------
    def det(self, labels: Sequence[int]) -> Scalar:
        """Exact homogenized determinant of ``d+1`` labels in the given order."""
        labels = tuple(labels)
        if len(labels) != self.dim + 1:
            raise ConfigurationError(f"need {self.dim + 1} labels, got {len(labels)}")
        self.check_labels(labels)
        if len(set(labels)) < len(labels):
            return ZERO
        key = tuple(sorted(labels))
        val = self._cache.get(key)
        if val is None:
            a, b = integral_det([self._irows[lab] for lab in key])
            scale = 1
            for lab in key:
                scale *= self._scales[lab]
            val = Scalar._raw(a, b, scale)
            self._cache[key] = val
        return val if _parity(labels) > 0 else -val

    def orientation(self, labels: Sequence[int]) -> int:
        return self.det(labels).sign()

    def det_with(self, labels: Sequence[int], extra: Sequence[Sequence[Scalar]]) -> Scalar:
        """Determinant of the rows of ``labels`` followed by arbitrary vectors."""
        rows = [self._vectors[lab] for lab in labels] + [tuple(as_scalar(x) for x in v) for v in extra]
        from .exact import det

        return det(rows)

    def chirotope(self) -> dict[tuple[int, ...], int]:
        """All orientations of sorted ``(d+1)``-tuples (small configurations only)."""
        if self.n > 20:
            raise ConfigurationError("full chirotope precomputation is limited to n <= 20")
        return {c: self.orientation(c) for c in itertools.combinations(self.labels, self.dim + 1)}

    def is_general_position(self) -> bool:
        return all(
            self.orientation(c) != 0 for c in itertools.combinations(self.labels, self.dim + 1)
        )

    def rank(self, labels: Iterable[int]) -> int:
        labels = list(labels)
        self.check_labels(labels)
        if not labels:
            return 0
        return len(row_reduce([self._vectors[lab] for lab in labels])[1])

    def is_independent(self, labels: Iterable[int]) -> bool:
        labels = list(labels)
        if len(labels) == self.dim + 1:
            return self.orientation(labels) != 0
        return self.rank(labels) == len(labels)

    def dependence(self, labels: Sequence[int]) -> list[list[Scalar]]:
        """Basis of affine dependences among ``labels`` (as coefficient lists)."""
        labels = list(labels)
        self.check_labels(labels)
        cols = [self._vectors[lab] for lab in labels]
        m = [[c[i] for c in cols] for i in range(self.dim + 1)]
        return nullspace(m, ncols=len(labels))

    # -- circuits ----------------------------------------------------------
    def circuit_of(self, subset: Iterable[int]) -> Circuit:
        """The unique circuit contained in ``subset``."""
        labels = sorted(set(subset))
        self.check_labels(labels)
        if len(labels) == self.dim + 2:
            vec = [
                self.det(labels[:i] + labels[i + 1:]) * (1 if i % 2 == 0 else -1)
                for i in range(len(labels))
            ]
            if any(vec):
                return Circuit.from_vector(labels, vec)
        kernel = self.dependence(labels)
        if not kernel:
            raise NoCircuitError(f"labels {labels} are affinely independent")
        if len(kernel) > 1:
            raise AmbiguousCircuitError(
                f"labels {labels} contain more than one circuit (dependence space of dim {len(kernel)})"
            )
        return Circuit.from_vector(labels, kernel[0])

    # -- barycentric coordinates --------------------------------------------
    def barycentric(self, cell: Sequence[int], label: int) -> dict[int, Scalar]:
        """Affine coordinates of ``label`` with respect to a full-dimensional cell."""
        cell = tuple(cell)
        base = self.det(cell)
        if not base:
            raise DegenerateCellError(f"cell {cell} is affinely dependent")
        out = {}
        for i, s in enumerate(cell):
            repl = cell[:i] + (label,) + cell[i + 1:]
            out[s] = self.det(repl) / base
        return out

    def in_cell_signs(self, cell: Sequence[int], label: int) -> dict[int, int]:
        """Signs of the barycentric coordinates of ``label`` w.r.t. ``cell``."""
        cell = tuple(cell)
        base = self.orientation(cell)
        if base == 0:
            raise DegenerateCellError(f"cell {cell} is affinely dependent")
        return {
            s: self.orientation(cell[:i] + (label,) + cell[i + 1:]) * base
            for i, s in enumerate(cell)
        }

    # -- hull ----------------------------------------------------------------
    def facets(self) -> list[Facet]:
        """All facets of the convex hull, by brute force over ``d``-subsets."""
        if self._facets is not None:
            return self._facets
        d = self.dim
        found: list[tuple[frozenset, tuple]] = []
        found_sets: list[frozenset] = []
        if d == 0:
            self._facets = []
            return self._facets
        for base in itertools.combinations(self.labels, d):
            bset = frozenset(base)
            if any(bset <= f for f in found_sets):
                continue
            pos = neg = False
            on = set(base)
            for x in self.labels:
                if x in bset:
                    continue
                s = self.orientation(base + (x,))
                if s > 0:
                    pos = True
                elif s < 0:
                    neg = True
                else:
                    on.add(x)
                if pos and neg:
                    break
            if pos and neg:
                continue
            if not pos and not neg:
                continue  # dependent base
            fs = frozenset(on)
            found_sets.append(fs)
            found.append((fs, base))
        facets = [Facet(fs, self._facet_normal(base)) for fs, base in found]
        facets.sort(key=lambda f: tuple(sorted(f.labels)))
        self._facets = facets
        return facets

    def _facet_normal(self, base: Sequence[int]) -> tuple[Scalar, ...]:
        from .exact import det

        rows = [self._vectors[lab] for lab in base]
        k = self.dim + 1
        normal = []
        for j in range(k):
            minor = [[r[c] for c in range(k) if c != j] for r in rows]
            # expansion of det([rows; x]) along the last row
            sgn = 1 if (k - 1 + j) % 2 == 0 else -1
            normal.append(det(minor) * sgn)
        for lab in self.labels:
            val = sum((a * b for a, b in zip(normal, self._vectors[lab])), ZERO)
            if val.sign() < 0:
                return tuple(-x for x in normal)
            if val.sign() > 0:
                return tuple(normal)
        raise DegenerateCellError("all points on one hyperplane")

    def hull_vertices(self) -> frozenset:
        """Labels that are vertices of the convex hull."""
        if self.dim == 0:
            return frozenset(self.labels)
        out = set()
        facets = self.facets()
        for lab in self.labels:
            containing = [f for f in facets if lab in f.labels]
            if not containing:
                continue
            common = frozenset.intersection(*[f.labels for f in containing])
            if common == {lab}:
                out.add(lab)
        return frozenset(out)

    # -- volumes ---------------------------------------------------------------
    def normalized_volume(self, cell: Iterable[int]) -> Scalar:
        """``|det|`` of a full-dimensional cell (``d!`` times its Euclidean volume)."""
        cell = tuple(sorted(cell))
        if len(cell) != self.dim + 1:
            raise DegenerateCellError(f"cell {cell} does not have {self.dim + 1} labels")
        v = self.det(cell)
        if not v:
            raise DegenerateCellError(f"cell {cell} is affinely dependent")
        return abs(v)

    def hull_volume(self) -> Scalar:
        """Normalized volume of the convex hull."""
        if self._hull_volume is None:
            cells = self.placing_cells(self.labels)
            self._hull_volume = sum((self.normalized_volume(c) for c in cells), ZERO)
        return self._hull_volume

    def placing_cells(self, order: Sequence[int]) -> list[tuple[int, ...]]:
        """Placing triangulation for the insertion ``order``.

        Each new point is joined to the boundary faces of the current
        triangulation that it sees strictly; points inside the current hull
        (boundary included) are skipped.  While the inserted points do not
        span the space yet, the construction happens inside their affine span.
        """
        order = list(order)
        self.check_labels(order)
        if not order:
            return []
        cells: list[tuple[int, ...]] = [(order[0],)]
        r = 1
        for p in order[1:]:
            if r < self.dim + 1 and self.rank(cells[0] + (p,)) == r + 1:
                cells = [tuple(sorted(c + (p,))) for c in cells]
                r += 1
                continue
            if r == 1:
                continue  # same point; excluded by construction
            faces: dict[tuple, list] = {}
            for c in cells:
                for v in c:
                    f = tuple(x for x in c if x != v)
                    faces.setdefault(f, []).append(v)
            new = []
            for f, opp in faces.items():
                if len(opp) != 1:
                    continue
                if self._strictly_opposite(f, opp[0], p, r):
                    new.append(tuple(sorted(f + (p,))))
            cells.extend(new)
        return sorted(cells)

    def _strictly_opposite(self, face, v, p, r) -> bool:
        if r == self.dim + 1:
            return self.orientation(face + (v,)) * self.orientation(face + (p,)) < 0
        kernel = self.dependence(list(face) + [v, p])
        (vec,) = kernel
        lv, lp = vec[-2].sign(), vec[-1].sign()
        return lv != 0 and lv == lp

    # -- subconfigurations -----------------------------------------------------
    def restrict(self, labels: Iterable[int]) -> "PointConfiguration":
        """The subconfiguration on ``labels``, in its own affine span.

        If the labels span the full space, coordinates and the determinant
        cache are shared.  Otherwise the points are re-expressed by a
        coordinate projection that is injective on their span.
        """
        labels = sorted(set(labels))
        self.check_labels(labels)
        vecs = [self._vectors[lab] for lab in labels]
        _, pivots = row_reduce(vecs)
        if len(pivots) == self.dim + 1:
            sub = PointConfiguration.__new__(PointConfiguration)
            sub.labels = tuple(labels)
            sub.homogeneous = self.homogeneous
            sub._coords = {lab: self._coords[lab] for lab in labels}
            sub._vectors = {lab: self._vectors[lab] for lab in labels}
            sub.dim = self.dim
            sub._index = {lab: i for i, lab in enumerate(labels)}
            sub._scales = {lab: self._scales[lab] for lab in labels}
            sub._irows = {lab: self._irows[lab] for lab in labels}
            sub._cache = self._cache
            sub._lock = self._lock
            sub._facets = None
            sub._hull_volume = None
            return sub
        proj = {lab: tuple(self._vectors[lab][j] for j in pivots) for lab in labels}
        return PointConfiguration(proj, homogeneous=True, _check=False)

    def bbox(self, labels: Iterable[int]) -> tuple[tuple[Scalar, ...], tuple[Scalar, ...]]:
        vecs = [self._vectors[lab] for lab in labels]
        lo = tuple(min(col) for col in zip(*vecs))
        hi = tuple(max(col) for col in zip(*vecs))
        return lo, hi


def is_perturbation_of(cfg_new: PointConfiguration, cfg_old: PointConfiguration) -> bool:
    """True iff every non-zero orientation of ``cfg_old`` keeps its sign in ``cfg_new``."""
    if cfg_new.labels != cfg_old.labels or cfg_new.dim != cfg_old.dim:
        raise ConfigurationError("configurations have different labels or dimension")
    for c in itertools.combinations(cfg_old.labels, cfg_old.dim + 1):
        s = cfg_old.orientation(c)
        if s and cfg_new.orientation(c) != s:
            return False
    return True
