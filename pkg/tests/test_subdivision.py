import itertools
import random

import pytest

from bistellar import catalog
from bistellar.exact import ZERO
from bistellar.subdivision import (
    CapExceededError,
    InvalidSubdivisionError,
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    flip_subdivision_refinements,
    improper_circuit,
    interior_walls_ok,
    is_valid_subdivision,
    is_valid_triangulation,
    refines,
)

T1 = [(1, 2, 4), (2, 3, 5), (1, 3, 6), (2, 4, 5), (3, 5, 6), (1, 4, 6), (4, 5, 6)]


def test_valid_triangulation_examples(five, moae):
    assert is_valid_triangulation(five, [(1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 3, 4)]).ok
    assert is_valid_triangulation(moae, T1).ok


def test_overlap_reports_circuit(five):
    rep = is_valid_triangulation(five, [(1, 2, 3), (1, 2, 4)])
    assert not rep.ok
    kinds = {v.kind for v in rep.violations}
    assert "improper_intersection" in kinds
    bad = next(v for v in rep.violations if v.kind == "improper_intersection")
    assert {bad.circuit.positive, bad.circuit.negative} == {frozenset({1, 4}), frozenset({2, 3})}


def test_missing_cell_is_a_volume_deficit(five):
    rep = is_valid_triangulation(five, [(1, 2, 5), (1, 3, 5)])
    assert not rep.ok
    v = next(v for v in rep.violations if v.kind == "volume_mismatch")
    assert v.expected == 18 and v.actual == 6


def test_dependent_cell_rejected(five):
    rep = is_valid_triangulation(five, [(1, 4, 5), (1, 2, 3)])
    assert not rep.ok


def test_valid_subdivision_examples(five, moae):
    assert is_valid_subdivision(five, [(1, 2, 3, 5), (2, 3, 4)]).ok
    assert is_valid_subdivision(moae, [(1, 2, 4, 5), (2, 3, 5, 6), (1, 3, 4, 6), (4, 5, 6)]).ok
    for cfg in (five, moae, catalog.prism()):
        assert is_valid_subdivision(cfg, [cfg.labels]).ok


def test_subdivision_point_membership(five):
    # 5 lies on the shared edge 14 but only one of the two cells contains it
    assert not is_valid_subdivision(five, [(1, 2, 4), (1, 3, 4, 5)]).ok


def test_refines_examples(five):
    assert refines(five, [(1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 3, 4)], [(1, 2, 3, 5), (2, 3, 4)])
    assert refines(five, [(1, 2, 4), (1, 3, 4)], [(1, 2, 4, 5), (1, 3, 4, 5)])
    assert refines(five, [(1, 2, 4), (1, 3, 4)], [five.labels])
    assert not refines(five, [(1, 2, 3), (2, 3, 4)], [(1, 2, 4, 5), (1, 3, 4, 5)])
    with pytest.raises(InvalidSubdivisionError):
        refines(five, [(1, 2, 3)], [five.labels])


def _regular_subdivisions(cfg, rng, count):
    from bistellar.regular import Lift, subdivision_from_lift

    out = {Subdivision([cfg.labels])}
    for _ in range(count):
        w = Lift({lab: rng.randint(0, 2) for lab in cfg.labels})
        out.add(subdivision_from_lift(cfg, w))
    return sorted(out)


def test_refines_is_a_partial_order():
    rng = random.Random(11)
    for cfg in (catalog.five_points(), catalog.moae(), catalog.convex_position(6)):
        subs = _regular_subdivisions(cfg, rng, 25)
        rel = {(a, b): refines(cfg, a, b) for a in subs for b in subs}
        for a in subs:
            assert rel[a, a]
        for a, b in itertools.permutations(subs, 2):
            assert not (rel[a, b] and rel[b, a])
        for a, b, c in itertools.permutations(subs, 3):
            if rel[a, b] and rel[b, c]:
                assert rel[a, c]


def test_flip_subdivision_refinements(five):
    C, tp, tm = flip_subdivision_refinements(five, [(1, 2, 3, 5), (2, 3, 4)])
    assert C.positive == {1, 2, 3} and C.negative == {5}
    assert {tp, tm} == {Triangulation([(1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 3, 4)]),
                        Triangulation([(1, 2, 3), (2, 3, 4)])}
    assert flip_subdivision_refinements(five, [(1, 2, 4), (1, 3, 4)]) is None
    square = catalog.build("convex_position", {"n": 4})
    C, tp, tm = flip_subdivision_refinements(square, [square.labels])
    assert len(enumerate_triangulations_bruteforce(square)) == 2 and tp != tm


def test_enumeration_counts(five):
    assert len(enumerate_triangulations_bruteforce(five)) == 4
    assert len(enumerate_triangulations_bruteforce(catalog.collinear(4))) == 4
    assert len(enumerate_triangulations_bruteforce(catalog.convex_position(6))) == 14
    assert len(enumerate_triangulations_bruteforce(catalog.octagon())) == 132
    with pytest.raises(CapExceededError):
        enumerate_triangulations_bruteforce(catalog.convex_position(7), cap=10)


def test_enumerated_triangulations_satisfy_invariants():
    for cfg in (catalog.five_points(), catalog.moae(), catalog.prism(), catalog.collinear(5)):
        hull = cfg.hull_volume()
        for T in enumerate_triangulations_bruteforce(cfg):
            assert is_valid_triangulation(cfg, T).ok
            assert sum((cfg.normalized_volume(c) for c in T), ZERO) == hull
            assert interior_walls_ok(cfg, T)


def test_improper_circuit_none_for_neighbours(five):
    assert improper_circuit(five, (1, 2, 3), (2, 3, 4)) is None
    assert improper_circuit(five, (1, 2, 3), (1, 2, 4)) is not None
