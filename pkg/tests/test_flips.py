import random
from fractions import Fraction

import pytest

from bistellar import catalog
from bistellar.config import PointConfiguration
from bistellar.flips import (
    DegenerateLiftError,
    InapplicableFlipError,
    apply_flip,
    find_flips,
    flip_graph,
    incremental_construction,
    monotone_flip_sequence,
)
from bistellar.regular import Lift, is_regular, lift_value, standard_lift, subdivision_from_lift
from bistellar.scenarios import random_config, random_generic_lift
from bistellar.subdivision import Triangulation, enumerate_triangulations_bruteforce, is_valid_triangulation

STAR5 = Triangulation([(1, 2, 5), (1, 3, 5), (2, 4, 5), (3, 4, 5)])
T1 = Triangulation([(1, 2, 4), (2, 3, 5), (1, 3, 6), (2, 4, 5), (3, 5, 6), (1, 4, 6), (4, 5, 6)])


def test_flips_of_star(five):
    fl = find_flips(five, STAR5)
    assert sorted(f.type for f in fl) == [(2, 1), (2, 2)]


def test_flips_of_perturbed_t1():
    cfg = catalog.moae_perturbed()
    fl = find_flips(cfg, T1)
    assert len(fl) == 3 and all(f.type == (2, 2) for f in fl)


def test_single_circuit_has_one_flip():
    cfg = catalog.convex_position(4)
    for T in enumerate_triangulations_bruteforce(cfg):
        assert len(find_flips(cfg, T)) == 1


def test_insertion_flips(five):
    T = Triangulation([(1, 2, 3), (2, 3, 4)])
    f = next(f for f in find_flips(five, T) if f.circuit.support == {1, 2, 3, 5})
    assert f.type == (1, 3)
    assert apply_flip(five, T, f) == Triangulation([(1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 3, 4)])
    T = Triangulation([(1, 2, 4), (1, 3, 4)])
    f = next(f for f in find_flips(five, T) if f.circuit.support == {1, 4, 5})
    assert f.type == (1, 2)
    assert apply_flip(five, T, f) == STAR5


def test_inapplicable_flip_rejected(five):
    f = find_flips(five, STAR5)[0]
    with pytest.raises(InapplicableFlipError):
        apply_flip(five, Triangulation([(1, 2, 3), (2, 3, 4)]), f)


def _configs():
    rng = random.Random(8)
    out = [catalog.five_points(), catalog.moae(), catalog.prism(), catalog.collinear(6), catalog.octagon()]
    out += [random_config(rng, d, n) for d, n in ((2, 6), (2, 7), (3, 6), (3, 7))]
    return out


def test_flips_valid_and_reversible():
    for cfg in _configs():
        for T in enumerate_triangulations_bruteforce(cfg):
            for f in find_flips(cfg, T):
                T2 = apply_flip(cfg, T, f)
                assert is_valid_triangulation(cfg, T2).ok
                assert apply_flip(cfg, T2, f.reverse()) == T
                assert f.reverse() in find_flips(cfg, T2)


def test_flip_graph_equals_enumeration():
    for cfg in _configs():
        g = flip_graph(cfg)
        assert set(g.nodes) == enumerate_triangulations_bruteforce(cfg)
        assert not g.truncated


def test_flip_graph_examples(five):
    g = flip_graph(five, [STAR5])
    assert len(g.nodes) == 4 and len(g.edges) == 4 and len(g.components) == 1 and g.is_cycle()
    g = flip_graph(catalog.convex_position(7))
    assert len(g.nodes) == 42 and len(g.components) == 1
    g = flip_graph(catalog.collinear(6))
    assert len(g.nodes) == 16 and set(g.degrees()) == {4} and g.diameter == 4


def test_flip_graph_cap_and_threads():
    cfg = catalog.convex_position(8)
    g = flip_graph(cfg, cap=50)
    assert g.truncated and len(g.nodes) == 50
    a = flip_graph(cfg, threads=1)
    b = flip_graph(cfg, threads=4)
    assert a.nodes == b.nodes and a.edges == b.edges


def test_regular_vertex_degree():
    for cfg in _configs():
        k = cfg.n - cfg.dim - 1
        for T in enumerate_triangulations_bruteforce(cfg):
            if is_regular(cfg, T) is not None:
                assert len(find_flips(cfg, T)) >= k


def test_2d_flip_lower_bound():
    rng = random.Random(31)
    for _ in range(8):
        n = rng.randint(4, 8)
        cfg = random_config(rng, 2, n)
        for T in flip_graph(cfg).nodes:
            assert len(find_flips(cfg, T, check=False)) >= n - 3


def test_monotone_sequences_reach_tw_from_regular_starts():
    rng = random.Random(4)
    for cfg in (catalog.five_points(), catalog.moae(), catalog.prism(), catalog.octagon()):
        w = random_generic_lift(rng, cfg)
        target = subdivision_from_lift(cfg, w)
        for T in enumerate_triangulations_bruteforce(cfg):
            if is_regular(cfg, T) is None:
                continue
            for policy in ("first", "steepest"):
                res = monotone_flip_sequence(cfg, T, w, policy)
                assert not res.stuck and res.final == target
                assert all(a > b for a, b in zip(res.values, res.values[1:]))
                assert res.values[-1] == lift_value(cfg, w, target)


def test_monotone_stuck_and_trivial():
    cfg = catalog.moae_perturbed()
    w = Lift({1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1})
    res = monotone_flip_sequence(cfg, T1, w)
    assert res.stuck and res.flips == [] and res.final == T1
    five = catalog.five_points()
    w = Lift({1: 0, 2: 0, 3: 0, 4: 0, 5: -1})
    res = monotone_flip_sequence(five, STAR5, w)
    assert res.flips == [] and not res.stuck
    with pytest.raises(DegenerateLiftError):
        monotone_flip_sequence(five, STAR5, Lift.zero(five))


def test_incremental_matches_lower_envelope():
    rng = random.Random(17)
    for _ in range(15):
        d = rng.choice([2, 3])
        cfg = random_config(rng, d, rng.randint(d + 2, 8))
        w = random_generic_lift(rng, cfg)
        order = list(cfg.labels)
        while True:
            rng.shuffle(order)
            if cfg.orientation(sorted(order[: d + 1])) != 0:
                break
        assert incremental_construction(cfg, w, order) == subdivision_from_lift(cfg, w)


def test_incremental_delaunay_2d():
    rng = random.Random(23)
    for _ in range(6):
        cfg = random_config(rng, 2, 8)
        w = standard_lift(cfg, "delaunay")
        if isinstance(subdivision_from_lift(cfg, w), Triangulation):
            assert incremental_construction(cfg, w) == subdivision_from_lift(cfg, w)


def test_incremental_examples(five):
    w = Lift({1: 0, 2: 0, 3: 0, 4: 0, 5: -1})
    for order in ([1, 2, 3, 4, 5], [5, 1, 2, 3, 4], [2, 3, 5, 4, 1]):
        assert incremental_construction(five, w, order) == STAR5
    simplex = PointConfiguration([(0, 0), (1, 0), (0, 1)])
    assert incremental_construction(simplex, Lift.zero(simplex)) == Triangulation([(1, 2, 3)])
    with pytest.raises(DegenerateLiftError):
        incremental_construction(five, Lift.zero(five))
    with pytest.raises(ValueError):
        incremental_construction(five, w, [1, 4, 5, 2, 3])
