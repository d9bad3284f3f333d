import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bistellar import catalog
from bistellar.config import is_perturbation_of
from bistellar.exact import SQRT2, Scalar
from bistellar.flips import find_flips
from bistellar.formats import read_config, write_config
from bistellar.subdivision import (
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    is_valid_triangulation,
)


def row(cfg, i):
    return tuple(cfg.coords(lab)[i] for lab in cfg.labels)


def test_five_points_matrix():
    cfg = catalog.build("five_points")
    assert row(cfg, 0) == (0, 3, 0, 3, 1)
    assert row(cfg, 1) == (0, 0, 3, 3, 1)


def test_moae_is_homogeneous():
    cfg = catalog.moae()
    assert cfg.homogeneous and cfg.dim == 2 and cfg.n == 6
    assert cfg.coords(4) == (2, 1, 1)


def test_perturbed_moae_moves_only_the_outer_triangle():
    old, new = catalog.moae(), catalog.moae_perturbed()
    assert [new.coords(i) for i in (4, 5, 6)] == [old.coords(i) for i in (4, 5, 6)]
    assert new.coords(1) == (Fraction(399, 100), Fraction(1, 100), 0)
    assert is_perturbation_of(new, old)


def test_A0_first_column():
    cfg = catalog.build("A(0)")
    lab = catalog.A_labels()
    assert cfg.coords(lab["a1+"]) == (1, 0, 0, 0, SQRT2, 0)
    assert cfg.coords(lab["O"]) == (0,) * 6
    assert cfg.n == 17 and cfg.dim == 6


def test_A_rejects_negative_and_irrational_t():
    with pytest.raises(ValueError):
        catalog.A(-1)
    with pytest.raises(ValueError):
        catalog.A(SQRT2)
    with pytest.raises(ValueError):
        catalog.moae_perturbed(0)
    with pytest.raises(ValueError):
        catalog.convex_position(2)


def test_collinear3_has_two_triangulations():
    assert len(enumerate_triangulations_bruteforce(catalog.build("collinear", {"n": 3}))) == 2


def test_octagon_is_regular_and_convex():
    cfg = catalog.octagon()
    assert cfg.hull_vertices() == frozenset(cfg.labels)
    # side lengths: |(s,1)-(1,s)|^2 = 2(s-1)^2 = 4 and |(1,s)-(-1,s)|^2 = 4
    pts = [cfg.coords(lab) for lab in cfg.labels]
    for p, q in zip(pts, pts[1:] + pts[:1]):
        assert (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 == 4
    assert len(enumerate_triangulations_bruteforce(cfg)) == 132


@pytest.mark.parametrize(
    "text, expected",
    [
        ("collinear8", ("collinear", {"n": "8"})),
        ("convex7", ("convex_position", {"n": "7"})),
        ("five-points", ("five_points", {})),
        ("A(1/8)", ("A", {"t": "1/8"})),
        ("F(+-+-,1/8)", ("F", {"signs": "+-+-", "t": "1/8"})),
        ("moae", ("moae", {})),
    ],
)
def test_parse_name(text, expected):
    assert catalog.parse_name(text) == expected


def test_parse_name_rejects_unknown():
    with pytest.raises(ValueError):
        catalog.parse_name("dodecahedron")
    with pytest.raises(ValueError):
        catalog.build("collinear", {"colour": "red"})


@pytest.mark.parametrize("name", ["five_points", "moae", "moae_perturbed", "schoenhardt8", "prism", "octagon", "A"])
def test_builders_round_trip_through_text(name):
    cfg = catalog.build(name)
    text = write_config(cfg)
    again = read_config(text)
    assert write_config(again) == text
    assert again.same_points(cfg)


def test_builders_are_deterministic():
    for name in catalog.NAMES:
        if name in ("convex_position", "collinear"):
            continue
        assert write_config(catalog.build(name)) == write_config(catalog.build(name))


@pytest.mark.parametrize("t", [0, Fraction(1, 8)])
def test_degeneracy_identities(t):
    rep = catalog.verify_A0_degeneracies(catalog.A(t))
    assert rep.ok, str(rep)


@given(st.fractions(min_value=0, max_value=Fraction(1, 8), max_denominator=50))
@settings(max_examples=10, deadline=None)
def test_degeneracies_hold_for_every_t(t):
    cfg = catalog.A(t)
    lab = catalog.A_labels()
    for i in range(1, 5):
        s = [sum((cfg.coords(lab[nm])[k] for nm in (f"a{i}+", f"a{i+4}+", f"a{i}-", f"a{i+4}-")), Scalar(0))
             for k in range(6)]
        assert s == [0] * 6


def test_F_labels_formula():
    lab = catalog.A_labels()
    want = {lab[f"a{i}+"] for i in range(1, 9)}
    assert catalog.F_labels("++++") == want
    mixed = catalog.F_labels("+-+-")
    assert lab["a2-"] in mixed and lab["a6-"] in mixed and lab["a1+"] in mixed
    assert len({catalog.F_labels(d) for d in itertools.product("+-", repeat=4)}) == 16
    with pytest.raises(ValueError):
        catalog.F_labels("+++")


def test_F_lemma_holds_at_t0():
    rep = catalog.verify_F_lemma(t=0)
    assert rep.ok, str(rep)
    assert rep.data["dim"] == 5


def test_F_at_eighth_is_full_dimensional():
    # at t = 1/8 the eight points are no longer on a common hyperplane
    cfg = catalog.F("++++", Fraction(1, 8))
    assert cfg.dim == 6


def test_prism_report():
    rep = catalog.verify_prism()
    assert rep.ok, str(rep)


def test_prism_cyclic_boundary_does_not_extend():
    cfg = catalog.prism()
    squares = [f.labels for f in cfg.facets() if len(f.labels) == 4]
    ks = {catalog.boundary_complex(cfg, T) for T in enumerate_triangulations_bruteforce(cfg)}
    all_choices = set()
    for diags in itertools.product(*(enumerate_triangulations_bruteforce(cfg.restrict(s)) for s in squares)):
        cells = {c for d in diags for c in d}
        cells |= {tuple(sorted(f.labels)) for f in cfg.facets() if len(f.labels) == 3}
        all_choices.add(Subdivision(cells))
    assert ks < all_choices
    assert len(all_choices - ks) == 2


def test_boundary_complex_of_simplex():
    cfg = catalog.convex_position(3)
    K = catalog.boundary_complex(cfg, Triangulation([(1, 2, 3)]))
    assert set(K.cells) == {(1, 2), (1, 3), (2, 3)}


def test_boundary_complex_five_points(five):
    T = Triangulation([(1, 2, 3), (2, 3, 4)])
    K = catalog.boundary_complex(five, T)
    assert set(K.cells) == {(1, 2), (1, 3), (2, 4), (3, 4)}


def test_boundary_preserving_five_points(five):
    # a5 = (1,1) is interior, so no flip can touch the square's edges
    ok, bad = catalog.boundary_preserving_flips(five, Triangulation([(1, 2, 3), (2, 3, 4)]))
    assert ok and bad == []


def test_boundary_preserving_detects_a_boundary_insertion():
    cfg = catalog.collinear(3)
    ok, bad = catalog.boundary_preserving_flips(cfg, Triangulation([(1, 3)]))
    # the 1D boundary is {1},{3}; inserting 2 keeps it
    assert ok
    sq = catalog.build("five_points").restrict([1, 2, 3, 4])
    moved = type(sq)([(0, 0), (2, 0), (0, 2), (2, 2), (1, 0)])
    ok, bad = catalog.boundary_preserving_flips(moved, Triangulation([(1, 2, 3), (2, 3, 4)]))
    assert not ok and len(bad) == 1 and bad[0].type[0] == 1


def test_general_position_convex_flips_preserve_boundary():
    cfg = catalog.convex_position(6)
    for T in enumerate_triangulations_bruteforce(cfg):
        assert catalog.boundary_preserving_flips(cfg, T)[0]


def test_schoenhardt_triangulation():
    cfg = catalog.schoenhardt8()
    T = catalog.schoenhardt_T(cfg)
    assert len(T.cells) == 14
    assert is_valid_triangulation(cfg, T)
    assert {7, 8} <= T.used_labels
    assert is_perturbation_of(cfg, catalog.schoenhardt8(Fraction(1, 1000)))


def test_report_rendering():
    rep = catalog.Report("demo")
    rep.check("holds", True)
    rep.data["n"] = 3
    assert rep.ok and "[x] holds" in str(rep) and "n = 3" in str(rep)
    rep.check("fails", False)
    assert not rep.ok and "FAILED" in str(rep)


def test_induced_on():
    T = Triangulation([(1, 2, 5), (1, 3, 5), (2, 4, 5), (3, 4, 5)])
    assert catalog.induced_on(T, {1, 2}, 2) == {(1, 2)}
    assert catalog.induced_on(T, {1, 5}, 2) == {(1, 5)}


def test_flips_of_F_at_t0_switch_one_facet():
    cfg = catalog.F("++++", 0)
    big = [f.labels for f in cfg.facets() if len(f.labels) > cfg.dim]
    T = sorted(enumerate_triangulations_bruteforce(cfg))[0]
    assert len(find_flips(cfg, T)) == 2
    assert len(big) == 4


@pytest.mark.slow
def test_A0_structure():
    rep = catalog.verify_A0_structure()
    assert rep.ok, str(rep)
