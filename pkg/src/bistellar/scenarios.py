"""End-to-end checks of the worked examples.

Each function returns a :class:`~bistellar.catalog.Report` whose ``summary``
entry is the one-line text printed by ``bistellar verify <name>``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import catalog
from .config import PointConfiguration, is_perturbation_of
from .flips import find_flips, flip_graph, incremental_construction, monotone_flip_sequence
from .regular import (
    Lift,
    is_regular,
    secondary_polytope_summary,
    subdivision_from_lift,
)
from .subdivision import (
    Subdivision,
    Triangulation,
    enumerate_triangulations_bruteforce,
    is_valid_subdivision,
    is_valid_triangulation,
    refines,
)

__all__ = ["SCENARIOS", "run"]

Report = catalog.Report

MOAE_T1 = Triangulation([(1, 2, 4), (2, 3, 5), (1, 3, 6), (2, 4, 5), (3, 5, 6), (1, 4, 6), (4, 5, 6)])
MOAE_T2 = Triangulation([(1, 2, 5), (2, 3, 6), (1, 3, 4), (1, 4, 5), (2, 5, 6), (3, 4, 6), (4, 5, 6)])
MOAE_HEXAGON = Subdivision([(1, 2, 4, 5), (2, 3, 5, 6), (1, 3, 4, 6), (4, 5, 6)])


def five_points() -> Report:
    cfg = catalog.five_points()
    rep = Report("five-points")
    tris = enumerate_triangulations_bruteforce(cfg)
    g = flip_graph(cfg)
    rep.check("4 triangulations", len(tris) == 4)
    rep.check("enumerator and flip graph agree", set(g.nodes) == tris)
    rep.check("flip graph is a 4-cycle", g.is_cycle() and len(g.nodes) == 4)
    rep.check("edge types {(2,2),(2,2),(1,3),(1,2)}", g.edge_types() == [(1, 2), (1, 3), (2, 2), (2, 2)])
    certs = [is_regular(cfg, T) for T in sorted(tris)]
    rep.check("all triangulations regular", all(c is not None for c in certs))
    rep.check("certificates reproduce the triangulations",
              all(subdivision_from_lift(cfg, c) == T for c, T in zip(certs, sorted(tris))))
    sec = secondary_polytope_summary(cfg, tris)
    rep.check("secondary polytope 2-dimensional with f-vector (4,4,1)",
              sec.dim == 2 and sec.f_vector == (4, 4, 1))
    rep.check("9 faces", sec.total_faces == 9)
    rep.data["f_vector"] = sec.f_vector
    rep.data["summary"] = (f"triangulations={len(tris)} flipgraph={'cycle' if g.is_cycle() else 'other'} "
                           f"secondary_faces={sec.total_faces}")
    return rep


def moae() -> Report:
    cfg = catalog.moae()
    rep = Report("moae")
    rep.check("T1 valid", is_valid_triangulation(cfg, MOAE_T1).ok)
    rep.check("T2 valid", is_valid_triangulation(cfg, MOAE_T2).ok)
    rep.check("T1 not regular", is_regular(cfg, MOAE_T1) is None)
    rep.check("T2 not regular", is_regular(cfg, MOAE_T2) is None)
    rep.check("hexagon subdivision valid", is_valid_subdivision(cfg, MOAE_HEXAGON).ok)
    rep.check("hexagon subdivision regular", is_regular(cfg, MOAE_HEXAGON) is not None)
    tris = enumerate_triangulations_bruteforce(cfg)
    ref = [T for T in tris if refines(cfg, T, MOAE_HEXAGON)]
    nreg = sum(is_regular(cfg, T) is not None for T in ref)
    rep.data["refinements"] = len(ref)
    rep.data["regular refinements"] = nreg
    rep.check("8 refining triangulations", len(ref) == 8)
    rep.check("6 of them regular", nreg == 6)
    rep.data["summary"] = f"triangulations={len(tris)} refinements={len(ref)} regular_refinements={nreg}"
    return rep


def perturbed(eps=catalog.DEFAULT_EPS) -> Report:
    cfg = catalog.moae_perturbed(eps)
    rep = Report(f"perturbed (eps={eps})")
    rep.check("perturbation of moae", is_perturbation_of(cfg, catalog.moae()))
    rep.check("T1 not regular", is_regular(cfg, MOAE_T1) is None)
    rep.check("T2 regular", is_regular(cfg, MOAE_T2) is not None)
    flips = find_flips(cfg, MOAE_T1)
    # the diagonal present in T1 is the side opposite to the one T1 triangulates with
    diag = sorted(tuple(sorted(f.circuit.side("-" if f.from_side == "+" else "+"))) for f in flips)
    rep.data["flips of T1"] = [str(f) for f in flips]
    rep.check("T1 has exactly 3 flips, all (2,2)", len(flips) == 3 and all(f.type == (2, 2) for f in flips))
    rep.check("they flip diagonals 16, 24, 35", diag == [(1, 6), (2, 4), (3, 5)])
    w = Lift({1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1})
    res = monotone_flip_sequence(cfg, MOAE_T1, w)
    rep.check("no w-monotone flip in T1", res.stuck and not res.flips and res.final == MOAE_T1)
    rep.check("T2 is the top of the negated lift", subdivision_from_lift(cfg, -w) == MOAE_T2)
    rep.data["summary"] = f"t1_flips={len(flips)} stuck={str(res.stuck).lower()}"
    return rep


def convex(ns=range(4, 11)) -> Report:
    rep = Report("convex position")
    catalan = {4: 2, 5: 5, 6: 14, 7: 42, 8: 132, 9: 429, 10: 1430, 11: 4862, 12: 16796}
    parts = []
    for n in ns:
        cfg = catalog.convex_position(n)
        g = flip_graph(cfg)
        rep.check(f"n={n}: {catalan[n]} triangulations", len(g.nodes) == catalan[n] and not g.truncated)
        rep.check(f"n={n}: connected", len(g.components) == 1)
        rep.check(f"n={n}: every triangulation has >= n-3 flips", min(g.degrees()) >= n - 3)
        rep.data[f"diameter n={n}"] = g.diameter
        parts.append(f"n{n}={len(g.nodes)}")
    rep.data["summary"] = " ".join(parts)
    return rep


def collinear(ns=range(3, 11)) -> Report:
    rep = Report("collinear")
    parts = []
    for n in ns:
        cfg = catalog.collinear(n)
        g = flip_graph(cfg)
        k = n - 2
        rep.check(f"n={n}: 2^{k} triangulations", len(g.nodes) == 2 ** k)
        rep.check(f"n={n}: cube graph Q_{k}",
                  len(g.edges) == k * 2 ** (k - 1) and set(g.degrees()) == {k} and g.diameter == k
                  and _is_hypercube(g))
        parts.append(f"n{n}={len(g.nodes)}")
    rep.data["summary"] = " ".join(parts)
    return rep


def _is_hypercube(g) -> bool:
    """Cells of a 1D triangulation are determined by the set of used interior points."""
    keys = [frozenset(T.used_labels) for T in g.nodes]
    index = {k: i for i, k in enumerate(keys)}
    for i, j, _, _ in g.edges:
        if len(keys[i] ^ keys[j]) != 1:
            return False
    return len(index) == len(keys)


def random_config(rng: random.Random, d: int, n: int, general: bool = True) -> PointConfiguration:
    """Random rational points in general position (retrying until they are)."""
    while True:
        pts = set()
        while len(pts) < n:
            pts.add(tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 4)) for _ in range(d)))
        try:
            cfg = PointConfiguration(sorted(pts))
        except ValueError:
            continue
        if not general or cfg.is_general_position():
            return cfg


def random_generic_lift(rng: random.Random, cfg: PointConfiguration) -> Lift:
    while True:
        w = Lift({lab: Fraction(rng.randint(-200, 200), rng.randint(1, 7)) for lab in cfg.labels})
        if isinstance(subdivision_from_lift(cfg, w), Triangulation):
            return w


def oracle(count: int = 50, seed: int = 2024) -> Report:
    rng = random.Random(seed)
    rep = Report("oracle equivalence")
    inc_ok = bfs_ok = valid_ok = True
    total = 0
    for _ in range(count):
        d = rng.choice([2, 3])
        n = rng.randint(d + 2, 8)
        cfg = random_config(rng, d, n)
        w = random_generic_lift(rng, cfg)
        order = list(cfg.labels)
        while True:
            rng.shuffle(order)
            if cfg.orientation(sorted(order[: d + 1])) != 0:
                break
        inc_ok &= incremental_construction(cfg, w, order) == subdivision_from_lift(cfg, w)
        tris = enumerate_triangulations_bruteforce(cfg)
        g = flip_graph(cfg, diameter=False)
        bfs_ok &= set(g.nodes) == tris
        valid_ok &= all(is_valid_triangulation(cfg, T).ok for T in tris)
        total += len(tris)
    rep.check("incremental construction equals the lower envelope", inc_ok)
    rep.check("flip-graph nodes equal brute-force enumeration", bfs_ok)
    rep.check("every enumerated triangulation is valid", valid_ok)
    rep.data["summary"] = f"configs={count} triangulations={total}"
    return rep


def diameter2d(count: int = 25, seed: int = 4242) -> Report:
    rng = random.Random(seed)
    rep = Report("2D diameter")
    worst = []
    ok = True
    for _ in range(count):
        n = rng.randint(4, 8)
        cfg = random_config(rng, 2, n)
        g = flip_graph(cfg)
        ok &= len(g.components) == 1 and g.diameter < 4 * n
        worst.append((g.diameter, n))
    rep.check("diameter < 4n on every config", ok)
    rep.data["summary"] = f"configs={count} max_diameter={max(worst)[0]}"
    return rep


def f_lemma(t=catalog.DEFAULT_T) -> Report:
    rep = catalog.verify_F_lemma(t)
    rep.data["summary"] = f"facets={rep.data['facets'].split()[0]} triangulations={rep.data['triangulations']}"
    return rep


def a0(t=catalog.DEFAULT_T) -> Report:
    rep = catalog.verify_A0_structure(t)
    rep.data["summary"] = rep.data["facets"].replace(" ", "")
    return rep


def prism() -> Report:
    rep = catalog.verify_prism()
    rep.data["summary"] = (f"boundary_choices={rep.data['boundary choices']} "
                           f"extendable={rep.data['extendable boundary choices']} "
                           f"triangulations={rep.data['triangulations']}")
    return rep


def schoenhardt() -> Report:
    cfg = catalog.schoenhardt8()
    T = catalog.schoenhardt_T(cfg)
    rep = Report("schoenhardt8")
    rep.check("14 cells", len(T) == 14)
    rep.check("valid triangulation", is_valid_triangulation(cfg, T).ok)
    rep.check("uses both apexes", {7, 8} <= T.used_labels)
    rep.data["summary"] = f"cells={len(T)} valid={str(rep.checks['valid triangulation']).lower()}"
    return rep


def rigid_k(budget: float = 600.0) -> Report:
    res = catalog.search_rigid_K(budget=budget)
    rep = Report("rigid boundary of A(0)")
    rep.data["trace"] = res.trace
    rep.data["found"] = res.found
    rep.data["boundary complexes satisfying the constraints"] = res.solutions if res.exhausted else "incomplete"
    rep.data["extensions verified"] = int(bool(res.preserve))
    if res.found:
        rep.check("all flips of the extension preserve K", bool(res.preserve))
    rep.data["summary"] = (f"found={str(res.found).lower()} complete={str(res.exhausted).lower()} "
                           f"solutions={res.solutions} preserve={str(res.preserve).lower()}")
    return rep


SCENARIOS = {
    "five-points": five_points,
    "moae": moae,
    "perturbed": perturbed,
    "convex": convex,
    "collinear": collinear,
    "oracle": oracle,
    "diameter2d": diameter2d,
    "f-lemma": f_lemma,
    "a0": a0,
    "prism": prism,
    "schoenhardt": schoenhardt,
    "rigid-k": rigid_k,
}


def run(name: str, **kw) -> Report:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    return fn(**kw)
