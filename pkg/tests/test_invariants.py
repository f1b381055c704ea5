import random
from fractions import Fraction

import mpmath
import pytest

from lattice_dehn import catalog
from lattice_dehn.angles import AngleSum
from lattice_dehn.ehrhart import random_lattice_polytope
from lattice_dehn.geometry import GeometryError, PointClass, convex_hull, cut, translate
from lattice_dehn.invariants import (
    CapacityExceeded, count_lattice_points, defect_exact, discrete_volume, discrete_volume_exact,
    enumerate_lattice_points, invariants_report, solid_angle, volume_defect,
)
from oracles import brute_force_points

CTX = mpmath.MPContext()
CTX.prec = 256
TOL = CTX.mpf("1e-60")


def brute_chi(P) -> AngleSum:
    total = AngleSum.build(0)
    for x in brute_force_points(P):
        total = total + solid_angle(P, x).exact
    return total


def test_cube_and_boxes_are_concrete():
    for P in (catalog.unit_cube(), catalog.box(2, 3, 4)):
        assert defect_exact(P).is_zero()
    assert count_lattice_points(catalog.box(2, 3, 4)).total == 60


def test_solid_angle_values():
    C = catalog.unit_cube()
    h = Fraction(1, 2)
    assert solid_angle(C, (0, 0, 0)).exact == AngleSum.build(Fraction(1, 8))
    assert solid_angle(catalog.box(2, 2, 2), (1, 1, 1)).exact == AngleSum.build(1)
    assert solid_angle(C, (h, h, 0)).exact == AngleSum.build(h)
    assert solid_angle(C, (h, 0, 0)).exact == AngleSum.build(Fraction(1, 4))
    with pytest.raises(GeometryError):
        solid_angle(C, (2, 2, 2))
    # T1 vertex: (3 alpha - pi) / (4 pi)
    a = CTX.acos(CTX.mpf(1) / 3)
    assert abs(solid_angle(catalog.t1(), (0, 0, 0), 256).value - (3 * a - CTX.pi) / (4 * CTX.pi)) < TOL


def test_tetrahedron_table_values():
    a = CTX.acos(CTX.mpf(1) / 3)
    assert abs(discrete_volume(catalog.t1(), 256) - (3 * a / CTX.pi - 1)) < TOL
    assert abs(volume_defect(catalog.t1(), 256) - (3 * a / CTX.pi - CTX.mpf(4) / 3)) < TOL
    assert abs(volume_defect(catalog.t2(), 256) - (-5 * a / (4 * CTX.pi) - CTX.mpf(1) / 2)) < TOL
    assert abs(volume_defect(catalog.t3(), 256) - CTX.mpf(2) / 3) < TOL
    assert str(defect_exact(catalog.t1())) == "3*acos(1/3)/pi - 4/3"


def test_three_routes_agree_on_random_polytopes():
    rng = random.Random(21)
    for _ in range(12):
        P = random_lattice_polytope(rng, -3, 3)
        chi_count = discrete_volume_exact(P, "count")
        chi_enum = discrete_volume_exact(P, "enumerate")
        chi_brute = brute_chi(P)
        assert (chi_count - chi_enum).is_zero()
        assert (chi_count - chi_brute).is_zero()
        pts = {r.point: r.kind for r in enumerate_lattice_points(P)}
        assert pts == {x: loc.kind for x, loc in brute_force_points(P).items()}
        assert count_lattice_points(P).total == len(pts)


def test_routes_agree_with_vertical_facets():
    # prism over a triangle with vertical side walls, and a slanted wedge
    for P in (convex_hull([(0, 0, 0), (3, 0, 0), (0, 2, 0), (0, 0, 2), (3, 0, 2), (0, 2, 2)]),
              catalog.wedge(4), catalog.box(1, 2, 3)):
        assert (discrete_volume_exact(P, "count") - brute_chi(P)).is_zero()
        assert (discrete_volume_exact(P, "enumerate") - brute_chi(P)).is_zero()


def test_rational_polytope_uses_enumeration():
    h = Fraction(1, 2)
    P = convex_hull([(-h, -h, -h), (Fraction(5, 2), 0, 0), (0, Fraction(5, 2), 0), (0, 0, Fraction(7, 3))])
    assert not P.is_lattice
    assert (discrete_volume_exact(P) - brute_chi(P)).is_zero()
    rep = invariants_report(P, 64)
    assert "non_lattice" in rep


def test_translation_invariance():
    rng = random.Random(13)
    for P in (catalog.t1(), catalog.t2(), random_lattice_polytope(rng)):
        base = defect_exact(P)
        for _ in range(20):
            v = tuple(rng.randint(-50, 50) for _ in range(3))
            assert (defect_exact(translate(P, v)) - base).is_zero()


def test_chi_is_additive_under_cuts():
    C = catalog.box(2, 2, 2)
    pieces = [cut(C, (1, -1, 0), 0)[:2]]
    rng = random.Random(17)
    while len(pieces) < 6:
        n = tuple(rng.randint(-2, 2) for _ in range(3))
        if n == (0, 0, 0):
            continue
        h = Fraction(rng.randint(-4, 8), 2)
        try:
            below, above, _ = cut(C, n, h)
        except GeometryError:
            continue
        if below.is_degenerate or above.is_degenerate:
            continue
        pieces.append((below, above))
    chi = discrete_volume_exact(C)
    for below, above in pieces:
        assert below.volume + above.volume == C.volume
        total = discrete_volume_exact(below, "enumerate") + discrete_volume_exact(above, "enumerate")
        assert (total - chi).is_zero()


def test_counts_split_by_face():
    T = catalog.t2()
    c = count_lattice_points(T)
    kinds = [r.kind for r in enumerate_lattice_points(T)]
    assert c.interior == kinds.count(PointClass.INTERIOR)
    assert sum(c.facet) == kinds.count(PointClass.FACET)
    assert sum(c.edge) == kinds.count(PointClass.EDGE)
    assert kinds.count(PointClass.VERTEX) == 4


def test_capacity_limit():
    with pytest.raises(CapacityExceeded):
        count_lattice_points(catalog.box(40, 40, 3), capacity=100)


def test_report_keys_and_degenerate_input():
    rep = invariants_report(catalog.t1(), 128)
    assert set(rep) >= {"polytope", "num_lattice_points", "chi", "vol", "defect", "concrete",
                        "chi_closed_form", "defect_closed_form"}
    assert rep["num_lattice_points"] == 4 and rep["vol"] == "1/3" and rep["concrete"] is False
    flat = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    assert discrete_volume_exact(flat).is_zero()
