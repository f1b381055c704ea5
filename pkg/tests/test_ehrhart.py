import random
from dataclasses import replace
from fractions import Fraction

import pytest

from lattice_dehn import catalog
from lattice_dehn.ehrhart import (
    combination, dilation_profile, fit_odd_cubic, minkowski_linearity_residual, random_lattice_polytope,
    random_tetrahedron,
)
from lattice_dehn.invariants import discrete_volume_exact


def test_profile_matches_direct_computation():
    prof = dilation_profile(catalog.t1(), 5)
    assert [e.t for e in prof.entries] == [1, 2, 3, 4, 5]
    for e in prof.entries:
        assert e.vol == Fraction(e.t**3, 3)
    assert prof.entries[0].chi == discrete_volume_exact(catalog.t1())
    with pytest.raises(ValueError):
        dilation_profile(catalog.t1(), 3)


def test_fit_is_odd_with_volume_leading_term():
    for P in (catalog.t1(), catalog.t2(), catalog.unit_cube(), catalog.wedge(3)):
        fit = fit_odd_cubic(dilation_profile(P, 5))
        assert fit.odd_exact
        assert fit.exact[0].reduced().rational == P.volume and not fit.exact[0].reduced().coeffs
        assert abs(fit.residual) < 1e-60


def test_t1_linear_coefficient_is_the_defect():
    # chi(tT1) = t^3/3 + t*delta(T1) when the cubic is odd
    fit = fit_odd_cubic(dilation_profile(catalog.t1(), 4))
    d = discrete_volume_exact(catalog.t1()) - catalog.t1().volume
    assert (fit.exact[2] - d).is_zero()


def test_non_odd_profile_is_detected():
    prof = dilation_profile(catalog.t1(), 4)
    bumped = replace(prof, entries=(replace(prof.entries[0], chi=prof.entries[0].chi + 1),) + prof.entries[1:])
    assert not fit_odd_cubic(bumped).odd_exact


def test_linearity_on_catalog_pairs():
    for Ps, ts in (((catalog.t1(), catalog.t2()), (2, 1)), ((catalog.t3(), catalog.unit_cube()), (1, 3))):
        d = minkowski_linearity_residual(Ps, ts, "defect")
        assert d.exact_zero and d.residual < 1e-60
        assert minkowski_linearity_residual(Ps, ts, "dehn").exact_zero


def test_linearity_rejects_bad_arguments():
    with pytest.raises(ValueError):
        minkowski_linearity_residual([catalog.t1()], [1, 2])
    with pytest.raises(ValueError):
        minkowski_linearity_residual([catalog.t1()], [0])
    with pytest.raises(ValueError):
        minkowski_linearity_residual([catalog.t1()], [1], "volume")


def test_combination_volume_mixed():
    S = combination([catalog.t1(), catalog.t1()], [1, 2])
    assert S.volume == 27 * catalog.t1().volume


def test_random_generators_are_seeded():
    a = [random_tetrahedron(random.Random(3)).vertices for _ in range(2)]
    assert a[0] == a[1] and len(a[0]) == 4
    P = random_lattice_polytope(random.Random(4), 0, 2)
    assert not P.is_degenerate
