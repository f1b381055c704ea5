import json
from fractions import Fraction

import pytest

from lattice_dehn import catalog, tiling
from lattice_dehn.geometry import convex_hull, cut, translate
from lattice_dehn.invariants import defect_exact
from lattice_dehn.tiling import (
    SampleDegeneracy, TileOutsideRegion, TileSet, coverage_count, obstruction_report, orthoscheme_cube_tiling,
    path_simplex, verify_multitile,
)


def test_orthoscheme_tiles():
    ts = orthoscheme_cube_tiling()
    assert len(ts.tiles) == 6 and ts.region.volume == 27
    assert all(T.volume == Fraction(9, 2) for T in ts.tiles)
    assert catalog.t3() in [T.renamed("T3") for T in ts.tiles]
    total = sum((defect_exact(T) for T in ts.tiles[1:]), defect_exact(ts.tiles[0]))
    assert total.is_zero()
    assert sorted(defect_exact(T).reduced().rational for T in ts.tiles) == [Fraction(-1, 3)] * 4 + [Fraction(2, 3)] * 2


def test_verify_orthoscheme():
    ts = orthoscheme_cube_tiling()
    res = verify_multitile(ts.region, ts, samples=2000, seed=1)
    assert res.verified and res.volume_sum == 27 and res.samples == 2000


def test_missing_tile_is_refuted_with_witness():
    ts = orthoscheme_cube_tiling()
    short = TileSet(ts.tiles[:-1], 1, ts.region)
    res = verify_multitile(ts.region, short, samples=2000)
    assert not res.verified and res.reason == "volume mismatch"
    assert res.witness is not None and coverage_count(short.tiles, res.witness) == 0


def test_overlap_with_right_volume_is_refuted():
    C = catalog.box(2, 2, 2)
    left, right, _ = cut(C, (1, 0, 0), 1)
    assert verify_multitile(C, TileSet((left, right), 1, C), samples=500).verified
    # two copies of the left half: total volume matches, coverage does not
    res = verify_multitile(C, TileSet((left, left), 1, C), samples=500)
    assert not res.verified and res.reason == "coverage mismatch" and res.coverage in (0, 2)


def test_double_cover():
    C = catalog.unit_cube()
    below, above, _ = cut(C, (1, -1, 0), 0)
    ts = TileSet((C, below, above), 2, C)
    assert verify_multitile(C, ts, samples=500).verified


def test_tile_outside_region():
    C = catalog.unit_cube()
    with pytest.raises(TileOutsideRegion):
        verify_multitile(C, TileSet((translate(C, (1, 0, 0)),), 1, C))


def test_sample_degeneracy(monkeypatch):
    monkeypatch.setattr(tiling, "SAMPLE_BITS", 0)
    C = catalog.unit_cube()
    with pytest.raises(SampleDegeneracy):
        verify_multitile(C, TileSet((C,), 1, C), samples=10)


def test_tileset_json_round_trip_and_validation():
    ts = orthoscheme_cube_tiling()
    text = json.dumps(ts.to_json())
    back = TileSet.from_json(text)
    assert back.tiles == ts.tiles and back.region == ts.region and back.k == 1
    with pytest.raises(ValueError):
        TileSet((catalog.t1(),), 0)
    with pytest.raises(Exception):
        TileSet.from_json('{"k": 1.5, "tiles": []}')


def test_path_simplex_is_t3():
    assert path_simplex([(2, 2, -1), (1, -2, -2), (2, -1, 2)]) == catalog.t3().renamed(None)


def test_obstruction_verdicts():
    assert obstruction_report(catalog.counterexample()).verdict == "no-multitiling"
    assert obstruction_report(catalog.t1()).verdict == "no-multitiling"
    assert obstruction_report(catalog.unit_cube()).verdict == "no-obstruction"
    rep = obstruction_report(catalog.t3())
    assert rep.verdict == "no-translation-multitiling" and not rep.concrete
    assert any("reflections" in n for n in rep.notes)
    data = rep.to_json(64)
    assert data["dehn_is_zero"] == "zero" and data["defect_closed_form"] == "2/3"


def test_obstruction_notes_rational_vertices():
    h = Fraction(1, 2)
    P = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, h)])
    assert any("non-lattice" in n for n in obstruction_report(P).notes)
