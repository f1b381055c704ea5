"""The eight acceptance criteria, each reporting one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import mpmath
import numpy as np

from conftest import record_acceptance
from lattice_dehn import catalog
from lattice_dehn.angles import AngleClass
from lattice_dehn.config import mp
from lattice_dehn.dehn import DehnStatus, dehn_invariant, is_zero, reduce
from lattice_dehn.ehrhart import (
    dilation_profile, fit_odd_cubic, minkowski_linearity_residual, random_lattice_polytope, random_tetrahedron,
)
from lattice_dehn.geometry import DegenerateGenerators, PointClass
from lattice_dehn.invariants import defect_exact, discrete_volume, enumerate_lattice_points, solid_angle
from lattice_dehn.sqrtfield import SqrtField
from lattice_dehn.tiling import obstruction_report, orthoscheme_cube_tiling, verify_multitile
from oracles import arctan_vertex_angle, mc_solid_angle

PREC = 256
CTX = mp(PREC)
ALPHA = AngleClass(Fraction(1, 3), 1)


def alpha_only(D, coeff):
    return D.term_map == {ALPHA: SqrtField(coeff)}


def show(D):
    return "{" + ", ".join(f"{c.closed_form}: {v}" for c, v in D.terms) + "}"


def rich_tetrahedron(seed):
    """First seeded random tetrahedron that has facet and edge lattice points."""
    rng = random.Random(seed)
    while True:
        T = random_tetrahedron(rng, -3, 3, name="random-tet")
        kinds = {r.kind for r in enumerate_lattice_points(T)}
        if {PointClass.FACET, PointClass.EDGE} <= kinds:
            return T


def test_criterion_1_tetrahedron_table():
    start = time.perf_counter()
    a = CTX.acos(CTX.mpf(1) / 3)
    want = {
        "T1": (3 * a / CTX.pi - CTX.mpf(4) / 3, {2: 6}),
        "T2": (-5 * a / (4 * CTX.pi) - CTX.mpf(1) / 2, {2: Fraction(-9, 2)}),
        "T3": (CTX.mpf(2) / 3, None),
    }
    worst = CTX.mpf(0)
    dehn_ok = True
    for name, build in (("T1", catalog.t1), ("T2", catalog.t2), ("T3", catalog.t3)):
        P = build()
        d = defect_exact(P).value(PREC)
        target, coeff = want[name]
        worst = max(worst, abs(d - target) / abs(target))
        D = reduce(dehn_invariant(P, PREC))
        dehn_ok &= D.is_empty() if coeff is None else alpha_only(D, coeff)
    secs = time.perf_counter() - start
    ok = worst <= CTX.mpf("1e-20") and dehn_ok and secs < 10
    record_acceptance(1, "tetrahedron table", ok,
                      f"max rel err {mpmath.nstr(worst, 3)}, Dehn vectors exact {dehn_ok}, {secs:.2f}s")
    assert ok


def test_criterion_2_counterexample():
    start = time.perf_counter()
    P = catalog.counterexample()
    d = defect_exact(P).value(PREC)
    D = reduce(dehn_invariant(P, PREC))
    rep = obstruction_report(P, PREC)
    secs = time.perf_counter() - start
    ok = (abs(d) < CTX.mpf("1e-18") and alpha_only(D, {2: -24}) and rep.verdict == "no-multitiling"
          and secs < 300)
    record_acceptance(2, "zero-defect counterexample", ok,
                      f"|delta| {mpmath.nstr(abs(d), 3)}, D = {show(D)}, "
                      f"verdict {rep.verdict}, {secs:.2f}s")
    assert ok


def test_criterion_3_big_family():
    start = time.perf_counter()
    P = catalog.big_counterexample(100)
    d = defect_exact(P).value(PREC)
    D = reduce(dehn_invariant(P, PREC))
    status = is_zero(D)
    secs = time.perf_counter() - start
    ok = (len(P.vertices) >= 100 and abs(d) < CTX.mpf("1e-15") * P.volume
          and status is DehnStatus.NONZERO and alpha_only(D, {2: -24}))
    record_acceptance(3, "big_counterexample(100)", ok,
                      f"{len(P.vertices)} vertices, |delta|/vol {mpmath.nstr(abs(d) / P.volume, 3)}, "
                      f"Dehn {status.value}, {secs:.1f}s at default capacity")
    assert ok


def test_criterion_4_orthoscheme_tiling():
    ts = orthoscheme_cube_tiling()
    res = verify_multitile(ts.region, ts, samples=10_000, seed=0)
    total = sum((defect_exact(T) for T in ts.tiles[1:]), defect_exact(ts.tiles[0]))
    s = total.value(PREC)
    d3 = defect_exact(catalog.t3()).value(PREC)
    vols = sum(T.volume for T in ts.tiles)
    tol = CTX.mpf("1e-18")
    ok = (res.verified and vols == ts.region.volume == 27 and all(T.volume == Fraction(9, 2) for T in ts.tiles)
          and abs(s) < tol and abs(d3 - CTX.mpf(2) / 3) < tol)
    record_acceptance(4, "orthoscheme tiling", ok,
                      f"{res.status}, 6*(9/2) = {vols}, sum delta {mpmath.nstr(s, 3)}, "
                      f"delta(T3) {mpmath.nstr(d3, 10)}")
    assert ok


def test_criterion_5_linearity_and_oddness():
    rng = random.Random(2024)
    tol = CTX.mpf("1e-15")
    worst_lin = CTX.mpf(0)
    dehn_ok = True
    for _ in range(10):
        k = rng.randint(2, 3)
        Ps = [random_lattice_polytope(rng, -2, 2) for _ in range(k)]
        ts = [rng.randint(1, 3) for _ in range(k)]
        worst_lin = max(worst_lin, minkowski_linearity_residual(Ps, ts, "defect", PREC).residual)
        dehn_ok &= minkowski_linearity_residual(Ps, ts, "dehn", PREC).exact_zero
    polys = [catalog.t1(), catalog.t2(), catalog.t3(), catalog.unit_cube(), catalog.counterexample(),
             catalog.wedge(5), catalog.pyramid(5)]
    polys += [random_tetrahedron(rng) for _ in range(5)]
    worst_odd = CTX.mpf(0)
    for P in polys:
        fit = fit_odd_cubic(dilation_profile(P, 4), PREC)
        worst_odd = max(worst_odd, abs(fit.c2), abs(fit.c0), abs(fit.c3 - P.volume))
    ok = worst_lin < tol and dehn_ok and worst_odd < tol
    record_acceptance(5, "Minkowski linearity and dilation oddness", ok,
                      f"defect residual {mpmath.nstr(worst_lin, 3)}, Dehn exact {dehn_ok}, "
                      f"oddness residual {mpmath.nstr(worst_odd, 3)} over {len(polys)} polytopes")
    assert ok


def test_criterion_6_asymptotics():
    n = 40
    rw = discrete_volume(catalog.wedge(n), PREC) - catalog.wedge(n).volume
    rw = rw / (CTX.mpf(-n) / 3)
    V = catalog.pyramid(n)
    rv = (discrete_volume(V, PREC) - V.volume) / (CTX.mpf(n * n) / 6)
    chis = [discrete_volume(catalog.wedge(m), PREC) for m in (5, 10, 20, 40)]
    decreasing = all(b < a for a, b in zip(chis, chis[1:]))
    ok = 0.95 <= rw <= 1.05 and 0.90 <= rv <= 1.10 and decreasing
    record_acceptance(6, "wedge and pyramid asymptotics", ok,
                      f"W40 ratio {mpmath.nstr(rw, 6)}, V40 ratio {mpmath.nstr(rv, 6)}, "
                      f"chi(W_n) decreasing {decreasing}")
    assert ok


def test_criterion_7_zonotopes():
    rng = random.Random(7)
    tol = CTX.mpf("1e-15")
    worst = CTX.mpf(0)
    zero = True
    made = 0
    rejected = 0
    while made < 20:
        gens = [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(rng.randint(3, 5))]
        try:
            Z = catalog.zonotope(gens)
        except DegenerateGenerators:
            rejected += 1
            continue
        made += 1
        worst = max(worst, abs(defect_exact(Z).value(PREC)))
        zero &= is_zero(reduce(dehn_invariant(Z, PREC))) is DehnStatus.ZERO
    ok = worst < tol and zero
    record_acceptance(7, "random lattice zonotopes", ok,
                      f"max |delta| {mpmath.nstr(worst, 3)}, all Dehn zero {zero}, "
                      f"{rejected} degenerate draws rejected")
    assert ok


def test_criterion_8_oracles():
    rng = np.random.default_rng(8)
    tet = rich_tetrahedron(8)
    worst_sigma = 0.0
    groups = 0
    for P in (catalog.unit_cube(), catalog.t1(), tet):
        reps = {}
        for r in enumerate_lattice_points(P, prec=PREC):
            reps.setdefault((r.kind, str(r.angle)), r)
        for (kind, _), r in reps.items():
            p, se = mc_solid_angle(P, r.point, 100_000, rng)
            exact = float(r.angle.value)
            if kind is PointClass.INTERIOR:
                worst_sigma = max(worst_sigma, 0.0 if p == 1.0 else float("inf"))
            else:
                worst_sigma = max(worst_sigma, abs(p - exact) / se)
            groups += 1
    worst_diff = CTX.mpf(0)
    for P in (catalog.unit_cube(), catalog.t1(), catalog.t2(), catalog.t3(), tet, catalog.counterexample()):
        for vi, v in enumerate(P.vertices):
            a = solid_angle(P, v, PREC).value
            worst_diff = max(worst_diff, abs(a - arctan_vertex_angle(P, vi, PREC)))
    ok = worst_sigma <= 3 and worst_diff < CTX.mpf("1e-30")
    record_acceptance(8, "Monte-Carlo and vertex-angle oracles", ok,
                      f"worst MC deviation {worst_sigma:.2f} sigma over {groups} point classes, "
                      f"excess vs arctan {mpmath.nstr(worst_diff, 3)}")
    assert ok
