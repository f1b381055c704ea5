"""End-to-end reproduction of the tetrahedron table, the zero-defect counterexample and its relatives."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from . import catalog
from .angles import AngleClass
from .config import DEFAULT_COLUMN_CAPACITY, mp
from .dehn import DehnStatus, dehn_invariant, is_zero, reduce
from .invariants import defect_exact, discrete_volume
from .sqrtfield import SqrtField
from .tiling import obstruction_report, orthoscheme_cube_tiling, verify_multitile

ALPHA = AngleClass(Fraction(1, 3), 1)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(name, fn) -> Check:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is reported as a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(name, bool(ok), detail, time.perf_counter() - t)


def _alpha_only(D, coeff: SqrtField) -> bool:
    return D.term_map == {ALPHA: coeff}


def table_values(prec=256):
    ctx = mp(prec)
    a = ctx.acos(ctx.mpf(1) / 3)
    expected = {
        "T1": (3 * a / ctx.pi - ctx.mpf(4) / 3, SqrtField({2: 6})),
        "T2": (-5 * a / (4 * ctx.pi) - ctx.mpf(1) / 2, SqrtField({2: Fraction(-9, 2)})),
        "T3": (ctx.mpf(2) / 3, None),
    }
    parts = []
    ok = True
    for name, build in (("T1", catalog.t1), ("T2", catalog.t2), ("T3", catalog.t3)):
        P = build()
        d = defect_exact(P).value(prec)
        want, coeff = expected[name]
        rel = abs(d - want) / abs(want)
        D = reduce(dehn_invariant(P))
        dehn_ok = D.is_empty() if coeff is None else _alpha_only(D, coeff)
        ok &= rel <= ctx.mpf("1e-20") and dehn_ok
        parts.append(f"{name} rel.err {ctx.nstr(rel, 3)}, dehn {'ok' if dehn_ok else 'WRONG'}")
    return ok, "; ".join(parts)


def counterexample_identities(prec=256):
    ctx = mp(prec)
    P = catalog.counterexample()
    d = defect_exact(P).value(prec)
    D = reduce(dehn_invariant(P))
    verdict = obstruction_report(P, prec).verdict
    ok = abs(d) < ctx.mpf("1e-18") and _alpha_only(D, SqrtField({2: -24})) and verdict == "no-multitiling"
    return ok, f"|delta| = {ctx.nstr(abs(d), 3)}, dehn {[(str(c), str(v)) for c, v in D.terms]}, verdict {verdict}"


def big_family(N=100, prec=256, capacity=DEFAULT_COLUMN_CAPACITY):
    ctx = mp(prec)
    B = catalog.big_counterexample(N)
    dex = defect_exact(B, capacity=capacity)
    d = dex.value(prec)
    D = reduce(dehn_invariant(B))
    bound = ctx.mpf("1e-15") * ctx.mpf(B.volume.numerator) / B.volume.denominator
    ok = (len(B.vertices) >= N and abs(d) < bound and is_zero(D) is DehnStatus.NONZERO
          and _alpha_only(D, SqrtField({2: -24})))
    return ok, (f"{len(B.vertices)} vertices, |delta| = {ctx.nstr(abs(d), 3)} (bound {ctx.nstr(bound, 3)}), "
                f"dehn {[(str(c), str(v)) for c, v in D.terms]}")


def orthoscheme_tiling(prec=256, samples=10_000, seed=0):
    ctx = mp(prec)
    ts = orthoscheme_cube_tiling()
    res = verify_multitile(ts.region, ts, samples, seed)
    total = sum((defect_exact(T) for T in ts.tiles), defect_exact(ts.tiles[0]) * 0).value(prec)
    d3 = defect_exact(catalog.t3()).value(prec)
    vol_ok = res.volume_sum == 27 and ts.region.volume == 27
    ok = res.verified and vol_ok and abs(total) < ctx.mpf("1e-18") and abs(d3 - ctx.mpf(2) / 3) < ctx.mpf("1e-18")
    return ok, (f"{res.status}, volumes {res.volume_sum} = {ts.region.volume}, sum of defects "
                f"{ctx.nstr(total, 3)}, delta(T3) = {ctx.nstr(d3, 8)}")


def asymptotics(n=40, prec=256):
    W = catalog.wedge(n)
    V = catalog.pyramid(n)
    rw = defect_exact(W).value(prec) / (-mp(prec).mpf(n) / 3)
    rv = defect_exact(V).value(prec) / (mp(prec).mpf(n * n) / 6)
    chis = [discrete_volume(catalog.wedge(k), prec) for k in (5, 10, 20, 40)]
    decreasing = all(a > b > 0 for a, b in zip(chis, chis[1:]))
    ok = 0.95 <= rw <= 1.05 and 0.90 <= rv <= 1.10 and decreasing
    return ok, f"W ratio {mp(prec).nstr(rw, 6)}, V ratio {mp(prec).nstr(rv, 6)}, chi(W_n) decreasing: {decreasing}"


def run_all(prec=256, samples=10_000, seed=0, capacity=DEFAULT_COLUMN_CAPACITY, big_n=100) -> list[Check]:
    return [
        _timed("defect and Dehn table for T1, T2, T3", lambda: table_values(prec)),
        _timed("5T1+12T2+19T3 is concrete with nonzero Dehn invariant", lambda: counterexample_identities(prec)),
        _timed(f"counterexample plus zonotope, N={big_n}", lambda: big_family(big_n, prec, capacity)),
        _timed("six orthoschemes tile the cube", lambda: orthoscheme_tiling(prec, samples, seed)),
        _timed("wedge and pyramid asymptotics at n=40", lambda: asymptotics(40, prec)),
    ]
