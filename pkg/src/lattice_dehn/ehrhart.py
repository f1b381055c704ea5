"""Dilation profiles of chi, exact odd-cubic fits, and Minkowski linearity checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .angles import AngleSum
from .config import DEFAULT_COLUMN_CAPACITY, mp
from .dehn import DehnVector, dehn_invariant, reduce
from .geometry import LatticePolytope, convex_hull, dilate, minkowski_sum
from .invariants import defect_exact, discrete_volume_exact


@dataclass(frozen=True)
class ProfileEntry:
    t: int
    chi: AngleSum
    vol: Fraction


@dataclass(frozen=True)
class DilationProfile:
    polytope: str
    entries: tuple[ProfileEntry, ...]
    base_volume: Fraction

    def values(self, prec: int | None = None):
        return [(e.t, e.chi.value(prec), e.vol) for e in self.entries]


def dilation_profile(P: LatticePolytope, t_max: int = 4, capacity: int = DEFAULT_COLUMN_CAPACITY) -> DilationProfile:
    """``chi(tP)`` and ``vol(tP)`` for ``t = 1..t_max``."""
    if t_max < 4:
        raise ValueError("t_max must be at least 4 to determine a cubic")
    entries = []
    for t in range(1, t_max + 1):
        Q = dilate(P, t)
        entries.append(ProfileEntry(t, discrete_volume_exact(Q, capacity=capacity), Q.volume))
    return DilationProfile(P.name or "", tuple(entries), P.volume)


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [row[:] + [v] for row, v in zip(A, b)]
    for i in range(n):
        p = next(r for r in range(i, n) if M[r][i] != 0)
        M[i], M[p] = M[p], M[i]
        for r in range(n):
            if r != i and M[r][i]:
                k = M[r][i] / M[i][i]
                M[r] = [x - k * y for x, y in zip(M[r], M[i])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _cubic_weights(ts: Sequence[int]) -> list[list[Fraction]]:
    """Rows w_k with ``c_k = sum_i w_k[i] * y_i`` for the least-squares cubic (exact interpolation for 4 points)."""
    V = [[Fraction(t) ** k for k in range(4)] for t in ts]
    G = [[sum(V[i][a] * V[i][b] for i in range(len(ts))) for b in range(4)] for a in range(4)]
    weights = []
    for k in range(4):
        e = [Fraction(int(a == k)) for a in range(4)]
        g = _solve(G, e)  # row k of G^-1
        weights.append([sum(g[a] * V[i][a] for a in range(4)) for i in range(len(ts))])
    return weights


@dataclass(frozen=True)
class CubicFit:
    c3: object
    c2: object
    c1: object
    c0: object
    residual: object
    exact: tuple[AngleSum, AngleSum, AngleSum, AngleSum]  # (c3, c2, c1, c0)
    odd_exact: bool  # c2 and c0 vanish identically

    def coefficients(self):
        return (self.c3, self.c2, self.c1, self.c0)


def fit_odd_cubic(profile: DilationProfile, prec: int | None = None) -> CubicFit:
    """Cubic through the profile, computed exactly on each angle coordinate."""
    if len(profile.entries) < 4:
        raise ValueError("need at least 4 profile entries")
    ts = [e.t for e in profile.entries]
    ys = [e.chi for e in profile.entries]
    W = _cubic_weights(ts)
    coeffs = []
    for k in range(4):
        acc = AngleSum.build(0)
        for w, y in zip(W[k], ys):
            if w:
                acc = acc + y * w
        coeffs.append(acc)
    c0, c1, c2, c3 = coeffs
    ctx = mp(prec)
    vals = [c.value(ctx.prec) for c in (c3, c2, c1, c0)]
    resid = ctx.mpf(0)
    for t, y in zip(ts, ys):
        fit = ((vals[0] * t + vals[1]) * t + vals[2]) * t + vals[3]
        resid = max(resid, abs(fit - y.value(ctx.prec)))
    odd = c2.is_zero() and c0.is_zero()
    return CubicFit(vals[0], vals[1], vals[2], vals[3], resid, (c3, c2, c1, c0), odd)


@dataclass(frozen=True)
class LinearityResult:
    which: str
    residual: object  # |difference| for the defect; 0 or 1 for the Dehn invariant
    exact_zero: bool
    difference: object = None  # AngleSum or DehnVector


def combination(Ps: Sequence[LatticePolytope], ts: Sequence[int]) -> LatticePolytope:
    return minkowski_sum(*(dilate(P, t) for P, t in zip(Ps, ts)))


def minkowski_linearity_residual(Ps: Sequence[LatticePolytope], ts: Sequence[int], which: str = "defect",
                                 prec: int | None = None,
                                 capacity: int = DEFAULT_COLUMN_CAPACITY) -> LinearityResult:
    """How far ``delta`` (or the Dehn invariant) of ``sum t_i P_i`` is from ``sum t_i * value(P_i)``."""
    if len(Ps) != len(ts) or not Ps:
        raise ValueError("Ps and ts must be non-empty and of equal length")
    if any(t <= 0 for t in ts):
        raise ValueError("dilation factors must be positive")
    S = combination(Ps, ts)
    if which == "defect":
        diff = defect_exact(S, capacity=capacity)
        for P, t in zip(Ps, ts):
            diff = diff - defect_exact(P, capacity=capacity) * t
        return LinearityResult("defect", abs(diff.value(prec)), diff.is_zero(), diff)
    if which == "dehn":
        diff: DehnVector = dehn_invariant(S)
        for P, t in zip(Ps, ts):
            diff = diff - reduce(dehn_invariant(P)) * t
        r = reduce(diff)
        return LinearityResult("dehn", 0 if r.is_empty() else 1, r.is_empty(), r)
    raise ValueError(f"which must be 'defect' or 'dehn', got {which!r}")


def random_lattice_polytope(rng: random.Random, lo: int = -3, hi: int = 3, npoints: tuple[int, int] = (4, 8),
                            name: str | None = None) -> LatticePolytope:
    """Hull of 4 to 8 uniform integer points in ``[lo, hi]^3``, redrawn until full-dimensional."""
    while True:
        k = rng.randint(*npoints)
        pts = [tuple(rng.randint(lo, hi) for _ in range(3)) for _ in range(k)]
        P = convex_hull(pts, name=name)
        if not P.is_degenerate:
            return P


def random_tetrahedron(rng: random.Random, lo: int = -3, hi: int = 3, name: str | None = None) -> LatticePolytope:
    while True:
        P = random_lattice_polytope(rng, lo, hi, (4, 4), name)
        if len(P.vertices) == 4:
            return P
