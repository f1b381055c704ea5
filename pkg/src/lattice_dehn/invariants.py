"""Lattice points, solid angles, discrete volume and volume defect.

Lattice points are found column by column: every facet that is not vertical
is rasterised over the integer ``(x, y)`` grid of its projection, which bounds
``z`` from above or below on that column.  Counting needs nothing more than
these ranges plus Pick's theorem on each facet, so it scales with the number
of columns rather than columns times facets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angles import AngleSum
from .config import DEFAULT_COLUMN_CAPACITY, format_decimal, mp
from .dehn import dihedral_angle
from .geometry import GeometryError, LatticePolytope, Location, PointClass, classify_point, cross, dot, vec3

ENUMERATION_WORK_LIMIT = 5 * 10**8  # boundary candidates x facets


class CapacityExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolidAngle:
    """Fraction of a small ball around a point that lies in the polytope."""

    exact: AngleSum
    value: object  # mpf at the precision it was built with

    @classmethod
    def of(cls, exact: AngleSum, prec: int | None = None) -> "SolidAngle":
        return cls(exact, exact.value(prec))

    def __str__(self):
        return str(self.exact)


@dataclass(frozen=True)
class LatticePointRecord:
    point: tuple[int, int, int]
    location: Location
    angle: SolidAngle

    @property
    def kind(self) -> PointClass:
        return self.location.kind


# ---------------------------------------------------------------- columns


@dataclass
class Columns:
    """Per lattice column ``(x, y)``: the integer ``z`` range inside the polytope."""

    x: np.ndarray
    y: np.ndarray
    zlo: np.ndarray
    zhi: np.ndarray
    tight_lo: np.ndarray  # real lower bound is an integer (the point zlo lies on the boundary)
    tight_hi: np.ndarray
    vertical: np.ndarray  # column lies in a facet parallel to the z axis

    @property
    def length(self) -> np.ndarray:
        return np.maximum(self.zhi - self.zlo + 1, 0)


def _floor_div(a, b):
    return a // b


def _ceil_div(a, b):
    return -((-a) // b)


def _dtype_for(bound: int):
    return np.int64 if bound < 2**62 else object


def _group(keys: np.ndarray, vals: np.ndarray, tight: np.ndarray, upper: bool):
    """Per key: the tightest bound and whether it is attained exactly."""
    order = np.lexsort((vals if upper else -vals, keys)) if vals.dtype != object else \
        np.array(sorted(range(len(keys)), key=lambda i: (keys[i], vals[i] if upper else -vals[i])), dtype=np.int64)
    k = keys[order]
    v = vals[order]
    t = tight[order]
    start = np.flatnonzero(np.concatenate(([True], k[1:] != k[:-1])))
    best = v[start]
    # tie flags: OR over all entries equal to the best value within the group
    grp = np.repeat(np.arange(len(start)), np.diff(np.concatenate((start, [len(k)]))))
    hit = (v == best[grp]) & t
    tflag = np.zeros(len(start), dtype=bool)
    np.logical_or.at(tflag, grp[hit], True)
    return k[start], best, tflag


def column_ranges(P: LatticePolytope, capacity: int = DEFAULT_COLUMN_CAPACITY) -> Columns:
    """Integer z-ranges of ``P`` over every lattice column of its projection."""
    if P.dim < 3:
        raise GeometryError("column ranges need a full-dimensional polytope")
    lo, hi = P.bounding_box
    x0, x1 = math.ceil(lo[0]), math.floor(hi[0])
    y0, y1 = math.ceil(lo[1]), math.floor(hi[1])
    ncols = max(0, x1 - x0 + 1) * max(0, y1 - y0 + 1)
    if ncols > capacity:
        raise CapacityExceeded(f"{ncols} candidate columns exceed the capacity {capacity}")
    S = P.scale
    sv = P.scaled_vertices
    H = y1 - y0 + 1
    coord = max(1, max(abs(c) for v in sv for c in v))
    nmax = max(1, max(abs(c) for f in P.facets for c in f.halfspace.normal))
    dt = _dtype_for(8 * coord * coord * nmax * S + 8 * nmax * S * coord)

    ex = {k: [] for k in ("f", "X1", "Y1", "X2", "Y2")}
    vert_cols = []
    for fi, f in enumerate(P.facets):
        n = f.halfspace.normal
        idx = f.vertices
        if n[2] == 0:
            vert_cols.append(_vertical_columns(P, fi))
            continue
        for a, b in zip(idx, idx[1:] + idx[:1]):
            ex["f"].append(fi)
            ex["X1"].append(sv[a][0]); ex["Y1"].append(sv[a][1])
            ex["X2"].append(sv[b][0]); ex["Y2"].append(sv[b][1])
    f_ = np.array(ex["f"], dtype=np.int64)
    X1, Y1, X2, Y2 = (np.array(ex[k], dtype=dt) for k in ("X1", "Y1", "X2", "Y2"))
    swap = X1 > X2
    X1, X2 = np.where(swap, X2, X1), np.where(swap, X1, X2)
    Y1, Y2 = np.where(swap, Y2, Y1), np.where(swap, Y1, Y2)

    # slanted projected edges: every integer x they span
    sl = X1 != X2
    xa = _ceil_div(X1[sl], S)
    xb = _floor_div(X2[sl], S)
    cnt = np.maximum(xb - xa + 1, 0).astype(np.int64)
    rep = np.repeat(np.arange(int(sl.sum())), cnt)
    off = np.arange(int(cnt.sum())) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    xs = xa[rep] + off
    dX = (X2 - X1)[sl][rep]
    num = Y1[sl][rep] * dX + (Y2 - Y1)[sl][rep] * (S * xs - X1[sl][rep])
    den = S * dX
    e_f = f_[sl][rep]
    e_x = xs
    e_lo = _ceil_div(num, den)
    e_hi = _floor_div(num, den)
    # projected edges parallel to the y axis at an integer x
    vv = (~sl) & (X1 % S == 0)
    if vv.any():
        ylo_v = np.minimum(Y1[vv], Y2[vv])
        yhi_v = np.maximum(Y1[vv], Y2[vv])
        e_f = np.concatenate((e_f, f_[vv]))
        e_x = np.concatenate((e_x, X1[vv] // S))
        e_lo = np.concatenate((e_lo, _ceil_div(ylo_v, S)))
        e_hi = np.concatenate((e_hi, _floor_div(yhi_v, S)))

    W = x1 - x0 + 1
    rk = e_f.astype(object if dt is object else np.int64) * W + (e_x - x0)
    rk = rk.astype(np.int64)
    order = np.argsort(rk, kind="stable")
    rk, e_lo, e_hi = rk[order], e_lo[order], e_hi[order]
    start = np.flatnonzero(np.concatenate(([True], rk[1:] != rk[:-1]))) if len(rk) else np.array([], dtype=np.int64)
    if len(rk):
        r_lo = np.minimum.reduceat(e_lo, start)
        r_hi = np.maximum.reduceat(e_hi, start)
        r_f = rk[start] // W
        r_x = rk[start] % W + x0
    else:
        r_lo = r_hi = r_f = r_x = np.array([], dtype=np.int64)
    good = r_lo <= r_hi
    r_lo, r_hi, r_f, r_x = r_lo[good], r_hi[good], r_f[good], r_x[good]

    # expand to cells
    cc = (r_hi - r_lo + 1).astype(np.int64)
    rep = np.repeat(np.arange(len(cc)), cc)
    off = np.arange(int(cc.sum())) - np.repeat(np.cumsum(cc) - cc, cc)
    c_f = r_f[rep].astype(np.int64)
    c_x = r_x[rep]
    c_y = r_lo[rep] + off
    N = np.array([f.halfspace.normal for f in P.facets], dtype=dt).reshape(-1, 3)
    Hs = np.array([int(f.halfspace.offset * S) for f in P.facets], dtype=dt)
    numer = Hs[c_f] - S * (N[c_f, 0] * c_x + N[c_f, 1] * c_y)
    nz = S * N[c_f, 2]
    keys = ((c_x - x0) * H + (c_y - y0)).astype(np.int64)
    up = nz > 0
    ku, vu, tu = _group(keys[up], _floor_div(numer[up], nz[up]), (numer[up] % nz[up]) == 0, True)
    dn = ~up
    p_, q_ = -numer[dn], -nz[dn]
    kl, vl, tl = _group(keys[dn], _ceil_div(p_, q_), (p_ % q_) == 0, False)
    common, iu, il = np.intersect1d(ku, kl, assume_unique=True, return_indices=True)
    zhi, zlo = vu[iu], vl[il]
    xs = common // H + x0
    ys = common % H + y0
    vertical = np.zeros(len(common), dtype=bool)
    if vert_cols:
        vk = np.concatenate([(vx - x0) * H + (vy - y0) for vx, vy in vert_cols]).astype(np.int64)
        vertical = np.isin(common, vk)
    return Columns(xs, ys, zlo, zhi, tl[il], tu[iu], vertical)


def _vertical_columns(P: LatticePolytope, fi: int):
    """Lattice columns ``(x, y)`` inside a facet parallel to the z axis."""
    f = P.facets[fi]
    nx, ny, _ = f.halfspace.normal
    h = f.halfspace.offset
    pts = [P.vertices[i] for i in f.vertices]
    if h.denominator != 1:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    h = int(h)
    if ny != 0:
        xa = math.ceil(min(p[0] for p in pts))
        xb = math.floor(max(p[0] for p in pts))
        xs = np.arange(xa, xb + 1, dtype=np.int64)
        r = h - nx * xs
        ok = r % ny == 0
        return xs[ok], r[ok] // ny
    ya = math.ceil(min(p[1] for p in pts))
    yb = math.floor(max(p[1] for p in pts))
    ys = np.arange(ya, yb + 1, dtype=np.int64)
    if h % nx:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    return np.full(len(ys), h // nx, dtype=np.int64), ys


# ---------------------------------------------------------------- face counts


def facet_interior_count(P: LatticePolytope, fi: int) -> int:
    """Lattice points in the relative interior of a lattice facet (Pick's theorem in its plane)."""
    f = P.facets[fi]
    n = f.halfspace.normal
    pts = [P.vertices[i] for i in f.vertices]
    s = (0, 0, 0)
    boundary = 0
    for a, b in zip(pts, pts[1:] + pts[:1]):
        c = cross(a, b)
        s = (s[0] + c[0], s[1] + c[1], s[2] + c[2])
        boundary += math.gcd(math.gcd(int(abs(b[0] - a[0])), int(abs(b[1] - a[1]))), int(abs(b[2] - a[2])))
    twice_area = Fraction(dot(s, n)) / dot(n, n)  # 2I + B - 2 in lattice-plane units
    inner = (twice_area - boundary + 2) / 2
    if inner.denominator != 1 or inner < 0:
        raise GeometryError(f"facet {fi} is not a lattice polygon")
    return int(inner)


def edge_interior_count(P: LatticePolytope, ei: int) -> int:
    a, b = (P.vertices[i] for i in P.edges[ei].vertices)
    return math.gcd(math.gcd(int(abs(b[0] - a[0])), int(abs(b[1] - a[1]))), int(abs(b[2] - a[2]))) - 1


@dataclass(frozen=True)
class PointCounts:
    total: int
    interior: int
    facet: tuple[int, ...]
    edge: tuple[int, ...]
    vertex: int

    @property
    def boundary(self) -> int:
        return self.total - self.interior


def count_lattice_points(P: LatticePolytope, capacity: int = DEFAULT_COLUMN_CAPACITY) -> PointCounts:
    """Lattice points of a lattice polytope, split by the face carrying them."""
    if not P.is_lattice:
        raise GeometryError("point counting by faces needs a lattice polytope")
    cols = column_ranges(P, capacity)
    length = cols.length
    total = int(length.sum())
    live = length > 0
    single = cols.zhi == cols.zlo
    ends = cols.tight_hi.astype(np.int64) + cols.tight_lo.astype(np.int64) - (cols.tight_hi & cols.tight_lo & single)
    bd = np.where(cols.vertical, length, ends * live)
    boundary = int(bd.sum())
    fint = tuple(facet_interior_count(P, i) for i in range(len(P.facets)))
    eint = tuple(edge_interior_count(P, i) for i in range(len(P.edges)))
    V = len(P.vertices)
    if boundary != sum(fint) + sum(eint) + V:
        raise GeometryError(f"boundary count mismatch: columns {boundary}, faces {sum(fint) + sum(eint) + V}")
    return PointCounts(total, total - boundary, fint, eint, V)


# ---------------------------------------------------------------- solid angles


def _face_angles(P: LatticePolytope, prec=None):
    edge_cls = [dihedral_angle(P, e) for e in P.edges]
    edge_sa = [AngleSum.angle(c, Fraction(1, 2)) for c in edge_cls]
    vert_sa = []
    for vi, es in enumerate(P.vertex_edges):
        m = len(es)
        coeffs: dict = {}
        for ei in es:
            coeffs[edge_cls[ei]] = coeffs.get(edge_cls[ei], 0) + Fraction(1, 4)
        vert_sa.append(AngleSum.build(Fraction(-(m - 2), 4), coeffs))
    return edge_cls, edge_sa, vert_sa


def solid_angle(P: LatticePolytope, x, prec: int | None = None) -> SolidAngle:
    """Normalised solid angle of ``P`` at ``x`` (1 inside, 1/2 on a facet, dihedral/2pi on an edge)."""
    loc = classify_point(P, x)
    if loc.kind is PointClass.OUTSIDE:
        raise GeometryError(f"point {tuple(x)} is outside the polytope")
    return SolidAngle.of(_location_angle(P, loc), prec)


def _location_angle(P, loc: Location) -> AngleSum:
    if loc.kind is PointClass.INTERIOR:
        return AngleSum.build(1)
    if loc.kind is PointClass.FACET:
        return AngleSum.build(Fraction(1, 2))
    if loc.kind is PointClass.EDGE:
        return AngleSum.angle(dihedral_angle(P, loc.index), Fraction(1, 2))
    es = P.vertex_edges[loc.index]
    coeffs: dict = {}
    for ei in es:
        c = dihedral_angle(P, ei)
        coeffs[c] = coeffs.get(c, 0) + Fraction(1, 4)
    return AngleSum.build(Fraction(-(len(es) - 2), 4), coeffs)


def enumerate_lattice_points(P: LatticePolytope, capacity: int = DEFAULT_COLUMN_CAPACITY,
                             prec: int | None = None) -> list[LatticePointRecord]:
    """Every lattice point of ``P`` with its location and solid angle, in lexicographic order."""
    if P.dim < 3:
        raise GeometryError("enumeration needs a full-dimensional polytope")
    cols = column_ranges(P, capacity)
    length = cols.length
    keep = length > 0
    xs, ys, zlo, zhi = cols.x[keep], cols.y[keep], cols.zlo[keep], cols.zhi[keep]
    vert, tl, th, L = cols.vertical[keep], cols.tight_lo[keep], cols.tight_hi[keep], length[keep]
    rep = np.repeat(np.arange(len(L)), L)
    z = zlo[rep] + (np.arange(int(L.sum())) - np.repeat(np.cumsum(L) - L, L))
    x, y = xs[rep], ys[rep]
    cand = vert[rep] | ((z == zlo[rep]) & tl[rep]) | ((z == zhi[rep]) & th[rep])
    ci = np.flatnonzero(cand)
    F = len(P.facets)
    if len(ci) * F > ENUMERATION_WORK_LIMIT:
        raise CapacityExceeded(f"{len(ci)} boundary candidates x {F} facets exceed the enumeration limit")
    S = P.scale
    N = np.array([f.halfspace.normal for f in P.facets], dtype=object if S > 2**20 else np.int64)
    Hs = np.array([int(f.halfspace.offset * S) for f in P.facets], dtype=N.dtype)
    tight_sets: dict[int, tuple[int, ...]] = {}
    for s in range(0, len(ci), 4096):
        blk = ci[s:s + 4096]
        pts = np.stack((x[blk], y[blk], z[blk]), axis=1).astype(N.dtype)
        slack = Hs[None, :] - S * (pts @ N.T)
        for row, i in zip(slack == 0, blk):
            t = tuple(np.flatnonzero(row).tolist())
            if t:
                tight_sets[int(i)] = t

    _, edge_sa, vert_sa = _face_angles(P, prec)
    interior = SolidAngle.of(AngleSum.build(1), prec)
    half = SolidAngle.of(AngleSum.build(Fraction(1, 2)), prec)
    edge_angles = [SolidAngle.of(a, prec) for a in edge_sa]
    vert_angles = [SolidAngle.of(a, prec) for a in vert_sa]
    inside = Location(PointClass.INTERIOR)
    out = []
    for i, (px, py, pz) in enumerate(zip(x.tolist(), y.tolist(), z.tolist())):
        t = tight_sets.get(i)
        p = (px, py, pz)
        if t is None:
            out.append(LatticePointRecord(p, inside, interior))
        elif len(t) == 1:
            out.append(LatticePointRecord(p, Location(PointClass.FACET, t[0]), half))
        elif len(t) == 2:
            ei = P.edge_lookup[t]
            out.append(LatticePointRecord(p, Location(PointClass.EDGE, ei), edge_angles[ei]))
        else:
            vi = P.vertex_index[vec3(p)]
            out.append(LatticePointRecord(p, Location(PointClass.VERTEX, vi), vert_angles[vi]))
    return out


# ---------------------------------------------------------------- chi and delta


def discrete_volume_exact(P: LatticePolytope, method: str = "auto",
                          capacity: int = DEFAULT_COLUMN_CAPACITY) -> AngleSum:
    """``chi(P)`` as an exact rational-plus-angles expression.

    ``method="count"`` uses per-face point counts (lattice polytopes only);
    ``method="enumerate"`` sums the solid angles of enumerated points.
    """
    if P.dim < 3:
        return AngleSum.build(0)
    if method == "auto":
        method = "count" if P.is_lattice else "enumerate"
    if method == "count":
        counts = count_lattice_points(P, capacity)
        rational = Fraction(counts.interior) + Fraction(sum(counts.facet), 2)
        rational -= Fraction(len(P.edges) - len(P.vertices), 2)
        coeffs: dict = {}
        for ei, g in enumerate(counts.edge):
            c = dihedral_angle(P, ei)
            coeffs[c] = coeffs.get(c, 0) + Fraction(g + 1, 2)
        return AngleSum.build(rational, coeffs)
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    recs = enumerate_lattice_points(P, capacity)
    rational = Fraction(0)
    coeffs = {}
    tally: dict = {}
    for r in recs:
        tally[id(r.angle)] = (r.angle, tally.get(id(r.angle), (None, 0))[1] + 1)
    for a, k in tally.values():
        rational += a.exact.rational * k
        for c, q in a.exact.coeffs:
            coeffs[c] = coeffs.get(c, 0) + q * k
    return AngleSum.build(rational, coeffs)


def discrete_volume(P: LatticePolytope, prec: int | None = None, method: str = "auto",
                    capacity: int = DEFAULT_COLUMN_CAPACITY):
    """``chi(P)``: the sum of solid angles over all lattice points."""
    return discrete_volume_exact(P, method, capacity).value(prec)


def defect_exact(P: LatticePolytope, method: str = "auto", capacity: int = DEFAULT_COLUMN_CAPACITY) -> AngleSum:
    return discrete_volume_exact(P, method, capacity) - P.volume


def volume_defect(P: LatticePolytope, prec: int | None = None, method: str = "auto",
                  capacity: int = DEFAULT_COLUMN_CAPACITY):
    """``delta(P) = chi(P) - vol(P)``."""
    return defect_exact(P, method, capacity).value(prec)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def invariants_report(P: LatticePolytope, prec: int | None = None, tolerance=None,
                      capacity: int = DEFAULT_COLUMN_CAPACITY) -> dict:
    ctx = mp(prec)
    tol = ctx.mpf("1e-30") if tolerance is None else ctx.mpf(tolerance)
    if P.dim < 3:
        npts = 0
    elif P.is_lattice:
        npts = count_lattice_points(P, capacity).total
    else:
        npts = len(enumerate_lattice_points(P, capacity, ctx.prec))
    chi = discrete_volume_exact(P, capacity=capacity)
    delta = chi - P.volume
    dval = delta.value(ctx.prec)
    report = {
        "polytope": P.name or "",
        "num_lattice_points": npts,
        "chi": format_decimal(chi.value(ctx.prec), ctx.prec),
        "vol": _fmt_rat(P.volume),
        "defect": format_decimal(dval, ctx.prec),
        "concrete": bool(abs(dval) < tol),
        "chi_closed_form": str(_short_form(chi, ctx.prec)),
        "defect_closed_form": str(_short_form(delta, ctx.prec)),
    }
    if not P.is_lattice:
        report["non_lattice"] = True
    return report


def _short_form(s: AngleSum, prec) -> AngleSum:
    try:
        return s.reduced(prec)
    except ArithmeticError:
        return s
