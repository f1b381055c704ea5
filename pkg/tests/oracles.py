"""Independent reference computations used to check the production code.

Nothing here reuses the column scanner, the face-count formula or the
spherical-excess solid angle; each oracle takes a different, slower route.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np

from lattice_dehn.geometry import LatticePolytope, PointClass, classify_point, cross, det3, dot, sub


def brute_force_points(P: LatticePolytope):
    """Every lattice point of the bounding box, located with ``classify_point``."""
    lo, hi = P.bounding_box
    out = {}
    for x in range(math.ceil(lo[0]), math.floor(hi[0]) + 1):
        for y in range(math.ceil(lo[1]), math.floor(hi[1]) + 1):
            for z in range(math.ceil(lo[2]), math.floor(hi[2]) + 1):
                loc = classify_point(P, (x, y, z))
                if loc.kind is not PointClass.OUTSIDE:
                    out[(x, y, z)] = loc
    return out


def fan_contains(P: LatticePolytope, x) -> bool:
    """``x`` is in ``P`` iff the tetrahedra from ``x`` to every facet triangle have total volume vol(P)."""
    x = tuple(Fraction(c) for c in x)
    total = Fraction(0)
    for f in P.facets:
        idx = f.vertices
        a = sub(P.vertices[idx[0]], x)
        for i in range(1, len(idx) - 1):
            b = sub(P.vertices[idx[i]], x)
            c = sub(P.vertices[idx[i + 1]], x)
            total += abs(det3(a, b, c))
    return total / 6 == P.volume


def brute_hull_normals(points):
    """Primitive outward normals of all supporting planes through three or more of ``points``."""
    pts = [tuple(Fraction(c) for c in p) for p in set(map(tuple, points))]
    found = set()
    for a, b, c in itertools.combinations(pts, 3):
        n = cross(sub(b, a), sub(c, a))
        if n == (0, 0, 0):
            continue
        s = [dot(n, sub(p, a)) for p in pts]
        if all(v <= 0 for v in s):
            sign = 1
        elif all(v >= 0 for v in s):
            sign = -1
        else:
            continue
        den = math.lcm(*(v.denominator for v in n))
        iv = [int(v * den) * sign for v in n]
        g = math.gcd(math.gcd(abs(iv[0]), abs(iv[1])), abs(iv[2]))
        found.add(tuple(v // g for v in iv))
    return found


def _cone_rays(P: LatticePolytope, vi: int) -> list:
    v = P.vertices[vi]
    rays = []
    for ei in P.vertex_edges[vi]:
        a, b = P.edges[ei].vertices
        w = P.vertices[b if a == vi else a]
        rays.append(sub(w, v))
    return rays


def arctan_vertex_angle(P: LatticePolytope, vi: int, prec: int = 256):
    """Solid angle at a vertex as a sum over simplicial cones (Van Oosterom-Strackee formula)."""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    rays = [[ctx.mpf(c.numerator) / c.denominator for c in r] for r in _cone_rays(P, vi)]
    units = [[c / ctx.sqrt(sum(t * t for t in r)) for c in r] for r in rays]
    axis = [sum(u[k] for u in units) for k in range(3)]
    # sort rays by angle around the axis
    ref = units[0]
    e1 = [ref[k] - axis[k] * sum(ref[j] * axis[j] for j in range(3)) / sum(a * a for a in axis) for k in range(3)]
    e2 = [axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2], axis[0] * e1[1] - axis[1] * e1[0]]
    order = sorted(range(len(units)), key=lambda i: ctx.atan2(sum(units[i][k] * e2[k] for k in range(3)),
                                                              sum(units[i][k] * e1[k] for k in range(3))))
    u = [units[i] for i in order]

    def dotm(a, b):
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]

    def crossm(a, b):
        return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]

    total = ctx.mpf(0)
    a = u[0]
    for b, c in zip(u[1:], u[2:]):
        num = abs(dotm(a, crossm(b, c)))
        den = 1 + dotm(a, b) + dotm(a, c) + dotm(b, c)
        total += 2 * ctx.atan2(num, den)
    return total / (4 * ctx.pi)


def mc_epsilon(P: LatticePolytope) -> Fraction:
    """Ball radius that only meets the facets through the centre for every lattice point of ``P``.

    A lattice point has integer slack on each facet it is off, so its distance to
    that plane is at least ``1/|n|``; half of the smallest such bound keeps the
    ball clear of all other facets.
    """
    nmax = max(math.sqrt(dot(f.halfspace.normal, f.halfspace.normal)) for f in P.facets)
    return min(Fraction(1, 8), Fraction(1, 2 * math.ceil(nmax)))


def mc_solid_angle(P: LatticePolytope, x, samples: int, rng: np.random.Generator, bits: int = 24):
    """Monte-Carlo fraction of the ball ``B(x, eps)`` inside ``P``, with exact integer containment.

    Ball points are ``x + u / 2**bits`` with integer ``u``; returns (estimate, standard error).
    """
    eps = mc_epsilon(P)
    R = int(eps * (1 << bits))
    N = np.array([f.halfspace.normal for f in P.facets], dtype=np.int64)
    H = np.array([int(f.halfspace.offset) for f in P.facets], dtype=object)
    xs = np.array(x, dtype=np.int64)
    base = (H - N @ xs).astype(object) * (1 << bits)  # scaled slack of the centre
    hits = 0
    got = 0
    while got < samples:
        U = rng.integers(-R, R + 1, size=(2 * samples, 3), dtype=np.int64)
        inball = (U * U).sum(axis=1) <= R * R
        U = U[inball][: samples - got]
        got += len(U)
        inside = ((base[None, :] - (U @ N.T).astype(object)) >= 0).all(axis=1)
        hits += int(inside.sum())
    p = hits / samples
    return p, math.sqrt(max(p * (1 - p), 1e-300) / samples)
