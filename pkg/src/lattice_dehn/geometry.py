"""Exact convex polytopes in R^3.

Coordinates are :class:`fractions.Fraction`; every combinatorial decision
(visibility, coplanarity, tightness) is made in exact integer arithmetic after
clearing denominators.  Facet normals are primitive integer vectors, so two
facets are coplanar exactly when their normals and offsets agree.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

Rat = Fraction
Vec3 = tuple[Fraction, Fraction, Fraction]
IVec = tuple[int, int, int]


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    """All input points are coplanar (or worse)."""


class NegativeFactor(GeometryError):
    pass


class DegenerateGenerators(GeometryError):
    pass


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def as_rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently import rounding error into an
    exact pipeline.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise GeometryError(f"not a rational literal: {value!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise GeometryError(f"zero denominator in {value!r}")
        return Fraction(int(m.group(1)), den)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coordinate")


def vec3(p) -> Vec3:
    if len(p) != 3:
        raise GeometryError(f"expected 3 coordinates, got {len(p)}")
    return (as_rat(p[0]), as_rat(p[1]), as_rat(p[2]))


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def det3(a, b, c):
    return dot(a, cross(b, c))


def primitive(v: Sequence[int]) -> IVec:
    g = math.gcd(math.gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    if g == 0:
        raise GeometryError("zero vector has no primitive form")
    return (v[0] // g, v[1] // g, v[2] // g)


def sign_normalized(v: IVec) -> IVec:
    """Primitive representative of the line through ``v`` (first nonzero > 0)."""
    v = primitive(v)
    for c in v:
        if c:
            return v if c > 0 else (-v[0], -v[1], -v[2])
    raise GeometryError("zero vector")


def _denominator(points: Iterable[Vec3]) -> int:
    return reduce(math.lcm, (c.denominator for p in points for c in p), 1)


def _integerize(points: Sequence[Vec3], scale: int) -> list[IVec]:
    return [tuple(int(c * scale) for c in p) for p in points]


def int_array(rows) -> np.ndarray:
    """int64 array when safely small, else an object array of Python ints."""
    arr = np.array(rows, dtype=object)
    if arr.size == 0:
        return np.zeros((0, 3), dtype=np.int64)
    if max(abs(int(x)) for x in arr.flat) < 2**40:
        return arr.astype(np.int64)
    return arr


def _products_fit_int64(a: np.ndarray, b: np.ndarray) -> bool:
    if a.dtype == object or b.dtype == object or a.size == 0 or b.size == 0:
        return False
    return int(np.abs(a).max()) * int(np.abs(b).max()) * 4 < 2**62


class PointClass(enum.Enum):
    OUTSIDE = "outside"
    INTERIOR = "interior"
    FACET = "facet"
    EDGE = "edge"
    VERTEX = "vertex"


@dataclass(frozen=True)
class Location:
    kind: PointClass
    index: int | None = None


@dataclass(frozen=True)
class HalfSpace:
    """``normal . x <= offset`` with a primitive integer normal."""

    normal: IVec
    offset: Fraction

    def __post_init__(self):
        n = self.normal
        if n == (0, 0, 0):
            raise GeometryError("half-space normal must be nonzero")
        if math.gcd(math.gcd(abs(n[0]), abs(n[1])), abs(n[2])) != 1:
            raise GeometryError(f"normal {n} is not primitive")

    def slack(self, x) -> Fraction:
        return self.offset - dot(self.normal, x)


@dataclass(frozen=True)
class Facet:
    halfspace: HalfSpace
    vertices: tuple[int, ...]  # counter-clockwise seen from outside


@dataclass(frozen=True)
class Edge:
    vertices: tuple[int, int]
    facets: tuple[int, int]


class LatticePolytope:
    """Convex polytope with exact V- and H-representations.

    Full-dimensional polytopes carry facets and edges.  Lower-dimensional
    ("flat") ones are allowed so they can appear as Minkowski summands and as
    intersections in valuation checks; they have ``dim < 3`` and no facets.
    """

    def __init__(
        self,
        vertices: Sequence[Vec3],
        facets: Sequence[Facet] = (),
        edges: Sequence[Edge] = (),
        *,
        dim: int = 3,
        name: str | None = None,
        cycle: Sequence[int] = (),
        plane_normal: IVec | None = None,
    ):
        self.vertices: tuple[Vec3, ...] = tuple(vertices)
        self.facets: tuple[Facet, ...] = tuple(facets)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.dim = dim
        self.name = name
        self.cycle = tuple(cycle)
        self.plane_normal = plane_normal

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return (
            f"LatticePolytope({label}dim={self.dim}, V={len(self.vertices)}, "
            f"E={len(self.edges)}, F={len(self.facets)})"
        )

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.vertices == other.vertices
            and [f.halfspace for f in self.facets] == [f.halfspace for f in other.facets]
        )

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.dim, self.vertices))

    def renamed(self, name: str | None) -> "LatticePolytope":
        return LatticePolytope(
            self.vertices, self.facets, self.edges, dim=self.dim, name=name,
            cycle=self.cycle, plane_normal=self.plane_normal,
        )

    @property
    def is_degenerate(self) -> bool:
        return self.dim < 3

    @cached_property
    def is_lattice(self) -> bool:
        return all(c.denominator == 1 for p in self.vertices for c in p)

    @cached_property
    def scale(self) -> int:
        """Least common denominator of all vertex coordinates."""
        return _denominator(self.vertices)

    @cached_property
    def scaled_vertices(self) -> list[IVec]:
        return _integerize(self.vertices, self.scale)

    @cached_property
    def normal_array(self) -> np.ndarray:
        return int_array([f.halfspace.normal for f in self.facets]).reshape(-1, 3)

    @cached_property
    def vertex_index(self) -> dict[Vec3, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def vertex_facets(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for fi, f in enumerate(self.facets):
            for v in f.vertices:
                out[v].append(fi)
        return tuple(tuple(x) for x in out)

    @cached_property
    def vertex_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for ei, e in enumerate(self.edges):
            out[e.vertices[0]].append(ei)
            out[e.vertices[1]].append(ei)
        return tuple(tuple(x) for x in out)

    @cached_property
    def edge_lookup(self) -> dict[tuple[int, int], int]:
        return {tuple(sorted(e.facets)): i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_directions(self) -> tuple[IVec, ...]:
        """Distinct edge directions up to sign, as primitive integer vectors."""
        sv = self.scaled_vertices
        if self.dim == 3:
            pairs = [e.vertices for e in self.edges]
        elif self.dim == 2:
            c = self.cycle
            pairs = list(zip(c, c[1:] + c[:1]))
        elif self.dim == 1:
            pairs = [(0, 1)]
        else:
            pairs = []
        return tuple(sorted({sign_normalized(sub(sv[b], sv[a])) for a, b in pairs}))

    @cached_property
    def fan_normals(self) -> tuple[IVec, ...]:
        """Normals whose faces are 2-dimensional (facets, or both sides of a flat polygon)."""
        if self.dim == 3:
            return tuple(f.halfspace.normal for f in self.facets)
        if self.dim == 2:
            n = self.plane_normal
            return (n, (-n[0], -n[1], -n[2]))
        return ()

    @cached_property
    def volume(self) -> Fraction:
        if self.dim < 3:
            return Fraction(0)
        sv = self.scaled_vertices
        apex = sv[0]
        total = 0
        for f in self.facets:
            idx = f.vertices
            a = sub(sv[idx[0]], apex)
            for i in range(1, len(idx) - 1):
                total += det3(a, sub(sv[idx[i]], apex), sub(sv[idx[i + 1]], apex))
        return Fraction(total, 6 * self.scale**3)

    @cached_property
    def bounding_box(self) -> tuple[Vec3, Vec3]:
        lo = tuple(min(v[k] for v in self.vertices) for k in range(3))
        hi = tuple(max(v[k] for v in self.vertices) for k in range(3))
        return lo, hi

    def contains(self, x) -> bool:
        return classify_point(self, x).kind is not PointClass.OUTSIDE

    def to_json(self) -> dict:
        return polytope_to_json(self)


def _plane_polygon(points: Iterable[IVec], normal: IVec) -> list[IVec] | None:
    """Strictly convex polygon of coplanar integer points, CCW seen from ``normal``.

    Returns ``None`` when the points are collinear.
    """
    k = max(range(3), key=lambda i: abs(normal[i]))
    u, w = (k + 1) % 3, (k + 2) % 3
    pts = sorted(set(points), key=lambda p: (p[u], p[w], p))
    if len(pts) < 3:
        return None

    def turn(o, a, b):
        return (a[u] - o[u]) * (b[w] - o[w]) - (a[w] - o[w]) * (b[u] - o[u])

    lower: list[IVec] = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[IVec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return None
    if normal[k] < 0:
        hull.reverse()
    return hull


def _collinear_extremes(points: Iterable[IVec]) -> list[IVec]:
    pts = sorted(set(points))
    return [pts[0], pts[-1]] if len(pts) > 1 else pts


def _affine_basis(points: Sequence[IVec]) -> list[int]:
    """Indices of an affinely independent subset of maximal size (at most 4)."""
    if not points:
        return []
    basis = [0]
    p0 = points[0]
    d1 = d2 = None
    for i, p in enumerate(points):
        v = sub(p, p0)
        if d1 is None:
            if v != (0, 0, 0):
                d1 = v
                basis.append(i)
        elif d2 is None:
            if cross(d1, v) != (0, 0, 0):
                d2 = v
                basis.append(i)
        elif det3(d1, d2, v) != 0:
            basis.append(i)
            break
    return basis


def _assemble(faces: Iterable[tuple[IVec, int, Iterable[IVec]]], scale: int, name: str | None) -> LatticePolytope:
    """Build a full-dimensional polytope from candidate ``(normal, support, tight points)``.

    Candidates whose tight set is not 2-dimensional are discarded; the rest
    become facets whose vertex cycles are the 2D hulls of their tight points.
    """
    seen: set[IVec] = set()
    kept: list[tuple[IVec, int, list[IVec]]] = []
    for normal, h, pts in faces:
        if normal in seen:
            continue
        seen.add(normal)
        poly = _plane_polygon(pts, normal)
        if poly is not None:
            kept.append((normal, h, poly))
    if len(kept) < 4:
        raise GeometryError("fewer than four facets; input is not full-dimensional")
    kept.sort(key=lambda f: f[0])
    ivertices = sorted({p for _, _, poly in kept for p in poly})
    index = {p: i for i, p in enumerate(ivertices)}
    facets: list[Facet] = []
    edge_facets: dict[tuple[int, int], list[int]] = {}
    for fi, (normal, h, poly) in enumerate(kept):
        idx = [index[p] for p in poly]
        start = idx.index(min(idx))
        idx = idx[start:] + idx[:start]
        for a, b in zip(idx, idx[1:] + idx[:1]):
            edge_facets.setdefault((min(a, b), max(a, b)), []).append(fi)
        facets.append(Facet(HalfSpace(normal, Fraction(h, scale)), tuple(idx)))
    edges = []
    for key in sorted(edge_facets):
        fs = edge_facets[key]
        if len(fs) != 2:
            raise GeometryError(f"edge {key} lies on {len(fs)} facets")
        edges.append(Edge(key, (fs[0], fs[1])))
    if len(ivertices) - len(edges) + len(facets) != 2:
        raise GeometryError("Euler relation violated")
    vertices = [tuple(Fraction(c, scale) for c in p) for p in ivertices]
    return LatticePolytope(vertices, facets, edges, dim=3, name=name)


def _flat_polytope(ipts: Sequence[IVec], scale: int, basis: list[int], name: str | None) -> LatticePolytope:
    dim = len(basis) - 1
    if dim == 2:
        p0, p1, p2 = (ipts[i] for i in basis)
        n = sign_normalized(cross(sub(p1, p0), sub(p2, p0)))
        poly = _plane_polygon(ipts, n)
        verts = sorted(poly)
        index = {p: i for i, p in enumerate(verts)}
        cyc = [index[p] for p in poly]
        s = cyc.index(0)
        cycle = cyc[s:] + cyc[:s]
    elif dim == 1:
        verts = _collinear_extremes(ipts)
        cycle, n = [], None
    else:
        verts = [ipts[0]]
        cycle, n = [], None
    vertices = [tuple(Fraction(c, scale) for c in p) for p in verts]
    return LatticePolytope(vertices, dim=dim, name=name, cycle=cycle, plane_normal=n)


def _hull_normals(pts: Sequence[IVec], simplex: list[int]) -> set[IVec]:
    """Incremental 3D hull with exact orientation tests; returns facet normals."""
    faces: dict[int, tuple[int, int, int, IVec, int]] = {}
    counter = 0

    def make(a, b, c):
        n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]))
        return (a, b, c, n, dot(n, pts[a]))

    s = simplex
    for tri, other in (((s[0], s[1], s[2]), s[3]), ((s[0], s[1], s[3]), s[2]),
                       ((s[0], s[2], s[3]), s[1]), ((s[1], s[2], s[3]), s[0])):
        f = make(*tri)
        if dot(f[3], pts[other]) > f[4]:
            f = make(tri[0], tri[2], tri[1])
        faces[counter] = f
        counter += 1

    in_simplex = set(simplex)
    for i, p in enumerate(pts):
        if i in in_simplex:
            continue
        visible = [k for k, f in faces.items() if dot(f[3], p) > f[4]]
        if not visible:
            continue
        directed = set()
        for k in visible:
            a, b, c = faces[k][:3]
            directed.update(((a, b), (b, c), (c, a)))
        for k in visible:
            del faces[k]
        for a, b in directed:
            if (b, a) not in directed:
                faces[counter] = make(a, b, i)
                counter += 1
    return {primitive(f[3]) for f in faces.values()}


def _support_batch(A: np.ndarray, normals: np.ndarray, chunk: int = 512):
    """For each normal: (max value, indices of maximizing rows of A)."""
    out = []
    fast = _products_fit_int64(A, normals)
    At = A.T if fast else A.astype(object).T
    for s in range(0, len(normals), chunk):
        C = normals[s:s + chunk]
        vals = C @ At if fast else C.astype(object) @ At
        hs = vals.max(axis=1)
        for row, h in zip(vals, hs):
            out.append((int(h), np.flatnonzero(row == h)))
    return out


def convex_hull(points, name: str | None = None, allow_degenerate: bool = True) -> LatticePolytope:
    """Convex hull of rational points.

    Coplanar or collinear input yields a flat polytope (``dim < 3``) unless
    ``allow_degenerate`` is false, in which case :class:`DegenerateInput` is
    raised.
    """
    pts = sorted({vec3(p) for p in points})
    if not pts:
        raise GeometryError("convex hull of no points")
    scale = _denominator(pts)
    ipts = _integerize(pts, scale)
    basis = _affine_basis(ipts)
    if len(basis) < 4:
        if not allow_degenerate:
            raise DegenerateInput(f"points span only {len(basis) - 1} dimensions")
        return _flat_polytope(ipts, scale, basis, name)
    normals = sorted(_hull_normals(ipts, basis))
    arr = int_array(ipts)
    sup = _support_batch(arr, int_array(normals))
    faces = ((n, h, [ipts[j] for j in idx]) for n, (h, idx) in zip(normals, sup))
    return _assemble(faces, scale, name)


def _common_scaled(polys: Sequence[LatticePolytope]):
    scale = reduce(math.lcm, (P.scale for P in polys), 1)
    return scale, [_integerize(P.vertices, scale) for P in polys]


def minkowski_sum(*polys: LatticePolytope, name: str | None = None) -> LatticePolytope:
    """Minkowski sum, assembled from the common refinement of normal fans.

    Facet normals of ``P + Q`` are facet normals of a summand or cross
    products of a pair of summand edge directions, so only those candidates
    are tested; the pairwise vertex-sum cloud is never formed for
    full-dimensional results.
    """
    if not polys:
        raise GeometryError("empty Minkowski sum")
    result = polys[0]
    for Q in polys[1:]:
        result = _minkowski_pair(result, Q)
    return result.renamed(name) if name is not None else result


def _minkowski_pair(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    scale, (A, B) = _common_scaled([P, Q])
    dirs = [sub(a, A[0]) for a in A] + [sub(b, B[0]) for b in B]
    if len(_affine_basis([(0, 0, 0)] + dirs)) < 4:
        sums = {add(a, b) for a in A for b in B}
        pts = [tuple(Fraction(c, scale) for c in p) for p in sums]
        return convex_hull(pts)
    cands: set[IVec] = set(P.fan_normals) | set(Q.fan_normals)
    for d in P.edge_directions:
        for e in Q.edge_directions:
            c = cross(d, e)
            if c != (0, 0, 0):
                c = primitive(c)
                cands.add(c)
                cands.add((-c[0], -c[1], -c[2]))
    normals = sorted(cands)
    narr = int_array(normals)
    sa = _support_batch(int_array(A), narr)
    sb = _support_batch(int_array(B), narr)

    def faces():
        for n, (ha, ia), (hb, ib) in zip(normals, sa, sb):
            if len(ia) * len(ib) < 3:
                continue
            yield n, ha + hb, [add(A[i], B[j]) for i in ia for j in ib]

    return _assemble(faces(), scale, None)


def dilate(P: LatticePolytope, t) -> LatticePolytope:
    """``t * P``; lattice output is guaranteed only for integer ``t``."""
    t = as_rat(t)
    if t < 0:
        raise NegativeFactor(f"dilation factor must be non-negative, got {t}")
    if t == 0:
        return LatticePolytope([(Fraction(0),) * 3], dim=0, name=P.name)
    vertices = [tuple(c * t for c in v) for v in P.vertices]
    facets = [Facet(HalfSpace(f.halfspace.normal, f.halfspace.offset * t), f.vertices) for f in P.facets]
    return LatticePolytope(vertices, facets, P.edges, dim=P.dim, name=P.name,
                           cycle=P.cycle, plane_normal=P.plane_normal)


def translate(P: LatticePolytope, x) -> LatticePolytope:
    x = vec3(x)
    vertices = [add(v, x) for v in P.vertices]
    facets = [Facet(HalfSpace(f.halfspace.normal, f.halfspace.offset + dot(f.halfspace.normal, x)), f.vertices)
              for f in P.facets]
    return LatticePolytope(vertices, facets, P.edges, dim=P.dim, name=P.name,
                           cycle=P.cycle, plane_normal=P.plane_normal)


def volume(P: LatticePolytope) -> Fraction:
    return P.volume


def _rank(vectors: Sequence[IVec]) -> int:
    vs = [v for v in vectors if v != (0, 0, 0)]
    if not vs:
        return 0
    for a in vs:
        for b in vs:
            c = cross(a, b)
            if c != (0, 0, 0):
                if any(dot(c, w) != 0 for w in vs):
                    return 3
                return 2
    return 1


def classify_point(P: LatticePolytope, x) -> Location:
    """Locate ``x`` relative to a full-dimensional ``P`` by its tight facets."""
    if P.dim < 3:
        raise GeometryError("point classification needs a full-dimensional polytope")
    x = vec3(x)
    tight = []
    for i, f in enumerate(P.facets):
        s = f.halfspace.slack(x)
        if s < 0:
            return Location(PointClass.OUTSIDE)
        if s == 0:
            tight.append(i)
    if not tight:
        return Location(PointClass.INTERIOR)
    if len(tight) == 1:
        return Location(PointClass.FACET, tight[0])
    r = _rank([P.facets[i].halfspace.normal for i in tight])
    if r == 2:
        return Location(PointClass.EDGE, P.edge_lookup[(tight[0], tight[1])])
    return Location(PointClass.VERTEX, P.vertex_index[x])


def zonotope(generators, name: str | None = None) -> LatticePolytope:
    """Minkowski sum of the segments ``[0, g]`` over integer generators ``g``."""
    gens = [tuple(int(as_rat(c)) if as_rat(c).denominator == 1 else _bad_gen(c) for c in g) for g in generators]
    gens = [g for g in gens if g != (0, 0, 0)]
    if _rank(gens) < 3:
        raise DegenerateGenerators("zonotope generators must span R^3")
    G = int_array(gens)
    planes: set[IVec] = set()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = cross(gens[i], gens[j])
            if c != (0, 0, 0):
                planes.add(sign_normalized(c))
    normals = sorted(planes | {(-n[0], -n[1], -n[2]) for n in planes})
    narr = int_array(normals)
    V = (narr.astype(object) @ G.astype(object).T) if not _products_fit_int64(G, narr) else narr @ G.T

    def faces():
        for n, row in zip(normals, V):
            base = (0, 0, 0)
            h = 0
            inplane = []
            for g, v in zip(gens, row):
                if v > 0:
                    base = add(base, g)
                    h += int(v)
                elif v == 0:
                    inplane.append(g)
            pts = [base]
            for g in inplane:
                grown = pts + [add(p, g) for p in pts]
                poly = _plane_polygon(grown, n)
                pts = poly if poly is not None else _collinear_extremes(grown)
            yield n, h, pts

    return _assemble(faces(), 1, name)


def _bad_gen(c):
    raise GeometryError(f"zonotope generators must be integer vectors, got {c!r}")


def cut(P: LatticePolytope, normal, offset) -> tuple[LatticePolytope, LatticePolytope, LatticePolytope]:
    """Split ``P`` by the plane ``normal . x = offset``.

    Returns ``(P ∩ {<=}, P ∩ {>=}, P ∩ plane)``; the last piece is flat.
    """
    normal = tuple(as_rat(c) for c in normal)
    offset = as_rat(offset)
    below, above, on = [], [], []
    vals = [dot(normal, v) - offset for v in P.vertices]
    for v, s in zip(P.vertices, vals):
        (below if s < 0 else above if s > 0 else on).append(v)
    for e in P.edges:
        a, b = e.vertices
        sa, sb = vals[a], vals[b]
        if sa * sb < 0:
            t = sa / (sa - sb)
            va, vb = P.vertices[a], P.vertices[b]
            on.append(tuple(va[k] + t * (vb[k] - va[k]) for k in range(3)))
    if not below or not above:
        raise GeometryError("plane does not cut the polytope")
    return convex_hull(below + on), convex_hull(above + on), convex_hull(on)


def check_polytope(P: LatticePolytope) -> None:
    """Verify the H/V combinatorial invariants; raises :class:`GeometryError`."""
    if P.dim < 3:
        return
    for vi, v in enumerate(P.vertices):
        tight = []
        for fi, f in enumerate(P.facets):
            s = f.halfspace.slack(v)
            if s < 0:
                raise GeometryError(f"vertex {vi} violates facet {fi}")
            if s == 0:
                tight.append(fi)
        if tuple(sorted(tight)) != tuple(sorted(P.vertex_facets[vi])):
            raise GeometryError(f"vertex {vi} incidence mismatch")
        if len(tight) < 3 or _rank([P.facets[i].halfspace.normal for i in tight]) < 3:
            raise GeometryError(f"vertex {vi} is not a proper vertex")
    for e in P.edges:
        if len(set(e.facets)) != 2:
            raise GeometryError("edge without two distinct facets")
    if len(P.vertices) - len(P.edges) + len(P.facets) != 2:
        raise GeometryError("Euler relation violated")
    if P.volume <= 0:
        raise GeometryError("non-positive volume")


def _fmt_rat(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def polytope_to_json(P: LatticePolytope) -> dict:
    return {"name": P.name or "", "vertices": [[_fmt_rat(c) for c in v] for v in P.vertices]}


def _reject_float(token):
    raise GeometryError(f"non-exact numeric literal {token!r} in polytope JSON")


def polytope_from_json(data) -> LatticePolytope:
    """Read ``{"name": ..., "vertices": [[int | "p/q", x3], ...]}``."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data, parse_float=_reject_float, parse_constant=_reject_float)
        except json.JSONDecodeError as exc:
            raise GeometryError(f"invalid polytope JSON: {exc}") from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise GeometryError("polytope JSON needs a 'vertices' list")
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
        raise GeometryError("'vertices' must be a list of coordinate triples")
    for v in verts:
        for c in v:
            if isinstance(c, float):
                _reject_float(c)
    try:
        pts = [vec3(v) for v in verts]
    except TypeError as exc:
        raise GeometryError(str(exc)) from None
    return convex_hull(pts, name=data.get("name") or None)
