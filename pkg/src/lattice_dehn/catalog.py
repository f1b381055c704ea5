"""Named polytopes: the three test tetrahedra, their Minkowski combination, wedges, pyramids, zonotopes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import sympy

from .geometry import LatticePolytope, convex_hull, dilate, minkowski_sum
from .geometry import zonotope as _zonotope

T1_VERTICES = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))
T2_VERTICES = ((0, 0, 0), (2, 2, -1), (2, -1, 2), (1, -2, -2))
T3_VERTICES = ((0, 0, 0), (2, 2, -1), (3, 0, -3), (5, -1, -1))
COUNTEREXAMPLE_WEIGHTS = (5, 12, 19)


def t1() -> LatticePolytope:
    """Regular tetrahedron with edge length sqrt 2."""
    return convex_hull(T1_VERTICES, name="T1")


def t2() -> LatticePolytope:
    """Corner tetrahedron with three pairwise orthogonal legs of length 3."""
    return convex_hull(T2_VERTICES, name="T2")


def t3() -> LatticePolytope:
    """Path simplex along v1, v2, v3; six such tiles fill a cube of side 3."""
    return convex_hull(T3_VERTICES, name="T3")


def unit_cube() -> LatticePolytope:
    return convex_hull([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)], name="cube")


def box(a: int, b: int, c: int) -> LatticePolytope:
    return convex_hull([(x, y, z) for x in (0, a) for y in (0, b) for z in (0, c)], name=f"box{a}x{b}x{c}")


def wedge(n: int) -> LatticePolytope:
    if n < 1:
        raise ValueError("wedge(n) needs n >= 1")
    return convex_hull([(0, 0, 0), (1, 1, 0), (1, 0, n), (0, 1, n)], name=f"W{n}")


def pyramid(n: int) -> LatticePolytope:
    """Flat square pyramid of height 1 over an n x n square."""
    if n < 1:
        raise ValueError("pyramid(n) needs n >= 1")
    return convex_hull([(0, 0, 0), (n, 0, 0), (0, n, 0), (n, n, 0), (0, 0, 1)], name=f"V{n}")


def counterexample() -> LatticePolytope:
    """``5*T1 + 12*T2 + 19*T3``: zero volume defect, nonzero Dehn invariant."""
    parts = [dilate(T, k) for T, k in zip((t1(), t2(), t3()), COUNTEREXAMPLE_WEIGHTS)]
    return minkowski_sum(*parts, name="P")


def zonotope(generators, name: str | None = None) -> LatticePolytope:
    return _zonotope(generators, name=name)


def moment_generators(N: int) -> list[tuple[int, int, int]]:
    """``(1, a, a^2 mod p)`` for ``a < N`` and ``p`` the least prime ``>= N``.

    Any three are linearly independent (a Vandermonde determinant that is
    nonzero mod p), so the zonotope they generate is as complicated as possible
    while keeping coordinates below ``p``.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    p = sympy.nextprime(N - 1) if N > 2 else 2
    return [(1, a, (a * a) % p) for a in range(N)]


def big_counterexample(N: int) -> LatticePolytope:
    """The counterexample plus a zonotope on ``N`` generators; has at least ``N`` vertices."""
    gens = moment_generators(N)
    P = counterexample()
    if N < 3:
        Z = minkowski_sum(*(convex_hull([(0, 0, 0), g]) for g in gens))
    else:
        Z = zonotope(gens)
    out = minkowski_sum(P, Z, name=f"big{N}")
    if len(out.vertices) < N:
        raise AssertionError(f"big_counterexample({N}) has only {len(out.vertices)} vertices")
    return out


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict = field(default_factory=dict)
    polytope: LatticePolytope | None = None


_FIXED = {"T1": t1, "T2": t2, "T3": t3, "P": counterexample, "cube": unit_cube}
_FAMILIES = {"W": wedge, "V": pyramid, "big": big_counterexample}


def names() -> list[str]:
    return list(_FIXED) + ["W<n>", "V<n>", "big<N>"]


def lookup(name: str, n: int | None = None) -> CatalogEntry:
    """Build a catalog polytope by name: ``T1``, ``T2``, ``T3``, ``P``, ``cube``, ``W<n>``, ``V<n>``, ``big<N>``."""
    if name in _FIXED:
        return CatalogEntry(name, {}, _FIXED[name]())
    m = re.fullmatch(r"(W|V|big)(\d*)", name)
    if m is None:
        raise KeyError(f"unknown catalog polytope {name!r}; known: {', '.join(names())}")
    fam, digits = m.groups()
    if digits:
        n = int(digits)
    if n is None:
        raise KeyError(f"catalog family {fam!r} needs a size, e.g. {fam}5 or --n 5")
    poly = _FAMILIES[fam](n)
    return CatalogEntry(poly.name, {"n": n}, poly)
