"""Finite-region multitiling checks and Dehn/defect obstruction reports."""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .angles import AngleSum
from .config import DEFAULT_COLUMN_CAPACITY, DEFAULT_SAMPLES, format_decimal, mp
from .dehn import DehnStatus, DehnVector, dehn_invariant, is_zero, reduce
from .geometry import GeometryError, LatticePolytope, add, convex_hull, polytope_from_json, polytope_to_json
from .invariants import defect_exact

SAMPLE_BITS = 20
V1, V2, V3 = (2, 2, -1), (1, -2, -2), (2, -1, 2)

REFLECTION_CAVEAT = (
    "A nonzero volume defect rules out multitilings by lattice translations only: "
    "reflections and other non-lattice motions do not preserve the defect, and the "
    "defect is evaluated for this embedding of the polytope."
)


class SampleDegeneracy(RuntimeError):
    pass


class TileOutsideRegion(GeometryError):
    pass


@dataclass(frozen=True)
class TileSet:
    tiles: tuple[LatticePolytope, ...]
    k: int = 1
    region: LatticePolytope | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("multiplicity k must be >= 1")
        for i, T in enumerate(self.tiles):
            if T.is_degenerate:
                raise GeometryError(f"tile {i} is not full-dimensional")

    def to_json(self) -> dict:
        return {
            "region": None if self.region is None else polytope_to_json(self.region),
            "k": self.k,
            "tiles": [polytope_to_json(T) for T in self.tiles],
        }

    @classmethod
    def from_json(cls, data) -> "TileSet":
        if isinstance(data, (str, bytes)):
            data = json.loads(data, parse_float=_no_float, parse_constant=_no_float)
        if not isinstance(data, dict) or "tiles" not in data:
            raise GeometryError("tile set JSON needs a 'tiles' list")
        k = data.get("k", 1)
        if not isinstance(k, int) or isinstance(k, bool):
            raise GeometryError("'k' must be an integer")
        region = data.get("region")
        return cls(tuple(polytope_from_json(t) for t in data["tiles"]), k,
                   None if region is None else polytope_from_json(region))


def _no_float(token):
    raise GeometryError(f"non-exact numeric literal {token!r} in tile set JSON")


@dataclass(frozen=True)
class MultitileResult:
    verified: bool
    reason: str
    volume_sum: Fraction
    region_volume: Fraction
    samples: int
    witness: tuple[Fraction, Fraction, Fraction] | None = None
    coverage: int | None = None

    @property
    def status(self) -> str:
        return "verified" if self.verified else "refuted"

    def to_json(self) -> dict:
        return {
            "status": self.status, "reason": self.reason,
            "volume_sum": str(self.volume_sum), "region_volume": str(self.region_volume),
            "samples": self.samples,
            "witness": None if self.witness is None else [str(c) for c in self.witness],
            "coverage": self.coverage,
            "evidence": "exact volume identity plus generic-point coverage; pairwise overlaps are not measured",
        }


class _PlaneTable:
    """All facet planes of a list of polytopes, for exact tests on points ``X / 2**bits``."""

    def __init__(self, polys: Sequence[LatticePolytope], bits: int):
        rows = []
        owner = []
        for j, P in enumerate(polys):
            for f in P.facets:
                rows.append((f.halfspace.normal, f.halfspace.offset))
                owner.append(j)
        L = math.lcm(*(h.denominator for _, h in rows)) if rows else 1
        self.L = L
        self.N = np.array([n for n, _ in rows], dtype=object) * L
        self.H = np.array([int(h * L) << bits for _, h in rows], dtype=object)
        self.owner = np.array(owner, dtype=np.int64)
        self.count = len(polys)

    def slack(self, X: np.ndarray) -> np.ndarray:
        """``(points, planes)`` array of ``2**bits * L * (h - n.x)``."""
        return self.H[None, :] - X.astype(object) @ self.N.T

    def coverage(self, slack: np.ndarray) -> np.ndarray:
        """Number of polytopes strictly containing each point."""
        out = np.zeros(slack.shape[0], dtype=np.int64)
        neg = (slack <= 0)
        for j in range(self.count):
            cols = self.owner == j
            out += ~neg[:, cols].any(axis=1)
        return out


def verify_multitile(region: LatticePolytope, tiles: TileSet, samples: int = DEFAULT_SAMPLES,
                     seed: int = 0) -> MultitileResult:
    """Check that the tiles cover almost every point of ``region`` exactly ``k`` times.

    Evidence: the exact volume identity ``sum vol(tile) = k * vol(region)`` and
    ``samples`` random rational points, off every facet plane, each lying in
    exactly ``k`` tiles.
    """
    if region.is_degenerate:
        raise GeometryError("region must be full-dimensional")
    for i, T in enumerate(tiles.tiles):
        for v in T.vertices:
            if not region.contains(v):
                raise TileOutsideRegion(f"tile {i} has vertex {tuple(str(c) for c in v)} outside the region")
    k = tiles.k
    vsum = sum((T.volume for T in tiles.tiles), Fraction(0))
    vreg = region.volume
    polys = list(tiles.tiles) + [region]
    table = _PlaneTable(polys, SAMPLE_BITS)
    lo, hi = region.bounding_box
    scale = 1 << SAMPLE_BITS
    lo_i = [math.floor(c * scale) for c in lo]
    hi_i = [math.ceil(c * scale) for c in hi]
    rng = random.Random(seed)
    found = 0
    draws = 0
    limit = 100 * samples
    reg_cols = table.owner == len(polys) - 1
    while found < samples:
        if draws >= limit:
            raise SampleDegeneracy(f"only {found} generic points in {draws} draws")
        batch = min(4096, limit - draws)
        X = np.array([[rng.randint(lo_i[d], hi_i[d]) for d in range(3)] for _ in range(batch)], dtype=np.int64)
        draws += batch
        S = table.slack(X)
        generic = ~(S == 0).any(axis=1) & ~(S[:, reg_cols] < 0).any(axis=1)
        idx = np.flatnonzero(generic)[: samples - found]
        if not len(idx):
            continue
        cov = table.coverage(S[idx]) - 1  # the region itself is the last polytope
        found += len(idx)
        bad = np.flatnonzero(cov != k)
        if len(bad):
            X0 = X[idx[bad[0]]]
            w = tuple(Fraction(int(c), scale) for c in X0)
            reason = "coverage mismatch" if vsum == k * vreg else "volume mismatch"
            return MultitileResult(False, reason, vsum, vreg, found, w, int(cov[bad[0]]))
    if vsum != k * vreg:
        return MultitileResult(False, "volume mismatch", vsum, vreg, found)
    return MultitileResult(True, "volume identity exact; all samples covered k times", vsum, vreg, found)


def coverage_count(tiles: Sequence[LatticePolytope], x) -> int:
    """Tiles containing ``x`` (closed containment)."""
    return sum(1 for T in tiles if T.contains(x))


def path_simplex(vectors: Sequence[Sequence[int]], name: str | None = None) -> LatticePolytope:
    pts = [(0, 0, 0)]
    for v in vectors:
        pts.append(add(pts[-1], tuple(v)))
    return convex_hull(pts, name=name)


def orthoscheme_cube_tiling() -> TileSet:
    """Six path simplices, one per ordering of ``v1, v2, v3``, filling the cube they span."""
    vs = (V1, V2, V3)
    tiles = []
    for perm in itertools.permutations(range(3)):
        tiles.append(path_simplex([vs[i] for i in perm], name="orthoscheme-" + "".join(str(i + 1) for i in perm)))
    corners = []
    for mask in range(8):
        p = (0, 0, 0)
        for i in range(3):
            if mask >> i & 1:
                p = add(p, vs[i])
        corners.append(p)
    return TileSet(tuple(tiles), 1, convex_hull(corners, name="orthoscheme-cube"))


# ---------------------------------------------------------------- obstruction report


@dataclass(frozen=True)
class ObstructionReport:
    polytope: str
    defect: object
    defect_exact: AngleSum
    concrete: bool
    dehn: DehnVector
    dehn_status: DehnStatus
    verdict: str
    explanation: str
    lattice: bool = True
    notes: tuple[str, ...] = field(default=())

    def to_json(self, prec: int | None = None) -> dict:
        ctx = mp(prec)
        return {
            "polytope": self.polytope,
            "defect": format_decimal(self.defect, ctx.prec),
            "defect_closed_form": str(self.defect_exact),
            "concrete": self.concrete,
            "dehn": self.dehn.to_json(ctx.prec),
            "dehn_is_zero": self.dehn_status.value,
            "verdict": self.verdict,
            "explanation": self.explanation,
            "notes": list(self.notes),
        }


def obstruction_report(P: LatticePolytope, prec: int | None = None, tolerance=None,
                       capacity: int = DEFAULT_COLUMN_CAPACITY) -> ObstructionReport:
    """Apply both necessary conditions for multitiling: zero Dehn invariant, and zero defect for translations."""
    ctx = mp(prec)
    tol = ctx.mpf("1e-30") if tolerance is None else ctx.mpf(tolerance)
    dex = defect_exact(P, capacity=capacity)
    try:
        dex = dex.reduced(ctx.prec)
    except ArithmeticError:
        pass
    dval = dex.value(ctx.prec)
    concrete = bool(abs(dval) < tol)
    D = reduce(dehn_invariant(P, ctx.prec))
    status = is_zero(D)
    notes = [REFLECTION_CAVEAT]
    if not P.is_lattice:
        notes.append("The polytope has non-lattice vertices; the defect theory applies to lattice polytopes.")
    if status is DehnStatus.UNKNOWN:
        verdict = "unknown"
        text = "Some dihedral angle could not be certified as rational or irrational in pi."
    elif status is DehnStatus.NONZERO:
        verdict = "no-multitiling"
        text = "The Dehn invariant is nonzero, so no multitiling of space by congruent copies exists."
    elif not concrete:
        verdict = "no-translation-multitiling"
        text = ("The Dehn invariant vanishes but the volume defect is nonzero, so the polytope "
                "does not multitile space by lattice translations.")
    else:
        verdict = "no-obstruction"
        text = "Both the Dehn invariant and the volume defect vanish; neither condition obstructs multitiling."
    return ObstructionReport(P.name or "", dval, dex, concrete, D, status, verdict, text, P.is_lattice, tuple(notes))
