"""Dehn invariants of lattice polytopes, relations among dihedral angles, Kagan functions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .angles import (
    AngleClass, Echelon, Rationality, angle_valuation, combine_valuations, dihedral_class,
    express_in_basis, is_rational_multiple_of_pi, reference_angles,
)
from .config import format_decimal, mp
from .geometry import Edge, LatticePolytope, sub
from .sqrtfield import SqrtField

PSLQ_DIMENSION_CAP = 12
PSLQ_COEFF_BOUND = 10**6


class InconsistentRelations(ValueError):
    pass


class MissingAssignment(KeyError):
    pass


class DehnStatus(str, enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RemovedClass:
    """Certificate for angle mass dropped or folded while building a DehnVector."""

    cls: AngleClass
    mass: SqrtField  # the total edge length that carried this class
    rule: str  # rationality rule, or "supplement" when folded onto pi - theta
    multiple: Fraction | None = None  # theta / pi when the class was rational
    status: str = "yes"

    def to_json(self) -> dict:
        return {"cos": str(self.cls), "mass": str(self.mass), "rule": self.rule,
                "multiple": None if self.multiple is None else str(self.multiple), "status": self.status}


@dataclass(frozen=True)
class DehnVector:
    """``sum c * theta`` in R (x) R/pi Z, as a map from angle classes to SqrtField coefficients."""

    terms: tuple[tuple[AngleClass, SqrtField], ...] = ()
    certificate: tuple[RemovedClass, ...] = ()
    reduced: bool = False

    @classmethod
    def from_map(cls, terms: Mapping[AngleClass, SqrtField], certificate=(), reduced=False) -> "DehnVector":
        items = sorted(((c, v) for c, v in terms.items() if v), key=lambda cv: cv[0].height)
        return cls(tuple(items), tuple(certificate), reduced)

    @property
    def term_map(self) -> dict[AngleClass, SqrtField]:
        return dict(self.terms)

    @property
    def classes(self) -> list[AngleClass]:
        return [c for c, _ in self.terms]

    def coefficient(self, cls: AngleClass) -> SqrtField:
        return self.term_map.get(cls, SqrtField())

    def is_empty(self) -> bool:
        return not self.terms

    def __add__(self, other: "DehnVector") -> "DehnVector":
        m = self.term_map
        for c, v in other.terms:
            m[c] = m.get(c, SqrtField()) + v
        return DehnVector.from_map(m, self.certificate + other.certificate)

    def __mul__(self, k) -> "DehnVector":
        k = Fraction(k)
        return DehnVector.from_map({c: v * k for c, v in self.terms}, self.certificate, self.reduced)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def same_terms(self, other: "DehnVector") -> bool:
        return self.term_map == other.term_map

    def to_json(self, prec: int | None = None) -> dict:
        ctx = mp(prec)
        return {
            "classes": [{"cos": str(c), "radians": format_decimal(c.radians(ctx.prec), ctx.prec), "coeff": str(v)}
                        for c, v in self.terms],
            "removed": [r.to_json() for r in self.certificate],
            "reduced": self.reduced,
        }


# ---------------------------------------------------------------- building


def dihedral_angle(P: LatticePolytope, e: Edge | int) -> AngleClass:
    if isinstance(e, int):
        e = P.edges[e]
    f, g = e.facets
    return dihedral_class(P.facets[f].halfspace.normal, P.facets[g].halfspace.normal)


def segment_length(a, b) -> SqrtField:
    d = sub(b, a)
    return SqrtField.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])


def edge_length(P: LatticePolytope, e: Edge | int) -> SqrtField:
    """Exact length ``s * sqrt(m)``; rational endpoints give a rational factor in front."""
    if isinstance(e, int):
        e = P.edges[e]
    a, b = e.vertices
    return segment_length(P.vertices[a], P.vertices[b])


def _fold(raw: Mapping[AngleClass, SqrtField], prec=None):
    """Drop rational-multiple-of-pi classes and fold ``pi - theta`` onto ``theta``."""
    kept: dict[AngleClass, SqrtField] = {}
    cert = []
    for c, mass in sorted(raw.items(), key=lambda cv: cv[0].height):
        if not mass:
            continue
        verdict: Rationality = is_rational_multiple_of_pi(c, prec)
        if verdict.is_yes:
            cert.append(RemovedClass(c, mass, verdict.rule, verdict.multiple))
            continue
        if verdict.status == "unknown":
            cert.append(RemovedClass(c, mass, verdict.rule, None, "unknown"))
        if c.cos_coeff < 0:
            cert.append(RemovedClass(c, mass, "supplement", None, "folded"))
            c, mass = c.supplement(), -mass
        kept[c] = kept.get(c, SqrtField()) + mass
    return kept, cert


def dehn_invariant(P: LatticePolytope, prec: int | None = None) -> DehnVector:
    """``sum_e length(e) (x) dihedral(e)`` with exact angle classes.

    Classes that are rational multiples of pi are removed; a class with a
    negative cosine is rewritten through ``l (x) (pi - theta) = -l (x) theta``.
    Both kinds of change are listed in the certificate.
    """
    if P.dim < 3:
        return DehnVector()
    raw: dict[AngleClass, SqrtField] = {}
    for e in P.edges:
        c = dihedral_angle(P, e)
        raw[c] = raw.get(c, SqrtField()) + edge_length(P, e)
    kept, cert = _fold(raw, prec)
    return DehnVector.from_map(kept, cert)


# ---------------------------------------------------------------- relations


@dataclass(frozen=True)
class Relation:
    """``coeffs[0] * pi + sum_j coeffs[j] * theta_j = 0`` over the owning set's classes."""

    coeffs: tuple[int, ...]
    provenance: str
    residual: str = "0"

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "provenance": self.provenance, "residual": self.residual}


@dataclass(frozen=True)
class RelationSet:
    classes: tuple[AngleClass, ...]
    rows: tuple[Relation, ...] = ()
    precision_bits: int = 256
    complete: bool = True
    note: str = ""

    def __len__(self):
        return len(self.rows)

    def row_map(self, row: Relation) -> dict[AngleClass, int]:
        return {c: k for c, k in zip(self.classes, row.coeffs[1:]) if k}

    def to_json(self) -> dict:
        return {"classes": [str(c) for c in self.classes], "rows": [r.to_json() for r in self.rows],
                "precision_bits": self.precision_bits, "complete": self.complete, "note": self.note}


def _residual(ctx, coeffs: Sequence[int], classes: Sequence[AngleClass]):
    total = coeffs[0] * ctx.pi
    for k, c in zip(coeffs[1:], classes):
        if k:
            total += k * c.radians(ctx.prec)
    return abs(total)


def _pi_part(ctx, combo: Mapping[int, int], classes: Sequence[AngleClass]) -> int:
    """Integer ``c0`` with ``c0*pi + sum = 0`` for a combination known to lie in (pi/12)Z, scaled by 12."""
    s = ctx.mpf(0)
    for j, k in combo.items():
        s += k * classes[j].radians(ctx.prec)
    x = 12 * s / ctx.pi
    n = int(ctx.nint(x))
    if abs(x - n) > ctx.mpf(2) ** (-ctx.prec // 2):
        raise ArithmeticError("exact relation does not land on a multiple of pi/12")
    return -n


def _primitive_row(row: list[int]) -> tuple[int, ...]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
    g = g or 1
    lead = next((x for x in row[1:] if x), 1)
    if lead < 0:
        g = -g
    return tuple(x // g for x in row)


def find_angle_relations(classes: Iterable[AngleClass], prec: int | None = None, method: str = "exact") -> RelationSet:
    """Integer relations among ``pi`` and the given angle classes.

    ``method="exact"`` derives the full relation lattice from angle valuations
    (each row also passes the numeric residual check).  ``method="numeric"``
    instead runs PSLQ on at most 12 classes with coefficients up to 10**6, and
    marks the set incomplete when the cap is exceeded.
    """
    ctx = mp(prec)
    cls = list(dict.fromkeys(classes))
    k = len(cls)
    tol = ctx.mpf(2) ** (-ctx.prec // 2)
    rows: list[Relation] = []
    seen: set[tuple[int, ...]] = set()

    def add(coeffs, provenance):
        coeffs = _primitive_row(list(coeffs))
        if coeffs in seen or not any(coeffs[1:]):
            return
        res = _residual(ctx, coeffs, cls)
        if res > tol:
            raise InconsistentRelations(f"relation {coeffs} has residual {ctx.nstr(res, 5)}")
        seen.add(coeffs)
        rows.append(Relation(coeffs, provenance, ctx.nstr(res, 5)))

    index = {c: j for j, c in enumerate(cls)}
    # rational multiples of pi
    for j, c in enumerate(cls):
        v = is_rational_multiple_of_pi(c, ctx.prec)
        if v.is_yes:
            q = v.multiple
            row = [0] * (k + 1)
            row[0], row[j + 1] = -q.numerator, q.denominator
            add(row, "exact-table")
    # theta + (pi - theta) = pi
    for j, c in enumerate(cls):
        s = index.get(c.supplement())
        if s is not None and j < s and pi_free(c):
            row = [0] * (k + 1)
            row[0], row[j + 1], row[s + 1] = -1, 1, 1
            add(row, "supplement-rule")

    if method == "exact":
        E = Echelon()
        for j, c in enumerate(cls):
            if not pi_free(c):
                continue
            v = angle_valuation(c)
            combo = E.express(v)
            if combo is None:
                E.insert(v, j)
                continue
            # v_j - sum combo = 0  ->  an integer relation with a pi part
            rel = {j: Fraction(1)}
            for lab, q in combo.items():
                rel[lab] = rel.get(lab, 0) - q
            den = math.lcm(*(q.denominator for q in rel.values()))
            ints = {lab: int(q * den) for lab, q in rel.items() if q}
            c0 = _pi_part(ctx, ints, cls)
            row = [0] * (k + 1)
            row[0] = c0
            for lab, x in ints.items():
                row[lab + 1] = 12 * x
            add(row, "exact-valuation")
        return RelationSet(tuple(cls), tuple(rows), ctx.prec)

    if method != "numeric":
        raise ValueError(f"unknown relation method {method!r}")
    free = [j for j, c in enumerate(cls) if pi_free(c)]
    if len(free) > PSLQ_DIMENSION_CAP:
        return RelationSet(tuple(cls), tuple(rows), ctx.prec, complete=False,
                           note=f"{len(free)} classes exceed the PSLQ cap {PSLQ_DIMENSION_CAP}; search skipped")
    active = list(free)
    while active:
        vec = [ctx.pi] + [cls[j].radians(ctx.prec) for j in active]
        rel = ctx.pslq(vec, tol=tol, maxcoeff=PSLQ_COEFF_BOUND, maxsteps=20000)
        if not rel:
            break
        row = [0] * (k + 1)
        row[0] = rel[0]
        for j, x in zip(active, rel[1:]):
            row[j + 1] = x
        add(row, f"numeric({ctx.prec} bits)")
        drop = max(i for i, x in enumerate(rel[1:]) if x)
        active.pop(drop)
    note = f"no further relation with coefficients <= {PSLQ_COEFF_BOUND} at {ctx.prec} bits"
    return RelationSet(tuple(cls), tuple(rows), ctx.prec, note=note)


def pi_free(c: AngleClass) -> bool:
    return not is_rational_multiple_of_pi(c).is_yes


def check_relations(R: RelationSet, prec: int | None = None) -> None:
    """Re-verify each row numerically and against the exact angle valuations."""
    ctx = mp(max(mp(prec).prec, R.precision_bits))
    tol = ctx.mpf(2) ** (-R.precision_bits // 2)
    for row in R.rows:
        if len(row.coeffs) != len(R.classes) + 1:
            raise InconsistentRelations(f"relation {row.coeffs} does not match {len(R.classes)} classes")
        res = _residual(ctx, row.coeffs, R.classes)
        if res > tol:
            raise InconsistentRelations(f"relation {row.coeffs} has residual {ctx.nstr(res, 5)}")
        if combine_valuations({c: Fraction(k) for c, k in R.row_map(row).items()}):
            raise InconsistentRelations(f"relation {row.coeffs} is not an exact identity")


# ---------------------------------------------------------------- reduction


def _targets(D: DehnVector) -> dict[int, dict]:
    """For each radical m, the valuation vector of ``sum_theta c_{theta,m} * theta``."""
    per_m: dict[int, dict[AngleClass, Fraction]] = {}
    for c, v in D.terms:
        for m, q in v.terms.items():
            per_m.setdefault(m, {})[c] = q
    return {m: combine_valuations(coeffs) for m, coeffs in sorted(per_m.items())}


def reduce(D: DehnVector, R: RelationSet | None = None) -> DehnVector:
    """Rewrite ``D`` over a Q-basis of angles independent modulo pi.

    The basis is chosen among the classes of ``D``, the classes of ``R`` and
    simple ``arccos(p/q)`` angles, simplest first, so equal invariants always
    come out in the same form.  The result
    is empty exactly when the Dehn invariant vanishes.
    """
    extra: list[AngleClass] = []
    if R is not None:
        check_relations(R)
        extra = [c for c in R.classes if pi_free(c)]
        extra = [c.supplement() if c.cos_coeff < 0 else c for c in extra]
    if not D.terms:
        return DehnVector((), D.certificate, True)
    targets = _targets(D)
    radicals = [m for m, t in targets.items() if t]
    if not radicals:
        return DehnVector((), D.certificate, True)
    pool = set(D.classes) | set(extra) | set(reference_angles())
    basis, coords = express_in_basis([targets[m] for m in radicals], pool)
    out: dict[AngleClass, SqrtField] = {}
    for m, co in zip(radicals, coords):
        for c, q in co.items():
            out[c] = out.get(c, SqrtField()) + SqrtField({m: q})
    return DehnVector.from_map(out, D.certificate, True)


def is_zero(D: DehnVector) -> DehnStatus:
    """Exact vanishing test (reduces ``D`` first if needed)."""
    if any(r.status == "unknown" for r in D.certificate):
        return DehnStatus.UNKNOWN
    Dr = D if D.reduced else reduce(D)
    return DehnStatus.ZERO if Dr.is_empty() else DehnStatus.NONZERO


# ---------------------------------------------------------------- Kagan functions


@dataclass(frozen=True)
class KaganSpec:
    """Values ``f(theta)`` of an additive ``f`` with ``f(pi) = 0`` on chosen angle classes."""

    assignments: Mapping[AngleClass, object] = field(default_factory=dict)


def _kagan_value(ctx, cls: AngleClass, spec: KaganSpec, echelon: Echelon, values: dict):
    if cls in values:
        return values[cls]
    if not pi_free(cls):
        return ctx.mpf(0)
    combo = echelon.express(angle_valuation(cls))
    if combo is None:
        raise MissingAssignment(f"no Kagan value for angle with cos {cls}")
    total = ctx.mpf(0)
    for c, q in combo.items():
        total += ctx.mpf(q.numerator) / q.denominator * values[c]
    return total


def evaluate_kagan(D: DehnVector, f: KaganSpec, prec: int | None = None):
    """``D_f = sum_theta coeff(theta) * f(theta)`` evaluated at working precision.

    Classes without an explicit value are written over the assigned ones
    using exact angle relations, so ``f`` only needs to be given on a basis.
    """
    ctx = mp(prec)
    if not D.reduced:
        D = reduce(D)
    values = {}
    E = Echelon()
    for c, val in f.assignments.items():
        x = ctx.mpf(val)
        if not pi_free(c):
            if x != 0:
                raise ValueError(f"a Kagan function vanishes on rational multiples of pi (cos {c})")
            continue
        v = angle_valuation(c)
        combo = E.express(v)
        if combo is not None:
            implied = ctx.fsum(ctx.mpf(q.numerator) / q.denominator * values[b] for b, q in combo.items())
            if abs(implied - x) > ctx.mpf(2) ** (-ctx.prec // 2) * (1 + abs(x)):
                raise ValueError(f"assignment for cos {c} contradicts the other assignments")
        else:
            E.insert(v, c)
        values[c] = x
    total = ctx.mpf(0)
    for c, coeff in D.terms:
        total += coeff.value(ctx.prec) * _kagan_value(ctx, c, f, E, values)
    return total


def dehn_report(D: DehnVector, R: RelationSet | None = None, prec: int | None = None) -> dict:
    out = D.to_json(prec)
    out["relations"] = [] if R is None else [r.to_json() for r in R.rows]
    out["is_zero"] = is_zero(D).value
    return out
