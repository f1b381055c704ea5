"""Dihedral angle classes with exact cosines, and exact relations modulo pi.

Every dihedral angle of a lattice polytope has the form ``theta = arccos(a*sqrt(r))``
with ``a`` rational and ``r`` squarefree.  Writing ``q*sqrt(r)*exp(i*theta) =
A + B*sqrt(-D)`` puts ``exp(2i*theta)`` in the imaginary quadratic field
``Q(sqrt(-D))``.  A rational combination of such angles is a rational multiple
of pi exactly when the corresponding product of ``z/conj(z)`` is a root of
unity, i.e. when all its prime-ideal valuations vanish.  :func:`angle_valuation`
computes those valuations, which turns every "is this a multiple of pi?"
question into exact linear algebra over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .arith import factor, is_squarefree, neg_sqrt_padic, splits, squarefree_split, valuation
from .config import mp

Key = tuple[int, int]  # (D, p): prime p split in Q(sqrt(-D))
SparseVec = dict


@dataclass(frozen=True)
class AngleClass:
    """An angle in (0, pi) identified by its exact cosine ``a * sqrt(r)``."""

    cos_coeff: Fraction
    cos_radical: int = 1

    def __post_init__(self):
        a = Fraction(self.cos_coeff)
        object.__setattr__(self, "cos_coeff", a)
        r = self.cos_radical
        if not is_squarefree(r):
            raise ValueError(f"cosine radical {r} must be a squarefree positive integer")
        if a == 0 and r != 1:
            raise ValueError("a zero cosine must use radical 1")
        if a * a * r >= 1:
            raise ValueError(f"|cos| must be < 1, got {a}*sqrt({r})")

    @classmethod
    def from_cosine(cls, numer, norm_sq) -> "AngleClass":
        """The angle with cosine ``numer / sqrt(norm_sq)``."""
        numer = Fraction(numer)
        norm_sq = Fraction(norm_sq)
        if numer == 0:
            return cls(Fraction(0), 1)
        s, r = squarefree_split(norm_sq.numerator * norm_sq.denominator)
        # sqrt(norm_sq) = s*sqrt(r)/den
        return cls(numer * norm_sq.denominator / (s * r), r)

    @property
    def cos_squared(self) -> Fraction:
        return self.cos_coeff**2 * self.cos_radical

    def radians(self, prec: int | None = None):
        return _radians(self.cos_coeff, self.cos_radical, mp(prec).prec)

    def supplement(self) -> "AngleClass":
        """``pi - theta``."""
        return AngleClass(-self.cos_coeff, self.cos_radical)

    @property
    def height(self) -> tuple:
        """Sort key preferring rational cosines with small denominators."""
        c2 = self.cos_squared
        return (self.cos_radical != 1, c2.denominator, c2.numerator, self.cos_radical, self.cos_coeff < 0)

    def __str__(self):
        a = self.cos_coeff
        num = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return num if self.cos_radical == 1 else f"{num}*sqrt({self.cos_radical})"

    @property
    def closed_form(self) -> str:
        return f"acos({self})"


@lru_cache(maxsize=200_000)
def _radians(a: Fraction, r: int, prec: int):
    ctx = mp(prec)
    return ctx.acos(ctx.mpf(a.numerator) / a.denominator * ctx.sqrt(r))


def dihedral_class(n1, n2) -> AngleClass:
    """Interior dihedral angle between facets with outward normals ``n1``, ``n2``."""
    d = n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]
    N1 = n1[0] ** 2 + n1[1] ** 2 + n1[2] ** 2
    N2 = n2[0] ** 2 + n2[1] ** 2 + n2[2] ** 2
    s1, r1 = squarefree_split(N1)
    s2, r2 = squarefree_split(N2)
    g = math.gcd(r1, r2)
    r = (r1 // g) * (r2 // g)
    # sqrt(N1*N2) = s1*s2*g*sqrt(r)
    if d == 0:
        return AngleClass(Fraction(0), 1)
    return AngleClass(Fraction(-d, s1 * s2 * g * r), r)


# cos -> theta/pi for the angles in (0, pi) with cos^2 rational and theta/pi rational.
_PI_TABLE = {
    (Fraction(0), 1): Fraction(1, 2),
    (Fraction(1, 2), 1): Fraction(1, 3),
    (Fraction(-1, 2), 1): Fraction(2, 3),
    (Fraction(1, 2), 2): Fraction(1, 4),
    (Fraction(-1, 2), 2): Fraction(3, 4),
    (Fraction(1, 2), 3): Fraction(1, 6),
    (Fraction(-1, 2), 3): Fraction(5, 6),
}


@dataclass(frozen=True)
class Rationality:
    status: str  # "yes" | "no" | "unknown"
    multiple: Fraction | None = None  # theta / pi when status == "yes"
    rule: str = ""

    @property
    def is_yes(self) -> bool:
        return self.status == "yes"


def pi_multiple(cls: AngleClass) -> Fraction | None:
    return _PI_TABLE.get((cls.cos_coeff, cls.cos_radical))


def is_rational_multiple_of_pi(theta, prec: int | None = None, bound: int = 10**6) -> Rationality:
    """Decide whether ``theta / pi`` is rational.

    For an :class:`AngleClass` the answer is a theorem: ``cos(2*theta) =
    2*a^2*r - 1`` is rational, and by Niven's theorem a rational cosine of a
    rational multiple of pi lies in {0, +-1/2, +-1}.  That leaves exactly the
    table of multiples of pi/4 and pi/6 (the quadratic-cosine cases such as
    ``(1 +- sqrt 5)/4`` cannot have the ``a*sqrt(r)`` shape).

    Any other real is tested numerically by integer-relation search against
    pi; a hit is reported as ``yes`` with a ``numeric`` rule, a miss as
    ``unknown`` with the search bound recorded.
    """
    if isinstance(theta, AngleClass):
        q = pi_multiple(theta)
        if q is not None:
            rule = "niven" if theta.cos_radical == 1 else "quadratic-table"
            return Rationality("yes", q, rule)
        rule = "niven" if theta.cos_radical == 1 else "niven-double-angle"
        return Rationality("no", None, rule)
    ctx = mp(prec)
    x = ctx.mpf(theta)
    rel = ctx.pslq([x, ctx.pi], maxcoeff=bound, maxsteps=10**5)
    if rel and rel[0] != 0:
        return Rationality("yes", Fraction(-rel[1], rel[0]), f"numeric({ctx.prec} bits)")
    return Rationality("unknown", None, f"no relation with coefficients <= {bound} at {ctx.prec} bits")


@lru_cache(maxsize=200_000)
def _valuation_items(a: Fraction, r: int) -> tuple[tuple[Key, int], ...]:
    num, den = a.numerator, a.denominator
    A = num * r
    S = r * (den * den - num * num * r)
    t, D = squarefree_split(S)
    out = []
    primes = dict(factor(r))
    for p, e in factor(den) if den > 1 else ():
        primes[p] = primes.get(p, 0) + 2 * e
    for p, e in sorted(primes.items()):
        if not splits(D, p):
            continue
        k = e + 1
        rho = neg_sqrt_padic(D, p, k)
        x = (A + t * rho) % p**k
        v = valuation(x, p) if x else k
        nu = 2 * v - e
        if nu:
            out.append(((D, p), nu))
    return tuple(out)


def angle_valuation(cls: AngleClass) -> dict[Key, int]:
    """Valuation vector of ``exp(2i*theta)``; zero exactly when ``theta/pi`` is rational.

    The map is additive: a rational combination of angles is a rational
    multiple of pi iff the same combination of valuation vectors vanishes.
    """
    return dict(_valuation_items(cls.cos_coeff, cls.cos_radical))


def angle_field(cls: AngleClass) -> int:
    a = cls.cos_coeff
    S = cls.cos_radical * (a.denominator**2 - a.numerator**2 * cls.cos_radical)
    return squarefree_split(S)[1]


# ---------------------------------------------------------------- linear algebra


def _axpy(y: SparseVec, c, x: Mapping) -> None:
    for k, v in x.items():
        nv = y.get(k, 0) + c * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class Echelon:
    """Incremental row echelon form of sparse rational vectors.

    Each stored row remembers how it was combined from the labelled input
    vectors, so :meth:`express` can write a vector in terms of those labels.
    """

    def __init__(self):
        self._rows: list[tuple[object, SparseVec, SparseVec]] = []  # (pivot, vec, combo)
        self.labels: list = []

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v: Mapping) -> tuple[SparseVec, SparseVec]:
        res: SparseVec = {k: Fraction(x) for k, x in v.items() if x}
        combo: SparseVec = {}
        for pivot, vec, comb in self._rows:
            c = res.get(pivot)
            if c:
                _axpy(res, -c, vec)
                _axpy(combo, c, comb)
        return res, combo

    def contains(self, v: Mapping) -> bool:
        return not self._reduce(v)[0]

    def insert(self, v: Mapping, label=None) -> bool:
        res, combo = self._reduce(v)
        if not res:
            return False
        combo = {k: -x for k, x in combo.items()}
        combo[label] = combo.get(label, 0) + 1
        pivot = min(res, key=lambda k: (abs(res[k]) != 1, str(k)))
        c = res[pivot]
        vec = {k: x / c for k, x in res.items()}
        comb = {k: x / c for k, x in combo.items() if x}
        self._rows.append((pivot, vec, comb))
        self.labels.append(label)
        return True

    def express(self, v: Mapping) -> SparseVec | None:
        """Coefficients over the inserted labels, or ``None`` if ``v`` is outside the span."""
        res, combo = self._reduce(v)
        if res:
            return None
        return {k: x for k, x in combo.items() if x}


@lru_cache(maxsize=None)
def _reference_pool(max_den: int) -> tuple[AngleClass, ...]:
    out = []
    for q in range(2, max_den + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                c = AngleClass(Fraction(p, q), 1)
                if pi_multiple(c) is None:
                    out.append(c)
    return tuple(out)


def reference_angles(max_den: int = 24) -> tuple[AngleClass, ...]:
    """Angles ``arccos(p/q)``, ``0 < p < q <= max_den``, that are not rational multiples of pi."""
    return _reference_pool(max_den)


def express_in_basis(targets: Sequence[Mapping], candidates: Iterable[AngleClass]):
    """Choose a basis of angle classes and express each target valuation vector.

    Classes are tried in :attr:`AngleClass.height` order and accepted only if
    their valuation lies in the span of the targets, so the basis is the
    simplest one that describes the targets.  Returns ``(basis, coords)``
    where ``coords[i]`` maps basis classes to rational coefficients.
    """
    W = Echelon()
    for t in targets:
        W.insert(t)
    dim = len(W)
    pool = sorted(set(candidates), key=lambda c: c.height)
    B = Echelon()
    for cls in pool:
        if len(B) == dim:
            break
        v = angle_valuation(cls)
        if v and W.contains(v):
            B.insert(v, cls)
    coords = [B.express(t) for t in targets]
    if any(c is None for c in coords):
        for cls in pool:
            v = angle_valuation(cls)
            if v:
                B.insert(v, cls)
            coords = [B.express(t) for t in targets]
            if all(c is not None for c in coords):
                break
        else:
            raise ArithmeticError("target valuations are not spanned by the candidate angles")
    return list(B.labels), coords


def combine_valuations(coeffs: Mapping[AngleClass, Fraction]) -> SparseVec:
    out: SparseVec = {}
    for cls, c in coeffs.items():
        if c:
            _axpy(out, Fraction(c), angle_valuation(cls))
    return out


# ---------------------------------------------------------------- exact angle sums


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class AngleSum:
    """Exact real ``rational + sum_c coeff[c] * theta_c / pi``.

    All classes have non-negative cosine and are not rational multiples of pi;
    those parts are folded into ``rational``.  Solid angles and the discrete
    volume are values of this shape.
    """

    rational: Fraction = Fraction(0)
    coeffs: tuple[tuple[AngleClass, Fraction], ...] = field(default=())

    @classmethod
    def build(cls, rational=0, coeffs: Mapping[AngleClass, Fraction] | None = None) -> "AngleSum":
        rational = Fraction(rational)
        clean: dict[AngleClass, Fraction] = {}
        for c, q in (coeffs or {}).items():
            q = Fraction(q)
            if not q:
                continue
            m = pi_multiple(c)
            if m is not None:
                rational += q * m
                continue
            if c.cos_coeff < 0:
                rational += q
                c, q = c.supplement(), -q
            clean[c] = clean.get(c, 0) + q
        items = tuple(sorted(((c, q) for c, q in clean.items() if q), key=lambda cq: cq[0].height))
        return cls(rational, items)

    @classmethod
    def angle(cls, c: AngleClass, weight=1) -> "AngleSum":
        """``weight * theta_c / pi``."""
        return cls.build(0, {c: Fraction(weight)})

    @property
    def coeff_map(self) -> dict[AngleClass, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "AngleSum") -> "AngleSum":
        if not isinstance(other, AngleSum):
            other = AngleSum.build(other)
        m = self.coeff_map
        for c, q in other.coeffs:
            m[c] = m.get(c, 0) + q
        return AngleSum.build(self.rational + other.rational, m)

    __radd__ = __add__

    def __neg__(self):
        return AngleSum.build(-self.rational, {c: -q for c, q in self.coeffs})

    def __sub__(self, other):
        if not isinstance(other, AngleSum):
            other = AngleSum.build(other)
        return self + (-other)

    def __mul__(self, k):
        k = Fraction(k)
        return AngleSum.build(self.rational * k, {c: q * k for c, q in self.coeffs})

    __rmul__ = __mul__

    def value(self, prec: int | None = None):
        ctx = mp(prec)
        terms = sorted((ctx.mpf(q.numerator) / q.denominator * c.radians(ctx.prec) for c, q in self.coeffs),
                       key=abs)
        total = ctx.mpf(0)
        for t in terms:
            total += t
        return ctx.mpf(self.rational.numerator) / self.rational.denominator + total / ctx.pi

    def reduced(self, prec: int | None = None, extra: Iterable[AngleClass] = ()) -> "AngleSum":
        """Canonical form over the simplest independent angle classes.

        The part of the angle combination that is a rational multiple of pi
        is computed exactly: after clearing denominators it lies in
        ``(pi/12) * Z``, so high-precision rounding identifies it.
        """
        if not self.coeffs:
            return self
        target = combine_valuations(self.coeff_map)
        if not target:
            basis, coords = [], {}
        else:
            basis, (coords,) = express_in_basis(
                [target], list(self.coeff_map) + list(extra) + list(reference_angles()))
        ctx = mp(max(mp(prec).prec, 128))
        diff = ctx.mpf(0)
        denoms = [q.denominator for _, q in self.coeffs] + [q.denominator for q in coords.values()]
        M = 12 * math.lcm(*denoms)
        for c, q in self.coeffs:
            diff += ctx.mpf(q.numerator) / q.denominator * c.radians(ctx.prec)
        for c, q in coords.items():
            diff -= ctx.mpf(q.numerator) / q.denominator * c.radians(ctx.prec)
        scaled = diff / ctx.pi * M
        k = int(ctx.nint(scaled))
        if abs(scaled - k) > ctx.mpf(2) ** (-ctx.prec // 2):
            raise ArithmeticError("pi-multiple residue is not an exact rational")
        return AngleSum.build(self.rational + Fraction(k, M), coords)

    def is_zero(self) -> bool:
        """Exact zero test."""
        r = self.reduced()
        return r.rational == 0 and not r.coeffs

    def __str__(self):
        parts = []
        for c, q in self.coeffs:
            if q == 1:
                parts.append(f"{c.closed_form}/pi")
            elif q == -1:
                parts.append(f"-{c.closed_form}/pi")
            else:
                parts.append(f"{_fmt_frac(q)}*{c.closed_form}/pi")
        if self.rational or not parts:
            parts.append(_fmt_frac(self.rational))
        return " + ".join(parts).replace("+ -", "- ")
