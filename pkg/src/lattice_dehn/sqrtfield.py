"""Exact arithmetic in the Q-span of square roots of squarefree integers."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .arith import is_squarefree, squarefree_split
from .config import mp


class SqrtField:
    """``sum c_n * sqrt(n)`` over distinct squarefree ``n >= 1``.

    Square roots of distinct squarefree integers are linearly independent over
    Q, so equality and the zero test are exact coefficient comparisons.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction | int] | None = None):
        clean: dict[int, Fraction] = {}
        for n, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if not is_squarefree(n):
                    raise ValueError(f"radicand {n} is not squarefree")
                clean[n] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def sqrt(cls, n) -> "SqrtField":
        """``sqrt(n)`` for a non-negative rational ``n``."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("square root of a negative number")
        if n == 0:
            return cls()
        s, m = squarefree_split(n.numerator * n.denominator)
        return cls({m: Fraction(s, n.denominator)})

    @classmethod
    def rational(cls, q) -> "SqrtField":
        return cls({1: q})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coefficient(self, n: int) -> Fraction:
        return self._terms.get(n, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        if not isinstance(other, SqrtField):
            other = SqrtField.rational(other)
        out = dict(self._terms)
        for n, c in other._terms.items():
            out[n] = out.get(n, 0) + c
        return SqrtField(out)

    __radd__ = __add__

    def __neg__(self):
        return SqrtField({n: -c for n, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SqrtField):
            out: dict[int, Fraction] = {}
            for m, a in self._terms.items():
                for n, b in other._terms.items():
                    s, k = squarefree_split(m * n)
                    out[k] = out.get(k, 0) + a * b * s
            return SqrtField(out)
        q = Fraction(other)
        return SqrtField({n: c * q for n, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SqrtField):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SqrtField.rational(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def value(self, prec: int | None = None):
        ctx = mp(prec)
        total = ctx.mpf(0)
        for n, c in self._terms.items():
            total += ctx.mpf(c.numerator) / c.denominator * ctx.sqrt(n)
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for n, c in self._terms.items():
            num = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            parts.append(num if n == 1 else f"{num}*sqrt({n})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"SqrtField({self})"
