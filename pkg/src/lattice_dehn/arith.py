"""Integer arithmetic helpers: factoring, squarefree parts, p-adic square roots."""

from __future__ import annotations

from functools import lru_cache

import sympy


@lru_cache(maxsize=200_000)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    if n <= 0:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    return tuple(sorted(sympy.factorint(n).items()))


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n = s**2 * m`` and ``m`` squarefree."""
    s = m = 1
    for p, e in factor(n):
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factor(n))


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def splits(D: int, p: int) -> bool:
    """Whether the prime ``p`` splits in Q(sqrt(-D)), ``D`` squarefree."""
    if p == 2:
        return (-D) % 8 == 1
    if D % p == 0:
        return False
    return sympy.legendre_symbol((-D) % p, p) == 1


@lru_cache(maxsize=100_000)
def neg_sqrt_padic(D: int, p: int, k: int) -> int:
    """A fixed p-adic square root of ``-D``, reduced modulo ``p**k``.

    The root is pinned down independently of ``k`` (smallest residue mod an odd
    ``p``; ``1 mod 4`` for ``p = 2``) so that valuations computed at different
    precisions refer to the same prime ideal.
    """
    mod = p**k
    if p == 2:
        r = 1
        for j in range(3, k + 2):
            if (r * r + D) % 2 ** (j + 1):
                r += 2 ** (j - 1)
        return r % mod
    r = min(sympy.sqrt_mod((-D) % p, p, all_roots=True))
    m = p
    while m < mod:
        m = min(m * m, mod)
        r = (r - (r * r + D) * pow(2 * r, -1, m)) % m
    return r % mod
