import math
import random
from fractions import Fraction

import mpmath
import pytest

from lattice_dehn.arith import factor, is_squarefree, neg_sqrt_padic, splits, squarefree_split, valuation
from lattice_dehn.sqrtfield import SqrtField


def test_squarefree_split_reassembles():
    for n in range(1, 2000):
        s, m = squarefree_split(n)
        assert s * s * m == n and is_squarefree(m)


def test_factor_and_valuation():
    assert factor(360) == ((2, 3), (3, 2), (5, 1))
    assert valuation(96, 2) == 5 and valuation(96, 3) == 1 and valuation(7, 5) == 0
    with pytest.raises(ValueError):
        factor(0)
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_splitting_matches_brute_force_roots():
    for D in (1, 2, 3, 5, 7, 11, 14, 35):
        for p in (3, 5, 7, 11, 13, 17, 19, 23):
            if D % p == 0:
                assert not splits(D, p)
                continue
            has_root = any((x * x + D) % p == 0 for x in range(p))
            assert splits(D, p) == has_root
        # 2 splits in Q(sqrt(-D)) iff -D = 1 mod 8
        assert splits(D, 2) == ((-D) % 8 == 1)


def test_padic_root_is_a_root_and_consistent():
    for D, p in ((2, 3), (5, 3), (7, 2), (1, 5), (14, 3), (15, 2)):
        if not splits(D, p):
            continue
        r6 = neg_sqrt_padic(D, p, 6)
        assert (r6 * r6 + D) % p**6 == 0
        for k in range(1, 6):
            assert neg_sqrt_padic(D, p, k) == r6 % p**k


def test_sqrt_field_normalises():
    assert SqrtField.sqrt(8) == SqrtField({2: 2})
    assert SqrtField.sqrt(Fraction(1, 2)) == SqrtField({2: Fraction(1, 2)})
    assert SqrtField.sqrt(9) == 3
    assert SqrtField.sqrt(0).is_zero()
    with pytest.raises(ValueError):
        SqrtField({4: 1})
    with pytest.raises(ValueError):
        SqrtField.sqrt(-1)


def test_sqrt_field_arithmetic_against_floats():
    rng = random.Random(1)
    rads = [1, 2, 3, 5, 6, 7, 10]
    for _ in range(200):
        a = SqrtField({m: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for m in rng.sample(rads, 3)})
        b = SqrtField({m: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for m in rng.sample(rads, 3)})
        fa, fb = float(a.value(64)), float(b.value(64))
        assert math.isclose(float((a + b).value(64)), fa + fb, abs_tol=1e-9)
        assert math.isclose(float((a * b).value(64)), fa * fb, abs_tol=1e-9)
        assert (a - a).is_zero()
        assert a * b == b * a


def test_sqrt_field_exact_zero_vs_close_value():
    # sqrt 2 + sqrt 3 and sqrt(5 + 2 sqrt 6) are equal reals; exact squares agree
    s = SqrtField.sqrt(2) + SqrtField.sqrt(3)
    assert s * s == SqrtField({1: 5, 6: 2})
    near = SqrtField({2: Fraction(141421356, 100000000)})
    assert near != SqrtField.sqrt(2) * 1


def test_sqrt_field_str_and_value():
    x = SqrtField({1: 2, 2: Fraction(-9, 2)})
    assert str(x) == "2 - 9/2*sqrt(2)"
    assert abs(x.value(128) - (2 - mpmath.mpf(9) / 2 * mpmath.sqrt(2))) < 1e-14
    assert str(SqrtField()) == "0"
