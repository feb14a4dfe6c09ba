"""Exact cyclotomic arithmetic: frozen oracles and field properties."""

import random
from fractions import Fraction

import pytest

from eqcol.cyclotomic import (
    CycNum,
    cyclotomic_polynomial,
    divisors,
    euler_phi,
    parse_cyc,
)
from eqcol.errors import InvalidParameter


def oracle_cyclotomic(n: int) -> tuple[int, ...]:
    """Independent recomputation: divide x^n - 1 by the proper-divisor factors.

    Same identity as the implementation but written against plain integer
    long division, no shared helpers.
    """
    def poly_div(num, den):
        num = list(num)
        out = [0] * (len(num) - len(den) + 1)
        for i in range(len(num) - 1, len(den) - 2, -1):
            assert num[i] % den[-1] == 0
            c = num[i] // den[-1]
            out[i - len(den) + 1] = c
            for j, dj in enumerate(den):
                num[i - len(den) + 1 + j] -= c * dj
        assert not any(num[: len(den) - 1])
        return out

    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            poly = poly_div(poly, list(oracle_cyclotomic(d)))
    return tuple(poly)


# Frozen from oracle_cyclotomic, spot-checked by hand for 1..6 and 12.
KNOWN_CYCLOTOMICS = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    9: (1, 0, 0, 1, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
    15: (1, -1, 0, 1, -1, 1, 0, -1, 1),
    16: (1, 0, 0, 0, 0, 0, 0, 0, 1),
    20: (1, 0, -1, 0, 1, 0, -1, 0, 1),
}


def test_cyclotomic_polynomials_match_oracle():
    for n in range(1, 40):
        assert cyclotomic_polynomial(n) == oracle_cyclotomic(n)


def test_cyclotomic_polynomials_frozen_values():
    for n, coeffs in KNOWN_CYCLOTOMICS.items():
        assert cyclotomic_polynomial(n) == coeffs
        assert oracle_cyclotomic(n) == coeffs


def test_cyclotomic_product_over_divisors():
    # prod_{d | n} Phi_d = x^n - 1
    for n in (1, 2, 6, 12, 18, 24, 30):
        prod = [Fraction(1)]
        for d in divisors(n):
            phi_d = cyclotomic_polynomial(d)
            new = [Fraction(0)] * (len(prod) + len(phi_d) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(phi_d):
                    new[i + j] += a * b
            prod = new
        expected = [Fraction(0)] * (n + 1)
        expected[0], expected[n] = Fraction(-1), Fraction(1)
        assert prod == expected


def test_degree_is_totient():
    for n in (1, 3, 4, 8, 9, 12, 16, 20):
        assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)


def test_zeta_basic_identities():
    assert CycNum.zeta(4) ** 2 == -1
    assert CycNum.zeta(3) + CycNum.zeta(3, 2) == -1
    assert CycNum.zeta(8) ** 4 == -1
    assert CycNum.zeta(5) ** 5 == 1
    assert CycNum.zeta(1) == 1
    assert CycNum.zeta(2) == -1
    # sum of all n-th roots of unity vanishes for n > 1
    for n in (2, 3, 4, 6, 8, 12):
        total = CycNum.zero()
        for k in range(n):
            total = total + CycNum.zeta(n, k)
        assert total == 0


def test_conductor_normalization():
    # zeta_6 lives in Q(zeta_3): zeta_6 = -zeta_3^2
    z6 = CycNum.zeta(6)
    assert z6.conductor == 3
    assert z6 == -CycNum.zeta(3, 2)
    assert z6 ** 6 == 1
    assert z6 ** 3 == -1
    z10 = CycNum.zeta(10)
    assert z10.conductor == 5
    assert z10 ** 10 == 1
    assert z10 ** 5 == -1


def test_mixed_conductor_arithmetic():
    # zeta_4 * zeta_3 is a primitive 12th root
    w = CycNum.zeta(4) * CycNum.zeta(3)
    assert w == CycNum.zeta(12, 7)
    assert w ** 12 == 1
    assert all(w ** k != 1 for k in range(1, 12))


def test_inverse_and_division():
    x = CycNum.one() + CycNum.zeta(5)
    assert x * x.inverse() == 1
    y = CycNum.zeta(8, 3) - CycNum.from_rat(Fraction(1, 2))
    assert (y / y) == 1
    assert (1 / CycNum.zeta(7)) == CycNum.zeta(7, 6)
    with pytest.raises(ZeroDivisionError):
        CycNum.zero().inverse()


def test_reduction_to_minimal_conductor():
    # zeta_8^2 = zeta_4 = i: reduced conductor drops from 8 to 4
    i = CycNum.zeta(8) ** 2
    assert i.reduced().conductor == 4
    assert i == CycNum.zeta(4)
    # zeta_5 + zeta_5^4 is real but irrational; its square satisfies
    # golden-ratio arithmetic: (zeta_5 + zeta_5^-1)^2 + (zeta_5 + zeta_5^-1) = 1
    t = CycNum.zeta(5) + CycNum.zeta(5, 4)
    assert t * t + t == 1
    # rational recognition
    r = CycNum.zeta(3) * CycNum.zeta(3, 2)
    assert r.is_rational() and r.as_rat() == 1


def test_galois_and_conjugation():
    z = CycNum.zeta(7)
    assert z.conjugate() == CycNum.zeta(7, 6)
    assert z.conjugate().conjugate() == z
    # automorphism property on a random sample
    rng = random.Random(11)
    for _ in range(20):
        n = random.Random(rng.random()).choice([5, 7, 8, 9, 12])
        a = _random_cyc(rng, n)
        b = _random_cyc(rng, n)
        t = rng.choice([k for k in range(1, n) if _coprime(k, n)])
        assert (a * b).galois(t) == a.galois(t) * b.galois(t)
        assert (a + b).galois(t) == a.galois(t) + b.galois(t)


def test_conjugation_fixes_rationals_and_inverts_roots():
    assert CycNum.from_rat(Fraction(3, 7)).conjugate() == Fraction(3, 7)
    for n in (3, 4, 5, 8, 12):
        z = CycNum.zeta(n)
        assert z * z.conjugate() == 1


def _coprime(a: int, b: int) -> bool:
    while b:
        a, b = b, a % b
    return a == 1


def _random_cyc(rng: random.Random, n: int) -> CycNum:
    total = CycNum.zero()
    for k in range(euler_phi(n)):
        if rng.random() < 0.6:
            num = rng.randint(-4, 4)
            den = rng.randint(1, 3)
            total = total + CycNum.zeta(n, k) * Fraction(num, den)
    return total


def test_field_axioms_on_random_elements():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.choice([3, 4, 5, 8, 9, 12])
        a, b, c = (_random_cyc(rng, n) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        if a:
            assert a * a.inverse() == 1
        if b:
            assert (a / b) * b == a


def test_embed_and_back_round_trip():
    rng = random.Random(19)
    for _ in range(10):
        a = _random_cyc(rng, 5)
        big = a.to_conductor(20)
        assert big.conductor == 20 or not a
        assert big == a
        assert big.reduced().conductor in divisors(5)


def test_literal_round_trip():
    cases = [
        CycNum.zero(),
        CycNum.one(),
        CycNum.from_rat(Fraction(-3, 2)),
        CycNum.zeta(8, 3) * Fraction(1, 2) - CycNum.zeta(8),
        CycNum.zeta(3),
        CycNum.zeta(12) + 1,
        -CycNum.zeta(4),
    ]
    rng = random.Random(3)
    for n in (5, 8, 12):
        cases.extend(_random_cyc(rng, n) for _ in range(5))
    for value in cases:
        assert parse_cyc(str(value)) == value


def test_literal_examples():
    assert parse_cyc("1/2*z8^3 - z8") == CycNum.zeta(8, 3) * Fraction(1, 2) - CycNum.zeta(8)
    assert parse_cyc("-5") == -5
    assert parse_cyc("0") == 0
    assert parse_cyc("2/3") == Fraction(2, 3)
    assert parse_cyc("z4") == CycNum.zeta(4)
    assert parse_cyc("z6") == CycNum.zeta(6)
    assert parse_cyc("3*z5^2 + 1") == CycNum.zeta(5, 2) * 3 + 1


def test_literal_rejects_garbage():
    for bad in ("", "z", "1 +", "* z4", "z4^", "1..2", "zeta(4)", "+1"):
        with pytest.raises(InvalidParameter):
            parse_cyc(bad)


def test_printer_canonical_form():
    # printing always reduces: zeta_8^2 prints at conductor 4
    assert str(CycNum.zeta(8) ** 2) == "z4"
    assert str(CycNum.zeta(3) + CycNum.zeta(3, 2)) == "-1"
    assert str(CycNum.zero()) == "0"
    assert str(CycNum.from_rat(Fraction(7, 3))) == "7/3"
    s = str(CycNum.zeta(8, 3) * Fraction(1, 2) - CycNum.zeta(8))
    assert s == "1/2*z8^3 - z8"


def test_hash_consistency():
    a = CycNum.zeta(8) ** 2
    b = CycNum.zeta(4)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
