import math
import random
from fractions import Fraction

import pytest

from deltachar.exact_arith import (
    DomainError,
    ExactDivisionError,
    NonUnitError,
    NotPLocalError,
    PadicInt,
    PrimeSet,
    fraction_mod,
    hensel_quadratic_root,
    is_p_local,
    is_prime,
    mobius,
    padic_log,
    rational_reconstruct,
    smooth_exponents,
    smooth_numbers,
    vp,
)


def test_prime_set_validation():
    assert tuple(PrimeSet([3, 5, 7])) == (3, 5, 7)
    with pytest.raises(DomainError):
        PrimeSet([2, 3])
    with pytest.raises(DomainError):
        PrimeSet([5, 3])
    with pytest.raises(DomainError):
        PrimeSet([3, 3])
    with pytest.raises(DomainError):
        PrimeSet([9])
    with pytest.raises(DomainError):
        PrimeSet([])


def test_vp_basic():
    assert vp(45, 3) == 2
    assert vp(Fraction(5, 9), 3) == -2
    assert vp(Fraction(-7, 10), 5) == -1
    assert vp(0, 3) == math.inf


def test_vp_multiplicative():
    rng = random.Random(11)
    for _ in range(300):
        p = rng.choice([3, 5, 7, 11])
        a = Fraction(rng.randint(-400, 400) or 1, rng.randint(1, 400))
        b = Fraction(rng.randint(-400, 400) or 1, rng.randint(1, 400))
        assert vp(a * b, p) == vp(a, p) + vp(b, p)
        if a + b != 0:
            assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


def test_is_p_local():
    P = PrimeSet([3, 5])
    assert is_p_local(Fraction(7, 4), P)
    assert is_p_local(Fraction(9, 14), P)
    assert not is_p_local(Fraction(1, 3), P)
    assert not is_p_local(Fraction(2, 45), P)


def test_smooth_helpers():
    assert smooth_exponents(45, (3, 5)) == (2, 1)
    assert smooth_exponents(1, (3, 5)) == (0, 0)
    assert smooth_exponents(7, (3, 5)) is None
    assert smooth_exponents(0, (3, 5)) is None
    nums = smooth_numbers((3, 5), 50)
    assert nums == [1, 3, 5, 9, 15, 25, 27, 45]


def test_mobius_values():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_mobius_divisor_sum():
    # sum_{d | n} mu(d) = [n == 1], checked up to 10^4
    acc = [0] * (10 ** 4 + 1)
    for d in range(1, 10 ** 4 + 1):
        md = mobius(d)
        if md:
            for n in range(d, 10 ** 4 + 1, d):
                acc[n] += md
    assert acc[1] == 1
    assert all(acc[n] == 0 for n in range(2, 10 ** 4 + 1))


def test_is_prime_small():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 45):
        if sieve[i]:
            for j in range(i * i, 2000, i):
                sieve[j] = False
    for n in range(2000):
        assert is_prime(n) == sieve[n], n


def test_is_prime_carmichael_and_large():
    assert not is_prime(561)
    assert not is_prime(341550071728321)
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 62 - 1)


# ---------------------------------------------------------------------------
# PadicInt
# ---------------------------------------------------------------------------

def test_padic_int_ring_ops():
    a = PadicInt(3, 5, 7)
    b = PadicInt(3, 5, Fraction(1, 2))
    assert (a + b).residue == (7 + fraction_mod(Fraction(1, 2), 3, 5)) % 3 ** 5
    assert (a * b).residue == 7 * fraction_mod(Fraction(1, 2), 3, 5) % 3 ** 5
    assert (a - a).is_zero()
    assert (a ** 3).residue == pow(7, 3, 3 ** 5)
    # precision aligns to the minimum
    c = PadicInt(3, 2, 1)
    assert (a + c).precision == 2


def test_padic_int_equality_is_precision_relative():
    assert PadicInt(3, 2, 4) == PadicInt(3, 5, 4)
    assert PadicInt(3, 2, 4) == PadicInt(3, 5, 13)  # 4 = 13 mod 9
    assert PadicInt(3, 3, 4) != PadicInt(3, 5, 13)


def test_padic_int_division():
    x = PadicInt(5, 4, 75)
    y = x.divide_by_prime_power(2)
    assert (y.precision, y.residue) == (2, 3)
    with pytest.raises(ExactDivisionError):
        PadicInt(5, 4, 7).divide_by_prime_power(1)
    u = PadicInt(7, 6, 3)
    assert (u * u.unit_inverse()).residue == 1
    with pytest.raises(NonUnitError):
        PadicInt(7, 6, 14).unit_inverse()


def test_fraction_mod_rejects_bad_denominator():
    with pytest.raises(NotPLocalError):
        fraction_mod(Fraction(1, 3), 3, 4)


# ---------------------------------------------------------------------------
# p-adic logarithm
# ---------------------------------------------------------------------------

def _log_oracle(u: int, p: int, precision: int, terms: int = 40) -> int:
    """Independent fixed-length partial sum at high working precision."""
    t = u - 1
    s = Fraction(0)
    for n in range(1, terms + 1):
        s += Fraction((-1) ** (n - 1) * t ** n, n)
    big = p ** (precision + 10)
    r = s.numerator * pow(s.denominator, -1, big) % big
    return r % p ** precision


def test_padic_log_frozen_value():
    # log(4) in Z_3 at precision 3, frozen from the 40-term oracle.
    got = padic_log(PadicInt(3, 3, 4))
    assert got.residue == 21
    assert got.residue == _log_oracle(4, 3, 3)


def test_padic_log_is_homomorphism():
    rng = random.Random(23)
    for p in (3, 5, 7):
        for _ in range(25):
            a = 1 + p * rng.randint(1, p ** 6)
            b = 1 + p * rng.randint(1, p ** 6)
            N = 8
            la = padic_log(PadicInt(p, N, a))
            lb = padic_log(PadicInt(p, N, b))
            lab = padic_log(PadicInt(p, N, a * b))
            assert lab == la + lb


def test_padic_log_matches_oracle():
    rng = random.Random(29)
    for p in (3, 5):
        for _ in range(20):
            u = 1 + p * rng.randint(1, p ** 7)
            got = padic_log(PadicInt(p, 6, u))
            assert got.residue == _log_oracle(u, p, 6)


def test_padic_log_rejects_non_one_unit():
    with pytest.raises(DomainError):
        padic_log(PadicInt(3, 4, 2))


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------

def test_hensel_quadratic_root_frozen():
    # the root of x^2 + x + 3 = 0 with x = 0 (mod 3), i.e. a = -1, p = 3:
    # brute force over residues mod 27 gives 15.
    root = hensel_quadratic_root(-1, 3, 3)
    assert root.residue == 15
    brute = [x for x in range(27) if (x * x + x + 3) % 27 == 0 and x % 3 == 0]
    assert brute == [15]


def test_hensel_quadratic_root_properties():
    for (a, p, N) in [(-1, 3, 8), (1, 5, 10), (-2, 5, 12), (3, 7, 9), (-1, 11, 6)]:
        x = hensel_quadratic_root(a, p, N)
        assert (x.residue * x.residue - a * x.residue + p) % p ** N == 0
        assert x.residue % p == 0
        # the sibling root a - x is the unit one
        assert (a - x.residue) % p != 0


def test_hensel_rejects_supersingular_shape():
    with pytest.raises(NonUnitError):
        hensel_quadratic_root(6, 3, 5)


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------

def test_rational_reconstruct_frozen_examples():
    # 1/2 = 5 mod 9
    assert rational_reconstruct([PadicInt(3, 2, 5)], 10) == Fraction(1, 2)
    # -2 across two primes
    comps = [PadicInt(3, 10, -2), PadicInt(5, 10, -2)]
    assert rational_reconstruct(comps, 10 ** 3) == Fraction(-2)
    # no small rational is 1 mod 3 and 2 mod 5 within bound 1
    assert rational_reconstruct([PadicInt(3, 1, 1), PadicInt(5, 1, 2)], 1) is None


def test_rational_reconstruct_round_trip():
    rng = random.Random(37)
    for _ in range(200):
        num = rng.randint(-999, 999)
        den = rng.randint(1, 999)
        while den % 3 == 0 or den % 5 == 0 or den % 7 == 0:
            den = rng.randint(1, 999)
        x = Fraction(num, den)
        comps = [PadicInt(p, 12, x) for p in (3, 5, 7)]
        assert rational_reconstruct(comps, 1000) == x


def test_rational_reconstruct_zero_and_validation():
    assert rational_reconstruct([PadicInt(3, 4, 0), PadicInt(5, 4, 0)], 5) == 0
    with pytest.raises(DomainError):
        rational_reconstruct([PadicInt(3, 2, 1), PadicInt(3, 3, 1)], 5)
    with pytest.raises(DomainError):
        rational_reconstruct([PadicInt(3, 2, 1)], 0)
