import random
from fractions import Fraction

import pytest

from deltachar.cyclotomic import (
    CyclotomicConfig,
    CyclotomicElement,
    PadicCyclotomic,
    check_delta_ring_axioms,
    cyclotomic_polynomial,
    delta_p,
    euler_phi,
    frobenius_lift,
)
from deltachar.delta_calculus import fermat_quotient
from deltachar.exact_arith import DomainError, NonUnitError, NotPLocalError


def test_euler_phi():
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_cyclotomic_polynomials_small():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(7) == (1,) * 7
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_cyclotomic_polynomial_105_has_minus_two():
    # the first index whose cyclotomic polynomial has a coefficient != 0, +-1
    phi = cyclotomic_polynomial(105)
    assert phi[7] == -2
    assert len(phi) - 1 == euler_phi(105) == 48


def test_product_of_cyclotomics_is_xm_minus_one():
    for m in (6, 10, 12, 30):
        prod = [1]
        for d in range(1, m + 1):
            if m % d == 0:
                phi = list(cyclotomic_polynomial(d))
                new = [0] * (len(prod) + len(phi) - 1)
                for i, a in enumerate(prod):
                    for j, b in enumerate(phi):
                        new[i + j] += a * b
                prod = new
        expected = [-1] + [0] * (m - 1) + [1]
        assert prod == expected


def test_config_validation():
    CyclotomicConfig(4, [3, 5, 7])
    with pytest.raises(DomainError):
        CyclotomicConfig(6, [3])  # 3 divides 6
    with pytest.raises(DomainError):
        CyclotomicConfig(4, [2])  # 2 not admitted
    with pytest.raises(DomainError):
        CyclotomicConfig(0, [3])


def _cfg(m=4, primes=(3, 5)):
    return CyclotomicConfig(m, primes)


def test_zeta_powers():
    cfg = _cfg()
    z = CyclotomicElement.zeta(cfg)
    assert z * z == CyclotomicElement.from_rational(cfg, -1)
    assert z ** 4 == 1
    # m = 2: zeta is -1
    cfg2 = CyclotomicConfig(2, [3, 5])
    assert CyclotomicElement.zeta(cfg2) == -1
    # m = 1: zeta is 1
    cfg1 = CyclotomicConfig(1, [3, 5])
    assert CyclotomicElement.zeta(cfg1) == 1


def test_ring_arithmetic_against_complex_embedding():
    # multiply in Z[x]/Phi_8 and check against floating zeta_8 = exp(2 pi i/8)
    import cmath
    cfg = CyclotomicConfig(8, [3, 5])
    rng = random.Random(3)
    zc = cmath.exp(2j * cmath.pi / 8)
    for _ in range(40):
        a = CyclotomicElement(cfg, [rng.randint(-9, 9) for _ in range(4)])
        b = CyclotomicElement(cfg, [rng.randint(-9, 9) for _ in range(4)])
        prod = a * b
        fa = sum(float(c) * zc ** k for k, c in enumerate(a.coeffs))
        fb = sum(float(c) * zc ** k for k, c in enumerate(b.coeffs))
        fp = sum(float(c) * zc ** k for k, c in enumerate(prod.coeffs))
        assert abs(fa * fb - fp) < 1e-6


def test_frobenius_is_galois_action():
    cfg = _cfg()
    z = CyclotomicElement.zeta(cfg)
    assert frobenius_lift(z, 3) == -z  # zeta_4^3 = -zeta_4
    assert frobenius_lift(z, 5) == z   # 5 = 1 mod 4
    cfg7 = CyclotomicConfig(7, [3, 5])
    z7 = CyclotomicElement.zeta(cfg7)
    assert frobenius_lift(z7, 3) == z7 ** 3
    # composition: phi_3 phi_5 = phi_15
    rng = random.Random(17)
    a = CyclotomicElement(cfg7, [Fraction(rng.randint(-5, 5), rng.choice([1, 2, 11]))
                                 for _ in range(6)])
    assert a.frobenius(3).frobenius(5) == a.galois(15)
    assert a.frobenius(5).frobenius(3) == a.galois(15)


def test_frobenius_reduces_to_p_power_map():
    cfg = CyclotomicConfig(8, [3, 5, 7])
    rng = random.Random(19)
    for p in (3, 5, 7):
        for _ in range(30):
            a = CyclotomicElement(cfg, [rng.randint(-20, 20) for _ in range(4)])
            diff = a.frobenius(p) - a ** p
            assert all(c.denominator == 1 and c.numerator % p == 0
                       for c in diff.coeffs)


def test_frobenius_rejects_ramified_prime():
    cfg = CyclotomicConfig(4, [3])
    z = CyclotomicElement.zeta(cfg)
    with pytest.raises(DomainError):
        z.galois(2)


def test_delta_examples():
    cfg = _cfg()
    z = CyclotomicElement.zeta(cfg)
    assert delta_p(z, 3).is_zero()  # phi_3(zeta) = zeta^3 exactly
    one_plus = 1 + z
    assert delta_p(one_plus, 3) == 1 - z
    # on rational constants delta is the Fermat quotient
    c = CyclotomicElement.from_rational(cfg, 2)
    assert delta_p(c, 5) == fermat_quotient(2, 5)
    with pytest.raises(NotPLocalError):
        delta_p(CyclotomicElement.from_rational(cfg, Fraction(1, 3)), 3)


def test_delta_stays_integral():
    cfg = CyclotomicConfig(4, [3, 5, 7])
    rng = random.Random(23)
    for _ in range(50):
        a = CyclotomicElement(cfg, [Fraction(rng.randint(-30, 30),
                                             rng.choice([1, 2, 4, 11]))
                                    for _ in range(2)])
        for p in (3, 5, 7):
            assert a.delta(p).is_p_local()


def test_inverse():
    cfg = _cfg()
    z = CyclotomicElement.zeta(cfg)
    a = 1 + 2 * z
    assert a * a.inverse() == 1
    assert (a / a) == 1
    with pytest.raises(NonUnitError):
        CyclotomicElement.from_rational(cfg, 0).inverse()


def test_axiom_report_on_random_cyclotomic_pairs():
    cfg = CyclotomicConfig(4, [3, 5, 7])
    rng = random.Random(29)
    pairs = []
    for _ in range(20):
        a = CyclotomicElement(cfg, [Fraction(rng.randint(-15, 15),
                                             rng.choice([1, 2, 11]))
                                    for _ in range(2)])
        b = CyclotomicElement(cfg, [Fraction(rng.randint(-15, 15),
                                             rng.choice([1, 2, 11]))
                                    for _ in range(2)])
        pairs.append((a, b))
    report = check_delta_ring_axioms(pairs, (3, 5, 7))
    assert report["ok"], report["failures"]


# ---------------------------------------------------------------------------
# p-adic model
# ---------------------------------------------------------------------------

def test_padic_cyclotomic_matches_exact_reduction():
    cfg = _cfg()
    rng = random.Random(31)
    for _ in range(40):
        a = CyclotomicElement(cfg, [Fraction(rng.randint(-50, 50),
                                             rng.choice([1, 2, 7]))
                                    for _ in range(2)])
        b = CyclotomicElement(cfg, [Fraction(rng.randint(-50, 50),
                                             rng.choice([1, 2, 7]))
                                    for _ in range(2)])
        pa = PadicCyclotomic.from_cyclotomic(a, 5, 6)
        pb = PadicCyclotomic.from_cyclotomic(b, 5, 6)
        assert pa * pb == PadicCyclotomic.from_cyclotomic(a * b, 5, 6)
        assert pa + pb == PadicCyclotomic.from_cyclotomic(a + b, 5, 6)
        assert pa.frobenius() == PadicCyclotomic.from_cyclotomic(a.frobenius(5), 5, 6)


def test_padic_cyclotomic_delta_matches_exact():
    cfg = _cfg()
    rng = random.Random(37)
    for _ in range(30):
        a = CyclotomicElement(cfg, [rng.randint(-50, 50) for _ in range(2)])
        pa = PadicCyclotomic.from_cyclotomic(a, 3, 8)
        expected = PadicCyclotomic.from_cyclotomic(a.delta(3), 3, 7)
        assert pa.delta() == expected


def test_padic_cyclotomic_inverse():
    cfg = _cfg()
    rng = random.Random(41)
    for p in (3, 5):
        for _ in range(25):
            coeffs = [rng.randint(0, p ** 6 - 1) for _ in range(2)]
            a = PadicCyclotomic(cfg, p, 6, coeffs)
            if not a.is_unit():
                continue
            assert a * a.inverse() == 1
    a = PadicCyclotomic(cfg, 3, 6, [3, 3])
    assert not a.is_unit()
    with pytest.raises(NonUnitError):
        a.inverse()


def test_padic_cyclotomic_valuation_and_division():
    cfg = _cfg()
    a = PadicCyclotomic(cfg, 3, 5, [18, 27])
    assert a.min_valuation() == 2
    b = a.divide_by_prime_power(2)
    assert b.precision == 3
    assert b.coeffs == (2, 3)
    with pytest.raises(DomainError):
        a.divide_by_prime_power(3)
    assert PadicCyclotomic.zero(cfg, 3, 5).min_valuation() == float("inf")


def test_padic_cyclotomic_m_equals_one():
    cfg = CyclotomicConfig(1, [3, 5])
    a = PadicCyclotomic.from_rational(cfg, Fraction(1, 2), 3, 4)
    assert a.coeffs == (41,)  # 1/2 = 41 mod 81
    assert a.frobenius() == a
    assert (a + a) == 1


def test_padic_cyclotomic_rejects_ramified():
    cfg = CyclotomicConfig(9, [5])
    with pytest.raises(DomainError):
        PadicCyclotomic.from_rational(cfg, 1, 3, 4)
