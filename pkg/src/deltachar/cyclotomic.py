"""Cyclotomic integers with Frobenius lifts and their Fermat-quotient operators.

Z[zeta_m] is presented as Z[x]/(Phi_m(x)) on the power basis; for a prime p
coprime to m the Galois substitution zeta -> zeta^p is a Frobenius lift
(it reduces to the p-power map mod p), so delta_p a = (sigma_p a - a^p)/p
stays inside the ring.  Lifts at different primes commute, which makes the
ring a natural home for the whole operator family at once.

Two coefficient models are provided: exact rationals (CyclotomicElement) and
fixed-precision p-adics (PadicCyclotomic).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .delta_calculus import commutator_polynomial, cp_polynomial
from .exact_arith import (
    DomainError,
    NonUnitError,
    NotPLocalError,
    PrimeSet,
    fraction_mod,
    vp,
)

# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(c: List) -> List:
    while c and not c[-1]:
        c.pop()
    return c


def _poly_mul(a: Sequence, b: Sequence) -> List:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def _poly_divmod_monic(a: Sequence, b: Sequence) -> Tuple[List, List]:
    """Divide by a monic polynomial; exact in any coefficient ring."""
    a = list(a)
    db = len(b) - 1
    if b[-1] != 1:
        raise DomainError("divisor must be monic")
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - db - 1, -1, -1):
        coef = a[i + db]
        if coef:
            q[i] = coef
            for j in range(db + 1):
                a[i + j] -= coef * b[j]
    return _trim(q), _trim(a[:db])


def _poly_xgcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Extended gcd over Q[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = list(map(Fraction, a)), list(map(Fraction, b))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _trim(r1):
        q, r = _poly_divmod_frac(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    return r0, s0, t0


def _poly_divmod_frac(a, b):
    a = list(map(Fraction, a))
    b = _trim(list(map(Fraction, b)))
    lead = b[-1]
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - db - 1, -1, -1):
        coef = a[i + db] / lead
        if coef:
            q[i] = coef
            for j in range(db + 1):
                a[i + j] -= coef * b[j]
    return _trim(q), _trim(a[:db])


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _poly_divmod_fp(a, b, p):
    """Division with remainder over F_p[x] (b nonzero)."""
    a = [c % p for c in a]
    lead_inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - db - 1, -1, -1):
        coef = a[i + db] * lead_inv % p
        if coef:
            q[i] = coef
            for j in range(db + 1):
                a[i + j] = (a[i + j] - coef * b[j]) % p
    return _trim(q), _trim(a[:db])


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def euler_phi(m: int) -> int:
    if m < 1:
        raise DomainError("euler_phi needs a positive integer")
    result = m
    n, d = m, 2
    while d * d <= n:
        if n % d == 0:
            result -= result // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> Tuple[int, ...]:
    """Coefficients of Phi_m, computed by exact division of x^m - 1.

    x^m - 1 = prod_{d | m} Phi_d, so Phi_m is (x^m - 1) divided by the product
    of the proper-divisor factors; everything stays in Z[x] because each
    divisor is monic.
    """
    if m < 1:
        raise DomainError("cyclotomic index must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod_monic(num, list(cyclotomic_polynomial(d)))
            if r:
                raise DomainError("cyclotomic division left a remainder at m=%d" % m)
            num = q
    return tuple(num)


class CyclotomicConfig:
    """The ambient data: index m, working primes, and Phi_m."""

    __slots__ = ("m", "primes", "phi", "degree")

    def __init__(self, m: int, primes: Sequence[int]):
        if m < 1:
            raise DomainError("m must be positive")
        self.m = m
        self.primes = PrimeSet(primes)
        for p in self.primes:
            if math.gcd(p, m) != 1:
                raise DomainError("prime %d divides the cyclotomic index %d" % (p, m))
        self.phi = cyclotomic_polynomial(m)
        self.degree = len(self.phi) - 1
        if self.degree != euler_phi(m):
            raise DomainError("degree mismatch for Phi_%d" % m)

    def __eq__(self, other):
        return (isinstance(other, CyclotomicConfig)
                and self.m == other.m and self.primes == other.primes)

    def __repr__(self):
        return "CyclotomicConfig(m=%d, primes=%s)" % (self.m, tuple(self.primes))


@lru_cache(maxsize=None)
def _power_reduction_table(m: int, max_power: int) -> Tuple[Tuple[int, ...], ...]:
    """x^k mod Phi_m as integer coefficient rows, for 0 <= k <= max_power."""
    phi = list(cyclotomic_polynomial(m))
    deg = len(phi) - 1
    rows = []
    cur = [1]
    for _ in range(max_power + 1):
        rows.append(tuple(cur + [0] * (deg - len(cur))))
        cur = [0] + cur
        if len(cur) > deg:
            _, cur = _poly_divmod_monic(cur, phi)
            cur = list(cur)
    return tuple(rows)


class CyclotomicElement:
    """An element of Q(zeta_m) as a residue polynomial with Fraction coefficients."""

    __slots__ = ("config", "coeffs")

    def __init__(self, config: CyclotomicConfig, coeffs: Sequence):
        self.config = config
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > config.degree:
            raise DomainError("too many coefficients for degree %d" % config.degree)
        cs += [Fraction(0)] * (config.degree - len(cs))
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeta(cls, config: CyclotomicConfig) -> "CyclotomicElement":
        if config.degree == 1:
            # zeta_1 = 1, zeta_2 = -1: x reduces mod the linear Phi_m
            root = -Fraction(config.phi[0])
            return cls(config, [root])
        return cls(config, [0, 1])

    @classmethod
    def from_rational(cls, config: CyclotomicConfig, a) -> "CyclotomicElement":
        return cls(config, [Fraction(a)])

    # -- ring ops ---------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            if other.config.m != self.config.m:
                raise DomainError("mixed cyclotomic indices %d, %d"
                                  % (self.config.m, other.config.m))
            return other
        return CyclotomicElement.from_rational(self.config, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicElement(self.config,
                                 [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.config, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.config, [a * other for a in self.coeffs])
        o = self._coerce(other)
        prod = _poly_mul(list(self.coeffs), list(o.coeffs))
        _, rem = _poly_divmod_frac(prod, list(self.config.phi))
        return CyclotomicElement(self.config, rem)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicElement(self.config, [a / q for a in self.coeffs])
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicElement.from_rational(self.config, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.from_rational(self.config, other)
        return (isinstance(other, CyclotomicElement)
                and self.config.m == other.config.m and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.config.m, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def inverse(self) -> "CyclotomicElement":
        if self.is_zero():
            raise NonUnitError("0 is not invertible")
        g, s, _ = _poly_xgcd(list(self.coeffs), list(self.config.phi))
        if len(g) != 1:
            raise NonUnitError("element shares a factor with Phi_%d" % self.config.m)
        inv = [c / g[0] for c in s]
        _, rem = _poly_divmod_frac(inv, list(self.config.phi))
        return CyclotomicElement(self.config, rem)

    # -- Frobenius / delta structure ---------------------------------------
    def galois(self, j: int) -> "CyclotomicElement":
        """The automorphism zeta -> zeta^j for j coprime to m."""
        if math.gcd(j, self.config.m) != 1:
            raise DomainError("%d is not coprime to %d" % (j, self.config.m))
        j %= self.config.m
        table = _power_reduction_table(self.config.m, j * self.config.degree)
        out = [Fraction(0)] * self.config.degree
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[j * k]
                for idx in range(self.config.degree):
                    if row[idx]:
                        out[idx] += c * row[idx]
        return CyclotomicElement(self.config, out)

    def frobenius(self, p: int) -> "CyclotomicElement":
        """The Frobenius lift at p (Galois action zeta -> zeta^p)."""
        return self.galois(p)

    def is_p_local(self, primes=None) -> bool:
        ps = self.config.primes if primes is None else tuple(primes)
        return all(all(c.denominator % p for c in self.coeffs) for p in ps)

    def delta(self, p: int) -> "CyclotomicElement":
        """delta_p a = (frobenius_p(a) - a^p)/p; stays p-integral when a is."""
        if not self.is_p_local((p,)):
            raise NotPLocalError("element is not integral at %d" % p)
        return (self.frobenius(p) - self ** p) / p

    def __repr__(self):
        return "CyclotomicElement(m=%d, %s)" % (self.config.m, list(self.coeffs))


def frobenius_lift(a: CyclotomicElement, p: int) -> CyclotomicElement:
    return a.frobenius(p)


def delta_p(a: CyclotomicElement, p: int) -> CyclotomicElement:
    return a.delta(p)


# ---------------------------------------------------------------------------
# p-adic model
# ---------------------------------------------------------------------------

class PadicCyclotomic:
    """Z_p[zeta_m] truncated at p**precision, on the power basis mod Phi_m.

    p must be coprime to m, so p is unramified and an element is divisible by
    p exactly when all its basis coefficients are.
    """

    __slots__ = ("config", "p", "precision", "coeffs")

    def __init__(self, config: CyclotomicConfig, p: int, precision: int,
                 coeffs: Sequence):
        if math.gcd(p, config.m) != 1:
            raise DomainError("prime %d divides the cyclotomic index" % p)
        if precision < 1:
            raise DomainError("precision must be at least 1")
        self.config = config
        self.p = p
        self.precision = precision
        modulus = p ** precision
        cs = [int(c) % modulus for c in coeffs]
        if len(cs) > config.degree:
            raise DomainError("too many coefficients")
        cs += [0] * (config.degree - len(cs))
        self.coeffs = tuple(cs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_cyclotomic(cls, x: CyclotomicElement, p: int, precision: int
                        ) -> "PadicCyclotomic":
        return cls(x.config, p, precision,
                   [fraction_mod(c, p, precision) for c in x.coeffs])

    @classmethod
    def from_rational(cls, config: CyclotomicConfig, a, p: int, precision: int
                      ) -> "PadicCyclotomic":
        return cls(config, p, precision, [fraction_mod(Fraction(a), p, precision)])

    @classmethod
    def zero(cls, config, p, precision):
        return cls(config, p, precision, [])

    @classmethod
    def one(cls, config, p, precision):
        return cls(config, p, precision, [1])

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    # -- ring ops -----------------------------------------------------------
    def _align(self, other):
        if not isinstance(other, PadicCyclotomic):
            if isinstance(other, (int, Fraction)):
                other = PadicCyclotomic.from_rational(
                    self.config, other, self.p, self.precision)
            else:
                return NotImplemented
        if other.p != self.p or other.config.m != self.config.m:
            raise DomainError("mixed p-adic cyclotomic rings")
        n = min(self.precision, other.precision)
        return n, self, other

    def __add__(self, other):
        n, a, b = self._align(other)
        return PadicCyclotomic(self.config, self.p, n,
                               [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return PadicCyclotomic(self.config, self.p, self.precision,
                               [-x for x in self.coeffs])

    def __sub__(self, other):
        n, a, b = self._align(other)
        return PadicCyclotomic(self.config, self.p, n,
                               [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicCyclotomic(self.config, self.p, self.precision,
                                   [x * other for x in self.coeffs])
        if isinstance(other, Fraction):
            return self.times_rational(other)
        n, a, b = self._align(other)
        prod = _poly_mul(list(a.coeffs), list(b.coeffs))
        _, rem = _poly_divmod_monic(prod, list(self.config.phi))
        return PadicCyclotomic(self.config, self.p, n, rem)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicCyclotomic.one(self.config, self.p, self.precision)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicCyclotomic.from_rational(
                self.config, other, self.p, self.precision)
        if not isinstance(other, PadicCyclotomic):
            return NotImplemented
        if other.p != self.p or other.config.m != self.config.m:
            return False
        q = self.p ** min(self.precision, other.precision)
        return all(x % q == y % q for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def times_rational(self, c) -> "PadicCyclotomic":
        r = fraction_mod(Fraction(c), self.p, self.precision)
        return PadicCyclotomic(self.config, self.p, self.precision,
                               [x * r for x in self.coeffs])

    # -- p-adic structure ----------------------------------------------------
    def min_valuation(self):
        """min coefficient valuation; infinity when indistinguishable from 0."""
        if self.is_zero():
            return math.inf
        return min(min(vp(c, self.p) for c in self.coeffs if c), self.precision)

    def divide_by_prime_power(self, s: int) -> "PadicCyclotomic":
        if s == 0:
            return self
        ps = self.p ** s
        if any(c % ps for c in self.coeffs):
            raise DomainError("element is not divisible by %d^%d" % (self.p, s))
        if self.precision - s < 1:
            raise DomainError("no precision left")
        return PadicCyclotomic(self.config, self.p, self.precision - s,
                               [c // ps for c in self.coeffs])

    def reduce_to(self, precision: int) -> "PadicCyclotomic":
        if precision > self.precision:
            raise DomainError("cannot gain precision")
        return PadicCyclotomic(self.config, self.p, precision, self.coeffs)

    def is_unit(self) -> bool:
        g, _ = self._fp_xgcd()
        return len(g) == 1

    def _fp_xgcd(self):
        """gcd(self mod p, Phi_m mod p) over F_p[x] with one cofactor.

        Returns (g, t) with t * self = g (mod Phi_m, p).
        """
        p = self.p
        r0 = _trim([c % p for c in self.config.phi])
        r1 = _trim([c % p for c in self.coeffs])
        t0, t1 = [], [1]
        while r1:
            q, r = _poly_divmod_fp(r0, r1, p)
            r0, r1 = r1, r
            nt = [c % p for c in _poly_sub(t0, _poly_mul(q, t1))]
            t0, t1 = t1, _trim(nt)
        return r0, t0

    def inverse(self) -> "PadicCyclotomic":
        """Unit inversion: invert mod p, then Newton-lift to full precision."""
        g, t = self._fp_xgcd()
        if len(g) != 1:
            raise NonUnitError("element is not a unit mod %d" % self.p)
        ginv = pow(g[0], -1, self.p)
        b = [c * ginv % self.p for c in t]
        b += [0] * (self.config.degree - len(b))
        cur = PadicCyclotomic(self.config, self.p, 1, b)
        prec = 1
        while prec < self.precision:
            prec = min(2 * prec, self.precision)
            bb = PadicCyclotomic(self.config, self.p, prec, cur.coeffs)
            a = self.reduce_to(prec) if self.precision > prec else self
            cur = bb * (2 - a * bb)
        return cur

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.times_rational(Fraction(1, 1) / Fraction(other))
        _, _, o = self._align(other)
        return self * o.inverse()

    # -- Frobenius / delta ---------------------------------------------------
    def frobenius(self, p: int = None) -> "PadicCyclotomic":
        """Galois substitution zeta -> zeta^q; defaults to the ring prime."""
        q = self.p if p is None else p
        if math.gcd(q, self.config.m) != 1:
            raise DomainError("%d is not coprime to %d" % (q, self.config.m))
        q %= self.config.m
        if self.config.m == 1:
            return self
        table = _power_reduction_table(self.config.m, q * self.config.degree)
        out = [0] * self.config.degree
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[q * k]
                for idx in range(self.config.degree):
                    if row[idx]:
                        out[idx] += c * row[idx]
        return PadicCyclotomic(self.config, self.p, self.precision, out)

    def delta(self) -> "PadicCyclotomic":
        """delta_p at the ring prime; costs one digit of precision."""
        return (self.frobenius() - self ** self.p).divide_by_prime_power(1)

    def __repr__(self):
        return ("PadicCyclotomic(m=%d, %d^%d: %s)"
                % (self.config.m, self.p, self.precision, list(self.coeffs)))


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

def _delta_of(x, p):
    if isinstance(x, CyclotomicElement):
        return x.delta(p)
    from .delta_calculus import fermat_quotient
    return fermat_quotient(x, p)


def check_delta_ring_axioms(pairs, primes) -> Dict:
    """Verify the defining identities of the operator family on sample pairs.

    For every pair (a, b) and primes p != q of the family this checks, with
    exact arithmetic:

      sum rule        delta_p(a+b) = delta_p a + delta_p b + C_p(a, b)
      product rule    delta_p(ab)  = a^p delta_p b + b^p delta_p a
                                     + p delta_p a delta_p b
      commutation     delta_p delta_q a - delta_q delta_p a
                                   = C_{p,q}(a, delta_p a, delta_q a)

    Returns a report dict; failures (if any) are collected, not raised.
    """
    primes = PrimeSet(primes)
    failures = []
    checked = 0
    for a, b in pairs:
        for p in primes:
            da, db = _delta_of(a, p), _delta_of(b, p)
            lhs = _delta_of(a + b, p)
            rhs = da + db + cp_polynomial(p).evaluate({"X": a, "Y": b})
            if lhs != rhs:
                failures.append(("sum", p, a, b))
            lhs = _delta_of(a * b, p)
            rhs = a ** p * db + b ** p * da + p * da * db
            if lhs != rhs:
                failures.append(("product", p, a, b))
            checked += 2
        for i, p in enumerate(primes):
            for q in primes[i + 1:]:
                da, dq = _delta_of(a, p), _delta_of(a, q)
                lhs = _delta_of(dq, p) - _delta_of(da, q)
                rhs = commutator_polynomial(p, q).evaluate(
                    {"X0": a, "X1": da, "X2": dq})
                if lhs != rhs:
                    failures.append(("commutation", (p, q), a, None))
                checked += 1
    return {"samples": checked, "failures": failures, "ok": not failures}
