"""Exact arithmetic substrate: localized rationals, truncated p-adics, lifting.

Everything in this package computes with exact integers and rationals for as
long as possible; reduction modulo a prime power happens once, at the end of a
computation.  This module provides the shared pieces: prime sets, p-adic
valuations and locality checks, a fixed-precision p-adic integer, the p-adic
logarithm, quadratic Hensel lifting, the Moebius function, and rational
reconstruction from residues at several primes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, Fraction]


class DomainError(ValueError):
    """An input lies outside the mathematical domain of the operation."""


class NotPLocalError(DomainError):
    """A rational has one of the working primes in its denominator."""


class NonUnitError(DomainError):
    """Inversion was requested for a non-unit."""


class ExactDivisionError(ArithmeticError):
    """Division that was promised to be exact left a remainder."""


# ---------------------------------------------------------------------------
# primality / prime sets
# ---------------------------------------------------------------------------

# Deterministic Miller-Rabin witnesses: valid for all n < 3.3 * 10^24
# (Sorenson & Webster), which comfortably covers the 64-bit range we promise.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 2**64."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeSet(tuple):
    """A strictly increasing tuple of distinct odd primes.

    The whole calculus runs relative to such a family; 2 is excluded so that
    the standard uniformizer conventions for elliptic curves stay invertible.
    """

    def __new__(cls, primes: Iterable[int]) -> "PrimeSet":
        ps = tuple(int(p) for p in primes)
        if not ps:
            raise DomainError("a prime set must contain at least one prime")
        for p in ps:
            if p == 2:
                raise DomainError("2 is not admitted in a prime set")
            if not is_prime(p):
                raise DomainError("%d is not prime" % p)
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise DomainError("primes must be strictly increasing")
        return super().__new__(cls, ps)

    def index_of(self, p: int) -> int:
        try:
            return self.index(p)
        except ValueError:
            raise DomainError("%d is not in the prime set %s" % (p, self))


# ---------------------------------------------------------------------------
# valuations and locality
# ---------------------------------------------------------------------------

def vp(x: Rational, p: int) -> Union[int, float]:
    """p-adic valuation of a rational; vp(0) = +infinity."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def is_p_local(x: Rational, primes: Iterable[int]) -> bool:
    """True when no prime of the family divides the denominator of x."""
    d = Fraction(x).denominator
    return all(d % p != 0 for p in primes)


def ensure_p_local(x: Rational, primes: Iterable[int]) -> Fraction:
    x = Fraction(x)
    if not is_p_local(x, primes):
        raise NotPLocalError("%s is not integral at the primes %s" % (x, tuple(primes)))
    return x


def smooth_exponents(n: int, primes: Sequence[int]) -> Optional[tuple]:
    """Exponent vector of n over the prime set, or None if n is not smooth.

    smooth_exponents(45, (3, 5)) == (2, 1); smooth_exponents(7, (3, 5)) is None.
    """
    if n < 1:
        return None
    exps = []
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    return tuple(exps) if n == 1 else None


def smooth_numbers(primes: Sequence[int], limit: int) -> list:
    """All integers <= limit whose prime factors lie in the given set, sorted."""
    found = {1}
    for p in primes:
        for n in sorted(found):
            m = n * p
            while m <= limit:
                found.add(m)
                m *= p
    return sorted(n for n in found if n <= limit)


def mobius(n: int) -> int:
    """Moebius function by trial factorization."""
    if n < 1:
        raise DomainError("mobius is defined on positive integers")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1 if d == 2 else 2
    if n > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# truncated p-adic integers
# ---------------------------------------------------------------------------

def fraction_mod(x: Rational, p: int, precision: int) -> int:
    """Reduce a p-integral rational modulo p**precision."""
    x = Fraction(x)
    modulus = p ** precision
    if x.denominator % p == 0:
        raise NotPLocalError("%s has %d in its denominator" % (x, p))
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


class PadicInt:
    """A p-adic integer known modulo p**precision.

    The residue is kept in [0, p**precision).  Binary operations align to the
    smaller precision of the two operands; division by p is exact and costs
    one digit of precision.
    """

    __slots__ = ("p", "precision", "residue")

    def __init__(self, p: int, precision: int, value: Rational):
        if precision < 1:
            raise DomainError("precision must be at least 1")
        self.p = p
        self.precision = precision
        if isinstance(value, Fraction):
            self.residue = fraction_mod(value, p, precision)
        else:
            self.residue = int(value) % p ** precision

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def _align(self, other: "PadicInt"):
        if not isinstance(other, PadicInt):
            other = PadicInt(self.p, self.precision, other)
        if other.p != self.p:
            raise DomainError("mixed primes %d and %d" % (self.p, other.p))
        n = min(self.precision, other.precision)
        return n, self.residue, other.residue

    def __add__(self, other):
        n, a, b = self._align(other)
        return PadicInt(self.p, n, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        n, a, b = self._align(other)
        return PadicInt(self.p, n, a - b)

    def __rsub__(self, other):
        n, a, b = self._align(other)
        return PadicInt(self.p, n, b - a)

    def __mul__(self, other):
        n, a, b = self._align(other)
        return PadicInt(self.p, n, a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.p, self.precision, -self.residue)

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        return PadicInt(self.p, self.precision, pow(self.residue, k, self.modulus))

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.precision, other)
        if not isinstance(other, PadicInt) or other.p != self.p:
            return NotImplemented
        n = min(self.precision, other.precision)
        q = self.p ** n
        return self.residue % q == other.residue % q

    __hash__ = None  # mutable-free but equality is precision-relative

    def __repr__(self):
        return "PadicInt(%d^%d: %d)" % (self.p, self.precision, self.residue)

    def is_zero(self) -> bool:
        return self.residue == 0

    def valuation(self) -> Union[int, float]:
        """min(vp(residue), precision); infinity when indistinguishable from 0."""
        if self.residue == 0:
            return math.inf
        return min(vp(self.residue, self.p), self.precision)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def unit_inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise NonUnitError("%r is not a unit" % self)
        return PadicInt(self.p, self.precision, pow(self.residue, -1, self.modulus))

    def divide_by_prime_power(self, s: int) -> "PadicInt":
        """Exact division by p**s; lowers the precision by s."""
        if s == 0:
            return self
        ps = self.p ** s
        if self.residue % ps != 0:
            raise ExactDivisionError("%r is not divisible by %d^%d" % (self, self.p, s))
        if self.precision - s < 1:
            raise DomainError("no precision left after dividing by %d^%d" % (self.p, s))
        return PadicInt(self.p, self.precision - s, self.residue // ps)

    def reduce_to(self, precision: int) -> "PadicInt":
        if precision > self.precision:
            raise DomainError("cannot gain precision")
        return PadicInt(self.p, precision, self.residue)

    def times_rational(self, c: Rational) -> "PadicInt":
        """Multiply by a rational whose denominator is a p-unit."""
        return PadicInt(self.p, self.precision,
                        self.residue * fraction_mod(c, self.p, self.precision))


def padic_log(u: PadicInt) -> PadicInt:
    """Logarithm of a 1-unit: log(u) = sum (-1)^(n-1) (u-1)^n / n.

    Requires u = 1 (mod p).  Partial sums are accumulated as exact rationals
    (so division by n is exact) and reduced once at the end; the tail is cut
    when every remaining term vanishes modulo p**precision.
    """
    p, prec = u.p, u.precision
    if u.residue % p != 1 % p:
        raise DomainError("padic_log needs a 1-unit, got %r" % u)
    t = u.residue - 1
    if t == 0:
        return PadicInt(p, prec, 0)
    total = Fraction(0)
    tn = 1
    n = 1
    while True:
        # terms from n onward have valuation >= n - floor(log_p n) > prec: stop
        if n - _ilog(n, p) > prec:
            break
        tn *= t
        total += Fraction((-1) ** (n - 1) * tn, n)
        n += 1
    return PadicInt(p, prec, total)


def _ilog(n: int, p: int) -> int:
    """floor(log_p(n)) for n >= 1."""
    v = 0
    while n >= p:
        n //= p
        v += 1
    return v


def hensel_quadratic_root(a: Rational, p: int, precision: int) -> PadicInt:
    """The root of x^2 - a x + p lying in p Z_p, to the requested precision.

    Requires a to be a p-unit (then the two roots split as one unit root and
    one root divisible by p, and Newton iteration from x = 0 converges).
    """
    a0 = fraction_mod(a, p, precision)
    if a0 % p == 0:
        raise NonUnitError("x^2 - %s x + %d has no simple root at x = 0 (mod %d)"
                           % (a, p, p))
    x = 0
    prec = 1
    while prec < precision:
        prec = min(2 * prec, precision)
        modulus = p ** prec
        fx = (x * x - a0 * x + p) % modulus
        dfx = (2 * x - a0) % modulus
        x = (x - fx * pow(dfx, -1, modulus)) % modulus
    root = PadicInt(p, precision, x)
    if root.residue % p != 0:
        raise ExactDivisionError("Newton iteration left the small root branch")
    return root


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------

def rational_reconstruct(components: Sequence[PadicInt], bound: int) -> Optional[Fraction]:
    """Recover a small rational from its residues at several primes.

    Combines the residues by CRT to a single residue r mod M, then walks the
    extended-Euclid remainder sequence of (M, r); each step yields a pair
    (n, d) with n = d*r (mod M).  Among the pairs with |n| <= bound,
    0 < |d| <= bound, gcd(n, d) = 1 and d a unit at every component prime, the
    one of smallest height max(|n|, |d|) is returned; None if there is none.
    """
    if bound < 1:
        raise DomainError("bound must be positive")
    seen = set()
    modulus = 1
    value = 0
    for c in components:
        if c.p in seen:
            raise DomainError("duplicate prime %d in components" % c.p)
        seen.add(c.p)
        m = c.modulus
        # CRT: value mod modulus, c.residue mod m
        g = pow(modulus, -1, m)
        value = value + modulus * ((c.residue - value) * g % m)
        modulus *= m
    value %= modulus
    if value == 0:
        return Fraction(0)

    primes = [c.p for c in components]
    best = None
    r0, r1 = modulus, value
    t0, t1 = 0, 1
    while r1 != 0:
        n, d = r1, t1
        if d < 0:
            n, d = -n, -d
        if (d != 0 and abs(n) <= bound and d <= bound and math.gcd(n, d) == 1
                and all(d % p for p in primes)):
            height = max(abs(n), d)
            if best is None or height < best[0]:
                best = (height, Fraction(n, d))
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    return None if best is None else best[1]
