"""Weierstrass curves: exact group law, point counts, L-series coefficients.

Curves are given by y^2 + c1 xy + c3 y = x^3 + c2 x^2 + c4 x + c6 with
rational coefficients.  Point arithmetic is generic over the coordinate
field — exact rationals or cyclotomic elements — because the evaluation
pipeline scales points *exactly* over the global field before anything is
reduced p-adically.  Counting over F_p is done by quadratic character sums
(completing the square is legitimate for odd p); the test suite recounts by
brute enumeration.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Optional, Union

from .cyclotomic import CyclotomicElement
from .exact_arith import DomainError, Rational, fraction_mod, is_p_local, is_prime, vp

Coord = Union[Fraction, CyclotomicElement]

NAMED_CURVES = {
    "11a": (0, -1, 1, 0, 0),
    "37a": (0, 0, 1, -1, 0),
}


class SingularCurveError(DomainError):
    """The Weierstrass equation defines a singular (non-elliptic) curve."""


class BadReductionError(DomainError):
    """An operation required good (or ordinary) reduction at p."""


class WeierstrassCurve:
    """An elliptic curve y^2 + c1 xy + c3 y = x^3 + c2 x^2 + c4 x + c6 over Q."""

    __slots__ = ("c1", "c2", "c3", "c4", "c6")

    def __init__(self, c1, c2, c3, c4, c6):
        self.c1, self.c2, self.c3, self.c4, self.c6 = (
            Fraction(c1), Fraction(c2), Fraction(c3), Fraction(c4), Fraction(c6))
        if self.discriminant() == 0:
            raise SingularCurveError("discriminant vanishes")

    @classmethod
    def from_label(cls, label: str) -> "WeierstrassCurve":
        if label not in NAMED_CURVES:
            raise DomainError("unknown curve label %r (have %s)"
                              % (label, sorted(NAMED_CURVES)))
        return cls(*NAMED_CURVES[label])

    def coefficients(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c6)

    def b_invariants(self):
        c1, c2, c3, c4, c6 = self.coefficients()
        b2 = c1 * c1 + 4 * c2
        b4 = 2 * c4 + c1 * c3
        b6 = c3 * c3 + 4 * c6
        b8 = (c1 * c1 * c6 + 4 * c2 * c6 - c1 * c3 * c4
              + c2 * c3 * c3 - c4 * c4)
        return b2, b4, b6, b8

    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve)
                and self.coefficients() == other.coefficients())

    def __repr__(self):
        return "WeierstrassCurve%s" % (tuple(map(str, self.coefficients())),)

    # -- reduction ---------------------------------------------------------
    def has_integral_reduction(self, p: int) -> bool:
        return all(is_p_local(c, (p,)) for c in self.coefficients())

    def is_good(self, p: int) -> bool:
        if not self.has_integral_reduction(p):
            raise DomainError("curve is not p-integral at %d" % p)
        return vp(self.discriminant(), p) == 0

    # -- points -------------------------------------------------------------
    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def point(self, x, y) -> "CurvePoint":
        return CurvePoint(self, x, y)

    def equation_value(self, x: Coord, y: Coord):
        c1, c2, c3, c4, c6 = self.coefficients()
        return (y * y + c1 * x * y + c3 * y
                - (x ** 3 + c2 * x * x + c4 * x + c6))


class CurvePoint:
    """A point on a Weierstrass curve; coordinates exact (Q or Q(zeta_m))."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x, y):
        self.curve = curve
        if x is None:
            self.x = self.y = None
            return
        if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
            x, y = Fraction(x), Fraction(y)
        self.x, self.y = x, y
        if curve.equation_value(x, y) != 0:
            raise DomainError("(%s, %s) does not satisfy the curve equation" % (x, y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint) or self.curve != other.curve:
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    __hash__ = None

    def __neg__(self):
        if self.is_infinity:
            return self
        c = self.curve
        return CurvePoint(c, self.x, -self.y - c.c1 * self.x - c.c3)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.curve != other.curve:
            raise DomainError("points on different curves")
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        c = self.curve
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y2 == -y1 - c.c1 * x1 - c.c3:
                return c.infinity()
            # tangent line (the vertical case was just handled)
            den = 2 * y1 + c.c1 * x1 + c.c3
            lam = (3 * x1 * x1 + 2 * c.c2 * x1 + c.c4 - c.c1 * y1) / den
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam + c.c1 * lam - c.c2 - x1 - x2
        y3 = lam * (x1 - x3) - y1 - c.c1 * x3 - c.c3
        return CurvePoint(c, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "CurvePoint":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-k) * (-self)
        result = self.curve.infinity()
        base = self
        while k:
            if k & 1:
                result = result + base
            base = base + base
            k >>= 1
        return result

    def order(self, bound: int = 16) -> Optional[int]:
        """Smallest k <= bound with k*self = O, or None (heuristic probe)."""
        acc = self
        for k in range(1, bound + 1):
            if acc.is_infinity:
                return k
            acc = acc + self
        return None

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return "CurvePoint(%s, %s)" % (self.x, self.y)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _affine_count(curve: WeierstrassCurve, p: int) -> int:
    """Number of affine F_p-points on the (possibly singular) reduction."""
    cs = [fraction_mod(c, p, 1) for c in curve.coefficients()]
    c1, c2, c3, c4, c6 = cs
    if p == 2:
        return sum(1 for x in range(2) for y in range(2)
                   if (y * y + c1 * x * y + c3 * y
                       - x ** 3 - c2 * x * x - c4 * x - c6) % 2 == 0)
    # complete the square: (2y + c1 x + c3)^2 = (c1 x + c3)^2 + 4 f(x)
    total = 0
    for x in range(p):
        d = ((c1 * x + c3) ** 2 + 4 * (x ** 3 + c2 * x * x + c4 * x + c6)) % p
        total += 1 + _legendre(d, p)
    return total


def _singular_count(curve: WeierstrassCurve, p: int) -> int:
    """Number of singular F_p-points of the reduction (0 for good p)."""
    cs = [fraction_mod(c, p, 1) for c in curve.coefficients()]
    c1, c2, c3, c4, c6 = cs
    found = 0
    if p == 2:
        for x in range(2):
            for y in range(2):
                on = (y * y + c1 * x * y + c3 * y - x ** 3 - c2 * x * x
                      - c4 * x - c6) % 2 == 0
                dx = (c1 * y - 3 * x * x - 2 * c2 * x - c4) % 2 == 0
                dy = (2 * y + c1 * x + c3) % 2 == 0
                if on and dx and dy:
                    found += 1
        return found
    inv2 = pow(2, -1, p)
    for x in range(p):
        y = (-(c1 * x + c3) * inv2) % p          # forces dF/dy = 0
        on = (y * y + c1 * x * y + c3 * y - x ** 3 - c2 * x * x
              - c4 * x - c6) % p == 0
        dx = (c1 * y - 3 * x * x - 2 * c2 * x - c4) % p == 0
        if on and dx:
            found += 1
    return found


def count_points_ap(curve: WeierstrassCurve, p: int) -> int:
    """The L-series coefficient a_p.

    Good reduction: a_p = p + 1 - #E(F_p).  Bad reduction: a_p = p - #E_ns(F_p)
    with E_ns the smooth locus (including infinity), which lands in {-1, 0, 1}
    for split/additive/non-split types.
    """
    if not is_prime(p):
        raise DomainError("%d is not prime" % p)
    if not curve.has_integral_reduction(p):
        raise DomainError("curve is not p-integral at %d" % p)
    affine = _affine_count(curve, p)
    if vp(curve.discriminant(), p) == 0:
        return p + 1 - (affine + 1)
    smooth = affine - _singular_count(curve, p) + 1
    ap = p - smooth
    if ap not in (-1, 0, 1):
        raise DomainError("bad-reduction count out of range at %d" % p)
    return ap


def is_ordinary(curve: WeierstrassCurve, p: int) -> bool:
    """Good reduction with a_p not divisible by p."""
    if not curve.is_good(p):
        return False
    return count_points_ap(curve, p) % p != 0


def frobenius_trace_power(ap: int, p: int, f: int) -> int:
    """alpha^f + beta^f for the Frobenius roots of x^2 - ap x + p."""
    s_prev, s = 2, ap
    if f == 0:
        return 2
    for _ in range(f - 1):
        s_prev, s = s, ap * s - p * s_prev
    return s


def reduction_group_order(curve: WeierstrassCurve, p: int, m: int = 1) -> int:
    """Order of the points of E over (Z[zeta_m]/p), a product of F_{p^f} fields.

    f is the multiplicative order of p mod m and there are phi(m)/f factors;
    each contributes #E(F_{p^f}) = p^f + 1 - (alpha^f + beta^f).
    """
    if math.gcd(p, m) != 1:
        raise DomainError("%d is not coprime to %d" % (p, m))
    if not curve.is_good(p):
        raise BadReductionError("bad reduction at %d" % p)
    from .cyclotomic import euler_phi
    f = 1
    q = p % m if m > 1 else 0
    if m > 1:
        acc = q
        while acc != 1 % m:
            acc = acc * q % m
            f += 1
    g = euler_phi(m) // f if m > 1 else 1
    ap = count_points_ap(curve, p)
    per_factor = p ** f + 1 - frobenius_trace_power(ap, p, f)
    return per_factor ** g


def lseries_coefficients(curve: WeierstrassCurve, bound: int) -> Dict[int, int]:
    """a_n for 1 <= n <= bound: multiplicative, with the good-prime recursion
    a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}} and a_{p^k} = a_p^k at bad primes.
    """
    if bound < 1:
        raise DomainError("bound must be positive")
    a = {1: 1}
    for p in range(2, bound + 1):
        if not is_prime(p):
            continue
        ap = count_points_ap(curve, p)
        good = vp(curve.discriminant(), p) == 0
        powers = {1: 1, p: ap} if p <= bound else {1: 1}
        pk_prev, pk = 1, p
        while pk * p <= bound:
            nxt = ap * powers[pk] - (p * powers[pk_prev] if good else 0)
            powers[pk * p] = nxt
            pk_prev, pk = pk, pk * p
        for q, aq in powers.items():
            if q == 1:
                continue
            for n in list(a):
                if n * q <= bound and n % p != 0:
                    a[n * q] = a[n] * aq
    return {n: a[n] for n in sorted(a)}


# ---------------------------------------------------------------------------
# the formal parameter of a point in the kernel of reduction
# ---------------------------------------------------------------------------

def _coefficient_valuations(x: Coord, p: int):
    if isinstance(x, CyclotomicElement):
        return [vp(c, p) for c in x.coeffs]
    return [vp(Fraction(x), p)]


def to_formal_parameter(Q: CurvePoint, p: int) -> Coord:
    """t = x/(2y) for a point reducing to the identity mod p (exact value).

    Such a point has x, y with negative p-valuation, and t lands in p A_(p);
    the divisibility is verified coefficientwise (p is unramified in the
    cyclotomic coordinate fields we admit).  Raises when the point does not
    reduce to the identity at every prime above p.
    """
    if Q.is_infinity:
        return Fraction(0)
    if Q.y == 0 or (2 * Q.y + Q.curve.c1 * Q.x + Q.curve.c3) == 0:
        raise DomainError("a 2-torsion point never reduces to the identity (p odd)")
    t = Q.x / (2 * Q.y)
    vals = _coefficient_valuations(t, p)
    if all(v >= 1 for v in vals):
        return t
    if all(v >= 0 for v in _coefficient_valuations(Q.x, p)):
        raise DomainError("point does not reduce to the identity mod %d" % p)
    raise DomainError("point has mixed reduction above %d" % p)
