"""Sparse exact multivariate polynomials.

Monomials are stored as sorted tuples of (variable, exponent) pairs mapping to
Fraction coefficients; variables are arbitrary (mutually sortable) hashable
keys, which lets the jet-ring module use structured names like
("x", (1, 0)) without a registry.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Tuple

Monomial = Tuple[Tuple[object, int], ...]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class MPoly:
    """A polynomial over Q in named variables, held sparsely."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[Monomial, Fraction] = None):
        self.coeffs: Dict[Monomial, Fraction] = {}
        if coeffs:
            for mono, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[mono] = c

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def const(cls, c) -> "MPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def variable(cls, name) -> "MPoly":
        return cls({((name, 1),): Fraction(1)})

    # -- ring structure -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly()
            return MPoly({m: c * other for m, c in self.coeffs.items()})
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                mono = _mono_mul(m1, m2)
                s = out.get(mono, Fraction(0)) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, c):
        c = Fraction(c)
        return MPoly({m: co / c for m, co in self.coeffs.items()})

    @staticmethod
    def _coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        return MPoly.const(x)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.coeffs == other.coeffs

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    # -- structure ------------------------------------------------------
    def variables(self) -> set:
        out = set()
        for mono in self.coeffs:
            out.update(v for v, _ in mono)
        return out

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.coeffs), default=0)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.coeffs.get(tuple(sorted(mono)), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def denominators_coprime_to(self, primes: Iterable[int]) -> bool:
        ps = tuple(primes)
        return all(all(c.denominator % p for p in ps) for c in self.coeffs.values())

    def terms(self):
        """Deterministic iteration: graded, then by monomial key."""
        return sorted(self.coeffs.items(),
                      key=lambda kv: (sum(e for _, e in kv[0]), kv[0]))

    # -- substitution ---------------------------------------------------
    def map_variables(self, fn: Callable) -> "MPoly":
        """Rename every variable through fn (must stay injective on support)."""
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self.coeffs.items():
            new = tuple(sorted((fn(v), e) for v, e in mono))
            if new in out:
                raise ValueError("variable renaming collided on %r" % (new,))
            out[new] = c
        return MPoly(out)

    def substitute(self, assignment: Dict) -> "MPoly":
        """Replace variables by polynomials/constants (missing ones stay)."""
        powers: Dict = {}   # (variable, exponent) -> cached power

        def power(v, e):
            if (v, e) not in powers:
                powers[(v, e)] = MPoly._coerce(assignment[v]) ** e
            return powers[(v, e)]

        result = MPoly()
        for mono, c in self.coeffs.items():
            term = MPoly.const(c)
            for v, e in mono:
                if v in assignment:
                    term = term * power(v, e)
                else:
                    term = term * MPoly({((v, e),): Fraction(1)})
            result = result + term
        return result

    def evaluate(self, assignment: Dict):
        """Evaluate with values from any commutative ring (needs +, *, **).

        Every variable must be assigned.  Fraction coefficients multiply the
        ring values from the left, so the ring should accept int/Fraction
        scalars in __rmul__.
        """
        powers: Dict = {}
        total = None
        for mono, c in self.coeffs.items():
            term = None
            for v, e in mono:
                if (v, e) not in powers:
                    powers[(v, e)] = assignment[v] ** e
                f = powers[(v, e)]
                term = f if term is None else term * f
            term = c if term is None else c * term
            total = term if total is None else total + term
        return 0 if total is None else total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for mono, c in self.terms():
            vars_part = "*".join(
                "%s^%d" % (v, e) if e > 1 else str(v) for v, e in mono)
            if not vars_part:
                bits.append(str(c))
            elif c == 1:
                bits.append(vars_part)
            elif c == -1:
                bits.append("-" + vars_part)
            else:
                bits.append("%s*%s" % (c, vars_part))
        return " + ".join(bits).replace("+ -", "- ")
