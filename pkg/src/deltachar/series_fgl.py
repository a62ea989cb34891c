"""Truncated power series with exact coefficients, and formal group laws.

Series are sparse dicts {exponent tuple: Fraction} kept through a stated
total degree (`order`, inclusive).  On top of them sit the three formal
groups the characters live on: the additive and multiplicative groups and
the formal group of a Weierstrass curve in the uniformizer T = x/(2y), whose
logarithm is produced from the invariant differential and normalized to
l(T) = T + O(T^2).

The "star" action evaluates a symbol sum_n c_n phi_n on a series by
phi_n * l = l(T^n).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact_arith import DomainError

Expt = Tuple[int, ...]


class TruncSeries:
    """A power series known through total degree `order` (inclusive)."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Optional[Mapping] = None):
        if nvars < 1 or order < 0:
            raise DomainError("bad series shape")
        self.nvars = nvars
        self.order = order
        self.coeffs: Dict[Expt, Fraction] = {}
        if coeffs:
            for exps, c in coeffs.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise DomainError("bad exponent %r" % (exps,))
                if sum(exps) > order:
                    continue
                c = Fraction(c)
                if c:
                    self.coeffs[exps] = c

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, order: int) -> "TruncSeries":
        return cls(nvars, order)

    @classmethod
    def const(cls, c, nvars: int, order: int) -> "TruncSeries":
        return cls(nvars, order, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, order: int, index: int = 0, nvars: int = 1) -> "TruncSeries":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, order, {tuple(exps): Fraction(1)})

    # -- ring ops -----------------------------------------------------------
    def _check(self, other: "TruncSeries") -> int:
        if self.nvars != other.nvars:
            raise DomainError("mixed variable counts")
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.const(other, self.nvars, self.order)
        n = self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncSeries(self.nvars, n, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.nvars, self.order,
                           {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.const(other, self.nvars, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return TruncSeries(self.nvars, self.order)
            return TruncSeries(self.nvars, self.order,
                               {e: c * other for e, c in self.coeffs.items()})
        n = self._check(other)
        out: Dict[Expt, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            if d1 > n:
                continue
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > n:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TruncSeries(self.nvars, n, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return TruncSeries(self.nvars, self.order,
                           {e: co / c for e, co in self.coeffs.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative series power")
        result = TruncSeries.const(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.const(other, self.nvars, self.order)
        if not isinstance(other, TruncSeries) or self.nvars != other.nvars:
            return NotImplemented
        n = min(self.order, other.order)
        a = {e: c for e, c in self.coeffs.items() if sum(e) <= n}
        b = {e: c for e, c in other.coeffs.items() if sum(e) <= n}
        return a == b

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    # -- accessors ------------------------------------------------------------
    def coefficient(self, *exps: int) -> Fraction:
        if len(exps) == 1 and isinstance(exps[0], (tuple, list)):
            exps = tuple(exps[0])
        return self.coeffs.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise DomainError("cannot extend a truncated series")
        return TruncSeries(self.nvars, order, self.coeffs)

    def with_order(self, order: int) -> "TruncSeries":
        """Reinterpret at a higher order (missing coefficients read as 0).

        Only meaningful inside iterations that are about to correct the high
        part (Newton); not for honest data.
        """
        return TruncSeries(self.nvars, order, self.coeffs)

    def denominators_coprime_to(self, primes) -> bool:
        ps = tuple(primes)
        return all(all(c.denominator % p for p in ps)
                   for c in self.coeffs.values())

    def terms(self) -> List[Tuple[Expt, Fraction]]:
        """Graded-lexicographic, deterministic."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def to_json_dict(self) -> dict:
        return {
            "vars": self.nvars,
            "order": self.order,
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "TruncSeries":
        coeffs = {}
        for t in data["terms"]:
            coeffs[tuple(t["exp"])] = Fraction(int(t["num"]), int(t["den"]))
        return cls(int(data["vars"]), int(data["order"]), coeffs)

    # -- calculus ---------------------------------------------------------
    def derivative(self) -> "TruncSeries":
        if self.nvars != 1:
            raise DomainError("derivative is for univariate series")
        out = {}
        for (n,), c in self.coeffs.items():
            if n:
                out[(n - 1,)] = c * n
        return TruncSeries(1, max(self.order - 1, 0), out)

    def reciprocal(self) -> "TruncSeries":
        """1/f for f with invertible constant term, by Newton doubling."""
        c0 = self.constant_term()
        if not c0:
            raise DomainError("series has no constant term to invert")
        r = TruncSeries.const(Fraction(1) / c0, self.nvars, 0)
        while r.order < self.order:
            n = min(2 * r.order + 1, self.order)
            r = r.with_order(n)
            r = r * (2 - self.truncate(n) * r)
        return r

    def compose(self, args: Sequence["TruncSeries"]) -> "TruncSeries":
        """Substitute args[i] for the i-th variable (constant terms must vanish)."""
        if len(args) != self.nvars:
            raise DomainError("need %d substitution arguments" % self.nvars)
        for g in args:
            if g.constant_term():
                raise DomainError("substituted series must vanish at the origin")
        nvars = args[0].nvars
        order = min([self.order] + [g.order for g in args])
        if self.nvars == 1:
            g = args[0].truncate(order) if args[0].order > order else args[0]
            acc = TruncSeries.zero(nvars, order)
            for k in range(order, 0, -1):
                acc = acc * g + TruncSeries.const(self.coefficient((k,)), nvars, order)
            acc = acc * g  # no constant term in self beyond c0
            c0 = self.constant_term()
            if c0:
                acc = acc + c0
            return acc
        # multivariate: evaluate monomials with cached powers
        pows: Dict[Tuple[int, int], TruncSeries] = {}

        def power(i: int, e: int) -> TruncSeries:
            key = (i, e)
            if key not in pows:
                pows[key] = args[i].truncate(min(args[i].order, order)) ** e \
                    if e else TruncSeries.const(1, nvars, order)
            return pows[key]

        total = TruncSeries.zero(nvars, order)
        for exps, c in self.coeffs.items():
            if sum(exps) > order:
                continue
            term = TruncSeries.const(c, nvars, order)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def compositional_inverse(self) -> "TruncSeries":
        """g with f(g) = T, for univariate f = c1 T + ... with c1 != 0."""
        if self.nvars != 1:
            raise DomainError("inversion is for univariate series")
        if self.constant_term():
            raise DomainError("series must vanish at the origin")
        c1 = self.coefficient(1)
        if not c1:
            raise DomainError("series must have an invertible linear term")
        t = TruncSeries.var(self.order)
        g = TruncSeries(1, 1, {(1,): Fraction(1) / c1})
        while g.order < self.order:
            n = min(2 * g.order + 1, self.order)
            g = g.with_order(n)
            fg = self.truncate(n).compose([g])
            dfg = self.derivative().with_order(n - 1).compose([g.truncate(n - 1)])
            g = g - (fg - t.truncate(n)) * dfg.reciprocal().with_order(n)
        return g

    def embed(self, nvars: int, index: int) -> "TruncSeries":
        """View a univariate series as a series in variable `index` of nvars."""
        if self.nvars != 1:
            raise DomainError("embed expects a univariate series")
        out = {}
        for (n,), c in self.coeffs.items():
            exps = [0] * nvars
            exps[index] = n
            out[tuple(exps)] = c
        return TruncSeries(nvars, self.order, out)

    def __repr__(self):
        if not self.coeffs:
            return "TruncSeries(0 + O(deg %d))" % (self.order + 1)
        names = ("T",) if self.nvars == 1 else tuple(
            "T%d" % (i + 1) for i in range(self.nvars))
        bits = []
        for e, c in self.terms()[:12]:
            mono = "*".join("%s^%d" % (names[i], k) if k > 1 else names[i]
                            for i, k in enumerate(e) if k)
            bits.append("%s%s" % (c, "*" + mono if mono else ""))
        more = " + ..." if len(self.coeffs) > 12 else ""
        return "TruncSeries(%s%s + O(deg %d))" % (" + ".join(bits), more, self.order + 1)


# ---------------------------------------------------------------------------
# star action of Frobenius symbols
# ---------------------------------------------------------------------------

def star_apply(symbol: Mapping[int, Fraction], f: TruncSeries) -> TruncSeries:
    """Apply sum_n c_n phi_n to a univariate series: phi_n * T^j = T^(jn)."""
    if f.nvars != 1:
        raise DomainError("the star action is defined on univariate series")
    out: Dict[Expt, Fraction] = {}
    for n, cn in symbol.items():
        if n < 1:
            raise DomainError("symbol indices must be positive")
        if not cn:
            continue
        for (j,), c in f.coeffs.items():
            jn = j * n
            if jn > f.order:
                continue
            s = out.get((jn,), Fraction(0)) + Fraction(cn) * c
            if s:
                out[(jn,)] = s
            else:
                out.pop((jn,), None)
    return TruncSeries(1, f.order, out)


# ---------------------------------------------------------------------------
# formal group laws
# ---------------------------------------------------------------------------

class FormalGroupLaw:
    """A one-parameter formal group with its logarithm and exponential.

    `log` is normalized to T + O(T^2); `exp` is its compositional inverse and
    is computed lazily, as is the two-variable law  G(T1,T2) =
    exp(log T1 + log T2)  (for the additive and multiplicative groups the law
    is written down exactly instead).
    """

    def __init__(self, kind: str, order: int, log: TruncSeries, curve=None):
        self.kind = kind
        self.order = order
        self.log = log
        self.curve = curve
        self._exp: Optional[TruncSeries] = None
        self._laws: Dict[int, TruncSeries] = {}

    def exp(self, order: Optional[int] = None) -> TruncSeries:
        n = self.order if order is None else order
        if n > self.order:
            raise DomainError("group was built at order %d" % self.order)
        if self._exp is None or self._exp.order < n:
            self._exp = self.log.truncate(n).compositional_inverse()
        return self._exp.truncate(n)

    def law(self, order: Optional[int] = None) -> TruncSeries:
        n = self.order if order is None else order
        if n > self.order:
            raise DomainError("group was built at order %d" % self.order)
        if n not in self._laws:
            t1 = TruncSeries.var(n, 0, 2)
            t2 = TruncSeries.var(n, 1, 2)
            if self.kind == "additive":
                law = t1 + t2
            elif self.kind == "multiplicative":
                law = t1 + t2 + t1 * t2
            else:
                # G = exp(log T1 + log T2)
                both = (self.log.truncate(n).compose([t1])
                        + self.log.truncate(n).compose([t2]))
                law = self.exp(n).compose([both])
            self._laws[n] = law
        return self._laws[n]

    def add(self, f: TruncSeries, g: TruncSeries) -> TruncSeries:
        """Formal sum of two series points (no constant terms)."""
        n = min(f.order, g.order, self.order)
        return self.law(n).compose([f.truncate(n), g.truncate(n)])


def additive_group(order: int) -> FormalGroupLaw:
    return FormalGroupLaw("additive", order, TruncSeries.var(order))


def gm_log(order: int) -> TruncSeries:
    return TruncSeries(1, order, {(n,): Fraction((-1) ** (n - 1), n)
                                  for n in range(1, order + 1)})


def gm_group(order: int) -> FormalGroupLaw:
    """The multiplicative formal group: law T1+T2+T1T2, log = log(1+T)."""
    return FormalGroupLaw("multiplicative", order, gm_log(order))


def weierstrass_v_series(curve, order: int) -> TruncSeries:
    """The unit series v(T) with x = v/(4T^2), y = v/(8T^3) on the curve.

    Solves   v^2(1 + 2 c1 T) + 8 c3 T^3 v
               = v^3 + 4 c2 T^2 v^2 + 16 c4 T^4 v + 64 c6 T^6,
    (the Weierstrass equation pulled through T = x/(2y)) by Newton iteration
    starting from v = 1.
    """
    c1, c2, c3, c4, c6 = (Fraction(curve.c1), Fraction(curve.c2),
                          Fraction(curve.c3), Fraction(curve.c4),
                          Fraction(curve.c6))

    def phi_and_dphi(v: TruncSeries, n: int):
        t = TruncSeries.var(n)
        t2, t3, t4, t6 = t * t, t ** 3, t ** 4, t ** 6
        phi = (v * v * (1 + 2 * c1 * t) + 8 * c3 * t3 * v - v ** 3
               - 4 * c2 * t2 * v * v - 16 * c4 * t4 * v - 64 * c6 * t6)
        dphi = (2 * v * (1 + 2 * c1 * t) + 8 * c3 * t3 - 3 * v * v
                - 8 * c2 * t2 * v - 16 * c4 * t4)
        return phi, dphi

    v = TruncSeries.const(1, 1, 0)
    while v.order < order:
        n = min(2 * v.order + 1, order)
        v = v.with_order(n)
        phi, dphi = phi_and_dphi(v, n)
        v = v - phi * dphi.reciprocal()
    return v


def elliptic_log(curve, order: int) -> TruncSeries:
    """The logarithm of the curve's formal group in T = x/(2y), with l'(0)=1.

    The invariant differential dx/(2y + c1 x + c3) expands as
    (T v' - 2v) / (v(1 + c1 T) + 4 c3 T^3) dT = sum beta_n T^(n-1) dT; the
    raw leading value is beta_1 = -2 (a unit away from 2), and the series is
    rescaled by 1/beta_1 so that l(T) = T + O(T^2).
    """
    v = weierstrass_v_series(curve, order)
    t = TruncSeries.var(order)
    c1, c3 = Fraction(curve.c1), Fraction(curve.c3)
    num = t * v.derivative().with_order(order) - 2 * v
    den = v * (1 + c1 * t) + 4 * c3 * t ** 3
    omega = num * den.reciprocal()          # sum beta_n T^(n-1)
    beta1 = omega.constant_term()
    out = {}
    for (k,), c in omega.coeffs.items():
        n = k + 1
        if n <= order:
            out[(n,)] = c / beta1 / n
    return TruncSeries(1, order, out)


def elliptic_group(curve, order: int) -> FormalGroupLaw:
    """Formal group of a Weierstrass curve in the parameter T = x/(2y)."""
    return FormalGroupLaw("weierstrass", order, elliptic_log(curve, order),
                          curve=curve)
