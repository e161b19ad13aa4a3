"""Real algebraic numbers as (minimal integer polynomial, isolating interval).

Arithmetic forms a resultant whose roots include the exact result, factors
it over Q, and bisects the operand intervals until exactly one irreducible
factor keeps exactly one root inside the combined interval.
"""
from __future__ import annotations

from fractions import Fraction

import sympy

from . import upoly

MAX_BISECTIONS = 128

_T, _XS = sympy.symbols("t x")


class RealAlgebraic:
    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly, lo, hi, check: bool = True):
        p = upoly.primitive(poly)
        if not p or len(p) < 2:
            raise ValueError("polynomial must have positive degree")
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise ValueError("empty isolating interval")
        if len(p) == 2:
            root = Fraction(-p[0], p[1])
            if not lo <= root <= hi:
                raise ValueError("rational root outside interval")
            lo = hi = root
        elif check and upoly.count_closed(p, lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one root")
        self.poly = tuple(p)
        self.lo = lo
        self.hi = hi

    # --- constructors
    @classmethod
    def rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)
        return cls((-q.numerator, q.denominator), q, q, check=False)

    @classmethod
    def sqrt(cls, q) -> "RealAlgebraic":
        """Positive square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        n, d = q.numerator, q.denominator
        r = sympy.integer_nthroot(n * d, 2)
        if r[1]:
            return cls.rational(Fraction(r[0], d))
        hi = Fraction(r[0] + 1, d)
        return cls.from_poly_near((-n, 0, d), float(q) ** 0.5, Fraction(r[0], d), hi)

    @classmethod
    def from_poly_near(cls, poly, approx: float, lo=None, hi=None) -> "RealAlgebraic":
        """Root of poly nearest to approx, carried by its irreducible factor."""
        if lo is not None:
            for f, _ in upoly.factor_integer(poly):
                if upoly.count_closed(f, Fraction(lo), Fraction(hi)) == 1:
                    return cls(f, lo, hi)
        best = None
        for f, _ in upoly.factor_integer(poly):
            for a, b in upoly.isolate_roots(f):
                d = _dist(a, b, approx)
                if best is None or d < best[0]:
                    best = (d, f, a, b)
        if best is None:
            raise ValueError("polynomial has no real roots")
        _, f, a, b = best
        return cls(f, a, b)

    # --- basic queries
    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def is_rational(self) -> bool:
        return len(self.poly) == 2

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(-self.poly[0], self.poly[1])

    def is_zero(self) -> bool:
        return self.poly == (0, 1)

    def refine(self) -> "RealAlgebraic":
        """Halve the isolating interval."""
        if self.is_rational():
            return self
        m = (self.lo + self.hi) / 2
        if upoly.sign_at(self.poly, m) == 0:
            raise ValueError("irreducible polynomial with rational root")
        if upoly.sturm_count(self.poly, self.lo, m) == 1:
            return RealAlgebraic(self.poly, self.lo, m, check=False)
        return RealAlgebraic(self.poly, m, self.hi, check=False)

    def refined_to(self, width) -> "RealAlgebraic":
        r = self
        width = Fraction(width)
        while r.hi - r.lo > width:
            r = r.refine()
        return r

    def valid(self) -> bool:
        if self.is_rational():
            return self.lo == self.hi == self.as_fraction()
        irreducible = len(upoly.factor_integer(self.poly)) == 1 and upoly.factor_integer(self.poly)[0][1] == 1
        return irreducible and upoly.count_closed(self.poly, self.lo, self.hi) == 1

    def __float__(self):
        r = self.refined_to(Fraction(1, 2**60) * max(1, abs(self.lo)))
        return float((r.lo + r.hi) / 2)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        r = self
        for _ in range(10_000):
            if r.lo > 0:
                return 1
            if r.hi < 0:
                return -1
            r = r.refine()
        raise RuntimeError("sign refinement did not terminate")

    # --- text form
    def to_text(self) -> str:
        cs = " ".join(str(c) for c in self.poly)
        return f"RA {cs} | {_fmt(self.lo)} {_fmt(self.hi)}"

    @classmethod
    def from_text(cls, line: str) -> "RealAlgebraic":
        parts = line.split()
        if not parts or parts[0] != "RA" or "|" not in parts:
            raise ValueError(f"malformed RA line: {line!r}")
        bar = parts.index("|")
        coeffs = [int(c) for c in parts[1:bar]]
        rest = parts[bar + 1:]
        if len(rest) != 2:
            raise ValueError(f"malformed RA interval: {line!r}")
        return cls(coeffs, Fraction(rest[0]), Fraction(rest[1]))

    def __repr__(self):
        return self.to_text()

    # --- operators
    def __add__(self, other):
        return ra_arith("add", self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ra_arith("add", self, ra_arith("neg", _coerce(other)))

    def __rsub__(self, other):
        return ra_arith("add", _coerce(other), ra_arith("neg", self))

    def __mul__(self, other):
        return ra_arith("mul", self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ra_arith("neg", self)

    def __truediv__(self, other):
        return ra_arith("mul", self, ra_arith("inv", _coerce(other)))

    def __rtruediv__(self, other):
        return ra_arith("mul", _coerce(other), ra_arith("inv", self))

    def __eq__(self, other):
        if not isinstance(other, (RealAlgebraic, int, Fraction)):
            return NotImplemented
        return ra_compare(self, _coerce(other)) == "eq"

    def __lt__(self, other):
        return ra_compare(self, _coerce(other)) == "lt"

    def __le__(self, other):
        return ra_compare(self, _coerce(other)) != "gt"

    def __gt__(self, other):
        return ra_compare(self, _coerce(other)) == "gt"

    def __ge__(self, other):
        return ra_compare(self, _coerce(other)) != "lt"

    __hash__ = None


def _dist(a, b, x) -> float:
    x = Fraction(x)
    if a <= x <= b:
        return 0.0
    return float(min(abs(a - x), abs(b - x)))


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _coerce(v) -> RealAlgebraic:
    if isinstance(v, RealAlgebraic):
        return v
    if isinstance(v, (int, Fraction)):
        return RealAlgebraic.rational(v)
    raise TypeError(f"cannot use {type(v).__name__} as a real algebraic number")


def _shift(p, q: Fraction) -> list:
    """Integer polynomial with roots r + q for roots r of p."""
    P = upoly.to_sympy(p)
    return upoly.from_rationals(
        list(reversed(sympy.Poly(P.as_expr().subs(upoly._X, upoly._X - q), upoly._X).all_coeffs()))
    )


def _scale(p, q: Fraction) -> list:
    """Integer polynomial with roots r * q for roots r of p (q != 0)."""
    return upoly.from_rationals([Fraction(c) / q**i for i, c in enumerate(p)])


def _select(candidates, a: RealAlgebraic, b: RealAlgebraic, interval_of):
    """Bisect operands until one factor keeps exactly one root in the interval."""
    seqs = {tuple(f): upoly.sturm_sequence(f) for f in candidates}
    for _ in range(MAX_BISECTIONS):
        lo, hi = interval_of(a, b)
        hits = []
        for f in candidates:
            n = upoly.count_closed(f, lo, hi, seqs[tuple(f)])
            if n:
                hits.append((f, n))
        if len(hits) == 1 and hits[0][1] == 1:
            f = hits[0][0]
            if len(f) == 2:
                return RealAlgebraic.rational(Fraction(-f[0], f[1]))
            return RealAlgebraic(f, lo, hi, check=False)
        a, b = a.refine(), b.refine()
    raise RuntimeError("real algebraic arithmetic exceeded the bisection cap")


def _add_interval(a, b):
    return a.lo + b.lo, a.hi + b.hi


def _mul_interval(a, b):
    ps = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return min(ps), max(ps)


def ra_arith(op: str, a: RealAlgebraic, b: RealAlgebraic | None = None) -> RealAlgebraic:
    """add, mul, neg or inv of isolating-interval triples."""
    if op == "neg":
        p = [c if i % 2 == 0 else -c for i, c in enumerate(a.poly)]
        return RealAlgebraic(p, -a.hi, -a.lo, check=False)
    if op == "inv":
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if a.is_rational():
            return RealAlgebraic.rational(1 / a.as_fraction())
        r = a
        while r.lo <= 0 <= r.hi:
            r = r.refine()
        return RealAlgebraic(list(reversed(r.poly)), 1 / r.hi, 1 / r.lo, check=False)
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == "add":
        if a.is_rational() and b.is_rational():
            return RealAlgebraic.rational(a.as_fraction() + b.as_fraction())
        if a.is_rational():
            a, b = b, a
        if b.is_rational():
            q = b.as_fraction()
            if q == 0:
                return a
            return RealAlgebraic(_shift(a.poly, q), a.lo + q, a.hi + q, check=False)
        # Res_t(p_a(t), p_b(x - t))
        pa = sympy.Poly(upoly.to_sympy(a.poly, _T).as_expr(), _T, _XS)
        pb = sympy.Poly(upoly.to_sympy(b.poly, _XS).as_expr().subs(_XS, _XS - _T), _T, _XS)
        res = sympy.Poly(pa.resultant(pb).as_expr(), _XS)
        facs = [f for f, _ in upoly.factor_integer(upoly.from_sympy(res))]
        return _select(facs, a, b, _add_interval)
    if op == "mul":
        if a.is_zero() or b.is_zero():
            return RealAlgebraic.rational(0)
        if a.is_rational() and b.is_rational():
            return RealAlgebraic.rational(a.as_fraction() * b.as_fraction())
        if a.is_rational():
            a, b = b, a
        if b.is_rational():
            q = b.as_fraction()
            lo, hi = sorted((a.lo * q, a.hi * q))
            return RealAlgebraic(_scale(a.poly, q), lo, hi, check=False)
        # Res_t(p_a(t), t^deg(p_b) p_b(x/t))
        k = len(b.poly) - 1
        pa = sympy.Poly(upoly.to_sympy(a.poly, _T).as_expr(), _T, _XS)
        pb_expr = sum(c * _XS**i * _T ** (k - i) for i, c in enumerate(b.poly))
        pb = sympy.Poly(pb_expr, _T, _XS)
        res = sympy.Poly(pa.resultant(pb).as_expr(), _XS)
        facs = [f for f, _ in upoly.factor_integer(upoly.from_sympy(res))]
        return _select(facs, a, b, _mul_interval)
    raise ValueError(f"unknown operation {op!r}")


def ra_compare(a: RealAlgebraic, b: RealAlgebraic) -> str:
    """Exact trichotomy: 'lt', 'eq' or 'gt'."""
    if a.is_rational() and b.is_rational():
        x, y = a.as_fraction(), b.as_fraction()
        return "lt" if x < y else ("gt" if x > y else "eq")
    if a.hi < b.lo:
        return "lt"
    if b.hi < a.lo:
        return "gt"
    diff = ra_arith("add", a, ra_arith("neg", b))
    if diff.is_zero():
        return "eq"
    s = diff.sign()
    return "lt" if s < 0 else "gt"
