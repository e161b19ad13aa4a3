"""Exact number fields used by the explicit constructions.

Surd: rational combinations of square roots of squarefree integers, i.e. the
multi-quadratic field Q(sqrt 2, sqrt 3, sqrt 5, ...). Square roots of distinct
squarefree integers are linearly independent over Q, so the normalized
coefficient map is a canonical form and equality is structural.

Cyclotomic: elements of Q(zeta_n) reduced modulo the n-th cyclotomic
polynomial, with integer numerators over a common denominator.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import sympy

from .realalg import RealAlgebraic


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = a^2 * s with s squarefree; returns (a, s)."""
    a, s = 1, 1
    for p, e in sympy.factorint(n).items():
        a *= p ** (e // 2)
        if e % 2:
            s *= p
    return a, s


class Surd:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for s, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                t[int(s)] = c
        self.terms = t

    @classmethod
    def rational(cls, q) -> "Surd":
        return cls({1: q})

    @classmethod
    def sqrt(cls, q) -> "Surd":
        """Positive square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        if q == 0:
            return cls()
        # sqrt(p/r) = sqrt(p r) / r
        a, s = _squarefree_split(q.numerator * q.denominator)
        return cls({s: Fraction(a, q.denominator)})

    @staticmethod
    def _coerce(v) -> "Surd":
        if isinstance(v, Surd):
            return v
        if isinstance(v, (int, Fraction)):
            return Surd.rational(v)
        raise TypeError(f"cannot combine Surd with {type(v).__name__}")

    def __add__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        t = dict(self.terms)
        for s, c in o.terms.items():
            t[s] = t.get(s, 0) + c
        return Surd(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        t: dict = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in o.terms.items():
                g = math.gcd(s1, s2)
                s = (s1 // g) * (s2 // g)
                t[s] = t.get(s, 0) + c1 * c2 * g
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({s: c / other for s, c in self.terms.items()})
        if isinstance(other, Surd) and other.is_rational():
            return self / other.rational_value()
        return NotImplemented

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.terms.get(1, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd.rational(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __float__(self):
        return float(sum(float(c) * math.sqrt(s) for s, c in self.terms.items()))

    def enclosure(self, prec: int = 128):
        iv = mpmath.iv
        saved = iv.prec
        iv.prec = prec
        try:
            total = iv.mpf(0)
            for s, c in self.terms.items():
                total += iv.mpf(c.numerator) / c.denominator * iv.sqrt(s)
            return total
        finally:
            iv.prec = saved

    def sign(self) -> int:
        if not self.terms:
            return 0
        prec = 64
        while True:
            e = self.enclosure(prec)
            if e.a > 0:
                return 1
            if e.b < 0:
                return -1
            prec *= 2

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __le__(self, other):
        return not self > other

    def __ge__(self, other):
        return not self < other

    def to_real_algebraic(self) -> RealAlgebraic:
        if self.is_rational():
            return RealAlgebraic.rational(self.rational_value())
        x = sympy.Symbol("x")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(s) for s, c in self.terms.items())
        mp = sympy.Poly(sympy.minimal_polynomial(expr, x), x)
        coeffs = [int(c) for c in reversed(mp.all_coeffs())]
        e = self.enclosure(200)
        lo = _mpf_fraction(e.a) - Fraction(1, 2**150)
        hi = _mpf_fraction(e.b) + Fraction(1, 2**150)
        return RealAlgebraic(coeffs, lo, hi)

    @classmethod
    def from_real_algebraic(cls, r: RealAlgebraic) -> "Surd":
        """Exact conversion for degree <= 2; higher degree raises."""
        if r.is_rational():
            return cls.rational(r.as_fraction())
        if r.degree != 2:
            raise ValueError("only quadratic real algebraic numbers convert to a single surd")
        c0, c1, c2 = r.poly
        root = Surd.sqrt(Fraction(c1 * c1 - 4 * c2 * c0)) / (2 * c2)
        base = Fraction(-c1, 2 * c2)
        for cand in (base + root, base - root):
            if _inside(cand, r):
                return cand
        raise ValueError("neither quadratic root lies in the isolating interval")

    def __repr__(self):
        if not self.terms:
            return "Surd(0)"
        parts = []
        for s in sorted(self.terms):
            c = self.terms[s]
            parts.append(f"{c}" if s == 1 else f"{c}*sqrt({s})")
        return "Surd(" + " + ".join(parts) + ")"


def _mpf_fraction(v) -> Fraction:
    if isinstance(v, mpmath.iv.mpf):
        # raw endpoint, no rounding to the working precision
        sign, man, exp, _ = v._mpi_[0]
        return (-1) ** sign * Fraction(man) * Fraction(2) ** exp
    man, exp = mpmath.mpf(v).man_exp
    return Fraction(man) * Fraction(2) ** exp


def _inside(x: Surd, r: RealAlgebraic) -> bool:
    return (x - r.lo).sign() >= 0 and (x - r.hi).sign() <= 0


class CyclotomicField:
    """Q(zeta_n) with power basis 1, zeta, ..., zeta^(phi(n)-1)."""

    _cache: dict = {}

    def __new__(cls, n: int):
        if n in cls._cache:
            return cls._cache[n]
        obj = super().__new__(cls)
        obj.n = n
        x = sympy.Symbol("x")
        phi = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
        obj.modulus = [int(c) for c in reversed(phi.all_coeffs())]
        obj.degree = len(obj.modulus) - 1
        cls._cache[n] = obj
        return obj

    def zeta(self, k: int = 1) -> "Cyclotomic":
        k %= self.n
        return Cyclotomic(self, self._reduce([0] * k + [1]), 1)

    def _reduce(self, coeffs: list) -> list:
        c = list(coeffs)
        m = self.modulus
        deg = self.degree
        for i in range(len(c) - 1, deg - 1, -1):
            t = c[i]
            if t:
                # modulus is monic
                for j in range(deg + 1):
                    c[i - deg + j] -= t * m[j]
        c = c[:deg] + [0] * max(0, deg - len(c))
        return c

    def rational(self, q) -> "Cyclotomic":
        q = Fraction(q)
        return Cyclotomic(self, [q.numerator] + [0] * (self.degree - 1), q.denominator)


class Cyclotomic:
    __slots__ = ("field", "num", "den")

    def __init__(self, field: CyclotomicField, num, den: int = 1):
        g = math.gcd(den, *[abs(c) for c in num]) if any(num) else den
        if den < 0:
            g = -g
        self.field = field
        self.num = tuple(c // g for c in num)
        self.den = den // g

    def _coerce(self, v) -> "Cyclotomic":
        if isinstance(v, Cyclotomic):
            if v.field is not self.field:
                raise ValueError("different cyclotomic fields")
            return v
        if isinstance(v, (int, Fraction)):
            return self.field.rational(v)
        raise TypeError(f"cannot combine Cyclotomic with {type(v).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return Cyclotomic(self.field, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.field, [-a for a in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        a, b = self.num, o.num
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(self.field, self.field._reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyclotomic(self.field, [a * q.denominator for a in self.num], self.den * q.numerator)
        return NotImplemented

    def conj(self) -> "Cyclotomic":
        n = self.field.n
        out = [0] * (n + 1)
        for k, c in enumerate(self.num):
            if c:
                out[(-k) % n] += c
        return Cyclotomic(self.field, self.field._reduce(out), self.den)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.field is other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.field.n, self.num, self.den))

    def __complex__(self):
        n = self.field.n
        return sum(c * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k, c in enumerate(self.num)) / self.den

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(self.num[0], self.den)
