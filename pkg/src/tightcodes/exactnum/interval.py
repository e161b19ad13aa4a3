"""Outward-rounded interval arithmetic on doubles.

Every operation computes the float result and then steps each endpoint one
ulp outward with nextafter; IEEE operations are correctly rounded, so the
exact result always lies inside. The array helpers do the same thing
elementwise and add a rigorous summation error bound.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_INF = math.inf
_U = 2.0 ** -53


def _down(v: float) -> float:
    return math.nextafter(v, -_INF)


def _up(v: float) -> float:
    return math.nextafter(v, _INF)


def rational_bounds(q) -> tuple[float, float]:
    """Floats lo <= q <= hi, tight when q is representable."""
    q = Fraction(q)
    f = float(q)
    if Fraction(f) == q:
        return f, f
    return (f, _up(f)) if Fraction(f) < q else (_down(f), f)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            if isinstance(lo, Interval):
                lo, hi = lo.lo, lo.hi
            elif isinstance(lo, float):
                hi = lo
            else:
                lo, hi = rational_bounds(lo)
        lo, hi = float(lo), float(hi)
        if not lo <= hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def around(cls, q, radius) -> "Interval":
        """Enclosure of [q - radius, q + radius] for rational q, radius."""
        lo, _ = rational_bounds(Fraction(q) - Fraction(radius))
        _, hi = rational_bounds(Fraction(q) + Fraction(radius))
        return cls(lo, hi)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    @staticmethod
    def _coerce(v) -> "Interval":
        return v if isinstance(v, Interval) else Interval(v)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        qs = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(qs)), _up(max(qs)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers unsupported")
        if k == 0:
            return Interval(1.0)
        if k % 2 == 0:
            m = self.mag()
            lo = 0.0 if self.lo <= 0 <= self.hi else self.mig()
            lo_p, hi_p = lo, m
            out_lo, out_hi = 1.0, 1.0
            for _ in range(k):
                out_lo = _down(out_lo * lo_p)
                out_hi = _up(out_hi * hi_p)
            return Interval(max(out_lo, 0.0), out_hi)
        out = Interval(1.0)
        for _ in range(k):
            out = out * self
        return out

    def __abs__(self):
        if self.lo >= 0:
            return Interval(self.lo, self.hi)
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        if self.lo <= 0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def width(self) -> float:
        return self.hi - self.lo

    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, q) -> bool:
        if isinstance(q, Interval):
            return self.lo <= q.lo and q.hi <= self.hi
        q = Fraction(q)
        return Fraction(self.lo) <= q <= Fraction(self.hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (int, float, Fraction, Interval)) else None
        if o is None:
            return NotImplemented
        return self.lo == o.lo and self.hi == o.hi

    __hash__ = None


def interval_eval_guard(lhs_upper: Interval, rhs_lower: Interval) -> bool:
    """True iff every value of lhs is strictly below every value of rhs."""
    return lhs_upper.hi < rhs_lower.lo


# ------------------------------------------------------------ array helpers


def arr_down(a):
    return np.nextafter(a, -np.inf)


def arr_up(a):
    return np.nextafter(a, np.inf)


def arr_mul(alo, ahi, blo, bhi):
    p1, p2, p3, p4 = alo * blo, alo * bhi, ahi * blo, ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return arr_down(lo), arr_up(hi)


def sum_error_factor(n_terms: int) -> float:
    """c with |fl(sum a) - sum a| <= c * fl(sum |a|) for n_terms summands."""
    k = max(int(n_terms), 1) + 2
    gamma = k * _U / (1 - k * _U)
    return _up(_up(2.0 * gamma))


def grouped_sum(lo, hi, groups, size, n_terms_max=None):
    """Rigorous enclosure of per-group sums of interval terms.

    groups[t] is the output slot of term t. Uses the a priori bound
    gamma_{n-1} * sum|a_i| for recursive summation in any order.
    """
    if n_terms_max is None:
        counts = np.bincount(groups, minlength=size)
        n_terms_max = int(counts.max()) if counts.size else 1
    s_lo = np.bincount(groups, weights=lo, minlength=size)
    s_hi = np.bincount(groups, weights=hi, minlength=size)
    a_lo = np.bincount(groups, weights=np.abs(lo), minlength=size)
    a_hi = np.bincount(groups, weights=np.abs(hi), minlength=size)
    c = sum_error_factor(n_terms_max)
    e_lo = arr_up(c * a_lo)
    e_hi = arr_up(c * a_hi)
    return arr_down(s_lo - e_lo), arr_up(s_hi + e_hi)


def upper_nonneg_matmul(A, B):
    """Upper bound for A @ B with nonnegative float matrices."""
    k = A.shape[1]
    C = A @ B
    c = sum_error_factor(k + 1)
    return arr_up(C * (1.0 + c) + 5e-324 * k)


def upper_nonneg_rowsum(A):
    k = A.shape[1] if A.ndim > 1 else A.shape[0]
    s = A.sum(axis=-1)
    c = sum_error_factor(k)
    return arr_up(s * (1.0 + c))
