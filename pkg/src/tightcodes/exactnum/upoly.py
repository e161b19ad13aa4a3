"""Dense univariate integer polynomials (ascending coefficient lists) and Sturm counting."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import gmpy2
import sympy

_X = sympy.Symbol("x")


def trim(p) -> list:
    p = [int(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1


def content(p) -> int:
    return reduce(math.gcd, (abs(c) for c in p), 0)


def primitive(p) -> list:
    """Primitive part with positive leading coefficient."""
    p = trim(p)
    if not p:
        return p
    g = content(p)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def derivative(p) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def from_rationals(coeffs) -> list:
    """Integer multiple of a rational coefficient list."""
    fr = [Fraction(c) for c in coeffs]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in fr), 1)
    return trim([int(c * den) for c in fr])


def eval_homogeneous(p, num: int, den: int) -> int:
    """den^deg * p(num/den); has the sign of p(num/den) when den > 0."""
    k = len(p) - 1
    total = 0
    npow = 1
    dpows = [1] * (k + 1)
    for i in range(1, k + 1):
        dpows[i] = dpows[i - 1] * den
    for i, c in enumerate(p):
        if c:
            total += c * npow * dpows[k - i]
        npow *= num
    return total


def sign_at(p, q) -> int:
    q = Fraction(q)
    v = eval_homogeneous(p, q.numerator, q.denominator)
    return (v > 0) - (v < 0)


def evaluate(p, q) -> Fraction:
    q = Fraction(q)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * q + c
    return acc


def prem(a, b) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over the integers."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    delta = len(a) - 1 - db
    if delta < 0:
        return a
    r = a
    for _ in range(delta + 1):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r = trim(r)
        if not r:
            return []
    return r


def squarefree(p) -> list:
    """p / gcd(p, p') as a primitive integer polynomial."""
    p = trim(p)
    if len(p) <= 2:
        return primitive(p)
    P = sympy.Poly(list(reversed(p)), _X, domain="ZZ")
    g = sympy.gcd(P, P.diff(_X))
    q = sympy.quo(P, g)
    return primitive([int(c) for c in reversed(q.all_coeffs())])


def sturm_sequence(p) -> list:
    """Sturm chain of the square-free part of p, kept primitive.

    Each step uses a pseudo-remainder with the sign corrected so the chain
    matches -rem up to positive factors. The chain is computed with GMP
    integers because its coefficients grow to many thousands of bits.
    """
    p0 = squarefree(p)
    if not p0:
        raise ValueError("zero polynomial")
    if len(p0) == 1:
        return [p0]
    seq = [[gmpy2.mpz(c) for c in p0]]
    seq.append(_mpz_primitive(derivative(seq[0])))
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = _mpz_prem(a, b)
        if not r:
            break
        delta = len(a) - len(b) + 1
        lead_pow_sign = 1 if (b[-1] > 0 or delta % 2 == 0) else -1
        seq.append(_mpz_primitive([-lead_pow_sign * c for c in r]))
    return [[int(c) for c in q] for q in seq]


def _mpz_primitive(p) -> list:
    g = reduce(gmpy2.gcd, p, gmpy2.mpz(0))
    return [c // g for c in p] if g > 1 else list(p)


def _mpz_prem(a, b) -> list:
    db = len(b) - 1
    lb = b[-1]
    delta = len(a) - 1 - db
    r = list(a)
    for _ in range(delta + 1):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return []
    return r


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(seq, q) -> int:
    return _variations([sign_at(s, q) for s in seq])


def variations_at_inf(seq, positive: bool = True) -> int:
    signs = []
    for s in seq:
        lead = 1 if s[-1] > 0 else -1
        if not positive and (len(s) - 1) % 2 == 1:
            lead = -lead
        signs.append(lead)
    return _variations(signs)


def sturm_count(p, lo, hi, seq=None) -> int:
    """Number of distinct real roots of p in (lo, hi].

    The chain is built from the square-free part, so endpoint roots need no
    special handling.
    """
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if hi < lo:
        raise ValueError("empty interval")
    if seq is None:
        seq = sturm_sequence(p)
    return variations_at(seq, lo) - variations_at(seq, hi)


def count_above(p, lo, seq=None) -> int:
    """Distinct real roots of p in (lo, +inf)."""
    if seq is None:
        seq = sturm_sequence(p)
    return variations_at(seq, lo) - variations_at_inf(seq, True)


def count_closed(p, lo, hi, seq=None) -> int:
    extra = 1 if sign_at(p, lo) == 0 else 0
    return sturm_count(p, lo, hi, seq) + extra


def root_bound(p) -> Fraction:
    """Cauchy bound: all real roots lie in [-B, B]."""
    lead = abs(p[-1])
    return 1 + Fraction(max(abs(c) for c in p[:-1]), lead) if len(p) > 1 else Fraction(1)


def isolate_roots(p, lo=None, hi=None, max_depth: int = 400) -> list:
    """Disjoint rational intervals (a, b] each holding one distinct root in (lo, hi]."""
    seq = sturm_sequence(p)
    B = root_bound(seq[0])
    lo = -B if lo is None else Fraction(lo)
    hi = B if hi is None else Fraction(hi)
    out = []
    stack = [(lo, hi, variations_at(seq, lo), variations_at(seq, hi), 0)]
    while stack:
        a, b, va, vb, depth = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        if depth > max_depth:
            raise RuntimeError("root isolation did not terminate")
        m = (a + b) / 2
        vm = variations_at(seq, m)
        stack.append((m, b, vm, vb, depth + 1))
        stack.append((a, m, va, vm, depth + 1))
    out.sort()
    return out


def factor_integer(p) -> list:
    """Irreducible factors over Q as (primitive integer poly, multiplicity)."""
    P = sympy.Poly(list(reversed(trim(p))), _X, domain="ZZ")
    _, facs = P.factor_list()
    return [(primitive([int(c) for c in reversed(f.all_coeffs())]), e) for f, e in facs]


def sqf_decomposition(p) -> list:
    P = sympy.Poly(list(reversed(trim(p))), _X, domain="ZZ")
    _, facs = P.sqf_list()
    return [(primitive([int(c) for c in reversed(f.all_coeffs())]), e) for f, e in facs]


def to_sympy(p, var=_X):
    return sympy.Poly(list(reversed(trim(p))), var, domain="ZZ")


def from_sympy(P) -> list:
    return trim([int(c) for c in reversed(P.all_coeffs())])
