"""Sparse polynomial systems with exact rational coefficients.

A monomial is stored as the sorted tuple of its variable indices with
repetition, so x0^2 x3 is (0, 0, 3). This is the exponent map in a form that
multiplies by tuple merge. Systems compile once into flat numpy tables for
float and interval evaluation of values and Jacobians; the exact path uses
integer arithmetic over a common denominator.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .exactnum.interval import Interval, arr_mul, grouped_sum, rational_bounds


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls({(i,): 1})

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def from_exponents(cls, mapping) -> "Polynomial":
        """Build from {exponent tuple: coefficient}."""
        terms = {}
        for exps, c in mapping.items():
            key = tuple(i for i, e in enumerate(exps) for _ in range(e))
            terms[key] = terms.get(key, 0) + c
        return cls(terms)

    def exponents(self, m: int) -> dict:
        out = {}
        for key, c in self.terms.items():
            e = [0] * m
            for i in key:
                e[i] += 1
            out[tuple(e)] = c
        return out

    @staticmethod
    def _coerce(v) -> "Polynomial":
        if isinstance(v, Polynomial):
            return v
        return Polynomial.const(v)

    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, 0) + c
        return Polynomial(t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return Polynomial()
            return Polynomial({k: c * other for k, c in self.terms.items()})
        t: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(sorted(ka + kb)) if ka and kb else (ka or kb)
                t[k] = t.get(k, 0) + ca * cb
        return Polynomial(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in sorted(Counter(k).items()))
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Polynomial(" + " + ".join(parts) + ")"

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def coeff_norm(self) -> Fraction:
        return sum((abs(Fraction(c)) for c in self.terms.values()), Fraction(0))

    def variables(self) -> set:
        return {i for k in self.terms for i in k}

    def derivative(self, i: int) -> "Polynomial":
        t: dict = {}
        for k, c in self.terms.items():
            e = k.count(i)
            if e:
                j = k.index(i)
                nk = k[:j] + k[j + 1:]
                t[nk] = t.get(nk, 0) + c * e
        return Polynomial(t)

    def evaluate(self, x):
        """Generic evaluation for any ring element type."""
        total = 0
        for k, c in self.terms.items():
            v = c
            for i in k:
                v = v * x[i]
            total = total + v
        return total

    def relabel(self, perm: Sequence[int]) -> "Polynomial":
        return Polynomial({tuple(sorted(perm[i] for i in k)): c for k, c in self.terms.items()})


class PolySystem:
    """f: R^m -> R^n given by n polynomials."""

    def __init__(self, components: Iterable[Polynomial], nvars: int):
        self.components = tuple(components)
        self.nvars = int(nvars)
        for p in self.components:
            for k in p.terms:
                if k and (k[0] < 0 or k[-1] >= self.nvars):
                    raise ValueError("variable index out of range")

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def m(self) -> int:
        return self.nvars

    @cached_property
    def degree(self) -> int:
        return max((p.degree for p in self.components), default=0)

    @cached_property
    def coeff_norm(self) -> Fraction:
        return max((p.coeff_norm() for p in self.components), default=Fraction(0))

    def coeff_norm_and_degree(self) -> tuple[Fraction, int]:
        return self.coeff_norm, self.degree

    # ---------------------------------------------------------- compilation
    @cached_property
    def _jacobian_polys(self) -> dict:
        jac = {}
        for r, p in enumerate(self.components):
            for v in sorted(p.variables()):
                jac[(r, v)] = p.derivative(v)
        return jac

    @cached_property
    def _float_tables(self):
        return _compile([(r, p) for r, p in enumerate(self.components)], self.nvars)

    @cached_property
    def _jac_float_tables(self):
        items = [(r * self.nvars + v, p) for (r, v), p in self._jacobian_polys.items()]
        return _compile(items, self.nvars)

    @cached_property
    def _exact_tables(self):
        return _compile_exact([(r, p) for r, p in enumerate(self.components)])

    @cached_property
    def _jac_exact_tables(self):
        return _compile_exact([(rv, p) for rv, p in self._jacobian_polys.items()])

    def _check_arity(self, x):
        if len(x) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(x)}")

    # ------------------------------------------------------------ evaluation
    def evaluate(self, x, mode: str = "float"):
        """Values of all components. Modes: float, rational, interval."""
        if mode == "float":
            x = np.asarray(x, dtype=float)
            self._check_arity(x)
            return _eval_float(self._float_tables, x, self.n)
        if mode == "rational":
            self._check_arity(x)
            nums, den = _eval_exact_scaled(self._exact_tables, [Fraction(v) for v in x])
            return [Fraction(nums.get(r, 0), den[r]) if r in den else Fraction(0) for r in range(self.n)]
        if mode == "interval":
            self._check_arity(x)
            lo, hi = _box(x)
            vlo, vhi = _eval_interval(self._float_tables, lo, hi, self.n)
            return [Interval(a, b) for a, b in zip(vlo, vhi)]
        raise ValueError(f"unknown mode {mode!r}")

    def jacobian(self, x, mode: str = "float"):
        m, n = self.nvars, self.n
        if mode == "float":
            x = np.asarray(x, dtype=float)
            self._check_arity(x)
            return _eval_float(self._jac_float_tables, x, n * m).reshape(n, m)
        if mode == "rational":
            self._check_arity(x)
            nums, den = _eval_exact_scaled(self._jac_exact_tables, [Fraction(v) for v in x])
            J = [[Fraction(0)] * m for _ in range(n)]
            for (r, v), num in nums.items():
                J[r][v] = Fraction(num, den[(r, v)])
            return J
        if mode == "interval":
            self._check_arity(x)
            lo, hi = _box(x)
            jlo, jhi = self.jacobian_interval_arrays(lo, hi)
            return [[Interval(jlo[i, j], jhi[i, j]) for j in range(m)] for i in range(n)]
        raise ValueError(f"unknown mode {mode!r}")

    def evaluate_interval_arrays(self, lo, hi):
        return _eval_interval(self._float_tables, np.asarray(lo, float), np.asarray(hi, float), self.n)

    def jacobian_interval_arrays(self, lo, hi):
        n, m = self.n, self.nvars
        jlo, jhi = _eval_interval(self._jac_float_tables, np.asarray(lo, float), np.asarray(hi, float), n * m)
        return jlo.reshape(n, m), jhi.reshape(n, m)

    def jacobian_exact_scaled(self, x) -> tuple[dict, int]:
        """Sparse exact Jacobian as ({(i, j): numerator}, common denominator)."""
        self._check_arity(x)
        nums, dens = _eval_exact_scaled(self._jac_exact_tables, [Fraction(v) for v in x])
        D = reduce(_lcm, dens.values(), 1)
        return {k: v * (D // dens[k]) for k, v in nums.items()}, D

    def jacobian_sparsity(self) -> list:
        return sorted(self._jacobian_polys)

    def jacobian_polynomial(self, i: int, j: int) -> Polynomial:
        return self._jacobian_polys.get((i, j), Polynomial())


def evaluate(f: PolySystem, x, mode: str = "float"):
    return f.evaluate(x, mode)


def jacobian_evaluate(f: PolySystem, x, mode: str = "float"):
    return f.jacobian(x, mode)


def coeff_norm_and_degree(f: PolySystem) -> tuple[Fraction, int]:
    return f.coeff_norm_and_degree()


# ------------------------------------------------------------------ internals


def _box(x):
    lo, hi = [], []
    for v in x:
        if isinstance(v, Interval):
            lo.append(v.lo)
            hi.append(v.hi)
        elif isinstance(v, float):
            lo.append(v)
            hi.append(v)
        else:
            a, b = rational_bounds(v)
            lo.append(a)
            hi.append(b)
    return np.array(lo), np.array(hi)


class _Tables:
    __slots__ = ("group", "coef", "clo", "chi", "idx", "width", "max_terms")


def _compile(items, m: int) -> _Tables:
    group, coef, clo, chi, keys = [], [], [], [], []
    for g, p in items:
        for k, c in p.terms.items():
            group.append(g)
            coef.append(float(c))
            a, b = rational_bounds(c)
            clo.append(a)
            chi.append(b)
            keys.append(k)
    width = max((len(k) for k in keys), default=0)
    idx = np.full((len(keys), max(width, 1)), m, dtype=np.int64)
    for t, k in enumerate(keys):
        idx[t, : len(k)] = k
    tab = _Tables()
    tab.group = np.asarray(group, dtype=np.int64)
    tab.coef = np.asarray(coef, dtype=float)
    tab.clo = np.asarray(clo, dtype=float)
    tab.chi = np.asarray(chi, dtype=float)
    tab.idx = idx
    tab.width = width
    counts = np.bincount(tab.group) if len(group) else np.zeros(1, dtype=np.int64)
    tab.max_terms = int(counts.max()) if counts.size else 1
    return tab


def _eval_float(tab: _Tables, x: np.ndarray, size: int) -> np.ndarray:
    xe = np.append(x, 1.0)
    vals = tab.coef * np.prod(xe[tab.idx], axis=1)
    return np.bincount(tab.group, weights=vals, minlength=size)


def _eval_interval(tab: _Tables, lo: np.ndarray, hi: np.ndarray, size: int):
    xl = np.append(lo, 1.0)
    xh = np.append(hi, 1.0)
    vlo, vhi = tab.clo.copy(), tab.chi.copy()
    for c in range(tab.width):
        col = tab.idx[:, c]
        vlo, vhi = arr_mul(vlo, vhi, xl[col], xh[col])
    return grouped_sum(vlo, vhi, tab.group, size, tab.max_terms)


def _compile_exact(items):
    """Per group: integer coefficients over a common denominator."""
    groups = []
    for g, p in items:
        if p.is_zero():
            continue
        fr = {k: Fraction(c) for k, c in p.terms.items()}
        L = reduce(_lcm, (c.denominator for c in fr.values()), 1)
        deg = p.degree
        terms = [(k, int(c * L)) for k, c in fr.items()]
        groups.append((g, L, deg, terms))
    return groups


def _eval_exact_scaled(groups, x):
    """Return numerators and denominators so value[g] = num[g] / den[g] exactly."""
    D = reduce(_lcm, (v.denominator for v in x), 1)
    p = [v.numerator * (D // v.denominator) for v in x]
    dpow = [1]
    nums, dens = {}, {}
    for g, L, deg, terms in groups:
        while len(dpow) <= deg:
            dpow.append(dpow[-1] * D)
        total = 0
        for k, c in terms:
            v = c * dpow[deg - len(k)]
            for i in k:
                v *= p[i]
            total += v
        nums[g] = total
        dens[g] = L * dpow[deg]
    return nums, dens
