"""Simplex bounds, Jacobi zonal polynomials, design tests, LP certificates, Gale duality.

Spaces are written KP^(d-1) with K in R, C, H, O or G(m, n); `Space.parse`
accepts text like "HP2", "OP2", "CP5" and "G(2,5)". Zonal polynomials on
KP^(d-1) are Jacobi polynomials P_k^(a,b) with a = (d-1) dim K / 2 - 1 and
b = dim K / 2 - 1, evaluated at z = 2t - 1 where t = <Pi_x, Pi_y>.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .algebra import DIMS, Configuration, kconj, kmul, projectors_array
from .exactnum.upoly import from_rationals, sqf_decomposition, sign_at, sturm_count
from .systems import SpaceDescriptor

# ------------------------------------------------------------ spaces


@dataclass(frozen=True)
class Space:
    tag: str  # R, C, H, O, or G for a real Grassmannian
    d: int  # vector dimension for KP^(d-1); n for G(m, n)
    m: int = 1

    @classmethod
    def parse(cls, text) -> "Space":
        if isinstance(text, Space):
            return text
        if isinstance(text, SpaceDescriptor):
            if text.is_grassmann:
                return cls("G", text.n, text.m)
            return cls(text.tag, text.dim)
        s = str(text).strip().replace(" ", "")
        g = re.fullmatch(r"G\((\d+),(\d+)\)", s, re.I)
        if g:
            m, n = int(g.group(1)), int(g.group(2))
            if not 1 <= m < n:
                raise ValueError(f"G({m},{n}) needs 1 <= m < n")
            return cls("G", n, m)
        p = re.fullmatch(r"([RCHO])P(\d+)", s, re.I)
        if not p:
            raise ValueError(f"cannot parse space {text!r}; use e.g. HP2, OP2, CP5 or G(2,5)")
        tag, d = p.group(1).upper(), int(p.group(2)) + 1
        if tag == "O" and d > 3:
            raise ValueError("octonionic projective spaces stop at OP2")
        if d < 2:
            raise ValueError("projective dimension must be at least 1")
        return cls(tag, d)

    @property
    def is_grassmann(self) -> bool:
        return self.tag == "G"

    @property
    def dim_k(self) -> int:
        return 1 if self.is_grassmann else DIMS[self.tag]

    def __str__(self):
        return f"G({self.m},{self.d})" if self.is_grassmann else f"{self.tag}P{self.d - 1}"


def tight_alpha(space, N: int) -> Fraction:
    """Common inner product <Pi_i, Pi_j> of an N-point tight simplex."""
    sp = Space.parse(space)
    if N < 2:
        raise ValueError("a simplex needs at least two points")
    if sp.is_grassmann:
        m, n = sp.m, sp.d
        return Fraction(m * (N * m - n), n * (N - 1))
    return Fraction(N - sp.d, sp.d * (N - 1))


def max_size(space) -> int:
    """Largest possible simplex: C(n+1, 2) in G(m, n), d + (d^2 - d) dim K / 2 in KP^(d-1)."""
    sp = Space.parse(space)
    if sp.is_grassmann:
        return comb(sp.d + 1, 2)
    return sp.d + (sp.d * sp.d - sp.d) * sp.dim_k // 2


def gale_min_size(space) -> int:
    """Smallest N > d + 1 allowed for a tight simplex by the Gale-dual bound.

    The bound reads N >= d + (1 + sqrt(1 + 8d / dim K)) / 2, tested exactly as
    (2(N - d) - 1)^2 >= 1 + 8d / dim K.
    """
    sp = Space.parse(space)
    if sp.is_grassmann or sp.tag == "O":
        raise ValueError("the Gale bound applies to RP, CP and HP only")
    rhs = 1 + Fraction(8 * sp.d, sp.dim_k)
    N = sp.d + 2
    while (2 * (N - sp.d) - 1) ** 2 < rhs:
        N += 1
    return N


# ------------------------------------------------------------ polynomials
# coefficient lists are ascending and hold Fractions


def _add(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _scale(p, c):
    return [c * v for v in p]


def _times_z(p):
    return [Fraction(0)] + list(p)


def poly_eval(p, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class ZonalParams:
    alpha: Fraction
    beta: Fraction

    @classmethod
    def for_space(cls, space) -> "ZonalParams":
        sp = Space.parse(space)
        if sp.is_grassmann:
            raise ValueError("zonal polynomials on Grassmannians are multivariate and not supported")
        k = sp.dim_k
        return cls(Fraction((sp.d - 1) * k, 2) - 1, Fraction(k, 2) - 1)


def jacobi_in_z(k: int, params: ZonalParams) -> list:
    """Coefficients of P_k^(a,b)(z) from the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    a, b = Fraction(params.alpha), Fraction(params.beta)
    prev = [Fraction(1)]
    if k == 0:
        return prev
    cur = [a + 1 - (a + b + 2) / 2, (a + b + 2) / 2]
    for n in range(2, k + 1):
        s = 2 * n + a + b
        c0 = 2 * n * (n + a + b) * (s - 2)
        lin = _add(_scale(_times_z(cur), (s - 1) * s * (s - 2)), _scale(cur, (s - 1) * (a * a - b * b)))
        nxt = _add(lin, _scale(prev, -2 * (n + a - 1) * (n + b - 1) * s))
        prev, cur = cur, _scale(nxt, 1 / c0)
    return cur


def jacobi_poly(k: int, params: ZonalParams) -> list:
    """Coefficients in t of P_k^(a,b)(2t - 1)."""
    pz = jacobi_in_z(k, params)
    out = [Fraction(0)]
    for c in reversed(pz):
        # Horner step with z = 2t - 1
        out = _add(_add(_scale(_times_z(out), 2), _scale(out, -1)), [c])
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


# ------------------------------------------------------------ designs


def _space_and_gram(config):
    if isinstance(config, Configuration):
        if config.kind != "projective":
            raise ValueError("zonal sums need a projective configuration")
        return Space(config.tag, config.d), config.gram()
    return Space.parse(config.space), config.gram()


def zonal_sum(config, k: int):
    """Sum over all ordered pairs (diagonal included) of P_k(2 <Pi_i, Pi_j> - 1).

    `config` is a Configuration (float) or any object with `.space` and an
    exact `.gram()`, in which case the sum is exact.
    """
    space, G = _space_and_gram(config)
    p = jacobi_poly(k, ZonalParams.for_space(space))
    if isinstance(G, np.ndarray) and G.dtype != object:
        return float(np.sum(np.polynomial.polynomial.polyval(G, [float(c) for c in p])))
    total = 0
    for row in G:
        for t in row:
            total = total + poly_eval(p, t)
    return total


def design_check(config, t: int, tol=0) -> list:
    """[level 1 ok, ..., level t ok], with |Sigma_k| <= tol N^2 (tol = 0 is exact)."""
    if t < 1:
        raise ValueError("design strength must be at least 1")
    space, G = _space_and_gram(config)
    N = len(G)
    out = []
    for k in range(1, t + 1):
        s = zonal_sum(config, k)
        out.append(bool(abs(s) <= tol * N * N) if tol else s == 0)
    return out


def simplex_kernel_value(space, N: int, k: int) -> Fraction:
    """C_k(1) + (N - 1) C_k(2 alpha - 1) for a hypothetical N-point tight simplex.

    Positive definiteness forces this to be >= 0 whenever the simplex exists.
    """
    sp = Space.parse(space)
    alpha = tight_alpha(sp, N)
    p = jacobi_poly(k, ZonalParams.for_space(sp))
    return poly_eval(p, Fraction(1)) + (N - 1) * poly_eval(p, alpha)


# ------------------------------------------------------------ LP certificates


@dataclass
class LPCertificate:
    """f(z) = sum_k coeffs[k] C_k(z) with C_k = P_k^(a,b), required to be <= 0 on [-1, z0]."""

    coeffs: list
    z0: Fraction
    params: ZonalParams

    def polynomial(self) -> list:
        """Monomial coefficients of f in z."""
        out = [Fraction(0)]
        for k, c in enumerate(self.coeffs):
            out = _add(out, _scale(jacobi_in_z(k, self.params), Fraction(c)))
        return out


def _nonpositive_on(p, lo: Fraction, hi: Fraction) -> bool:
    """Exact test that the polynomial p is <= 0 on [lo, hi]."""
    q = from_rationals(p)
    if not q:
        return True
    if sign_at(q, lo) > 0 or sign_at(q, hi) > 0:
        return False
    # the sign can only change at roots of odd multiplicity inside (lo, hi)
    for factor, mult in sqf_decomposition(q):
        if mult % 2 and len(factor) > 1:
            inside = sturm_count(factor, lo, hi) - (1 if sign_at(factor, hi) == 0 else 0)
            if inside:
                return False
    # no crossing, so the sign just right of lo holds on all of (lo, hi)
    d = q
    while d:
        s = sign_at(d, lo)
        if s:
            return s < 0
        d = [i * c for i, c in enumerate(d)][1:]
    return True


def lp_verify(cert: LPCertificate) -> tuple[Fraction, bool]:
    """(f(1) / f0, valid) where valid means f0 > 0, f_k >= 0 and f <= 0 on [-1, z0].

    For z0 < -1 the sign condition is vacuous.
    """
    coeffs = [Fraction(c) for c in cert.coeffs]
    if not coeffs:
        raise ValueError("empty certificate")
    f = cert.polynomial()
    f0 = coeffs[0]
    if f0 <= 0:
        return Fraction(0), False
    bound = poly_eval(f, Fraction(1)) / f0
    z0 = Fraction(cert.z0)
    ok = all(c >= 0 for c in coeffs[1:]) and (z0 < -1 or _nonpositive_on(f, Fraction(-1), z0))
    return bound, ok


def witness_poly(N: int, d: int, tag: str = "R") -> LPCertificate:
    """Linear certificate 1 + (N-1) d / (2(d-1)) (z + (d-2)/d) that N-point tight simplices are tight codes."""
    if d < 2:
        raise ValueError("need d >= 2")
    if N <= d:
        raise ValueError("need N > d")
    params = ZonalParams.for_space(Space(tag, d))
    # C_1(z) = ((a + b + 2) / 2) (z + (d - 2) / d)
    lead = (params.alpha + params.beta + 2) / 2
    f1 = Fraction((N - 1) * d, 2 * (d - 1)) / lead
    z0 = 2 * tight_alpha(Space(tag, d), N) - 1
    return LPCertificate([Fraction(1), f1], z0, params)


# ------------------------------------------------------------ Gale duality


def _row_inner(u: np.ndarray, v: np.ndarray, tag: str) -> np.ndarray:
    """sum_i u_i conj(v_i) for rows of shape (N, k)."""
    return kmul(u, kconj(v), tag).sum(axis=0)


def gale_dual(config: Configuration, tol: float = 1e-10) -> Configuration:
    """Complementary rows of a unitary completion of the scaled generator matrix.

    Representatives are scaled to norm^2 d/N and placed as the columns of a
    d x N matrix with orthonormal rows (the 1-design condition). Modified
    Gram-Schmidt with pivoting over K, scalars acting on the left, adds the
    missing N - d rows; their columns are the dual points in KP^(N-d-1).
    """
    if config.kind != "projective" or config.tag == "O":
        raise ValueError("Gale duality needs a real, complex or quaternionic projective configuration")
    tag, N, d = config.tag, config.N, config.d
    if N <= d + 1:
        raise ValueError("Gale duality needs N > d + 1")
    x = np.asarray(config.points, dtype=float)
    x = x / np.linalg.norm(x.reshape(N, -1), axis=1)[:, None, None]
    frame = (d / N) * projectors_array(x, tag).sum(axis=0)
    eye = np.zeros_like(frame)
    eye[np.arange(d), np.arange(d), 0] = 1.0
    if np.max(np.abs(frame - eye)) > tol:
        raise ValueError(f"not a 1-design: frame operator deviates by {np.max(np.abs(frame - eye)):.2e}")
    rows = [math.sqrt(d / N) * x[:, a, :] for a in range(d)]  # each (N, k)
    k = DIMS[tag]
    candidates = []
    for i in range(N):
        e = np.zeros((N, k))
        e[i, 0] = 1.0
        candidates.append(e)
    new_rows = []
    while len(new_rows) < N - d:
        best, best_norm = None, -1.0
        for c in candidates:
            r = c.copy()
            for _ in range(2):  # second pass restores orthogonality lost to rounding
                for q in rows + new_rows:
                    r = r - kmul(_row_inner(r, q, tag)[None, :], q, tag)
            nrm = float(np.linalg.norm(r))
            if nrm > best_norm:
                best, best_norm = r, nrm
        if best_norm < 1e-6:
            raise ValueError("unitary completion failed")
        new_rows.append(best / best_norm)
    W = np.stack(new_rows, axis=1)  # (N, N - d, k): column i is point i
    W = W / np.linalg.norm(W.reshape(N, -1), axis=1)[:, None, None]
    return Configuration("projective", W, tag, None, {"gale_of": config.meta.get("descriptor")})
