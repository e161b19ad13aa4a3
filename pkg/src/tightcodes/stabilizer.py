"""Rigorous upper bounds on the dimension of a configuration's stabilizer.

The isometry group of HP^(d-1) has Lie algebra sp(d), acting on projection
matrices by commutation with skew-Hermitian quaternionic matrices. For OP^2
the algebra is f4, spanned by commutation with traceless skew-Hermitian
octonionic matrices together with derivations of the octonions applied
entrywise. The tangent map of the orbit at a configuration is the matrix M
whose rows are the generators applied to all projectors; the stabilizer has
dimension dim g - rank M.

We only know approximate projectors, so M is only known up to an entrywise
error delta. The rank of M is at least the number of eigenvalues of M~ M~^t
above the perturbation threshold m k delta (2 max|M~| + delta), counted by
Sturm sequences on the exact characteristic polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .algebra import DIMS, Configuration, Scalar, associator, commutator
from .certify import DEFAULT_EPSILON, make_dyadic
from .exactnum.upoly import count_above, sqf_decomposition
from .systems import SpaceDescriptor, to_chart

GRID_BITS = 32
POINT_BITS = 50


@dataclass(frozen=True)
class LieSpanningSet:
    tag: str
    d: int
    labels: tuple
    dim_g: int

    @property
    def size(self) -> int:
        return len(self.labels)

    def apply(self, index: int, X: list) -> list:
        """Image of a d x d matrix of Scalars under generator `index`."""
        kind, data = self.labels[index]
        if kind == "commutator":
            A = _skew_matrix(self.tag, self.d, data)
            return _mat_sub(_mat_mul(A, X), _mat_mul(X, A))
        a, b = Scalar.unit(self.tag, data[0]), Scalar.unit(self.tag, data[1])
        return [[derivation(a, b, x) for x in row] for row in X]

    def real_matrices(self) -> list:
        """One integer matrix per generator acting on real coordinates of d x d matrices."""
        return _real_matrices(self)


@dataclass
class OrbitMatrix:
    rows: np.ndarray  # object array of ints
    scale_bits: int
    delta: Fraction

    def as_fractions(self) -> list:
        den = 2**self.scale_bits
        return [[Fraction(int(v), den) for v in r] for r in self.rows]


@dataclass
class OrbitRankReport:
    rank_lower_bound: int
    threshold: Fraction
    stab_dim_upper: int | None
    delta: Fraction


def derivation(a: Scalar, b: Scalar, x: Scalar) -> Scalar:
    """D_{a,b}(x) = [[a,b],x] - 3 [a,b,x]."""
    return commutator(commutator(a, b), x) - 3 * associator(a, b, x)


def _skew_matrix(tag: str, d: int, data) -> list:
    zero = Scalar.zero(tag)
    A = [[zero] * d for _ in range(d)]
    u = Scalar.unit(tag, data[-1])
    if data[0] == "diag":
        _, r, c, _ = data
        A[r][r] = u
        if c is not None:
            A[c][c] = -u
    else:
        _, r, c, _ = data
        A[r][c] = u
        A[c][r] = -u.conj()
    return A


def _mat_mul(A: list, B: list) -> list:
    d = len(A)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            s = A[i][0] * B[0][j]
            for k in range(1, d):
                s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def _mat_sub(A: list, B: list) -> list:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def lie_spanning_set(space) -> LieSpanningSet:
    """Spanning set of the isometry Lie algebra of HP^(d-1) or OP^2.

    `space` is a SpaceDescriptor or a pair (tag, d).
    """
    if isinstance(space, SpaceDescriptor):
        if space.is_grassmann:
            raise ValueError("stabilizer bounds are implemented for projective spaces only")
        tag, d = space.tag, space.dim
    else:
        tag, d = space
    labels = []
    if tag == "H":
        for r in range(d):
            for u in range(1, 4):
                labels.append(("commutator", ("diag", r, None, u)))
        for r, c in combinations(range(d), 2):
            for u in range(4):
                labels.append(("commutator", ("off", r, c, u)))
        return LieSpanningSet("H", d, tuple(labels), d * (2 * d + 1))
    if tag == "O" and d == 3:
        for r in range(2):
            for u in range(1, 8):
                labels.append(("commutator", ("diag", r, r + 1, u)))
        for r, c in combinations(range(3), 2):
            for u in range(8):
                labels.append(("commutator", ("off", r, c, u)))
        for i, j in combinations(range(1, 8), 2):
            labels.append(("derivation", (i, j)))
        return LieSpanningSet("O", 3, tuple(labels), 52)
    raise ValueError(f"unsupported space {tag}P^{d - 1}")


@lru_cache(maxsize=4)
def _real_matrices(lie: LieSpanningSet) -> list:
    d, k = lie.d, DIMS[lie.tag]
    L = d * d * k
    zero = Scalar.zero(lie.tag)
    mats = []
    for g in range(lie.size):
        G = np.zeros((L, L), dtype=np.int64)
        for col in range(L):
            r, rest = divmod(col, d * k)
            c, u = divmod(rest, k)
            X = [[zero] * d for _ in range(d)]
            X[r][c] = Scalar.unit(lie.tag, u)
            Y = lie.apply(g, X)
            G[:, col] = [int(v) for row in Y for s in row for v in s.coeffs]
        mats.append(G)
    return mats


def _points_of(config, lie: LieSpanningSet) -> np.ndarray:
    pts = config.points if isinstance(config, Configuration) else np.asarray(config, dtype=float)
    if pts.ndim != 3 or pts.shape[1:] != (lie.d, DIMS[lie.tag]):
        raise ValueError(f"points must have shape (N, {lie.d}, {DIMS[lie.tag]}), got {pts.shape}")
    if lie.tag == "O":
        pts = np.array([to_chart(p) for p in pts])
        pts[:, 0, 1:] = 0.0
    return pts


def orbit_matrix(config, lie: LieSpanningSet, epsilon=DEFAULT_EPSILON) -> OrbitMatrix:
    """Rows: each generator applied to every projector, real coordinates concatenated.

    `epsilon` is the ell-infinity distance between the given representatives
    and the true ones. The representatives are rounded to 2^-50, projectors are
    formed exactly and each entry of M is rounded to a 2^-32 grid; delta
    accounts for all three errors.
    """
    pts = _points_of(config, lie)
    k = DIMS[lie.tag]
    scaled = [[[int(v * 2**POINT_BITS) for v in make_dyadic(list(row))] for row in p] for p in pts]
    vecs = []
    for p in scaled:
        x = [Scalar(lie.tag, tuple(row)) for row in p]
        vecs.append([int(v) for a in x for b in x for v in (a * b.conj()).coeffs])
    V = np.array(vecs, dtype=object).T  # (L, N), scale 2^100
    shift = 2 * POINT_BITS - GRID_BITS
    half = 1 << (shift - 1)
    rows = []
    op_norm = 0
    for G in lie.real_matrices():
        op_norm = max(op_norm, int(np.abs(G).sum(axis=1).max()))
        img = G.astype(object).dot(V)
        rows.append([(int(v) + half) >> shift for v in img.T.ravel()])
    eps = Fraction(epsilon) + Fraction(1, 2 ** (POINT_BITS + 1))
    biggest = max(abs(Fraction(v)) for p in scaled for row in p for v in row) / 2**POINT_BITS
    c = max(Fraction(1), biggest)
    delta = (2 * eps * c + eps * eps) * k * op_norm + Fraction(1, 2 ** (GRID_BITS + 1))
    return OrbitMatrix(np.array(rows, dtype=object), GRID_BITS, delta)


def _integer_rows(M) -> tuple[np.ndarray, int]:
    if isinstance(M, OrbitMatrix):
        return M.rows, 2**M.scale_bits
    rows = [[Fraction(v) for v in r] for r in M]
    den = 1
    for r in rows:
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
    A = np.array([[int(v * den) for v in r] for r in rows], dtype=object)
    return A, den


def rank_lower_bound(M, delta=None, dim_g: int | None = None) -> OrbitRankReport:
    """Lower bound on the rank of any matrix within entrywise delta of M.

    M is an OrbitMatrix (its own delta is used unless one is given) or any
    rational matrix.
    """
    if delta is None:
        delta = M.delta if isinstance(M, OrbitMatrix) else Fraction(0)
    delta = Fraction(delta)
    A, den = _integer_rows(M)
    m = A.shape[0]
    k = A.shape[1] if A.ndim == 2 else 0
    if m == 0 or k == 0:
        return OrbitRankReport(0, Fraction(0), dim_g, delta)
    biggest = Fraction(max(abs(int(v)) for v in A.ravel()), den)
    threshold = m * k * delta * (2 * biggest + delta)
    gram = A.dot(A.T)
    dm = DomainMatrix([[ZZ(int(v)) for v in r] for r in gram], (m, m), ZZ)
    charpoly = [int(c) for c in reversed(dm.charpoly())]
    scaled_threshold = threshold * den * den
    count = 0
    for factor, mult in sqf_decomposition(charpoly):
        if len(factor) > 1:
            count += mult * count_above(factor, scaled_threshold)
    stab = None if dim_g is None else dim_g - count
    return OrbitRankReport(count, threshold, stab, delta)


def stabilizer_bound(config, space, epsilon=DEFAULT_EPSILON) -> int:
    """Upper bound on the dimension of the stabilizer of a certified configuration."""
    lie = lie_spanning_set(space)
    rep = rank_lower_bound(orbit_matrix(config, lie, epsilon), dim_g=lie.dim_g)
    return rep.stab_dim_upper


def stabilizer_report(config, space, epsilon=DEFAULT_EPSILON) -> OrbitRankReport:
    lie = lie_spanning_set(space)
    return rank_lower_bound(orbit_matrix(config, lie, epsilon), dim_g=lie.dim_g)
