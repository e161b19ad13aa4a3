"""Composition algebras R, C, H, O and the geometry built on them.

Scalars are coefficient tuples over the basis e0..e7 produced by
Cayley-Dickson doubling, so C, H and O sit inside each other by
coefficient embedding (e1 = i, e2 = j, e3 = k, e4 is the doubling unit).
Coefficients may be any ring elements: ints, Fractions, floats, intervals,
surds or polynomials.

The vectorized helpers at the bottom work on float arrays whose last axis
holds the real coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

DIMS = {"R": 1, "C": 2, "H": 4, "O": 8}
TAG_OF_DIM = {v: k for k, v in DIMS.items()}


def _cd_product(x, y):
    # (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))
    n = len(x)
    if n == 1:
        return [x[0] * y[0]]
    h = n // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    ac = _cd_product(a, c)
    db = _cd_product(_cd_conj(d), b)
    da = _cd_product(d, a)
    bc = _cd_product(b, _cd_conj(c))
    return [p - q for p, q in zip(ac, db)] + [p + q for p, q in zip(da, bc)]


def _cd_conj(x):
    return [x[0]] + [-v for v in x[1:]]


def _build_table():
    table = []
    for i in range(8):
        row = []
        for j in range(8):
            ei = [0] * 8
            ej = [0] * 8
            ei[i] = 1
            ej[j] = 1
            prod = _cd_product(ei, ej)
            (k,) = [t for t in range(8) if prod[t] != 0]
            row.append((prod[k], k))
        table.append(tuple(row))
    return tuple(table)


# e_i e_j = sign * e_k, stored as MULT_TABLE[i][j] = (sign, k).
# The C, H tables are the upper-left 2x2 and 4x4 blocks.
MULT_TABLE = _build_table()

_STRUCT = np.zeros((8, 8, 8))
for _i in range(8):
    for _j in range(8):
        _s, _k = MULT_TABLE[_i][_j]
        _STRUCT[_i, _j, _k] = _s


def structure_tensor(tag: str) -> np.ndarray:
    n = DIMS[tag]
    return _STRUCT[:n, :n, :n]


@dataclass(frozen=True)
class Scalar:
    tag: str
    coeffs: tuple

    def __post_init__(self):
        if self.tag not in DIMS:
            raise ValueError(f"unknown algebra tag {self.tag!r}")
        if len(self.coeffs) != DIMS[self.tag]:
            raise ValueError(f"{self.tag} needs {DIMS[self.tag]} coefficients, got {len(self.coeffs)}")

    @classmethod
    def real(cls, tag: str, value) -> "Scalar":
        return cls(tag, (value,) + (0,) * (DIMS[tag] - 1))

    @classmethod
    def unit(cls, tag: str, index: int) -> "Scalar":
        c = [0] * DIMS[tag]
        c[index] = 1
        return cls(tag, tuple(c))

    @classmethod
    def zero(cls, tag: str) -> "Scalar":
        return cls(tag, (0,) * DIMS[tag])

    def embed(self, tag: str) -> "Scalar":
        if DIMS[tag] < DIMS[self.tag]:
            raise ValueError(f"cannot embed {self.tag} into {tag}")
        return Scalar(tag, self.coeffs + (0,) * (DIMS[tag] - DIMS[self.tag]))

    def _check(self, other: "Scalar"):
        if other.tag != self.tag:
            raise ValueError(f"algebra mismatch: {self.tag} vs {other.tag}")

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return Scalar(self.tag, (self.coeffs[0] + other,) + self.coeffs[1:])
        self._check(other)
        return Scalar(self.tag, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Scalar(self.tag, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return scalar_mul(self, other)
        return Scalar(self.tag, tuple(a * other for a in self.coeffs))

    def __rmul__(self, other):
        # real scalars commute with everything
        return Scalar(self.tag, tuple(other * a for a in self.coeffs))

    def conj(self) -> "Scalar":
        return Scalar(self.tag, (self.coeffs[0],) + tuple(-a for a in self.coeffs[1:]))

    def norm2(self):
        total = 0
        for a in self.coeffs:
            total = total + a * a
        return total

    @property
    def re(self):
        return self.coeffs[0]

    def is_real(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.tag == other.tag and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        return self.is_real() and self.coeffs[0] == other

    __hash__ = None

    def __repr__(self):
        return f"Scalar({self.tag}, {list(self.coeffs)})"


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    """Product in the fixed Cayley-Dickson table."""
    a._check(b)
    n = DIMS[a.tag]
    out = [0] * n
    for i, ai in enumerate(a.coeffs):
        if _is_zero(ai):
            continue
        row = MULT_TABLE[i]
        for j, bj in enumerate(b.coeffs):
            if _is_zero(bj):
                continue
            s, k = row[j]
            t = ai * bj
            out[k] = out[k] + t if s > 0 else out[k] - t
    return Scalar(a.tag, tuple(out))


def _is_zero(v) -> bool:
    try:
        return v == 0
    except Exception:  # interval-like types may refuse equality
        return False


def re_product(a: Scalar, b: Scalar):
    """Re(ab) without forming the full product."""
    a._check(b)
    total = a.coeffs[0] * b.coeffs[0]
    for x, y in zip(a.coeffs[1:], b.coeffs[1:]):
        total = total - x * y
    return total


def associator(a: Scalar, b: Scalar, c: Scalar) -> Scalar:
    return (a * b) * c - a * (b * c)


def commutator(a: Scalar, b: Scalar) -> Scalar:
    return a * b - b * a


class HermitianMatrix:
    """Square matrix over K; entries are Scalars of one tag.

    Products of two Hermitian matrices are generally not Hermitian, so the
    class also serves as a plain square K-matrix.
    """

    __slots__ = ("tag", "entries")

    def __init__(self, tag: str, entries):
        self.tag = tag
        self.entries = tuple(tuple(row) for row in entries)
        d = len(self.entries)
        if any(len(row) != d for row in self.entries):
            raise ValueError("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, tag: str, d: int, one=1) -> "HermitianMatrix":
        return cls(tag, [[Scalar.real(tag, one if i == j else 0) for j in range(d)] for i in range(d)])

    @classmethod
    def from_real(cls, rows, tag: str = "R") -> "HermitianMatrix":
        return cls(tag, [[Scalar.real(tag, v) for v in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "HermitianMatrix"):
        return HermitianMatrix(self.tag, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "HermitianMatrix"):
        return HermitianMatrix(self.tag, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def scale(self, c) -> "HermitianMatrix":
        return HermitianMatrix(self.tag, [[c * a for a in r] for r in self.entries])

    def __matmul__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        d = self.dim
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = Scalar.zero(self.tag)
                for k in range(d):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return HermitianMatrix(self.tag, out)

    def trace(self):
        total = 0
        for i in range(self.dim):
            total = total + self.entries[i][i].re
        return total

    def is_hermitian(self) -> bool:
        d = self.dim
        return all(self.entries[i][j] == self.entries[j][i].conj() for i in range(d) for j in range(d))

    def real_coords(self) -> list:
        """All d*d*dim K real coefficients, row-major."""
        return [c for row in self.entries for s in row for c in s.coeffs]

    def map(self, fn) -> "HermitianMatrix":
        return HermitianMatrix(self.tag, [[Scalar(s.tag, tuple(fn(c) for c in s.coeffs)) for s in r] for r in self.entries])

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix) or other.dim != self.dim:
            return NotImplemented
        return all(a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    __hash__ = None

    def to_array(self) -> np.ndarray:
        return np.array([[[float(c) for c in s.coeffs] for s in row] for row in self.entries])


def frobenius_inner(A: HermitianMatrix, B: HermitianMatrix):
    """Re Tr(AB)."""
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    if A.tag != B.tag:
        raise ValueError(f"algebra mismatch: {A.tag} vs {B.tag}")
    total = 0
    d = A.dim
    for i in range(d):
        for j in range(d):
            total = total + re_product(A.entries[i][j], B.entries[j][i])
    return total


@dataclass(frozen=True)
class ProjectivePoint:
    """Unit representative x of a point of KP^{d-1}; scalars act on the right.

    For octonions the representative must lie in an affine chart, meaning
    coordinate `chart` is real and nonnegative.
    """

    tag: str
    coords: tuple
    chart: int = 0

    def __post_init__(self):
        if any(c.tag != self.tag for c in self.coords):
            raise ValueError("coordinates must share the algebra tag")
        if self.tag == "O":
            a = self.coords[self.chart]
            if not a.is_real():
                raise ValueError("octonionic chart coordinate must be real")
            try:
                if a.re < 0:
                    raise ValueError("octonionic chart coordinate must be nonnegative")
            except TypeError:
                pass

    @property
    def d(self) -> int:
        return len(self.coords)

    def norm2(self):
        total = 0
        for c in self.coords:
            total = total + c.norm2()
        return total


def _exact_like(v) -> bool:
    return not isinstance(v, (float, np.floating))


def projector(p: ProjectivePoint, check: bool = True) -> HermitianMatrix:
    """Pi = x x^dagger, entries x_k conj(x_l)."""
    if check:
        n2 = p.norm2()
        if _exact_like(n2):
            if n2 != 1:
                raise ValueError("representative is not a unit vector")
        elif abs(float(n2) - 1.0) > 1e-8:
            raise ValueError(f"representative is not a unit vector (|x|^2 = {float(n2)})")
    xs = p.coords
    return HermitianMatrix(p.tag, [[xk * xl.conj() for xl in xs] for xk in xs])


@dataclass(frozen=True)
class GrassmannPoint:
    """m x n generator with orthonormal rows; rows may hold exact numbers."""

    generator: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.generator)
        object.__setattr__(self, "generator", rows)
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged generator")

    @classmethod
    def from_array(cls, X) -> "GrassmannPoint":
        return cls(tuple(tuple(float(v) for v in row) for row in np.asarray(X)))

    @property
    def m(self) -> int:
        return len(self.generator)

    @property
    def n(self) -> int:
        return len(self.generator[0])

    def projector(self) -> HermitianMatrix:
        X = self.generator
        n = self.n
        rows = []
        for a in range(n):
            row = []
            for b in range(n):
                acc = 0
                for r in X:
                    acc = acc + r[a] * r[b]
                row.append(acc)
            rows.append(row)
        return HermitianMatrix.from_real(rows)

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.generator])


@dataclass(frozen=True)
class RotationMatrix:
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_array(cls, U) -> "RotationMatrix":
        return cls(tuple(tuple(v for v in row) for row in np.asarray(U).tolist()))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.matrix])

    def is_rotation(self, tol: float = 1e-12) -> bool:
        U = self.as_array()
        return bool(np.allclose(U @ U.T, np.eye(self.n), atol=tol) and abs(np.linalg.det(U) - 1) < tol)


def frobenius_rotations(U: RotationMatrix, V: RotationMatrix):
    total = 0
    for r, s in zip(U.matrix, V.matrix):
        for a, b in zip(r, s):
            total = total + a * b
    return total


def chordal_distance(p, q) -> float:
    """Chordal distance, always through projection matrices."""
    if type(p) is not type(q):
        raise ValueError("points live in different spaces")
    if isinstance(p, ProjectivePoint):
        if p.tag != q.tag or p.d != q.d:
            raise ValueError("projective spaces differ")
        val = 1 - frobenius_inner(projector(p), projector(q))
    elif isinstance(p, GrassmannPoint):
        if (p.m, p.n) != (q.m, q.n):
            raise ValueError("Grassmannians differ")
        val = p.m - frobenius_inner(p.projector(), q.projector())
    elif isinstance(p, RotationMatrix):
        if p.n != q.n:
            raise ValueError("rotation groups differ")
        val = 2 * p.n - 2 * frobenius_rotations(p, q)
    else:
        raise TypeError(f"unsupported point type {type(p).__name__}")
    return math.sqrt(max(float(val), 0.0))


def principal_cosines(U: GrassmannPoint, V: GrassmannPoint) -> np.ndarray:
    if (U.m, U.n) != (V.m, V.n):
        raise ValueError("shape mismatch")
    s = np.linalg.svd(U.as_array() @ V.as_array().T, compute_uv=False)
    return np.clip(np.sort(s)[::-1], 0.0, 1.0)


# ---------------------------------------------------------------- float arrays


def kmul(a: np.ndarray, b: np.ndarray, tag: str) -> np.ndarray:
    return np.einsum("...i,...j,ijk->...k", a, b, structure_tensor(tag))


def kconj(a: np.ndarray) -> np.ndarray:
    out = -np.asarray(a, dtype=float)
    out[..., 0] *= -1
    return out


def projectors_array(points: np.ndarray, tag: str) -> np.ndarray:
    """(N, d, n) representatives -> (N, d, d, n) projection matrices."""
    x = np.asarray(points, dtype=float)
    return kmul(x[:, :, None, :], kconj(x)[:, None, :, :], tag)


def gram_of_projectors(P: np.ndarray) -> np.ndarray:
    """Matrix of <Pi_i, Pi_j> for Hermitian arrays (N, d, d, n)."""
    flat = P.reshape(P.shape[0], -1)
    return flat @ flat.T


def grass_projectors_array(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return np.einsum("Nma,Nmb->Nab", X, X)


@dataclass
class Configuration:
    """Decoded code: float representatives plus optional weights.

    kind is "projective" (points (N, d, dim K)), "grassmann" (points (N, m, n))
    or "rotation" (points (N, n, n)).
    """

    kind: str
    points: np.ndarray
    tag: str = "R"
    weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        if self.kind == "grassmann":
            return int(self.points.shape[2])
        return int(self.points.shape[1])

    @property
    def m(self) -> int:
        return int(self.points.shape[1]) if self.kind == "grassmann" else 1

    @property
    def dim_k(self) -> int:
        return DIMS[self.tag]

    def projectors(self) -> np.ndarray:
        if self.kind == "projective":
            return projectors_array(self.points, self.tag)
        if self.kind == "grassmann":
            return grass_projectors_array(self.points)[..., None]
        return np.asarray(self.points, dtype=float)[..., None]

    def gram(self) -> np.ndarray:
        return gram_of_projectors(self.projectors())

    def pair_values(self) -> np.ndarray:
        G = self.gram()
        iu = np.triu_indices(self.N, 1)
        return G[iu]

    def point_objects(self) -> list:
        if self.kind == "projective":
            return [
                ProjectivePoint(self.tag, tuple(Scalar(self.tag, tuple(float(c) for c in row)) for row in pt))
                for pt in self.points
            ]
        if self.kind == "grassmann":
            return [GrassmannPoint.from_array(X) for X in self.points]
        return [RotationMatrix.from_array(U) for U in self.points]


def frac_or_float(v):
    """Fraction when v is an exact rational, otherwise the value unchanged."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return v
