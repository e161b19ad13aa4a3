"""Constraint systems whose nonsingular zeros are tight simplices.

Each builder returns a ConstraintSystem: the PolySystem plus a layout naming
every variable. Projective points are stored coordinate by coordinate, each
coordinate as its real coefficients over the algebra basis; octonionic
points live in the first chart, whose coordinate is a single real variable.
Grassmannian points are m row vectors in R^n. Weights, the auxiliary
fourth-power variables and the eigenvalue parameter come after all points.

Equal inner products are encoded as a chain of consecutive differences over
the lexicographically sorted list of constrained pairs. Cyclic families only
carry the seed points; shifted points are substitutions, not equations.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import DIMS, Configuration, Scalar, kmul, projectors_array
from .polysys import Polynomial, PolySystem

KINDS = (
    "HP_GENERAL",
    "HP2_CYCLIC12",
    "HP2_CYCLIC13",
    "HP2_15",
    "OP2_GENERAL",
    "OP2_CYCLIC24",
    "OP2_CYCLIC25",
    "OP2_27",
    "GRASS_GENERAL",
    "GRASS_CYCLIC",
)

_TEXT_KIND = {
    "hp": "HP_GENERAL",
    "hp2-cyclic12": "HP2_CYCLIC12",
    "hp2-cyclic13": "HP2_CYCLIC13",
    "hp2-15": "HP2_15",
    "op2": "OP2_GENERAL",
    "op2-cyclic24": "OP2_CYCLIC24",
    "op2-cyclic25": "OP2_CYCLIC25",
    "op2-27": "OP2_27",
    "grass": "GRASS_GENERAL",
    "grass-cyclic": "GRASS_CYCLIC",
}
_KIND_TEXT = {v: k for k, v in _TEXT_KIND.items()}


@dataclass(frozen=True)
class SpaceDescriptor:
    """Which family of constraints to build.

    Parameter names: d and N for HP_GENERAL, N for OP2_GENERAL, m for the
    projective cyclic kinds (number of seed orbits), m, n, N for
    GRASS_GENERAL and m, n, k for GRASS_CYCLIC.
    """

    kind: str
    d: int | None = None
    N: int | None = None
    m: int | None = None
    n: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        need = {
            "HP_GENERAL": ("d", "N"),
            "HP2_CYCLIC12": ("m",),
            "HP2_CYCLIC13": ("m",),
            "OP2_GENERAL": ("N",),
            "OP2_CYCLIC24": ("m",),
            "OP2_CYCLIC25": ("m",),
            "GRASS_GENERAL": ("m", "n", "N"),
            "GRASS_CYCLIC": ("m", "n", "k"),
        }.get(self.kind, ())
        for name in ("d", "N", "m", "n", "k"):
            v = getattr(self, name)
            if name in need and v is None:
                raise ValueError(f"{self.kind} needs parameter {name}")
            if name not in need and v is not None:
                raise ValueError(f"{self.kind} takes no parameter {name}")
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ValueError(f"parameter {name} must be a positive integer")
        if self.kind == "HP_GENERAL" and (self.d < 2 or self.N < self.d + 2):
            raise ValueError("HP_GENERAL needs d > 1 and N >= d + 2")
        if self.kind == "OP2_GENERAL" and self.N < 5:
            raise ValueError("OP2_GENERAL needs N >= 5")
        if self.kind.startswith("GRASS"):
            if 2 * self.m > self.n:
                raise ValueError("Grassmannian kinds need m <= n/2")
        if self.kind == "GRASS_GENERAL" and self.N < 2:
            raise ValueError("GRASS_GENERAL needs N >= 2")

    # ----------------------------------------------------------- geometry
    @property
    def tag(self) -> str:
        if self.kind.startswith("HP"):
            return "H"
        if self.kind.startswith("OP"):
            return "O"
        return "R"

    @property
    def is_grassmann(self) -> bool:
        return self.kind.startswith("GRASS")

    @property
    def dim(self) -> int:
        """d for projective spaces, n for Grassmannians."""
        if self.kind == "HP_GENERAL":
            return self.d
        if self.is_grassmann:
            return self.n
        return 3

    @property
    def rank(self) -> int:
        return self.m if self.is_grassmann else 1

    @property
    def num_points(self) -> int:
        k = self.kind
        if k in ("HP_GENERAL", "OP2_GENERAL", "GRASS_GENERAL"):
            return self.N
        if k in ("HP2_CYCLIC12", "OP2_CYCLIC24"):
            return 3 * self.m
        if k in ("HP2_CYCLIC13", "OP2_CYCLIC25"):
            return 3 * self.m + 1
        if k == "HP2_15":
            return 15
        if k == "OP2_27":
            return 27
        return self.n * self.k + 1

    @property
    def alpha(self) -> Fraction:
        """Common <Pi_i, Pi_j> of a tight simplex with num_points points."""
        N = self.num_points
        if self.is_grassmann:
            m, n = self.m, self.n
            return Fraction(m * (N * m - n), n * (N - 1))
        d = self.dim
        return Fraction(N - d, d * (N - 1))

    # --------------------------------------------------------------- text
    def to_text(self) -> str:
        word = _KIND_TEXT[self.kind]
        if self.kind == "HP_GENERAL":
            return f"{word} d={self.d} n={self.N}"
        if self.kind == "OP2_GENERAL":
            return f"{word} n={self.N}"
        if self.kind == "GRASS_GENERAL":
            return f"{word} m={self.m} n={self.n} N={self.N}"
        if self.kind == "GRASS_CYCLIC":
            return f"{word} m={self.m} n={self.n} k={self.k}"
        if self.m is not None:
            return f"{word} m={self.m}"
        return word

    @classmethod
    def parse(cls, text: str) -> "SpaceDescriptor":
        """Parse forms such as 'hp d=3 n=6', 'op2-27' or 'grass m=2 n=5 k=11-cyclic'."""
        parts = text.strip().split()
        if not parts:
            raise ValueError("empty space descriptor")
        word = parts[0].lower()
        if word not in _TEXT_KIND:
            raise ValueError(f"unknown space {parts[0]!r}")
        kind = _TEXT_KIND[word]
        params = {}
        cyclic_total = None
        for p in parts[1:]:
            mt = re.fullmatch(r"([A-Za-z]+)=(\d+)(-cyclic)?", p)
            if not mt:
                raise ValueError(f"malformed parameter {p!r}")
            key, val, cyc = mt.group(1), int(mt.group(2)), mt.group(3)
            if cyc:
                if kind != "GRASS_GENERAL" or key != "k":
                    raise ValueError(f"'-cyclic' suffix only applies to grass k=: {p!r}")
                cyclic_total = val
                continue
            if key in params:
                raise ValueError(f"repeated parameter {key!r}")
            params[key] = val
        if cyclic_total is not None:
            kind = "GRASS_CYCLIC"
            n = params.get("n")
            if n is None or (cyclic_total - 1) % n:
                raise ValueError("cyclic point count must be n*k + 1")
            params["k"] = (cyclic_total - 1) // n
        if kind == "HP_GENERAL":
            return cls(kind, d=params.pop("d", None), N=params.pop("n", None), **_leftover(params))
        if kind == "OP2_GENERAL":
            return cls(kind, N=params.pop("n", None), **_leftover(params))
        return cls(kind, **_leftover(params))

    def __str__(self):
        return self.to_text()


def _leftover(params: dict) -> dict:
    allowed = {"d", "N", "m", "n", "k"}
    bad = set(params) - allowed
    if bad:
        raise ValueError(f"unknown parameters {sorted(bad)}")
    return params


@dataclass
class ConstraintSystem:
    system: PolySystem
    layout: list
    descriptor: SpaceDescriptor
    seeds: int
    meta: dict = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return self.system.m

    @property
    def neqs(self) -> int:
        return self.system.n

    def slots(self, name: str) -> list:
        return [i for i, s in enumerate(self.layout) if s[0] == name]


# ---------------------------------------------------------------- building


def _cyclic_pairs(m: int) -> list:
    """Constrained pairs of the projective cyclic families (0-based, sorted)."""
    pairs = set()
    for i in range(m):
        pairs.add((i, i + m))
        for j in range(i + 1, m):
            pairs.add((i, j))
        for j in range(i + m + 1, 2 * m):
            pairs.add((i, j))
        for j in range(i + 2 * m + 1, 3 * m):
            pairs.add((i, j))
    return sorted(pairs)


def _grass_cyclic_pairs(n: int, k: int) -> list:
    pairs = set()
    for i in range(k):
        for q in range(1, n // 2 + 1):
            pairs.add((i, i + q * k))
    for i in range(k - 1):
        for i0 in range(i + 1, k):
            for q in range(n):
                pairs.add((i, i0 + q * k))
    return sorted(pairs)


class _Builder:
    def __init__(self):
        self.layout = []
        self.eqs = []

    def new_var(self, slot) -> Polynomial:
        self.layout.append(slot)
        return Polynomial.var(len(self.layout) - 1)


def _unit_dot(pa, pb) -> Polynomial:
    """<A, B> = sum over all entries and coefficients of A_kl B_kl."""
    total = Polynomial()
    for ra, rb in zip(pa, pb):
        for ea, eb in zip(ra, rb):
            for ca, cb in zip(ea.coeffs, eb.coeffs):
                total = total + ca * cb
    return total


def _shifted(P, r: int):
    """Projector of the coordinate shift sigma^r x from that of x."""
    d = len(P)
    return [[P[(a + r) % d][(b + r) % d] for b in range(d)] for a in range(d)]


def _proj_polys(coords) -> list:
    """Entries x_k conj(x_l) as Scalars with polynomial coefficients."""
    return [[xk * xl.conj() for xl in coords] for xk in coords]


def _grass_proj_polys(rows) -> list:
    n = len(rows[0])
    out = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            v = Polynomial()
            for r in rows:
                v = v + r[a] * r[b]
            out[a][b] = out[b][a] = Scalar("R", (v,))
    return out


def _sum_mats(mats, weights=None):
    d = len(mats[0])
    tag = mats[0][0][0].tag
    zero = Scalar(tag, (Polynomial(),) * DIMS[tag])
    out = [[zero] * d for _ in range(d)]
    for t, M in enumerate(mats):
        w = 1 if weights is None else weights[t]
        for a in range(d):
            for b in range(d):
                out[a][b] = out[a][b] + M[a][b] * w
    return out


def _chain(builder: _Builder, values: list):
    for a, b in zip(values, values[1:]):
        builder.eqs.append(b - a)


def _projective_seed(builder: _Builder, point: int, tag: str, d: int, chart: bool):
    n = DIMS[tag]
    coords = []
    for comp in range(d):
        if chart and comp == 0:
            a = builder.new_var(("x", point, 0, 0))
            coords.append(Scalar(tag, (a,) + (Polynomial(),) * (n - 1)))
            continue
        cs = tuple(builder.new_var(("x", point, comp, c)) for c in range(n))
        coords.append(Scalar(tag, cs))
    return coords


def _norm2(coords) -> Polynomial:
    total = Polynomial()
    for x in coords:
        total = total + x.norm2()
    return total


def build_system(desc: SpaceDescriptor) -> ConstraintSystem:
    kind = desc.kind
    if kind in ("HP_GENERAL", "OP2_GENERAL"):
        cs = _build_general_projective(desc)
    elif kind in ("HP2_CYCLIC12", "HP2_CYCLIC13", "OP2_CYCLIC24", "OP2_CYCLIC25"):
        cs = _build_cyclic_projective(desc)
    elif kind in ("HP2_15", "OP2_27"):
        cs = _build_traceless(desc)
    elif kind == "GRASS_GENERAL":
        cs = _build_grass_general(desc)
    else:
        cs = _build_grass_cyclic(desc)
    want = expected_counts(desc)
    got = (cs.nvars, cs.neqs)
    if got != want:
        raise AssertionError(f"{desc}: built {got} (variables, equations), expected {want}")
    return cs


def expected_counts(desc: SpaceDescriptor) -> tuple[int, int]:
    """(variables, equations) for each family."""
    k = desc.kind
    if k == "HP_GENERAL":
        d, N = desc.d, desc.N
        return N * (4 * d + 1), N + (N * (N - 1) // 2 - 1) + (2 * d * d - d)
    if k == "OP2_GENERAL":
        N = desc.N
        return 18 * N, N + (N * (N - 1) // 2 - 1) + 27
    if k in ("HP2_CYCLIC12", "HP2_CYCLIC13", "OP2_CYCLIC24", "OP2_CYCLIC25"):
        m = desc.m
        per_point = 12 if k.startswith("HP") else 17
        weighted = k in ("HP2_CYCLIC12", "OP2_CYCLIC24")
        chain = len(_cyclic_pairs(m)) - 1
        last = (1 + DIMS[desc.tag]) if weighted else 2
        return m * (per_point + (1 if weighted else 0)), m + chain + last
    if k == "HP2_15":
        return 15 * 13, 105 + 15
    if k == "OP2_27":
        return 27 * 18, 351 + 27
    if k == "GRASS_GENERAL":
        m, n, N = desc.m, desc.n, desc.N
        return N * m * n + N, N * (m * (m + 1) // 2) + (N * (N - 1) // 2 - 1) + n * (n + 1) // 2
    m, n, kk = desc.m, desc.n, desc.k
    chain = len(_grass_cyclic_pairs(n, kk)) - 1
    return kk * m * n + 1, kk * (m * (m + 1) // 2) + chain + n // 2 + 1


def _build_general_projective(desc: SpaceDescriptor) -> ConstraintSystem:
    tag, d, N = desc.tag, desc.dim, desc.N
    chart = tag == "O"
    b = _Builder()
    pts = [_projective_seed(b, i, tag, d, chart) for i in range(N)]
    ws = [b.new_var(("w", i)) for i in range(N)]
    projs = [_proj_polys(p) for p in pts]
    for p in pts:
        b.eqs.append(_norm2(p) - 1)
    _chain(b, [_unit_dot(projs[i], projs[j]) for i in range(N) for j in range(i + 1, N)])
    _frame_equations(b, _sum_mats(projs, ws), Fraction(1))
    return _finish(b, desc, seeds=N)


def _frame_equations(b: _Builder, M, diag):
    """Upper triangle of M - diag * I, one equation per real coefficient."""
    d = len(M)
    for a in range(d):
        for c in range(a, d):
            coeffs = M[a][c].coeffs
            if a == c:
                b.eqs.append(coeffs[0] - diag)
            else:
                b.eqs.extend(coeffs)


def _build_cyclic_projective(desc: SpaceDescriptor) -> ConstraintSystem:
    tag, m = desc.tag, desc.m
    chart = tag == "O"
    weighted = desc.kind in ("HP2_CYCLIC12", "OP2_CYCLIC24")
    b = _Builder()
    seeds = [_projective_seed(b, i, tag, 3, chart) for i in range(m)]
    ws = [b.new_var(("w", i)) for i in range(m)] if weighted else None
    base = [_proj_polys(p) for p in seeds]

    def proj_of(p: int):
        return _shifted(base[p % m], p // m)

    for s in seeds:
        b.eqs.append(_norm2(s) - 1)
    _chain(b, [_unit_dot(proj_of(i), proj_of(j)) for i, j in _cyclic_pairs(m)])
    mats = [proj_of(p) for p in range(3 * m)]
    M = _sum_mats(mats, None if ws is None else [ws[p % m] for p in range(3 * m)])
    if weighted:
        b.eqs.append(M[0][0].coeffs[0] - 1)
        b.eqs.extend(M[0][1].coeffs)
    else:
        s = M[0][1]
        b.eqs.append(s.coeffs[0] - Fraction(1, 6))
        b.eqs.append(s.norm2() - Fraction(1, 9))
    return _finish(b, desc, seeds=m)


def _build_traceless(desc: SpaceDescriptor) -> ConstraintSystem:
    tag = desc.tag
    N = desc.num_points
    target = Fraction(-1, 21) if tag == "H" else Fraction(-1, 39)
    chart = tag == "O"
    b = _Builder()
    pts = [_projective_seed(b, i, tag, 3, chart) for i in range(N)]
    vs = [b.new_var(("v", i)) for i in range(N)]
    projs = [_proj_polys(p) for p in pts]
    norms = [_norm2(p) for p in pts]
    # <Gamma_i, Gamma_j> = <P_i, P_j> - |x_i|^2 |x_j|^2 / 3 for Gamma = P - |x|^2 I / 3
    for i in range(N):
        for j in range(i + 1, N):
            b.eqs.append(_unit_dot(projs[i], projs[j]) - norms[i] * norms[j] * Fraction(1, 3) - target)
    for v, n2 in zip(vs, norms):
        b.eqs.append(v - n2 * n2)
    return _finish(b, desc, seeds=N)


def _grass_seed(b: _Builder, point: int, m: int, n: int):
    return [[b.new_var(("g", point, r, c)) for c in range(n)] for r in range(m)]


def _orthonormal_equations(b: _Builder, rows):
    for r in range(len(rows)):
        for s in range(r, len(rows)):
            dot = Polynomial()
            for u, v in zip(rows[r], rows[s]):
                dot = dot + u * v
            b.eqs.append(dot - 1 if r == s else dot)


def _build_grass_general(desc: SpaceDescriptor) -> ConstraintSystem:
    m, n, N = desc.m, desc.n, desc.N
    b = _Builder()
    pts = [_grass_seed(b, i, m, n) for i in range(N)]
    ws = [b.new_var(("w", i)) for i in range(N)]
    for rows in pts:
        _orthonormal_equations(b, rows)
    projs = [_grass_proj_polys(rows) for rows in pts]
    _chain(b, [_unit_dot(projs[i], projs[j]) for i in range(N) for j in range(i + 1, N)])
    _frame_equations(b, _sum_mats(projs, ws), Fraction(1))
    return _finish(b, desc, seeds=N)


def _build_grass_cyclic(desc: SpaceDescriptor) -> ConstraintSystem:
    m, n, k = desc.m, desc.n, desc.k
    N = n * k + 1
    b = _Builder()
    seeds = [_grass_seed(b, i, m, n) for i in range(k)]
    eta = b.new_var(("eta",))
    for rows in seeds:
        _orthonormal_equations(b, rows)
    base = [_grass_proj_polys(rows) for rows in seeds]

    def proj_of(p: int):
        return _shifted(base[p % k], p // k)

    _chain(b, [_unit_dot(proj_of(i), proj_of(j)) for i, j in _grass_cyclic_pairs(n, k)])
    S = _sum_mats([proj_of(p) for p in range(n * k)])
    c = Fraction(N * m, n)
    last = [[(c if a == bb else 0) - S[a][bb].coeffs[0] for bb in range(n)] for a in range(n)]
    for col in range(n // 2 + 1):
        sq = Polynomial()
        for t in range(n):
            sq = sq + last[0][t] * last[t][col]
        b.eqs.append(sq - eta * last[0][col])
    return _finish(b, desc, seeds=k)


def _finish(b: _Builder, desc: SpaceDescriptor, seeds: int) -> ConstraintSystem:
    comps = [Polynomial(e.terms) for e in b.eqs]
    return ConstraintSystem(PolySystem(comps, len(b.layout)), list(b.layout), desc, seeds)


# ---------------------------------------------------------- dimensions


def expected_dimension(desc: SpaceDescriptor) -> int:
    """Parameter count for the local moduli space of tight simplices."""
    if desc.kind == "HP_GENERAL":
        d, N = desc.d, desc.N
        return (4 * d - 3) * N - N * (N - 1) // 2 - 4 * d * d + 1
    if desc.kind == "OP2_GENERAL":
        N = desc.N
        return (N - 1) * (34 - N) // 2 - 61
    if desc.kind == "GRASS_GENERAL":
        m, n, N = desc.m, desc.n, desc.N
        return N * m * n - N * (N - 3) // 2 - N * m * m - n * n + 1
    raise ValueError(f"no dimension formula for {desc.kind}")


def manifold_dimension(cs: ConstraintSystem) -> int:
    return cs.nvars - cs.neqs


# ------------------------------------------------------- encode / decode


def default_weight(desc: SpaceDescriptor) -> Fraction:
    if desc.is_grassmann:
        return Fraction(desc.n, desc.num_points * desc.m)
    return Fraction(desc.dim, desc.num_points)


def to_chart(x: np.ndarray) -> np.ndarray:
    """Rescale an octonionic representative (3, 8) so coordinate 0 is real >= 0.

    Uses the projector column, which is valid for any point of the plane.
    """
    P = projectors_array(x[None], "O")[0]
    a2 = P[0, 0, 0]
    if a2 <= 0:
        raise ValueError("point lies outside the first chart")
    return P[:, 0, :] / math.sqrt(a2)


def encode(cs: ConstraintSystem, config: Configuration) -> np.ndarray:
    """Variable vector for a configuration whose point order matches the layout.

    For cyclic kinds only the seed points are read.
    """
    desc = cs.descriptor
    pts = np.asarray(config.points, dtype=float)
    x = np.zeros(cs.nvars)
    norms4 = {}
    for idx, slot in enumerate(cs.layout):
        name = slot[0]
        if name == "x":
            _, p, comp, c = slot
            rep = pts[p]
            if desc.tag == "O":
                rep = to_chart(rep)
            x[idx] = rep[comp, c]
        elif name == "g":
            _, p, r, c = slot
            x[idx] = pts[p][r, c]
        elif name == "w":
            w = config.weights[slot[1]] if config.weights is not None else default_weight(desc)
            x[idx] = float(w)
        elif name == "v":
            p = slot[1]
            if p not in norms4:
                norms4[p] = float(np.sum(pts[p] ** 2)) ** 2
            x[idx] = norms4[p]
        elif name == "eta":
            x[idx] = 1.0
    return x


def _seed_arrays(cs: ConstraintSystem, x) -> list:
    desc = cs.descriptor
    x = np.asarray(x, dtype=float)
    if desc.is_grassmann:
        arrs = [np.zeros((desc.m, desc.n)) for _ in range(cs.seeds)]
        for idx, slot in enumerate(cs.layout):
            if slot[0] == "g":
                arrs[slot[1]][slot[2], slot[3]] = x[idx]
        return arrs
    arrs = [np.zeros((desc.dim, DIMS[desc.tag])) for _ in range(cs.seeds)]
    for idx, slot in enumerate(cs.layout):
        if slot[0] == "x":
            arrs[slot[1]][slot[2], slot[3]] = x[idx]
    return arrs


def _shift_point(arr: np.ndarray, r: int, axis: int) -> np.ndarray:
    # sigma(x_1, ..., x_n) = (x_2, ..., x_n, x_1)
    return np.roll(arr, -r, axis=axis)


def decode_solution(cs: ConstraintSystem, x) -> Configuration:
    """Points (cyclic orbits expanded, completion appended), weights, eta."""
    desc = cs.descriptor
    x = np.asarray(x, dtype=float)
    seeds = _seed_arrays(cs, x)
    kind = desc.kind
    meta = {"descriptor": desc.to_text()}
    if desc.is_grassmann:
        if kind == "GRASS_GENERAL":
            pts = seeds
        else:
            pts = [_shift_point(seeds[p % desc.k], p // desc.k, 1) for p in range(desc.n * desc.k)]
            pts.append(complete_cyclic_design(cs, x))
            meta["eta"] = float(x[cs.slots("eta")[0]])
        weights = _weights(cs, x, len(pts))
        return Configuration("grassmann", np.array(pts), "R", weights, meta)
    if kind in ("HP_GENERAL", "OP2_GENERAL", "HP2_15", "OP2_27"):
        pts = seeds
    else:
        m = desc.m
        pts = [_shift_point(seeds[p % m], p // m, 0) for p in range(3 * m)]
        if kind in ("HP2_CYCLIC13", "OP2_CYCLIC25"):
            pts.append(complete_cyclic_design(cs, x))
    pts = [p / math.sqrt(float(np.sum(p * p))) for p in pts]
    if desc.tag == "O":
        pts = [to_chart(p) for p in pts]
    weights = _weights(cs, x, len(pts))
    return Configuration("projective", np.array(pts), desc.tag, weights, meta)


def _weights(cs: ConstraintSystem, x, count: int):
    ws = [x[i] for i in cs.slots("w")]
    if not ws:
        return None
    return np.array([ws[p % len(ws)] for p in range(count)])


def complete_cyclic_design(cs: ConstraintSystem, x, tol: float = 1e-8) -> np.ndarray:
    """The unique cyclic-fixed point completing the orbits to a tight simplex.

    Returns a unit representative (projective) or an m x n generator
    (Grassmannian). Raises ValueError if the completion is not a projector.
    """
    desc = cs.descriptor
    if desc.kind not in ("HP2_CYCLIC13", "OP2_CYCLIC25", "GRASS_CYCLIC"):
        raise ValueError(f"{desc.kind} has no cyclic completion")
    seeds = _seed_arrays(cs, x)
    if desc.is_grassmann:
        n, k, m = desc.n, desc.k, desc.m
        N = n * k + 1
        S = np.zeros((n, n))
        for X in seeds:
            P = X.T @ X
            for q in range(n):
                idx = (np.arange(n) + q) % n
                S += P[np.ix_(idx, idx)]
        Pi = (N * m / n) * np.eye(n) - S
        err = np.max(np.abs(Pi @ Pi - Pi))
        if err > tol or abs(np.trace(Pi) - m) > tol:
            raise ValueError(f"completion is not a rank-{m} projector (defect {err:.3e})")
        vals, vecs = np.linalg.eigh(Pi)
        return vecs[:, -m:].T[::-1].copy()
    m = desc.m
    tag = desc.tag
    seeds = [s / math.sqrt(float(np.sum(s * s))) for s in seeds]
    P = projectors_array(np.array(seeds), tag)
    M = np.zeros_like(P[0])
    for Pi in P:
        for r in range(3):
            idx = (np.arange(3) + r) % 3
            M += Pi[np.ix_(idx, idx)]
    Pi = -M
    for a in range(3):
        Pi[a, a, 0] += (3 * m + 1) / 3
    sq = _herm_square(Pi, tag)
    err = np.max(np.abs(sq - Pi))
    if err > tol:
        raise ValueError(f"completion is not a rank-1 projector (defect {err:.3e})")
    col = int(np.argmax([Pi[a, a, 0] for a in range(3)]))
    if tag == "O" and Pi[0, 0, 0] > 1e-6:
        col = 0
    return Pi[:, col, :] / math.sqrt(Pi[col, col, 0])


def _herm_square(P: np.ndarray, tag: str) -> np.ndarray:
    d = P.shape[0]
    out = np.zeros_like(P)
    for a in range(d):
        for c in range(d):
            for b in range(d):
                out[a, c] += kmul(P[a, b], P[b, c], tag)
    return out


# ------------------------------------------------------- side conditions

FOURTH_POWER_WINDOW = {"HP2_15": Fraction(1, 10**6), "OP2_27": Fraction(1, 10**7)}


def side_conditions(cs: ConstraintSystem, x, radius=0) -> list:
    """Failed non-equation hypotheses for every point within ell-infinity radius of x.

    The fourth-power variables must stay within their window around 1 and
    the eigenvalue parameter eta must stay inside (m/(m+1), m/(m-1)).
    Works with floats or exact rationals; returns a list of messages.
    """
    desc = cs.descriptor
    radius = Fraction(radius) if not isinstance(radius, float) else radius
    fails = []
    if desc.kind in FOURTH_POWER_WINDOW:
        win = FOURTH_POWER_WINDOW[desc.kind]
        if not isinstance(radius, Fraction):
            win = float(win)
        for i in cs.slots("v"):
            v = x[i]
            if abs(v - 1) + radius > win:
                fails.append(f"fourth power variable {cs.layout[i][1]} = {float(v):.3e} leaves the window 1 +- {float(win):.0e}")
    if desc.kind == "GRASS_CYCLIC":
        (i,) = cs.slots("eta")
        eta = x[i]
        m = desc.m
        lo = Fraction(m, m + 1)
        if not isinstance(radius, Fraction):
            lo = float(lo)
        below = eta - radius <= lo
        above = m > 1 and eta + radius >= (Fraction(m, m - 1) if isinstance(radius, Fraction) else m / (m - 1))
        if below or above:
            fails.append(f"eta = {float(eta)} is not inside the open window ({m}/{m + 1}, {m}/{m - 1 if m > 1 else 0})")
    return fails
