"""Explicit codes and their exact verification.

Named codes:

* ``op2_39``: 39 points in OP^2 forming 13 mutually unbiased bases, with
  coordinates in Q(sqrt 3) and optional deformation by four unit complex
  numbers.
* ``so4_17`` and ``so4_32``: a 17-point regular simplex and a 32-point
  cross polytope of rotations in SO(4).
* ``grass_fig1`` .. ``grass_fig4``: four-point tight simplices in G(2,5),
  G(3,6), G(3,7) and G(3,8) read from ``data/grass_figures.txt``.
* ``difference_set`` and ``steiner``: the two combinatorial families of tight
  simplices.

Exact entries are Fractions, Surds (rational combinations of square roots)
or cyclotomic numbers, so every verification below is an identity check.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations

import numpy as np
from mpmath import iv

from .algebra import Configuration, Scalar
from .analysis import Space, tight_alpha
from .exactnum.fields import Cyclotomic, CyclotomicField, Surd
from .exactnum.realalg import RealAlgebraic

FLOAT_TOL = 1e-12
INTERVAL_TOL = Fraction(1, 10**20)
INTERVAL_PREC = 128


@dataclass
class Check:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


@dataclass
class NamedCode:
    identifier: str
    kind: str  # projective, grassmann or rotation
    space: str
    points: list
    spectrum: tuple
    groups: list | None = None
    mode: str = "exact"  # exact, float or interval
    meta: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.points)

    def projector(self, i: int) -> list:
        """Projection matrix of point i (the rotation matrix itself for SO(n) codes)."""
        p = self.points[i]
        if self.kind == "projective":
            scale = self.meta.get("norm2")
            P = [[a * _conj(b) for b in p] for a in p]
            return P if scale is None else [[v * scale for v in row] for row in P]
        if self.kind == "grassmann":
            n = len(p[0])
            return [[sum((p[r][a] * p[r][b] for r in range(1, len(p))), p[0][a] * p[0][b]) for b in range(n)]
                    for a in range(n)]
        return p

    def gram(self) -> list:
        P = [self.projector(i) for i in range(self.N)]
        return [[_frobenius(P[i], P[j]) for j in range(self.N)] for i in range(self.N)]

    def configuration(self) -> Configuration:
        """Float copy of the code."""
        if self.kind == "projective":
            tag = self.meta["tag"]
            pts = np.array([[_float_coords(v, tag) for v in p] for p in self.points])
            pts /= np.linalg.norm(pts.reshape(self.N, -1), axis=1)[:, None, None]
            return Configuration("projective", pts, tag, None, {"descriptor": self.identifier})
        arr = np.array([[[_to_float(v) for v in row] for row in p] for p in self.points])
        return Configuration(self.kind if self.kind == "grassmann" else "rotation", arr, "R", None,
                             {"descriptor": self.identifier})


# ------------------------------------------------------------ entry helpers


def _conj(v):
    if isinstance(v, (Scalar, Cyclotomic)):
        return v.conj()
    if isinstance(v, complex):
        return v.conjugate()
    return v


def _entry_inner(p, q):
    """Re(p conj q) for algebra elements, p conj q for cyclotomic numbers, p q otherwise."""
    if isinstance(p, Scalar):
        total = p.coeffs[0] * q.coeffs[0]
        for a, b in zip(p.coeffs[1:], q.coeffs[1:]):
            total = total + a * b
        return total
    if isinstance(p, Cyclotomic):
        return p * q.conj()
    if isinstance(p, complex):
        return (p * q.conjugate()).real
    return p * q


def _frobenius(A, B):
    total = 0
    for ra, rb in zip(A, B):
        for a, b in zip(ra, rb):
            total = _entry_inner(a, b) + total
    if isinstance(total, Cyclotomic) and total.is_rational():
        return total.rational_value()
    if isinstance(total, Surd) and total.is_rational():
        return total.rational_value()
    return total


def _to_float(v) -> float:
    if isinstance(v, iv.mpf):
        return float(v.mid)
    return float(v)


def _float_coords(v, tag: str) -> list:
    if isinstance(v, Scalar):
        return [_to_float(c) for c in v.coeffs]
    if isinstance(v, Cyclotomic):
        z = complex(v)
        return [z.real, z.imag]
    if tag == "C":
        z = complex(v)
        return [z.real, z.imag]
    return [_to_float(v)]


# ------------------------------------------------------------ OP^2, 39 points


def _complex_unit(xi) -> Scalar:
    re_, im = (Surd._coerce(Fraction(v)) if not isinstance(v, Surd) else v for v in xi)
    if re_ * re_ + im * im != Surd.rational(1):
        raise ValueError(f"deformation parameter {xi} is not a unit complex number")
    return Scalar("O", (re_, im) + (Surd(),) * 6)


def op2_39(deform=None) -> NamedCode:
    """13 orthogonal triples in OP^2 with squared overlaps 1/3 across triples.

    `deform` optionally gives four unit complex numbers (re, im) that multiply
    l, n in the third family and n, j in the fourth.
    """
    zero, one = Surd(), Surd.rational(1)

    def real(v):
        return Scalar("O", (v,) + (zero,) * 7)

    def unit(k):
        return Scalar("O", tuple(one if i == k else zero for i in range(8)))

    j, ell = unit(2), unit(4)
    n = j * ell
    omega = Scalar("O", (Surd.rational(Fraction(-1, 2)), Surd.sqrt(3) * Fraction(1, 2)) + (zero,) * 6)
    powers = [real(one), omega, omega * omega]
    xi = [real(one)] * 4 if deform is None else [_complex_unit(x) for x in deform]
    if len(xi) != 4:
        raise ValueError("deformation needs four unit complex numbers")
    families = [(real(one), real(one)), (j, ell), (xi[0] * ell, xi[1] * n), (xi[2] * n, xi[3] * j)]
    s = real(Surd.sqrt(Fraction(1, 3)))
    points = [[real(one) if c == r else real(zero) for c in range(3)] for r in range(3)]
    groups = [[0, 1, 2]]
    for f, (u, v) in enumerate(families):
        # omega j = j conj(omega), so the non-complex families pair a with -b
        sign = 1 if f == 0 else -1
        by_class: dict = {}
        for a in range(3):
            for b in range(3):
                by_class.setdefault((a + sign * b) % 3, []).append(len(points))
                points.append([s, s * (powers[a] * u), s * (powers[b] * v)])
        groups.extend(by_class[c] for c in range(3))
    return NamedCode("op2_39", "projective", "OP2", points, (Fraction(0), Fraction(1, 3)), groups,
                     "exact", {"tag": "O", "group_value": Fraction(0)})


# ------------------------------------------------------------ SO(4)


def so4_32() -> NamedCode:
    """Signed permutation matrices for the identity and the three double transpositions, even sign count."""
    perms = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
    points = []
    for perm in perms:
        for signs in np.ndindex(2, 2, 2, 2):
            if sum(signs) % 2:
                continue
            X = [[0] * 4 for _ in range(4)]
            for r in range(4):
                X[r][perm[r]] = -1 if signs[r] else 1
            points.append(X)
    return NamedCode("so4_32", "rotation", "SO(4)", points, (0, 4, -4))


def so4_17(mode: str = "interval") -> NamedCode:
    """Orbit X_i = R_{1,3}^i X0 R_{4,5}^i of a permutation matrix under an order-17 isometry.

    mode "float" uses doubles, "interval" uses 128-bit mpmath intervals and
    "exact" works in the cyclotomic field Q(zeta_68), which contains both
    exp(2 pi i / 17) and i.
    """
    if mode == "exact":
        F = CyclotomicField(68)
        i_unit = F.zeta(17)
        half = Fraction(1, 2)

        def cos(k):
            return (F.zeta(4 * k) + F.zeta(-4 * k)) * half

        def sin(k):
            return (F.zeta(4 * k) - F.zeta(-4 * k)) * (i_unit * -half)

        zero_, one_ = F.rational(0), F.rational(1)
    elif mode == "interval":
        iv.prec = INTERVAL_PREC

        def cos(k):
            return iv.cos(2 * iv.pi * k / 17)

        def sin(k):
            return iv.sin(2 * iv.pi * k / 17)

        zero_, one_ = iv.mpf(0), iv.mpf(1)
    elif mode == "float":
        def cos(k):
            return math.cos(2 * math.pi * k / 17)

        def sin(k):
            return math.sin(2 * math.pi * k / 17)

        zero_, one_ = 0.0, 1.0
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def rot(a, b):
        R = [[zero_] * 4 for _ in range(4)]
        R[0][0], R[0][1], R[1][0], R[1][1] = cos(a), -sin(a), sin(a), cos(a)
        R[2][2], R[2][3], R[3][2], R[3][3] = cos(b), -sin(b), sin(b), cos(b)
        return R

    def mul(A, B):
        return [[sum((A[r][k] * B[k][c] for k in range(1, 4)), A[r][0] * B[0][c]) for c in range(4)]
                for r in range(4)]

    X0 = [[zero_] * 4 for _ in range(4)]
    for r, c in ((0, 3), (1, 1), (2, 2), (3, 0)):
        X0[r][c] = one_
    points = [mul(mul(rot(i, 3 * i), X0), rot(4 * i, 5 * i)) for i in range(17)]
    return NamedCode("so4_17", "rotation", "SO(4)", points, (Fraction(-1, 4),), None, mode)


# ------------------------------------------------------------ Grassmannian figures

_ENTRY = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?(?:\*?sqrt\((\d+)\))?$")


def parse_surd(token: str) -> Surd:
    """Entries such as 0, -3/5, 2*sqrt(3), -sqrt(20) or 1/2*sqrt(2)."""
    m = _ENTRY.match(token.strip())
    if not m or (m.group(2) is None and m.group(3) is None):
        raise ValueError(f"cannot read entry {token!r}")
    sign = -1 if m.group(1) == "-" else 1
    coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
    if m.group(3) is None:
        return Surd.rational(sign * coef)
    return Surd.sqrt(int(m.group(3))) * (sign * coef)


def read_figures(text: str | None = None) -> dict:
    """{figure number: (m, n, [generator matrices])} from the bundled data file."""
    if text is None:
        text = resources.files("tightcodes").joinpath("data/grass_figures.txt").read_text()
    figures: dict = {}
    current = None
    scale = Surd.rational(1)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "FIGURE":
            fields_ = dict(w.split("=") for w in words[2:])
            current = (int(fields_["m"]), int(fields_["n"]), [])
            figures[int(words[1])] = current
        elif words[0] == "POINT":
            current[2].append([])
        elif words[0] == "SCALE":
            scale = parse_surd(words[1])
        else:
            row = [parse_surd(t) * scale for t in words]
            if len(row) != current[1]:
                raise ValueError(f"row has {len(row)} entries, expected {current[1]}: {raw!r}")
            current[2][-1].append(row)
    for number, (m, n, mats) in figures.items():
        if any(len(X) != m for X in mats):
            raise ValueError(f"figure {number}: every generator needs {m} rows")
    return figures


def grass_fig(number: int) -> NamedCode:
    figures = read_figures()
    if number not in figures:
        raise ValueError(f"no figure {number}; available: {sorted(figures)}")
    m, n, mats = figures[number]
    alpha = tight_alpha(Space("G", n, m), len(mats))
    return NamedCode(f"grass_fig{number}", "grassmann", f"G({m},{n})", mats, (alpha,), None, "exact", {"m": m, "n": n})


def read_projector_blocks(text: str, d: int) -> list:
    """Externally supplied exact projectors: d*d lines per matrix, each an 'RA ...' real algebraic number."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) % (d * d):
        raise ValueError(f"{len(lines)} entries do not form {d}x{d} blocks")
    values = [RealAlgebraic.from_text(ln) for ln in lines]
    return [[values[b + r * d: b + (r + 1) * d] for r in range(d)] for b in range(0, len(values), d * d)]


# ------------------------------------------------------------ combinatorial families


def difference_set(N: int, S, mode: str = "float", max_exact_order: int = 12) -> NamedCode:
    """Points (chi(s))_{s in S} in CP^(|S|-1) for all characters chi of Z/NZ."""
    S = sorted({int(s) % N for s in S})
    d = len(S)
    if d < 2:
        raise ValueError("a difference set needs at least two elements")
    counts = [0] * N
    for a in S:
        for b in S:
            if a != b:
                counts[(a - b) % N] += 1
    lam = counts[1]
    if any(c != lam for c in counts[1:]):
        raise ValueError(f"{S} is not a difference set in Z/{N}Z")
    alpha = tight_alpha(Space("C", d), N)
    if mode == "exact":
        if N > max_exact_order:
            raise ValueError(f"exact mode is limited to N <= {max_exact_order}")
        F = CyclotomicField(N)
        points = [[F.zeta(j * s) for s in S] for j in range(N)]
        meta = {"tag": "C", "norm2": Fraction(1, d)}
    elif mode == "float":
        points = [[complex(math.cos(2 * math.pi * j * s / N), math.sin(2 * math.pi * j * s / N)) / math.sqrt(d)
                   for s in S] for j in range(N)]
        meta = {"tag": "C"}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    meta["lambda"] = lam
    return NamedCode(f"difference_set({N},{{{','.join(map(str, S))}}})", "projective", f"CP{d - 1}", points, (alpha,), None, mode, meta)


def steiner(A, H) -> NamedCode:
    """Columns of the matrices M_j built from a (2,k,v) Steiner incidence matrix and a Hadamard matrix.

    A is the d x v block/point incidence matrix; H has order r + 1 where r is
    the number of blocks through each point. Point j uses rows 1..r of H, one
    per block containing j.
    """
    A = [[int(v) for v in row] for row in A]
    H = [[int(v) for v in row] for row in H]
    d, v = len(A), len(A[0])
    if any(len(row) != v for row in A) or any(x not in (0, 1) for row in A for x in row):
        raise ValueError("incidence matrix must be a 0/1 matrix")
    r = sum(A[i][0] for i in range(d))
    if any(sum(A[i][j] for i in range(d)) != r for j in range(v)):
        raise ValueError("every point must lie on the same number of blocks")
    for j1, j2 in combinations(range(v), 2):
        if sum(A[i][j1] * A[i][j2] for i in range(d)) != 1:
            raise ValueError(f"points {j1} and {j2} do not share exactly one block")
    if len(H) != r + 1 or any(len(row) != r + 1 for row in H):
        raise ValueError(f"Hadamard matrix must have order r + 1 = {r + 1}")
    for a, b in combinations(range(r + 1), 2):
        if sum(x * y for x, y in zip(H[a], H[b])) != 0:
            raise ValueError("H is not a Hadamard matrix")
    if any(x not in (1, -1) for row in H for x in row):
        raise ValueError("H is not a Hadamard matrix")
    points = []
    for j in range(v):
        blocks = [i for i in range(d) if A[i][j]]
        for c in range(r + 1):
            x = [Fraction(0)] * d
            for slot, i in enumerate(blocks):
                x[i] = Fraction(H[slot + 1][c])
            points.append(x)
    N = len(points)
    return NamedCode("steiner", "projective", f"RP{d - 1}", points, (tight_alpha(Space("R", d), N),), None, "exact",
                     {"tag": "R", "norm2": Fraction(1, r)})


# ------------------------------------------------------------ verification


def build_named(identifier: str, **params) -> NamedCode:
    """Look up a named code; grass_fig takes `number`, the families take their inputs."""
    if identifier == "op2_39":
        return op2_39(params.get("deform"))
    if identifier == "so4_32":
        return so4_32()
    if identifier == "so4_17":
        return so4_17(params.get("mode", "interval"))
    m = re.fullmatch(r"grass_fig(\d)", identifier)
    if m:
        return grass_fig(int(m.group(1)))
    if identifier == "grass_fig":
        return grass_fig(int(params["number"]))
    if identifier == "difference_set":
        return difference_set(params["N"], params["S"], params.get("mode", "float"))
    if identifier == "steiner":
        return steiner(params["A"], params["H"])
    raise ValueError(f"unknown code {identifier!r}")


NAMED = ("op2_39", "so4_17", "so4_32", "grass_fig1", "grass_fig2", "grass_fig3", "grass_fig4")


def _matches(value, target, mode: str) -> bool:
    if mode == "float":
        return abs(complex(value) - float(target)) <= FLOAT_TOL
    if mode == "interval":
        t = Fraction(target)
        lo, hi = t - INTERVAL_TOL, t + INTERVAL_TOL
        return bool(value.a >= iv.mpf(lo.numerator) / lo.denominator and
                    value.b <= iv.mpf(hi.numerator) / hi.denominator)
    return value == target


def verify_spectrum(code: NamedCode) -> Check:
    """Every distinct pair has an inner product in the claimed spectrum.

    When the code lists orthogonal groups, pairs inside a group must take the
    group value and pairs across groups the other value.
    """
    G = code.gram()
    failures = []
    group_of = {}
    if code.groups:
        for g, members in enumerate(code.groups):
            for i in members:
                group_of[i] = g
        across = [s for s in code.spectrum if s != code.meta.get("group_value")]
    for i, j in combinations(range(code.N), 2):
        value = G[i][j]
        if code.groups:
            allowed = [code.meta["group_value"]] if group_of[i] == group_of[j] else across
        else:
            allowed = code.spectrum
        if not any(_matches(value, t, code.mode) for t in allowed):
            failures.append(f"pair ({i}, {j}): inner product {value} is not in {[str(t) for t in allowed]}")
    return Check(not failures, failures)


def verify_exact_simplex(projectors, alpha, m: int) -> Check:
    """Exact checks: symmetric (Hermitian), idempotent, trace m, all pairwise inner products alpha."""
    failures = []
    for idx, P in enumerate(projectors):
        n = len(P)
        if any(P[a][b] != _conj(P[b][a]) for a in range(n) for b in range(n)):
            failures.append(f"matrix {idx} is not symmetric")
        sq_ok = all(sum((P[a][k] * P[k][b] for k in range(1, n)), P[a][0] * P[0][b]) == P[a][b]
                    for a in range(n) for b in range(n))
        if not sq_ok:
            failures.append(f"matrix {idx} is not idempotent")
        tr = sum((P[a][a] for a in range(1, n)), P[0][0])
        if tr != m:
            failures.append(f"matrix {idx} has trace {tr}, expected {m}")
    for i, j in combinations(range(len(projectors)), 2):
        v = _frobenius(projectors[i], projectors[j])
        if v != alpha:
            failures.append(f"pair ({i}, {j}) has inner product {v}, expected {alpha}")
    return Check(not failures, failures)


def mub_check(config, d: int, tol: float = 1e-10) -> Check:
    """True when the points split into orthonormal bases with all cross overlaps 1/d."""
    if isinstance(config, Configuration):
        G = config.gram().tolist()

        def eq(a, b):
            return abs(a - b) <= tol
    else:
        G = config.gram()
        if config.mode == "exact":
            def eq(a, b):
                return a == b
        else:
            def eq(a, b):
                return abs(complex(a) - float(b)) <= tol
    N = len(G)
    if N % d:
        return Check(False, [f"{N} points cannot split into bases of size {d}"])
    remaining = list(range(N))
    bases = []
    while remaining:
        first = remaining.pop(0)
        basis = [first] + [j for j in remaining if eq(G[first][j], 0)]
        if len(basis) != d or any(not eq(G[a][b], 0) for a, b in combinations(basis, 2)):
            return Check(False, [f"point {first} does not lie in an orthonormal basis of size {d}"])
        remaining = [j for j in remaining if j not in basis]
        bases.append(basis)
    failures = []
    target = Fraction(1, d)
    for b1, b2 in combinations(bases, 2):
        for i in b1:
            for j in b2:
                if not eq(G[i][j], target):
                    failures.append(f"points {i} and {j} overlap by {G[i][j]}, expected 1/{d}")
    return Check(not failures, failures)
