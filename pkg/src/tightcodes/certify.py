"""Rigorous existence certificates for zeros of polynomial systems.

A certificate proves that f has an exact zero within ell-infinity distance
epsilon of a dyadic point x0, and that the zero set there is a manifold of
dimension (variables - equations). The rational backend checks

    ||Df(x0) T - I|| + eps |f| d (d-1) eta^(d-2) ||T||  <  1 - ||T|| |f(x0)| / eps

in exact arithmetic, with eta = max(1, |x0| + eps). The interval backend
instead encloses Df over the whole box and checks ||Df(x) T - I|| < 1 -
||T|| |f(x0)| / eps for every x in it. All norms are ell-infinity operator
norms, i.e. maximal absolute row sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .exactnum.interval import arr_down, arr_up, rational_bounds, sum_error_factor, upper_nonneg_matmul
from .systems import ConstraintSystem, SpaceDescriptor, build_system, side_conditions

DEFAULT_EPSILON = Fraction(1, 10**9)
DYADIC_BITS = 50


# ------------------------------------------------------------ primitives


def linf_operator_norm(M) -> Fraction:
    """Maximum absolute row sum, exact for rational entries."""
    best = Fraction(0)
    for row in M:
        s = sum((abs(Fraction(v)) for v in row), Fraction(0))
        if s > best:
            best = s
    return best


def make_dyadic(x, bits: int = DYADIC_BITS):
    """Nearest multiples of 2^-bits (ties to even); accepts a scalar or a sequence."""
    if np.ndim(x) == 0:
        return _dyadic(x, bits)
    return [_dyadic(v, bits) for v in x]


def _dyadic(v, bits: int) -> Fraction:
    if isinstance(v, Fraction):
        return Fraction(round(v * 2**bits), 2**bits)
    v = float(v)
    if not math.isfinite(v):
        raise ValueError("cannot round a non-finite value")
    return Fraction(round(Fraction(v) * 2**bits), 2**bits)


def approx_right_inverse(J, bits: int = DYADIC_BITS, rank_tol: float = 1e-10) -> list:
    """Float least-squares right inverse J^t (J J^t)^-1 rounded to 2^-bits.

    Returns an m x n list of Fractions. Raises ValueError when J is
    numerically rank deficient.
    """
    J = np.asarray(J, dtype=float)
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    if s.size < J.shape[0] or s[-1] <= rank_tol * s[0]:
        raise ValueError("Jacobian is numerically rank deficient")
    T = (Vt.T / s) @ U.T
    scale = 2.0**bits
    return [[Fraction(int(round(v * scale)), 2**bits) for v in row] for row in T]


def _common_scaled(M) -> tuple[np.ndarray, int]:
    """Integer object matrix A and denominator D with M = A / D."""
    rows = [[Fraction(v) for v in r] for r in M]
    D = 1
    for r in rows:
        for v in r:
            D = D * v.denominator // math.gcd(D, v.denominator)
    A = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            A[i, j] = v.numerator * (D // v.denominator)
    return A, D


def _sparse_times(Jnum: dict, n: int, T: np.ndarray) -> np.ndarray:
    """(sparse integer J with n rows) @ (object matrix T)."""
    out = np.zeros((n, T.shape[1]), dtype=object)
    for (i, j), v in Jnum.items():
        out[i] = out[i] + v * T[j]
    return out


# ------------------------------------------------------------ certificate


@dataclass
class Certificate:
    descriptor: str
    x0: list
    T: list
    epsilon: Fraction
    norm_T: Fraction
    resid: Fraction
    defect: Fraction
    variation: Fraction
    margin: Fraction
    verdict: str
    nvars: int
    neqs: int
    backend: str = "rational"
    side_failures: list = field(default_factory=list)

    @property
    def manifold_dim(self) -> int:
        return self.nvars - self.neqs

    @property
    def proven(self) -> bool:
        return self.verdict == "PROVEN"

    def to_text(self) -> str:
        lines = ["TCP-CERT v1", f"SYSTEM {self.descriptor}"]
        if self.backend != "rational":
            lines.append(f"BACKEND {self.backend}")
        lines.append(f"EPSILON {_q(self.epsilon)}")
        lines.append(f"VARS {self.nvars} EQNS {self.neqs}")
        lines.append("X0")
        lines.extend(_q(v) for v in self.x0)
        lines.append("T")
        lines.extend(_q(v) for row in self.T for v in row)
        lines.append(f"NORM_T {_q(self.norm_T)}")
        lines.append(f"RESID {_q(self.resid)}")
        lines.append(f"DEFECT {_q(self.defect)}")
        lines.append(f"VARIATION {_q(self.variation)}")
        lines.append(f"MARGIN {_q(self.margin)}")
        for msg in self.side_failures:
            lines.append(f"SIDE {msg}")
        lines.append(f"VERDICT {self.verdict}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        lines = text.splitlines()
        it = iter(lines)

        def take(prefix: str) -> str:
            line = next(it, None)
            if line is None or not line.startswith(prefix):
                raise ValueError(f"expected {prefix!r}, found {line!r}")
            return line[len(prefix):].strip()

        if next(it, None) != "TCP-CERT v1":
            raise ValueError("not a TCP-CERT v1 file")
        desc = take("SYSTEM ")
        line = next(it, None)
        backend = "rational"
        if line is not None and line.startswith("BACKEND "):
            backend = line[8:].strip()
            line = next(it, None)
        if line is None or not line.startswith("EPSILON "):
            raise ValueError("missing EPSILON line")
        eps = parse_rational(line[8:])
        parts = take("VARS ").split()
        if len(parts) != 3 or parts[1] != "EQNS":
            raise ValueError("malformed VARS line")
        m, n = int(parts[0]), int(parts[2])
        take("X0")
        x0 = [parse_rational(next(it, "")) for _ in range(m)]
        take("T")
        flat = [parse_rational(next(it, "")) for _ in range(m * n)]
        T = [flat[r * n:(r + 1) * n] for r in range(m)]
        vals = {key: parse_rational(take(key + " ")) for key in ("NORM_T", "RESID", "DEFECT", "VARIATION", "MARGIN")}
        side = []
        line = next(it, None)
        while line is not None and line.startswith("SIDE "):
            side.append(line[5:])
            line = next(it, None)
        if line is None or not line.startswith("VERDICT "):
            raise ValueError("missing VERDICT line")
        verdict = line[8:].strip()
        if verdict not in ("PROVEN", "FAILED"):
            raise ValueError(f"unknown verdict {verdict!r}")
        if any(rest.strip() for rest in it):
            raise ValueError("trailing content after VERDICT")
        return cls(desc, x0, T, eps, vals["NORM_T"], vals["RESID"], vals["DEFECT"], vals["VARIATION"],
                   vals["MARGIN"], verdict, m, n, backend, side)


def _q(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(s: str) -> Fraction:
    """p/q, p/2^k or an integer."""
    s = s.strip()
    if not s:
        raise ValueError("missing rational value")
    if "/" in s:
        p, q = s.split("/", 1)
        if "^" in q:
            base, exp = q.split("^", 1)
            qv = int(base) ** int(exp)
        else:
            qv = int(q)
        if qv <= 0:
            raise ValueError(f"bad denominator in {s!r}")
        return Fraction(int(p), qv)
    return Fraction(int(s))


def write_certificate(cert: Certificate, path) -> None:
    from .io import atomic_write

    atomic_write(path, cert.to_text())


def read_certificate(path) -> Certificate:
    with open(path, encoding="ascii") as fh:
        return Certificate.from_text(fh.read())


# ------------------------------------------------------------ backends


def _prepare(cs, x0, T, epsilon):
    if isinstance(cs, SpaceDescriptor):
        cs = build_system(cs)
    f = cs.system if isinstance(cs, ConstraintSystem) else cs
    x0 = [Fraction(v) for v in x0]
    if len(x0) != f.m:
        raise ValueError(f"x0 has {len(x0)} coordinates, system has {f.m}")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if len(T) != f.m or any(len(r) != f.n for r in T):
        raise ValueError("T must be a (variables x equations) matrix")
    return cs, f, x0, T, epsilon


def _side(cs, x0, epsilon) -> list:
    return side_conditions(cs, x0, epsilon) if isinstance(cs, ConstraintSystem) else []


def _label(cs) -> str:
    # plain polynomial systems have no descriptor and cannot be re-verified from a file
    return cs.descriptor.to_text() if isinstance(cs, ConstraintSystem) else "custom"


def certify_rational(cs, x0, T, epsilon=DEFAULT_EPSILON) -> Certificate:
    """Exact check of the polynomial Kantorovich-type inequality."""
    cs, f, x0, T, epsilon = _prepare(cs, x0, T, epsilon)
    m, n = f.m, f.n
    Tnum, DT = _common_scaled(T)
    norm_T = Fraction(max((sum(abs(v) for v in row) for row in Tnum), default=0), DT)
    resid = max((abs(v) for v in f.evaluate(x0, "rational")), default=Fraction(0))
    Jnum, DJ = f.jacobian_exact_scaled(x0)
    JT = _sparse_times(Jnum, n, Tnum)
    scale = DJ * DT
    worst = 0
    for i in range(n):
        row = JT[i]
        row[i] = row[i] - scale
        s = sum(abs(v) for v in row)
        if s > worst:
            worst = s
    defect = Fraction(worst, scale)
    coeff_norm, d = f.coeff_norm_and_degree()
    eta = max(Fraction(1), max(abs(v) for v in x0) + epsilon)
    variation = epsilon * coeff_norm * d * (d - 1) * eta ** max(d - 2, 0)
    margin = 1 - norm_T * resid / epsilon - defect - variation * norm_T
    side = _side(cs, x0, epsilon)
    verdict = "PROVEN" if margin > 0 and not side else "FAILED"
    return Certificate(_label(cs), x0, [list(map(Fraction, r)) for r in T], epsilon, norm_T, resid,
                       defect, variation, margin, verdict, m, n, "rational", side)


def certify_interval(cs, x0, T, epsilon=DEFAULT_EPSILON) -> Certificate:
    """Interval enclosure of sup over the box of ||Df(x) T - I||.

    VARIATION is recorded as 0 because the box enclosure already includes
    the variation of the Jacobian; DEFECT is the sup bound.
    """
    cs, f, x0, T, epsilon = _prepare(cs, x0, T, epsilon)
    m, n = f.m, f.n
    lo = np.empty(m)
    hi = np.empty(m)
    for i, v in enumerate(x0):
        lo[i] = rational_bounds(v - epsilon)[0]
        hi[i] = rational_bounds(v + epsilon)[1]
    jlo, jhi = f.jacobian_interval_arrays(lo, hi)
    Tlo = np.empty((m, n))
    Thi = np.empty((m, n))
    for i, row in enumerate(T):
        for j, v in enumerate(row):
            Tlo[i, j], Thi[i, j] = rational_bounds(v)
    sup_defect = _interval_defect(jlo, jhi, Tlo, Thi)
    plo = np.array([rational_bounds(v)[0] for v in x0])
    phi = np.array([rational_bounds(v)[1] for v in x0])
    flo, fhi = f.evaluate_interval_arrays(plo, phi)
    resid_up = float(np.max(np.maximum(np.abs(flo), np.abs(fhi)))) if n else 0.0
    absT = np.maximum(np.abs(Tlo), np.abs(Thi))
    normT_up = float(np.max(arr_up(absT.sum(axis=1) * (1 + sum_error_factor(n))))) if m else 0.0
    eps_lo = rational_bounds(epsilon)[0]
    # rhs lower bound: 1 - normT * resid / eps, every step rounded down
    prod_up = arr_up(arr_up(normT_up * resid_up) / eps_lo)
    rhs_lo = float(arr_down(1.0 - prod_up))
    margin_lo = float(arr_down(rhs_lo - sup_defect))
    side = _side(cs, x0, epsilon)
    proven = sup_defect < rhs_lo and not side
    return Certificate(_label(cs), x0, [list(map(Fraction, r)) for r in T], epsilon,
                       Fraction(normT_up), Fraction(resid_up), Fraction(sup_defect), Fraction(0),
                       Fraction(margin_lo), "PROVEN" if proven else "FAILED", m, n, "interval", side)


def _interval_defect(jlo, jhi, Tlo, Thi) -> float:
    """Upper bound of max_i sum_k |(J T - I)_ik| for interval J and T."""
    n, m = jlo.shape
    jmid = 0.5 * (jlo + jhi)
    jrad = arr_up(np.maximum(jhi - jmid, jmid - jlo))
    tmid = 0.5 * (Tlo + Thi)
    trad = arr_up(np.maximum(Thi - tmid, tmid - Tlo))
    C = jmid @ tmid
    C[np.diag_indices(min(n, C.shape[1]))] -= 1.0
    absJ = np.abs(jmid)
    absT = np.abs(tmid)
    gamma = sum_error_factor(m + 1)
    # |J T - I| <= |fl(C)| (1 + u) + gamma |Jm||Tm| + |Jm| Tr + Jr (|Tm| + Tr)
    err = upper_nonneg_matmul(absJ, absT) * gamma
    err = arr_up(err + upper_nonneg_matmul(absJ, trad))
    err = arr_up(err + upper_nonneg_matmul(jrad, arr_up(absT + trad)))
    bound = arr_up(arr_up(np.abs(C) * (1 + 2.0**-52)) + err)
    rows = arr_up(bound.sum(axis=1) * (1 + sum_error_factor(bound.shape[1])))
    return float(np.max(rows)) if rows.size else 0.0


def certify(cs, x_float, epsilon=DEFAULT_EPSILON, backend: str = "rational") -> Certificate:
    """Round a float solution to a dyadic point, build T, run one backend."""
    if isinstance(cs, SpaceDescriptor):
        cs = build_system(cs)
    f = cs.system if isinstance(cs, ConstraintSystem) else cs
    x0 = make_dyadic(np.asarray(x_float, dtype=float))
    J = f.jacobian(np.array([float(v) for v in x0]))
    T = approx_right_inverse(J)
    if backend == "rational":
        return certify_rational(cs, x0, T, epsilon)
    if backend == "interval":
        return certify_interval(cs, x0, T, epsilon)
    raise ValueError(f"unknown backend {backend!r}")


# ------------------------------------------------------------ slack


@dataclass
class SlackReport:
    delta0: Fraction
    t_distance_bound: Fraction


def slack_delta0(cert: Certificate, cs: ConstraintSystem | None = None) -> SlackReport:
    """How far T may move while the certificate stays valid, and how far T is from J^+.

    delta0 is the slack of the rational inequality divided by
    ||J|| + variation + |f(x0)|/eps. t_distance_bound bounds ||T - J^t (J J^t)^-1||
    by ||T J J^t - J^t|| ||T^t T|| / (1 - ||I - T^t T J J^t||).
    """
    if not cert.proven:
        raise ValueError("slack is only defined for a proven certificate")
    if cs is None:
        cs = build_system(SpaceDescriptor.parse(cert.descriptor))
    f = cs.system if isinstance(cs, ConstraintSystem) else cs
    n, m = f.n, f.m
    Jnum, DJ = f.jacobian_exact_scaled(cert.x0)
    Jd = np.zeros((n, m), dtype=object)
    for (i, j), v in Jnum.items():
        Jd[i, j] = v
    norm_J = Fraction(max((sum(abs(v) for v in Jd[i]) for i in range(n)), default=0), DJ)
    Tnum, DT = _common_scaled(cert.T)
    if cert.backend == "rational":
        slack = cert.margin
        variation = cert.variation
    else:
        # recompute the rational quantities so delta0 refers to the same inequality
        rc = certify_rational(cs, cert.x0, cert.T, cert.epsilon)
        slack, variation = rc.margin, rc.variation
    delta0 = slack / (norm_J + variation + cert.resid / cert.epsilon)
    JJt = Jd.dot(Jd.T)                      # / DJ^2
    TtT = Tnum.T.dot(Tnum)                  # / DT^2
    TJJt = Tnum.dot(JJt)                    # / (DT DJ^2)
    A = TJJt - Jd.T * (DT * DJ)             # T J J^t - J^t, / (DT DJ^2)
    norm_A = Fraction(max(sum(abs(v) for v in row) for row in A), DT * DJ * DJ)
    norm_TtT = Fraction(max(sum(abs(v) for v in row) for row in TtT), DT * DT)
    B = TtT.dot(JJt)                        # / (DT^2 DJ^2)
    den = DT * DT * DJ * DJ
    worst = 0
    for i in range(n):
        row = -B[i]
        row[i] = row[i] + den
        s = sum(abs(v) for v in row)
        worst = max(worst, s)
    q = Fraction(worst, den)
    if q >= 1:
        raise ValueError("||I - T^t T J J^t|| >= 1, the distance bound does not apply")
    return SlackReport(delta0, norm_A * norm_TtT / (1 - q))


# ------------------------------------------------------------ corroboration


def polish(cs, x0, digits: int = 60, iters: int = 12):
    """Minimum-norm Newton polish in mpmath; returns (point, residual).

    This corroborates a proof numerically and is not part of it.
    """
    f = cs.system if isinstance(cs, ConstraintSystem) else cs
    sparsity = f.jacobian_sparsity()
    with mpmath.workdps(digits):
        x = [mpmath.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in x0]
        for _ in range(iters):
            F = mpmath.matrix([p.evaluate(x) for p in f.components])
            J = mpmath.zeros(f.n, f.m)
            for i, j in sparsity:
                J[i, j] = f.jacobian_polynomial(i, j).evaluate(x)
            step = J.T * mpmath.lu_solve(J * J.T, -F)
            x = [xi + step[k] for k, xi in enumerate(x)]
        res = max(abs(p.evaluate(x)) for p in f.components)
        return x, res
