"""Damped least-squares Newton search and solution-set dimension estimates.

Random numbers come from numpy's counter-based Philox generator keyed by the
integer seed, so a (system, seed, config) triple always gives the same start.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .polysys import PolySystem
from .systems import ConstraintSystem, SpaceDescriptor, build_system, default_weight, side_conditions

AMBIGUOUS_RESIDUAL = 1e-3
WELL_CONDITIONED = 1e-4


class SolverDivergence(RuntimeError):
    """Residual blew up or produced non-finite values."""


@dataclass(frozen=True)
class SolverConfig:
    max_step: float = 0.1
    residual_tol: float = 1e-13
    max_iters: int = 500
    seed: int = 0
    sv_cutoff: float = 1e-10
    stall_window: int = 200
    stall_improvement: float = 0.01
    divergence: float = 1e6

    def __post_init__(self):
        if self.max_step <= 0 or self.residual_tol <= 0 or self.sv_cutoff <= 0:
            raise ValueError("step size and tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class SolveResult:
    point: np.ndarray
    residual_linf: float
    iterations: int
    jacobian_singular_values: np.ndarray
    rank_deficiency: int
    converged: bool
    seed: int | None = None
    history: list = field(default_factory=list, repr=False)
    rejected: list = field(default_factory=list)

    @property
    def outcome(self) -> str:
        """a: nonsingular solution, b: singular solution, d: plateau, c: no solution found."""
        if self.converged and not self.rejected:
            return "a" if self.rank_deficiency == 0 else "b"
        return "d" if self.residual_linf <= AMBIGUOUS_RESIDUAL else "c"


def _system(cs) -> PolySystem:
    return cs.system if isinstance(cs, ConstraintSystem) else cs


def rank_deficiency(J: np.ndarray, cutoff: float) -> tuple[np.ndarray, int]:
    s = np.linalg.svd(J, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return s, J.shape[0]
    return s, J.shape[0] - int(np.sum(s > cutoff * s[0]))


def damped_newton(cs, x0, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Clamped least-squares Newton iteration.

    Each step solves Df(x) dx = -f(x) in the least-squares sense through an
    SVD with relative cutoff, then clips every coordinate of dx to max_step.
    Stops on convergence, on max_iters, or when the residual has improved by
    less than stall_improvement over the last stall_window steps.
    """
    f = _system(cs)
    x = np.array(x0, dtype=float)
    if x.shape != (f.m,):
        raise ValueError(f"start point has {x.size} coordinates, system has {f.m}")
    history = []
    it = 0
    while True:
        F = f.evaluate(x)
        if not np.all(np.isfinite(F)):
            raise SolverDivergence("non-finite residual")
        r = float(np.max(np.abs(F))) if F.size else 0.0
        history.append(r)
        if r > cfg.divergence:
            raise SolverDivergence(f"residual {r:.3e} exceeds {cfg.divergence:.1e}")
        if r <= cfg.residual_tol or it >= cfg.max_iters:
            break
        w = cfg.stall_window
        if len(history) > w and history[-1] > (1 - cfg.stall_improvement) * history[-1 - w]:
            break
        J = f.jacobian(x)
        U, s, Vt = np.linalg.svd(J, full_matrices=False)
        keep = s > cfg.sv_cutoff * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
        coef = np.where(keep, (U.T @ F) / np.where(keep, s, 1.0), 0.0)
        dx = -(Vt.T @ coef)
        x = x + np.clip(dx, -cfg.max_step, cfg.max_step)
        it += 1
    J = f.jacobian(x)
    s, rd = rank_deficiency(J, cfg.sv_cutoff)
    return SolveResult(x, r, it, s, rd, r <= cfg.residual_tol, cfg.seed, history)


def random_start(cs: ConstraintSystem, seed: int, normalize: bool = True) -> np.ndarray:
    """Standard normal coordinates; weights, fourth powers and eta at their tight values.

    With normalize, each projective representative is scaled to unit length
    and each Grassmannian generator gets orthonormal rows (QR), which keeps
    the clamped Newton steps from spending hundreds of iterations on scale.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.standard_normal(cs.nvars)
    w = float(default_weight(cs.descriptor))
    groups: dict = {}
    for i, slot in enumerate(cs.layout):
        if slot[0] == "w":
            x[i] = w
        elif slot[0] in ("v", "eta"):
            x[i] = 1.0
        else:
            groups.setdefault(slot[1], []).append(i)
    if normalize:
        for p, idx in groups.items():
            if cs.layout[idx[0]][0] == "g":
                desc = cs.descriptor
                X = x[idx].reshape(desc.m, desc.n)
                Q, _ = np.linalg.qr(X.T)
                x[idx] = Q.T.ravel()
            else:
                x[idx] /= np.linalg.norm(x[idx])
    return x


@lru_cache(maxsize=8)
def _cached_system(desc: SpaceDescriptor) -> ConstraintSystem:
    return build_system(desc)


def _attempt(desc: SpaceDescriptor, cfg: SolverConfig, seed: int) -> SolveResult | None:
    cs = _cached_system(desc)
    try:
        res = damped_newton(cs, random_start(cs, seed), replace(cfg, seed=seed))
    except SolverDivergence:
        return None
    if res.converged:
        res.rejected = side_conditions(cs, res.point)
    return res


def _conditioning(r: SolveResult) -> float:
    s = r.jacobian_singular_values
    return float(s[-1] / s[0]) if s.size and s[0] > 0 else 0.0


def _usable(r: SolveResult | None) -> bool:
    return r is not None and r.converged and not r.rejected


def find_configuration(desc, attempts: int = 3, cfg: SolverConfig = SolverConfig(), jobs: int = 1,
                       good_conditioning: float = WELL_CONDITIONED) -> SolveResult:
    """Try seeds cfg.seed, cfg.seed + 1, ... and pick the most useful result.

    The search stops at the first converged, admissible solution whose
    Jacobian has s_min / s_max >= good_conditioning. Otherwise it returns the
    best-conditioned converged solution, and failing that the lowest
    residual. With jobs > 1 all attempts run in worker processes and the
    same selection rule is applied in seed order, so the answer matches the
    sequential run.
    """
    if attempts < 1:
        raise ValueError("attempts must be at least 1")
    if isinstance(desc, ConstraintSystem):
        desc = desc.descriptor
    seeds = [cfg.seed + t for t in range(attempts)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_attempt, [desc] * attempts, [cfg] * attempts, seeds))
    else:
        results = []
        for s in seeds:
            res = _attempt(desc, cfg, s)
            results.append(res)
            if _usable(res) and _conditioning(res) >= good_conditioning:
                break
    for r in results:
        if _usable(r) and _conditioning(r) >= good_conditioning:
            return r
    usable = [r for r in results if _usable(r)]
    if usable:
        return max(usable, key=_conditioning)
    live = [r for r in results if r is not None]
    if not live:
        raise SolverDivergence(f"all {attempts} attempts diverged")
    return min(live, key=lambda r: r.residual_linf)


def _reconverge(args) -> np.ndarray | None:
    f, x, y, cfg = args
    try:
        res = damped_newton(f, y, cfg)
    except SolverDivergence:
        return None
    if not res.converged:
        return None
    diff = res.point - x
    nrm = float(np.linalg.norm(diff))
    return diff / nrm if nrm > 0 else None


def estimate_dimension(cs, x_solution, samples: int = 1000, perturb: float = 1e-3, seed: int = 0,
                       cfg: SolverConfig | None = None, jobs: int = 1) -> tuple[np.ndarray, int]:
    """Local dimension of the zero set near x_solution.

    Each sample perturbs the solution by perturb times a Gaussian vector and
    re-converges; the unit displacement vectors span approximately the tangent
    space, so their singular values are of order one along it and of order
    perturb across it.
    """
    f = _system(cs)
    x = np.asarray(x_solution, dtype=float)
    base = np.max(np.abs(f.evaluate(x)))
    if base >= 1e-12:
        raise ValueError(f"starting residual {base:.3e} is not below 1e-12")
    cfg = cfg or SolverConfig(residual_tol=1e-12)
    rng = np.random.Generator(np.random.Philox(seed))
    jobs_args = [(f, x, x + perturb * rng.standard_normal(x.size), cfg) for _ in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_reconverge, jobs_args, chunksize=max(1, samples // (4 * jobs))))
    else:
        rows = [_reconverge(a) for a in jobs_args]
    good = [r for r in rows if r is not None]
    if len(good) < 0.9 * samples:
        raise RuntimeError(f"{samples - len(good)} of {samples} samples failed to re-converge")
    s = np.linalg.svd(np.array(good), compute_uv=False)
    return s, gap_dimension(s, perturb)


def gap_dimension(s: np.ndarray, perturb: float) -> int:
    """Position of the largest ratio s[i]/s[i+1] among values above sqrt(perturb) * s[0]."""
    s = np.asarray(s, dtype=float)
    if s.size == 0 or s[0] == 0:
        return 0
    floor = math.sqrt(perturb) * s[0]
    best, where = 0.0, s.size
    for i in range(s.size - 1):
        if s[i] < floor:
            break
        ratio = s[i] / s[i + 1] if s[i + 1] > 0 else math.inf
        if ratio > best:
            best, where = ratio, i + 1
    return where
