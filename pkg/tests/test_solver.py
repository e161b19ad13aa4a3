import math

import numpy as np
import pytest

from conftest import RUN_LONG
from tightcodes.polysys import Polynomial, PolySystem
from tightcodes.solver import (
    SolverConfig,
    SolverDivergence,
    damped_newton,
    estimate_dimension,
    find_configuration,
    gap_dimension,
    random_start,
)
from tightcodes.systems import SpaceDescriptor, build_system

x, y = Polynomial.var(0), Polynomial.var(1)
CIRCLE_LINE = PolySystem([x * x + y * y - 1, x - y], 2)
CIRCLE = PolySystem([x * x + y * y - 1], 2)


def test_circle_line_converges_to_diagonal_point():
    res = damped_newton(CIRCLE_LINE, [1.0, 0.5])
    assert res.converged and res.rank_deficiency == 0
    assert np.allclose(res.point, [math.sqrt(2) / 2] * 2, atol=1e-12)
    assert res.outcome == "a"


def test_residual_history_is_monotone_on_toy_systems():
    for f, x0 in ((CIRCLE_LINE, [1.0, 0.5]), (CIRCLE, [2.0, 1.0]), (PolySystem([x * x - 2], 1), [3.0])):
        res = damped_newton(f, x0)
        h = res.history
        assert res.converged
        assert all(b <= a + 1e-15 for a, b in zip(h, h[1:]))


def test_step_clamp_limits_each_coordinate():
    cfg = SolverConfig(max_step=0.05, max_iters=1)
    res = damped_newton(PolySystem([x - 10], 1), [0.0], cfg)
    assert abs(res.point[0] - 0.05) < 1e-15


def test_start_arity_checked():
    with pytest.raises(ValueError):
        damped_newton(CIRCLE_LINE, [1.0])


def test_divergence_raises():
    with pytest.raises(SolverDivergence):
        damped_newton(PolySystem([x * x - 1], 1), [1e4])


def test_invalid_config():
    with pytest.raises(ValueError):
        SolverConfig(max_step=0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)


def test_singular_solution_reported():
    # a repeated equation leaves a Jacobian of rank one on the whole circle
    res = damped_newton(PolySystem([x * x + y * y - 1, 2 * (x * x + y * y - 1)], 2), [0.5, 0.5])
    assert res.converged
    assert res.rank_deficiency == 1
    assert res.outcome == "b"


# ------------------------------------------------------------ starts


def test_random_start_is_deterministic():
    cs = build_system(SpaceDescriptor.parse("hp d=3 n=6"))
    a, b = random_start(cs, 7), random_start(cs, 7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, random_start(cs, 8))


def test_raw_random_start_is_standard_normal():
    cs = build_system(SpaceDescriptor.parse("hp d=3 n=6"))
    idx = [i for i, s in enumerate(cs.layout) if s[0] == "x"]
    samples = np.concatenate([random_start(cs, s, normalize=False)[idx] for s in range(10_000 // len(idx) + 1)])
    assert samples.size >= 10_000
    assert abs(samples.mean()) < 0.05
    assert abs(samples.var() - 1) < 0.05


def test_normalized_start_has_unit_representatives_and_tight_weights():
    cs = build_system(SpaceDescriptor.parse("hp d=3 n=6"))
    x0 = random_start(cs, 3)
    by_point: dict = {}
    for i, s in enumerate(cs.layout):
        if s[0] == "x":
            by_point.setdefault(s[1], []).append(x0[i])
        else:
            assert x0[i] == 0.5
    assert all(abs(np.linalg.norm(v) - 1) < 1e-12 for v in by_point.values())


# ------------------------------------------------------------ searches


def test_hp6_converges_to_tiny_residual(hp6):
    res = hp6["result"]
    assert res.converged
    assert res.residual_linf < 1e-12
    assert res.outcome == "a"


def test_grassmann_2_5_4_is_singular():
    res = find_configuration(SpaceDescriptor.parse("grass m=2 n=5 N=4"), attempts=3)
    assert res.converged
    assert res.outcome == "b"
    assert res.rank_deficiency > 0


def test_parallel_search_matches_sequential():
    desc = SpaceDescriptor.parse("hp d=2 n=4")
    a = find_configuration(desc, attempts=3)
    b = find_configuration(desc, attempts=3, jobs=2)
    assert a.seed == b.seed
    assert np.array_equal(a.point, b.point)


def test_attempts_must_be_positive():
    with pytest.raises(ValueError):
        find_configuration(SpaceDescriptor.parse("hp d=2 n=4"), attempts=0)


@pytest.mark.skipif(not RUN_LONG, reason="set TCP_RUN_LONG=1")
def test_hp3_14_has_no_solution():
    res = find_configuration(SpaceDescriptor.parse("hp d=3 n=14"), attempts=20)
    assert res.outcome in ("c", "d")


# ------------------------------------------------------------ dimension


def test_circle_dimension_is_one():
    s, dim = estimate_dimension(CIRCLE, [1.0, 0.0], samples=200, seed=1)
    assert dim == 1
    assert s[1] < 1e-2 * s[0]


def test_dimension_requires_a_solution():
    with pytest.raises(ValueError):
        estimate_dimension(CIRCLE, [1.0, 0.1], samples=10)


def test_gap_dimension_examples():
    assert gap_dimension(np.array([1.0, 0.9, 0.8, 1e-3, 1e-4]), 1e-3) == 3
    assert gap_dimension(np.array([1.0, 1e-5]), 1e-3) == 1
    assert gap_dimension(np.array([]), 1e-3) == 0
