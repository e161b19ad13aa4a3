from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tightcodes.algebra import DIMS, Scalar
from tightcodes.stabilizer import (
    derivation,
    lie_spanning_set,
    orbit_matrix,
    rank_lower_bound,
    stabilizer_bound,
    stabilizer_report,
)
from tightcodes.systems import SpaceDescriptor

small = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def octonions():
    return st.lists(small, min_size=8, max_size=8).map(lambda c: Scalar("O", tuple(c)))


def random_hermitian(rng, tag, d):
    k = DIMS[tag]
    M = [[None] * d for _ in range(d)]
    for i in range(d):
        M[i][i] = Scalar.real(tag, Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))))
        for j in range(i + 1, d):
            s = Scalar(tag, tuple(Fraction(int(v), int(rng.integers(1, 4))) for v in rng.integers(-5, 6, size=k)))
            M[i][j], M[j][i] = s, s.conj()
    return M


# ------------------------------------------------------------ generators


@given(octonions(), octonions())
@settings(max_examples=50)
def test_derivation_satisfies_leibniz_rule(x, y):
    a, b = Scalar.unit("O", 1), Scalar.unit("O", 2)
    assert derivation(a, b, x * y) == derivation(a, b, x) * y + x * derivation(a, b, y)


@given(st.lists(small, min_size=4, max_size=4), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=30)
def test_quaternionic_derivation_is_inner(coeffs, i, j):
    x = Scalar("H", tuple(coeffs))
    a, b = Scalar.unit("H", i), Scalar.unit("H", j)
    c = a * b - b * a
    assert derivation(a, b, x) == c * x - x * c


def test_generator_counts():
    hp2 = lie_spanning_set(SpaceDescriptor.parse("hp d=3 n=6"))
    assert hp2.size == 21 == hp2.dim_g
    op2 = lie_spanning_set(("O", 3))
    assert op2.size == 14 + 24 + 21
    assert op2.dim_g == 52


def test_unsupported_space():
    with pytest.raises(ValueError):
        lie_spanning_set(("O", 4))
    with pytest.raises(ValueError):
        lie_spanning_set(SpaceDescriptor.parse("grass m=2 n=5 N=4"))


@pytest.mark.parametrize("tag,d", [("H", 3), ("O", 3)])
def test_generators_preserve_hermitian_matrices(tag, d):
    lie = lie_spanning_set((tag, d))
    rng = np.random.default_rng(12)
    for _ in range(3):
        X = random_hermitian(rng, tag, d)
        for g in range(lie.size):
            Y = lie.apply(g, X)
            assert all(Y[i][j] == Y[j][i].conj() for i in range(d) for j in range(d))


@pytest.mark.parametrize("tag,d", [("H", 3), ("O", 3)])
def test_generators_annihilate_identity(tag, d):
    lie = lie_spanning_set((tag, d))
    eye = [[Scalar.real(tag, int(i == j)) for j in range(d)] for i in range(d)]
    for g in range(lie.size):
        assert all(v == Scalar.zero(tag) for row in lie.apply(g, eye) for v in row)


def test_derivations_annihilate_real_matrices():
    lie = lie_spanning_set(("O", 3))
    rng = np.random.default_rng(2)
    X = [[Scalar.real("O", int(v)) for v in row] for row in rng.integers(-5, 6, size=(3, 3))]
    for g, (kind, _) in enumerate(lie.labels):
        if kind == "derivation":
            assert all(v == Scalar.zero("O") for row in lie.apply(g, X) for v in row)


# ------------------------------------------------------------ rank bounds


def test_rank_of_identity():
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert rank_lower_bound(eye, 0).rank_lower_bound == 3


def test_small_eigenvalue_below_threshold():
    rep = rank_lower_bound([[1, 0], [0, Fraction(1, 10**6)]], Fraction(1, 1000))
    assert rep.threshold == 2 * 2 * Fraction(1, 1000) * (2 + Fraction(1, 1000))
    assert rep.rank_lower_bound == 1


def test_random_rank_two_matrix():
    rng = np.random.default_rng(6)
    A = rng.integers(-5, 6, size=(4, 2))
    B = rng.integers(-5, 6, size=(2, 6))
    M = (A @ B).tolist()
    assert sympy.Matrix(M).rank() == 2
    assert rank_lower_bound(M, 0).rank_lower_bound == 2


def test_exact_rank_matches_gaussian_elimination():
    rng = np.random.default_rng(15)
    for _ in range(40):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 41 // m + 1))
        r = int(rng.integers(0, min(m, k) + 1))
        M = rng.integers(-4, 5, size=(m, r)) @ rng.integers(-4, 5, size=(r, k))
        rows = [[Fraction(int(v), int(rng.integers(1, 4))) for v in row] for row in M]
        assert m * k <= 40
        assert rank_lower_bound(rows, 0).rank_lower_bound == sympy.Matrix(rows).rank()


# ------------------------------------------------------------ orbit matrices


def test_orbit_matrix_width_for_hp2():
    lie = lie_spanning_set(("H", 3))
    pts = np.zeros((6, 3, 4))
    for i in range(6):
        pts[i, i % 3, 0] = 1.0
    M = orbit_matrix(pts, lie)
    assert M.rows.shape == (21, 216)
    assert M.delta > 0


def test_single_point_stabilizer():
    pts = np.zeros((1, 3, 4))
    pts[0, 0, 0] = 1.0
    # the orbit of a point is all of HP^2, of real dimension 8
    assert stabilizer_bound(pts, ("H", 3)) == 21 - 8


def test_arity_mismatch():
    with pytest.raises(ValueError):
        orbit_matrix(np.zeros((2, 2, 4)), lie_spanning_set(("H", 3)))


def test_hp6_simplex_has_trivial_stabilizer(hp6):
    rep = stabilizer_report(hp6["config"], hp6["desc"])
    assert rep.rank_lower_bound == 21
    assert rep.stab_dim_upper == 0


def test_op2_five_points_stabilizer_at_most_three(op2_5):
    assert op2_5["result"].converged
    assert stabilizer_bound(op2_5["config"], op2_5["desc"]) <= 3
