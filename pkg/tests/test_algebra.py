import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightcodes.algebra import (
    DIMS,
    GrassmannPoint,
    HermitianMatrix,
    ProjectivePoint,
    RotationMatrix,
    Scalar,
    associator,
    chordal_distance,
    frobenius_inner,
    kmul,
    principal_cosines,
    projector,
    re_product,
    scalar_mul,
)
from tightcodes.catalog import grass_fig, op2_39
from tightcodes.exactnum.fields import Surd

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def scalars(tag):
    return st.lists(small, min_size=DIMS[tag], max_size=DIMS[tag]).map(lambda c: Scalar(tag, tuple(c)))


def unit(tag, i):
    return Scalar.unit(tag, i)


# ------------------------------------------------------------ multiplication


def test_quaternion_ij_is_k():
    assert unit("H", 1) * unit("H", 2) == unit("H", 3)


def test_quaternion_table_against_hamilton_rules():
    i, j, k = (unit("H", t) for t in (1, 2, 3))
    minus_one = Scalar.real("H", -1)
    assert i * i == minus_one and j * j == minus_one and k * k == minus_one
    assert i * j * k == minus_one
    assert j * i == -k


def test_octonions_are_not_associative():
    e1, e2, e4 = unit("O", 1), unit("O", 2), unit("O", 4)
    left, right = (e1 * e2) * e4, e1 * (e2 * e4)
    assert left != right
    # independent check from the float structure tensor
    a, b, c = (np.eye(8)[t] for t in (1, 2, 4))
    lf = kmul(kmul(a, b, "O"), c, "O")
    rf = kmul(a, kmul(b, c, "O"), "O")
    assert np.allclose(lf, [float(v) for v in left.coeffs])
    assert np.allclose(rf, [float(v) for v in right.coeffs])


def test_tag_mismatch_raises():
    with pytest.raises(ValueError):
        scalar_mul(unit("H", 1), unit("O", 1))


@given(scalars("O"), scalars("O"))
def test_octonion_composition_identity_exact(x, y):
    assert (x * y).norm2() == x.norm2() * y.norm2()


@given(st.sampled_from("RCHO"), st.data())
def test_conjugation_is_involution(tag, data):
    x = data.draw(scalars(tag))
    assert x.conj().conj() == x


@given(st.sampled_from("RCH"), st.data())
def test_associator_vanishes_for_associative_algebras(tag, data):
    a, b, c = (data.draw(scalars(tag)) for _ in range(3))
    assert associator(a, b, c) == Scalar.zero(tag)


@given(st.sampled_from("RCHO"), st.data())
def test_real_part_of_product_is_symmetric(tag, data):
    a, b = data.draw(scalars(tag)), data.draw(scalars(tag))
    assert re_product(a, b) == re_product(b, a)
    assert (a * b).re == (b * a).re


@given(scalars("O"), scalars("O"))
def test_octonions_are_alternative(x, y):
    # the Moufang-type identity (xx)y = x(xy) holds even without associativity
    assert (x * x) * y == x * (x * y)


# ------------------------------------------------------------ projectors


def test_standard_basis_projector():
    p = ProjectivePoint("H", tuple(Scalar.real("H", v) for v in (1, 0, 0)))
    P = projector(p)
    for i in range(3):
        for j in range(3):
            assert P[i, j] == (1 if i == j == 0 else 0)


def test_real_diagonal_line_projector():
    s = 1 / math.sqrt(2)
    P = projector(ProjectivePoint("R", (Scalar.real("R", s), Scalar.real("R", s))))
    assert all(abs(float(P[i, j].re) - 0.5) < 1e-15 for i in range(2) for j in range(2))


def _matmul(A, B):
    d = A.dim
    return [[sum((A[i, k] * B[k, j] for k in range(1, d)), A[i, 0] * B[0, j]) for j in range(d)] for i in range(d)]


def test_octonion_chart_point_projector_is_exact_projection():
    zero, one = Surd(), Surd.rational(1)
    omega = Scalar("O", (Surd.rational(Fraction(-1, 2)), Surd.sqrt(3) / 2) + (zero,) * 6)
    s = Surd.sqrt(Fraction(1, 3))
    x = (Scalar("O", (s,) + (zero,) * 7), omega * s, omega * s)
    P = projector(ProjectivePoint("O", x))
    trace = P[0, 0] + P[1, 1] + P[2, 2]
    assert trace == Scalar.real("O", one)
    assert _matmul(P, P) == [list(r) for r in P.entries]


def test_non_unit_representative_rejected():
    with pytest.raises(ValueError):
        projector(ProjectivePoint("R", (Scalar.real("R", Fraction(1)), Scalar.real("R", Fraction(1)))))


def test_frobenius_self_and_orthogonal():
    e = [ProjectivePoint("C", tuple(Scalar.real("C", int(i == j)) for j in range(3))) for i in range(3)]
    assert frobenius_inner(projector(e[0]), projector(e[0])) == 1
    assert frobenius_inner(projector(e[0]), projector(e[1])) == 0


def test_frobenius_dimension_mismatch():
    with pytest.raises(ValueError):
        frobenius_inner(HermitianMatrix.identity("R", 2), HermitianMatrix.identity("R", 3))


def test_frobenius_on_39_point_code_cross_triple():
    code = op2_39()
    A = HermitianMatrix("O", code.projector(0))
    B = HermitianMatrix("O", code.projector(3))
    assert frobenius_inner(A, B) == Fraction(1, 3)


def _random_unit_quaternion_vector(rng, d):
    """Exact rational unit vector via a Pythagorean-style normalization in H^d."""
    while True:
        c = [Fraction(int(v), 1) for v in rng.integers(-3, 4, size=4 * d)]
        n2 = sum(v * v for v in c)
        if n2 == 0:
            continue
        root = math.isqrt(int(n2))
        if root * root == n2:
            return [Scalar("H", tuple(v / root for v in c[4 * a:4 * a + 4])) for a in range(d)]


def test_projector_inner_product_matches_hermitian_product_for_quaternions():
    rng = np.random.default_rng(4)
    found = 0
    for _ in range(5000):
        x = _random_unit_quaternion_vector(rng, 2)
        y = _random_unit_quaternion_vector(rng, 2)
        inner = sum((a.conj() * b for a, b in zip(x[1:], y[1:])), x[0].conj() * y[0])
        lhs = frobenius_inner(projector(ProjectivePoint("H", tuple(x))), projector(ProjectivePoint("H", tuple(y))))
        assert lhs == inner.norm2()
        found += 1
        if found == 100:
            break
    assert found == 100


# ------------------------------------------------------------ distances


def test_chordal_distance_identical_and_orthogonal():
    e0 = ProjectivePoint("H", (Scalar.real("H", 1), Scalar.real("H", 0)))
    e1 = ProjectivePoint("H", (Scalar.real("H", 0), Scalar.real("H", 1)))
    assert chordal_distance(e0, e0) == 0
    assert chordal_distance(e0, e1) == 1


def test_chordal_distance_on_39_point_code():
    code = op2_39()
    pts = [ProjectivePoint("O", tuple(p)) for p in code.points]
    assert abs(chordal_distance(pts[0], pts[1]) - 1) < 1e-14
    assert abs(chordal_distance(pts[0], pts[3]) - math.sqrt(2 / 3)) < 1e-14


def test_chordal_distance_space_mismatch():
    with pytest.raises(ValueError):
        chordal_distance(ProjectivePoint("R", (Scalar.real("R", 1),)), GrassmannPoint(((1.0, 0.0),)))


def test_chordal_distance_relates_to_angle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.standard_normal((2, 4))
        x /= np.linalg.norm(x)
        y = rng.standard_normal((2, 4))
        y /= np.linalg.norm(y)
        px = ProjectivePoint("H", tuple(Scalar("H", tuple(r)) for r in x))
        py = ProjectivePoint("H", tuple(Scalar("H", tuple(r)) for r in y))
        t = float(frobenius_inner(projector(px), projector(py)))
        theta = math.acos(max(-1.0, min(1.0, 2 * t - 1)))
        assert abs(chordal_distance(px, py) - math.sin(theta / 2)) < 1e-12


def test_rotation_distance_is_frobenius():
    U = RotationMatrix.from_array(np.eye(3))
    c, s = math.cos(0.3), math.sin(0.3)
    V = RotationMatrix.from_array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    assert V.is_rotation()
    expected = np.linalg.norm(U.as_array() - V.as_array())
    assert abs(chordal_distance(U, V) - expected) < 1e-12


# ------------------------------------------------------------ Grassmannians


def test_principal_cosines_identical_and_complementary():
    U = GrassmannPoint(((1.0, 0, 0, 0), (0, 1.0, 0, 0)))
    V = GrassmannPoint(((0, 0, 1.0, 0), (0, 0, 0, 1.0)))
    assert np.allclose(principal_cosines(U, U), [1, 1])
    assert np.allclose(principal_cosines(U, V), [0, 0])


def test_principal_cosines_shape_mismatch():
    with pytest.raises(ValueError):
        principal_cosines(GrassmannPoint(((1.0, 0, 0),)), GrassmannPoint(((1.0, 0, 0, 0),)))


def test_principal_cosines_on_first_grassmann_figure():
    code = grass_fig(1)
    U, V = (GrassmannPoint.from_array([[float(v) for v in row] for row in code.points[i]]) for i in (0, 1))
    cos = principal_cosines(U, V)
    # Tr(Pi Pi') = sum of squared cosines, which is 2/5 for this figure
    assert abs(float(np.sum(cos ** 2)) - 0.4) < 1e-12
    assert abs(np.sum(1 - cos ** 2) - chordal_distance(U, V) ** 2) < 1e-12
    assert np.all(np.diff(cos) <= 0)


def test_traceless_grassmann_projector_norm():
    rng = np.random.default_rng(3)
    for m, n in ((1, 3), (2, 5), (3, 7)):
        Q, _ = np.linalg.qr(rng.standard_normal((n, m)))
        P = Q @ Q.T
        P0 = P - (m / n) * np.eye(n)
        assert abs(np.sum(P0 * P0) - m * (n - m) / n) < 1e-12
