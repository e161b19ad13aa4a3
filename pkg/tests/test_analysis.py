from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from scipy.special import eval_jacobi, roots_jacobi

from tightcodes.algebra import Configuration
from tightcodes.analysis import (
    LPCertificate,
    Space,
    ZonalParams,
    design_check,
    gale_dual,
    gale_min_size,
    jacobi_in_z,
    jacobi_poly,
    lp_verify,
    max_size,
    poly_eval,
    simplex_kernel_value,
    tight_alpha,
    witness_poly,
    zonal_sum,
)
from tightcodes.catalog import op2_39

F = Fraction
HP2 = ZonalParams.for_space("HP2")
OP2 = ZonalParams.for_space("OP2")


# ------------------------------------------------------------ bounds


def test_tight_alpha_examples():
    assert tight_alpha("HP2", 15) == F(2, 7)
    assert max_size("HP2") == 15
    assert tight_alpha("OP2", 27) == F(4, 13)
    assert tight_alpha("OP2", 27) - F(1, 3) == F(-1, 39)
    assert max_size("OP2") == 27
    assert tight_alpha("HP2", 6) == F(1, 5)


def test_grassmann_alpha_for_seven_points_in_g24():
    # m (N m - n) / (n (N - 1)) with m = 2, n = 4, N = 7
    a = tight_alpha("G(2,4)", 7)
    assert a == F(2 * (14 - 4), 4 * 6) == F(5, 6)
    assert a == F(7 - 2, 7 - 1)
    assert max_size("G(2,4)") == 10


def test_invalid_inputs():
    with pytest.raises(ValueError):
        tight_alpha("HP2", 1)
    with pytest.raises(ValueError):
        Space.parse("OP3")
    with pytest.raises(ValueError):
        Space.parse("G(5,2)")
    with pytest.raises(ValueError):
        gale_min_size("OP2")


def test_gale_minimum_sizes():
    # N >= d + (1 + sqrt(1 + 8 d / dim K)) / 2
    assert gale_min_size("HP2") == 5  # 3 + (1 + sqrt(7)) / 2 = 4.82
    assert gale_min_size("RP2") == 6  # 3 + (1 + 5) / 2 = 6
    assert gale_min_size("CP2") == 6  # 3 + (1 + sqrt(13)) / 2 = 5.30


# ------------------------------------------------------------ Jacobi polynomials


def test_jacobi_examples():
    assert jacobi_poly(2, HP2) == [3, -21, 28]
    assert jacobi_poly(2, OP2) == [10, -65, 91]
    assert jacobi_poly(1, OP2) == [-4, 12]
    assert jacobi_poly(0, OP2) == [1]
    with pytest.raises(ValueError):
        jacobi_poly(-1, HP2)


def test_zonal_parameters():
    assert (HP2.alpha, HP2.beta) == (3, 1)
    assert (OP2.alpha, OP2.beta) == (7, 3)
    rp2 = ZonalParams.for_space("RP2")
    assert (rp2.alpha, rp2.beta) == (0, F(-1, 2))


@pytest.mark.parametrize("space", ["RP2", "CP3", "HP2", "HP4", "OP2"])
def test_jacobi_matches_scipy(space):
    params = ZonalParams.for_space(space)
    z = np.linspace(-1, 1, 11)
    for k in range(7):
        ours = [float(poly_eval(jacobi_in_z(k, params), F(v).limit_denominator(10**6))) for v in z]
        ref = eval_jacobi(k, float(params.alpha), float(params.beta), [float(F(v).limit_denominator(10**6)) for v in z])
        assert np.allclose(ours, ref, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("space", ["RP2", "HP2", "OP2"])
def test_jacobi_orthogonality_by_quadrature(space):
    params = ZonalParams.for_space(space)
    nodes, weights = roots_jacobi(12, float(params.alpha), float(params.beta))
    vals = [np.array([float(poly_eval(jacobi_in_z(k, params), F(v))) for v in nodes]) for k in range(6)]
    for i, j in combinations(range(6), 2):
        inner = np.sum(weights * vals[i] * vals[j])
        scale = np.sqrt(np.sum(weights * vals[i] ** 2) * np.sum(weights * vals[j] ** 2))
        assert abs(inner) < 1e-10 * scale


def test_jacobi_three_term_recurrence_exact():
    a, b = HP2.alpha, HP2.beta
    for n in range(2, 8):
        s = 2 * n + a + b
        lhs = [2 * n * (n + a + b) * (s - 2) * c for c in jacobi_in_z(n, HP2)]
        pn1, pn2 = jacobi_in_z(n - 1, HP2), jacobi_in_z(n - 2, HP2)
        rhs = [F(0)] * (n + 1)
        for i, c in enumerate(pn1):
            rhs[i + 1] += (s - 1) * s * (s - 2) * c
            rhs[i] += (s - 1) * (a * a - b * b) * c
        for i, c in enumerate(pn2):
            rhs[i] -= 2 * (n + a - 1) * (n + b - 1) * s * c
        assert lhs == rhs


# ------------------------------------------------------------ zonal sums and designs


def test_39_point_code_zonal_sums_vanish():
    code = op2_39()
    assert zonal_sum(code, 1) == 0
    assert zonal_sum(code, 2) == 0
    assert design_check(code, 2) == [True, True]


def test_39_point_zonal_sums_by_counting():
    # 39 diagonal terms, 78 ordered orthogonal pairs, 1404 pairs at 1/3
    p1, p2 = jacobi_poly(1, OP2), jacobi_poly(2, OP2)
    assert 39 * poly_eval(p1, F(1)) + 78 * poly_eval(p1, F(0)) + 1404 * poly_eval(p1, F(1, 3)) == 0
    assert (poly_eval(p2, F(1)), poly_eval(p2, F(0)), poly_eval(p2, F(1, 3))) == (36, 10, F(-14, 9))
    assert 39 * 36 + 78 * 10 + 1404 * F(-14, 9) == 0


@pytest.mark.parametrize("tag,d", [("R", 3), ("C", 4), ("H", 3)])
def test_orthonormal_basis_is_a_one_design(tag, d):
    from tightcodes.algebra import DIMS

    pts = np.zeros((d, d, DIMS[tag]))
    for i in range(d):
        pts[i, i, 0] = 1.0
    config = Configuration("projective", pts, tag)
    assert abs(zonal_sum(config, 1)) < 1e-12
    assert design_check(config, 1, tol=1e-12) == [True]


def test_two_random_points_are_not_a_one_design():
    rng = np.random.default_rng(4)
    pts = rng.standard_normal((2, 3, 4))
    config = Configuration("projective", pts / np.linalg.norm(pts.reshape(2, -1), axis=1)[:, None, None], "H")
    assert design_check(config, 1, tol=1e-8) == [False]


def test_design_check_strength():
    with pytest.raises(ValueError):
        design_check(op2_39(), 0)


@pytest.mark.parametrize("tag,d", [("R", 3), ("C", 3), ("H", 3), ("O", 3)])
def test_zonal_sums_are_nonnegative(tag, d):
    from tightcodes.algebra import DIMS

    rng = np.random.default_rng(21)
    for _ in range(10):
        N = int(rng.integers(2, 12))
        pts = rng.standard_normal((N, d, DIMS[tag]))
        if tag == "O":
            pts[:, 0, 1:] = 0.0  # chart representatives keep the octonionic projector well defined
        pts /= np.linalg.norm(pts.reshape(N, -1), axis=1)[:, None, None]
        config = Configuration("projective", pts, tag)
        for k in range(1, 5):
            assert zonal_sum(config, k) >= -1e-8 * N * N


def test_hp6_simplex_is_a_one_design(hp6):
    assert design_check(hp6["config"], 1, tol=1e-8) == [True]


# ------------------------------------------------------------ LP certificates


def test_five_points_in_rp2_are_excluded():
    # C_4(1) + 4 C_4(-2/3): the Gram kernel of a 5-point tight simplex would be indefinite
    value = simplex_kernel_value("RP2", 5, 4)
    assert value < 0
    p = jacobi_in_z(4, ZonalParams.for_space("RP2"))
    assert value == poly_eval(p, F(1)) + 4 * poly_eval(p, F(-2, 3))


def test_constant_certificate():
    # f = C_0 = 1 is positive, so it is only valid when the sign window is empty
    assert lp_verify(LPCertificate([F(1)], F(1, 2), HP2)) == (1, False)
    assert lp_verify(LPCertificate([F(1)], F(-2), HP2)) == (1, True)


@pytest.mark.parametrize("N,d", [(15, 3), (6, 3), (4, 3), (27, 3), (7, 4)])
def test_witness_polynomial(N, d):
    cert = witness_poly(N, d, "H" if N != 27 else "O")
    bound, ok = lp_verify(cert)
    assert bound == N
    assert ok
    assert cert.coeffs[0] == 1
    # f vanishes at z0 = 2 alpha - 1
    assert poly_eval(cert.polynomial(), cert.z0) == 0


def test_witness_linear_form():
    cert = witness_poly(15, 3, "H")
    f = cert.polynomial()
    assert f == [1 + F(14 * 3, 4) * F(1, 3), F(14 * 3, 4)]


def test_witness_errors():
    with pytest.raises(ValueError):
        witness_poly(3, 1)
    with pytest.raises(ValueError):
        witness_poly(3, 3)


def test_invalid_certificates():
    assert lp_verify(LPCertificate([F(-1), F(1)], F(0), HP2))[1] is False
    assert lp_verify(LPCertificate([F(1), F(-1)], F(0), HP2))[1] is False
    # 1 + C_1 is positive near z = 1, so with z0 = 1 the sign condition fails
    assert lp_verify(LPCertificate([F(1), F(1)], F(1), HP2))[1] is False
    with pytest.raises(ValueError):
        lp_verify(LPCertificate([], F(0), HP2))


# ------------------------------------------------------------ Gale duality


def _off_diagonal(config):
    G = config.gram()
    return np.sort([G[i, j] for i, j in combinations(range(config.N), 2)])


def test_gale_dual_of_hp6_simplex(hp6):
    dual = gale_dual(hp6["config"])
    assert dual.N == 6 and dual.d == 3 and dual.tag == "H"
    assert np.allclose(_off_diagonal(dual), 0.2, atol=1e-9)
    twice = gale_dual(dual)
    assert np.allclose(_off_diagonal(twice), _off_diagonal(hp6["config"]), atol=1e-9)


def test_gale_dual_of_regular_real_simplex():
    # 4 equiangular lines in R^3 (tetrahedron) go to 4 points in RP^0
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / np.sqrt(3)
    config = Configuration("projective", v[:, :, None], "R")
    with pytest.raises(ValueError):
        gale_dual(config)  # N = d + 1


def test_gale_dual_of_six_equiangular_lines():
    # 6 lines of the icosahedron in R^3 are a tight simplex with alpha = 1/5
    phi = (1 + 5**0.5) / 2
    v = np.array([[0, 1, phi], [0, 1, -phi], [1, phi, 0], [1, -phi, 0], [phi, 0, 1], [-phi, 0, 1]])
    v /= np.linalg.norm(v, axis=1)[:, None]
    config = Configuration("projective", v[:, :, None], "R")
    assert np.allclose(_off_diagonal(config), 0.2)
    dual = gale_dual(config)
    assert dual.d == 3
    assert np.allclose(_off_diagonal(dual), 0.2, atol=1e-9)


def test_gale_dual_guards():
    d = 3
    basis = np.zeros((d, d, 4))
    for i in range(d):
        basis[i, i, 0] = 1.0
    with pytest.raises(ValueError):
        gale_dual(Configuration("projective", basis, "H"))
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((6, 3, 4))
    pts /= np.linalg.norm(pts.reshape(6, -1), axis=1)[:, None, None]
    with pytest.raises(ValueError):
        gale_dual(Configuration("projective", pts, "H"))
    with pytest.raises(ValueError):
        gale_dual(Configuration("projective", np.zeros((6, 3, 8)), "O"))
