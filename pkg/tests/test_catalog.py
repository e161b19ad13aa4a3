import math
from fractions import Fraction

import numpy as np
import pytest

from tightcodes.algebra import Configuration
from tightcodes.analysis import tight_alpha
from tightcodes.catalog import (
    NAMED,
    build_named,
    difference_set,
    grass_fig,
    mub_check,
    op2_39,
    read_figures,
    read_projector_blocks,
    so4_17,
    so4_32,
    steiner,
    verify_exact_simplex,
    verify_spectrum,
)
from tightcodes.exactnum.fields import Surd

F = Fraction

FANO = [[1 if j in blk else 0 for j in range(7)] for blk in
        ([0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5])]
H4 = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]


# ------------------------------------------------------------ the 39-point code


def test_op2_39_structure_and_spectrum():
    code = op2_39()
    assert code.N == 39
    assert len(code.groups) == 13 and all(len(g) == 3 for g in code.groups)
    assert set(code.spectrum) == {0, F(1, 3)}
    assert verify_spectrum(code)


def test_op2_39_is_13_mutually_unbiased_bases():
    assert mub_check(op2_39(), 3)
    assert mub_check(op2_39().configuration(), 3)


def test_op2_39_deformations_keep_spectrum():
    # exact unit complex numbers from Pythagorean triples
    xi = [(F(3, 5), F(4, 5)), (F(5, 13), F(12, 13)), (F(-8, 17), F(15, 17)), (F(7, 25), F(-24, 25))]
    assert verify_spectrum(op2_39(deform=xi))
    with pytest.raises(ValueError):
        op2_39(deform=[(F(1, 2), F(1, 2))] * 4)


def test_op2_39_gram_counts():
    G = op2_39().gram()
    values = [G[i][j] for i in range(39) for j in range(39) if i != j]
    assert values.count(0) == 78
    assert values.count(F(1, 3)) == 1404


# ------------------------------------------------------------ rotation codes


def test_so4_32_signed_permutations():
    code = so4_32()
    assert code.N == 32
    for X in code.points:
        nonzero = [v for row in X for v in row if v != 0]
        assert len(nonzero) == 4 and all(abs(v) == 1 for v in nonzero)
        assert sum(1 for v in nonzero if v < 0) % 2 == 0
    assert verify_spectrum(code)
    assert set(code.spectrum) == {0, 4, -4}


@pytest.mark.parametrize("mode", ["float", "interval", "exact"])
def test_so4_17_regular_simplex(mode):
    code = so4_17(mode)
    assert code.N == 17
    assert code.spectrum == (F(-1, 4),)
    assert verify_spectrum(code)


def test_so4_17_matrices_are_orthogonal():
    conf = so4_17("float").configuration()
    dets = []
    for X in conf.points:
        assert np.allclose(X @ X.T, np.eye(4), atol=1e-14)
        dets.append(np.linalg.det(X))
    # X0 is a transposition matrix, so the whole orbit lies in one coset of SO(4)
    assert np.allclose(dets, dets[0], atol=1e-12) and abs(abs(dets[0]) - 1) < 1e-12
    G = conf.gram()
    # a regular 17-point simplex on the sphere of radius 2 in the 16-dim matrix space
    assert np.allclose(G[~np.eye(17, dtype=bool)], -0.25, atol=1e-12)


# ------------------------------------------------------------ Grassmannian figures


@pytest.mark.parametrize("number,m,n,alpha", [(1, 2, 5, F(2, 5)), (2, 3, 6, F(1)), (3, 3, 7, F(5, 7)),
                                                (4, 3, 8, F(1, 2))])
def test_figures_are_exact_tight_simplices(number, m, n, alpha):
    code = grass_fig(number)
    N = code.N
    # common value m (N m - n) / (n (N - 1)) evaluated independently of the library
    assert F(m * (N * m - n), n * (N - 1)) == alpha
    assert tight_alpha(f"G({m},{n})", N) == alpha
    projectors = [code.projector(i) for i in range(N)]
    assert verify_exact_simplex(projectors, alpha, m)
    assert verify_spectrum(code)


def test_perturbed_figure_entry_fails():
    m, n, mats = read_figures()[1]
    mats = [[list(row) for row in X] for X in mats]
    mats[0][0][0] = mats[0][0][0] + F(1, 1000)
    from tightcodes.catalog import NamedCode

    code = NamedCode("perturbed", "grassmann", "G(2,5)", mats, (F(2, 5),))
    check = verify_exact_simplex([code.projector(i) for i in range(code.N)], F(2, 5), m)
    assert not check
    assert any("idempotent" in f for f in check.failures)


def test_figures_through_real_algebraic_blocks():
    code = grass_fig(1)
    P = [code.projector(i) for i in range(2)]
    text = "\n".join(Surd._coerce(v).to_real_algebraic().to_text() for Q in P for row in Q for v in row)
    blocks = read_projector_blocks(text, 5)
    assert len(blocks) == 2
    assert verify_exact_simplex(blocks, F(2, 5), 2)


def test_projector_blocks_shape_error():
    with pytest.raises(ValueError):
        read_projector_blocks("RA 1 -1 0 2\n" * 3, 2)


# ------------------------------------------------------------ combinatorial families


def test_difference_set_31_points():
    for S in ({1, 5, 11, 24, 25, 27}, {0, 1, 4, 6, 13, 21}):
        code = difference_set(31, S)
        assert code.N == 31 and code.space == "CP5"
        assert code.spectrum == (F(5, 36),)
        assert F(31 - 6, 6 * 30) == F(5, 36)
        assert verify_spectrum(code)
        G = code.configuration().gram()
        assert np.allclose(G[~np.eye(31, dtype=bool)], 5 / 36, atol=1e-12)


def test_difference_set_exact():
    code = difference_set(7, {1, 2, 4}, mode="exact")
    assert code.spectrum == (F(7 - 3, 3 * 6),) == (F(2, 9),)
    assert verify_spectrum(code)
    assert all(code.gram()[i][j] == F(2, 9) for i in range(7) for j in range(7) if i != j)


def test_difference_set_errors():
    with pytest.raises(ValueError):
        difference_set(7, {0, 1, 2})
    with pytest.raises(ValueError):
        difference_set(31, {1, 5, 11, 24, 25, 27}, mode="exact")


def test_fano_steiner_code():
    code = steiner(FANO, H4)
    assert code.N == 7 * 4
    assert code.spectrum == (F(1, 9),)
    assert verify_spectrum(code)


def test_steiner_code_is_a_one_design():
    code = steiner(FANO, H4)
    d = 7
    frame = [[sum(p[a] * p[b] * code.meta["norm2"] for p in code.points) for b in range(d)] for a in range(d)]
    assert frame == [[F(code.N, d) if a == b else 0 for b in range(d)] for a in range(d)]


def test_steiner_input_errors():
    with pytest.raises(ValueError):
        steiner(FANO, [[1, 1], [1, -1]])
    with pytest.raises(ValueError):
        steiner(FANO, [[1, 1, 1, 1], [1, 1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]])
    bad = [row[:] for row in FANO]
    bad[0][0] = 0
    with pytest.raises(ValueError):
        steiner(bad, H4)


# ------------------------------------------------------------ MUB checks


def test_standard_and_fourier_bases_are_unbiased():
    s = 1 / math.sqrt(2)
    pts = np.zeros((4, 2, 2))
    pts[0, 0, 0] = pts[1, 1, 0] = 1
    pts[2, :, 0] = [s, s]
    pts[3, :, 0] = [s, -s]
    assert mub_check(Configuration("projective", pts, "C"), 2)


def test_repeated_basis_is_not_unbiased():
    pts = np.zeros((4, 2, 2))
    pts[0, 0, 0] = pts[1, 1, 0] = pts[2, 0, 0] = pts[3, 1, 0] = 1
    assert not mub_check(Configuration("projective", pts, "C"), 2)


# ------------------------------------------------------------ lookup


def test_every_named_code_verifies():
    for name in NAMED:
        code = build_named(name)
        assert verify_spectrum(code), name


def test_unknown_code():
    with pytest.raises(ValueError):
        build_named("leech")
    with pytest.raises(ValueError):
        grass_fig(9)
