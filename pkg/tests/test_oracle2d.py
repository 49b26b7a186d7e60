import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfkernel.clifford import wedge_coords
from cfkernel.intpoly import IntPoly
from cfkernel.oracle2d import (
    TruncationError,
    decompose,
    gamma_finite_difference_check,
    oracle_kernel,
    truncation_order,
)

pt = st.lists(st.floats(-4, 4), min_size=2, max_size=2).map(np.array)
polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7).map(lambda c: IntPoly(tuple(c)))


@given(pt, pt)
def test_zero_is_plane_wave(x, y):
    K = oracle_kernel(IntPoly(()), x, y)
    assert np.allclose(K.coeffs, [np.exp(-1j * x @ y), 0, 0, 0], atol=1e-11)


@given(pt, pt)
def test_x2_is_cos_plus_sin(x, y):
    K = oracle_kernel(IntPoly((0, 0, 1)), x, y)
    p = x @ y
    assert np.allclose(K.coeffs, [np.cos(p) + np.sin(p), 0, 0, 0], atol=1e-11)


@given(pt, pt)
def test_x_is_bivector_exponential(x, y):
    K = oracle_kernel(IntPoly((0, 1)), x, y)
    w = wedge_coords(x, y).coeffs[3]  # x^y = w e12
    assert np.allclose(K.coeffs, [np.cos(w), 0, 0, np.sin(w)], atol=1e-11)


@given(polys, pt, pt)
def test_depends_only_on_residue_table(G, x, y):
    shifted = IntPoly(tuple(c + 4 * (i % 2) for i, c in enumerate(G.coeffs)))
    assert np.allclose(oracle_kernel(G, x, y).coeffs, oracle_kernel(shifted, x, y).coeffs, atol=1e-12)


def test_cube_differs_from_identity_power():
    # k^3 = k mod 4 only for odd k; at k = 2 mod 4 the residues are 0 and 2
    assert [k**3 % 4 for k in range(-8, 9)] != [k % 4 for k in range(-8, 9)]
    assert all(k**3 % 4 == k % 4 for k in range(-9, 10, 2))
    x, y = np.array([0.4, -2.0]), np.array([1.5, 0.9])
    cube = oracle_kernel(IntPoly((0, 0, 0, 1)), x, y).coeffs
    assert np.max(np.abs(cube - oracle_kernel(IntPoly((0, 1)), x, y).coeffs)) > 1.0
    # same residue table as x^3 -> same kernel
    assert np.allclose(cube, oracle_kernel(IntPoly((0, 4, 4, 1)), x, y).coeffs, atol=1e-13)


def test_batched_matches_pointwise(rng):
    G = IntPoly((1, 3, 0, 2))
    X = rng.normal(size=(7, 2)) * 3
    Y = rng.normal(size=(7, 2)) * 3
    batch = oracle_kernel(G, X, Y, chunk=3)
    for i in range(7):
        assert np.allclose(batch.coeffs[i], oracle_kernel(G, X[i], Y[i]).coeffs, atol=1e-14)


def test_decompose_orders():
    d = decompose(IntPoly((0, 1)), [1.0, 0.0], [0.0, 2.0])
    assert d.z == pytest.approx(2.0)
    assert d.plus_phase[:4] == (1, 1j, -1, -1j)
    assert d.minus_phase[:4] == (1, -1j, -1, 1j)


@pytest.mark.parametrize("k, sign, expected", [(0, -1, 0), (1, -1, -1), (3, 1, 3), (2, 1, 2)])
def test_gamma_eigenpieces(k, sign, expected):
    chk = gamma_finite_difference_check([0.8, -0.3], [1.1, 0.6], k, sign)
    assert chk.expected == expected
    assert chk.eigenvalue == pytest.approx(expected, abs=1e-6)
    assert chk.residual <= (1e-8 if k == 0 else 1e-6)


def test_truncation_limits():
    assert truncation_order(0.0, 1e-12) >= 1
    assert truncation_order(50.0, 1e-12) > 50
    with pytest.raises(TruncationError):
        truncation_order(150.0, 1e-12)
    with pytest.raises(ValueError):
        oracle_kernel(IntPoly(()), [1, 2, 3], [1, 2, 3])
