import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfkernel.clifford import (
    DimensionMismatch,
    Multivector,
    blade_label,
    blade_sign,
    conjugate,
    exp_unit_bivector,
    inner,
    parse_blade_label,
    vector,
    wedge,
    wedge_coords,
    wedge_square_check,
)

E12 = 0b11
coord = st.floats(-5, 5, allow_nan=False)


def rand_mv(rng, m, batch=()):
    c = rng.normal(size=batch + (1 << m,)) + 1j * rng.normal(size=batch + (1 << m,))
    return Multivector(c, m)


def test_generator_squares():
    e1 = Multivector.blade(1, 2)
    e12 = Multivector.blade(E12, 2)
    assert (e1 * e1).allclose(-1)
    assert (e12 * e12).allclose(-1)


def test_vector_product_example():
    xy = vector([1, 2]) * vector([3, 4])
    assert xy.terms(1e-15) == {"1": -11, "e12": -2}


def test_inner_wedge_examples():
    assert inner([1, 0], [0, 1]) == 0
    assert wedge([1, 0], [0, 1]).terms() == {"e12": 1}
    assert inner([1, 2], [3, 4]) == 11
    assert wedge([1, 2], [3, 4]).terms() == {"e12": -2}
    assert wedge([1.5, -2], [1.5, -2]).norm() == 0


def test_wedge_square_examples():
    assert wedge_square_check([1, 2], [3, 4]) == pytest.approx(-4)
    assert wedge_square_check([1, 0, 0], [0, 1, 0]) == pytest.approx(-1)
    assert wedge_square_check([1, 2, 3], [2, 4, 6]) == pytest.approx(0)


def test_conjugation_examples(rng):
    assert conjugate(Multivector.blade(E12, 2)).terms() == {"e12": -1}
    assert conjugate(Multivector.blade(1, 2)).terms() == {"e1": -1}
    u = rand_mv(rng, 4, (5,))
    assert conjugate(conjugate(u)).allclose(u, 0)


def test_exp_bivector_examples():
    B = Multivector.blade(E12, 2)
    assert exp_unit_bivector(B, 0.0).allclose(1)
    assert exp_unit_bivector(B, math.pi / 2).allclose(B, 1e-15)
    a, b = 0.3, 1.1
    assert (exp_unit_bivector(B, a) * exp_unit_bivector(B, b)).allclose(exp_unit_bivector(B, a + b), 1e-14)


def test_labels_roundtrip():
    for mask in range(1 << 5):
        assert parse_blade_label(blade_label(mask)) == mask
    assert blade_label(0) == "1"
    assert blade_label(0b101) == "e13"


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Multivector.blade(1, 2) * Multivector.blade(1, 3)
    with pytest.raises(ValueError):
        Multivector.blade(0b100, 2)


def test_numpy_scalar_on_left_keeps_multivector():
    v = np.float64(2.0) * Multivector.blade(1, 2)
    assert isinstance(v, Multivector)
    assert v.terms() == {"e1": 2}


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_associativity_and_distributivity(rng, m):
    a, b, c = (rand_mv(rng, m, (3,)) for _ in range(3))
    assert ((a * b) * c).allclose(a * (b * c), 1e-10)
    assert (a * (b + c)).allclose(a * b + a * c, 1e-10)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_conjugation_reverses_products(rng, m):
    a, b = rand_mv(rng, m), rand_mv(rng, m)
    assert conjugate(a * b).allclose(conjugate(b) * conjugate(a), 1e-10)


def test_blade_sign_anticommuting_generators():
    for i in range(4):
        for j in range(4):
            if i != j:
                assert blade_sign(1 << i, 1 << j) == -blade_sign(1 << j, 1 << i)
        assert blade_sign(1 << i, 1 << i) == -1


@given(st.lists(coord, min_size=3, max_size=3), st.lists(coord, min_size=3, max_size=3))
def test_vector_product_splits(x, y):
    # xy = -(x,y) + x^y and the Lagrange identity
    xy = vector(x) * vector(y)
    ref = wedge(x, y) - inner(x, y)
    assert xy.allclose(ref, 1e-10)
    lhs = wedge_square_check(x, y)
    rhs = inner(x, y) ** 2 - np.dot(x, x) * np.dot(y, y)
    assert lhs == pytest.approx(rhs, abs=1e-8)


@given(st.lists(coord, min_size=4, max_size=4), st.lists(coord, min_size=4, max_size=4))
def test_vector_square_is_minus_norm(x, y):
    assert (vector(x) * vector(x)).allclose(-np.dot(x, x), 1e-9)
    w = wedge_coords(np.array(x), np.array(y))
    assert w.allclose(wedge(x, y), 1e-12)
