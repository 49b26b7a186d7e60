import json
import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cfkernel.clifford import Multivector, wedge_coords
from cfkernel.intpoly import IntPoly, is_bounded_family
from cfkernel.laplace_forms import LaplaceContext, printed_U
from cfkernel.numlaplace import forward_laplace
from cfkernel.oracle2d import oracle_kernel
from cfkernel.specfun import gamma_fn
from cfkernel.time_kernel import (
    KernelSample,
    NotBoundedFamily,
    UnsupportedRoute,
    audit_m2_gamma2,
    auto_route,
    available_routes,
    bound_audit,
    bounded_coefficients,
    cross_route,
    generating_H,
    generating_kappa,
    kernel_bounded_family,
    kernel_from_generating,
    kernel_general,
    kernel_KU,
    kernel_m2_gamma2_printed,
    kernel_pi_odd,
    kernel_talbot,
    kernel_x2_quadrature,
    plane_wave,
    samples_to_csv,
    samples_to_json,
)

ZERO, X, X2, TWO_X2 = IntPoly(()), IntPoly((0, 1)), IntPoly((0, 0, 1)), IntPoly((0, 0, 2))
polys = st.lists(st.integers(-9, 9), min_size=1, max_size=6).map(lambda c: IntPoly(tuple(c)))


def vec(m, lo=-1.5, hi=1.5):
    return st.lists(st.floats(lo, hi), min_size=m, max_size=m).map(np.array)


def maxdiff(a, b):
    return float(np.max(np.abs(a.coeffs - b.coeffs)))


# ------------------------------------------------------------------ K_U forms


@pytest.mark.parametrize("m", [4, 6])
def test_KU1_printed_orthogonal_example(m):
    x, y = np.array([1.0, 0.5] + [0.0] * (m - 2)), np.array([-0.5, 1.0] + [0.3] * (m - 2))
    assert abs(x @ y) < 1e-15
    z = np.linalg.norm(x) * np.linalg.norm(y)
    i1 = quad(lambda t: t ** (m / 2 - 2) * sp.j0(z * (1 - t)), 0, 1, epsabs=1e-14)[0]
    i2 = quad(lambda t: sp.j0(z * (1 - t)), 0, 1, epsabs=1e-14)[0]
    ref = Multivector.scalar(1 / gamma_fn(m / 2) + i1 / gamma_fn(m / 2 - 1), m) + wedge_coords(x, y) * (1j * i2 / gamma_fn(m / 2))
    assert maxdiff(kernel_KU(1, m, x, y, printed=True), ref) < 1e-10


@pytest.mark.parametrize("printed", [False, True])
def test_KU2_at_minus_y_is_KU1(printed, rng):
    for _ in range(3):
        x, y = rng.normal(size=4), rng.normal(size=4)
        assert maxdiff(kernel_KU(2, 4, x, -y, printed=printed), kernel_KU(1, 4, x, y, printed=printed)) < 1e-12


@pytest.mark.parametrize("m", [4, 6, 8])
def test_KU1_at_zero_geometry(m):
    x, y = np.zeros(m), np.array([0.3] * m)
    val = kernel_KU(1, m, x, y)
    assert maxdiff(val, Multivector.scalar(2 / gamma_fn(m / 2), m)) < 1e-12


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_KU_inverts_printed_U(j):
    m = 4
    x, y = np.array([0.7, -0.2, 0.4, 0.1]), np.array([0.3, 0.8, -0.5, 0.2])
    phi, z = float(x @ y), float(np.linalg.norm(x) * np.linalg.norm(y))
    h = lambda t: kernel_KU(j, m, t[:, None] * x, y) * t ** (m / 2 - 1)  # noqa: E731
    for s in (1.0, 2.0):
        num = forward_laplace(h, s, omega=abs(phi) + z)
        ctx = LaplaceContext(s, x, y)
        ref = printed_U(ctx)[j - 1] / ctx.sqrt_plus
        assert maxdiff(num, ref) < 1e-8


def test_KU_route_restrictions():
    with pytest.raises(UnsupportedRoute):
        kernel_KU(1, 3, np.ones(3), np.ones(3))
    with pytest.raises(UnsupportedRoute):
        kernel_general(X2, 3, np.ones(3), np.ones(3), route="quadrature")
    with pytest.raises(ValueError):
        kernel_KU(5, 4, np.ones(4), np.ones(4))


@pytest.mark.parametrize("m", [4, 6])
def test_x2_quadrature_equals_closed_form(m, rng):
    x, y = rng.normal(size=(5, m)), rng.normal(size=(5, m))
    q = kernel_x2_quadrature(m, x, y)
    p = np.einsum("ij,ij->i", x, y)
    ref = (1 + 1j) / 2 * np.exp(-1j * p) + (1 - 1j) / 2 * np.exp(1j * p)
    assert np.max(np.abs(q.coeffs[:, 0] - ref)) < 1e-9
    assert np.max(np.abs(q.coeffs[:, 1:])) < 1e-9


# ------------------------------------------------------------------ printed m = 2 display


def test_m2_printed_display_disagrees_with_oracle():
    x, y = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    i0 = quad(lambda t: sp.j0(t), 0, 1)[0]
    v = kernel_m2_gamma2_printed(x, y)
    assert v.coeffs[0] == pytest.approx(1 + sp.j0(1.0), abs=1e-10)
    assert v.coeffs[3] == pytest.approx(1j * i0, abs=1e-10)
    assert oracle_kernel(X2, x, y).coeffs[0] == pytest.approx(1.0, abs=1e-14)
    aud = audit_m2_gamma2(x, y)
    assert aud.residual > 0.1 and aud.residual_half > 0.1


# ------------------------------------------------------------------ bounded family


@given(polys, vec(2), vec(2))
def test_bounded_family_matches_oracle(G, x, y):
    if not is_bounded_family(G):
        with pytest.raises(NotBoundedFamily):
            kernel_bounded_family(G, 2, x, y)
        return
    assert maxdiff(kernel_bounded_family(G, 2, x, y), oracle_kernel(G, x, y)) < 1e-11


@settings(max_examples=8)
@given(polys.filter(is_bounded_family), vec(4), vec(4))
def test_bounded_family_matches_talbot_m4(G, x, y):
    assert maxdiff(kernel_bounded_family(G, 4, x, y), kernel_talbot(G, 4, x, y)) < 1e-8


def test_bounded_coefficients():
    assert bounded_coefficients(ZERO) == (1, 0)
    assert bounded_coefficients(TWO_X2) == (0, 1)
    assert bounded_coefficients(X2) == ((1 + 1j) / 2, (1 - 1j) / 2)


@pytest.mark.parametrize("m", [3, 5])
def test_pi_kernel_odd_m_against_talbot(m, rng):
    x, y = rng.normal(size=m), rng.normal(size=m)
    val = kernel_bounded_family(TWO_X2, m, x, y)
    assert maxdiff(val, kernel_pi_odd(m, x, y)) < 1e-14
    assert maxdiff(val, kernel_talbot(TWO_X2, m, x, y)) < 1e-8


# ------------------------------------------------------------------ generating function


def test_generating_H_examples():
    x, y = np.array([0.6, -0.3]), np.array([0.4, 0.9])
    p = x @ y
    for a in (0.0, 0.3 + 0.2j):
        assert maxdiff(generating_H(x, y, a, ZERO).take(0), Multivector.scalar(2 * np.exp(a - 1j * p), 2)) < 1e-14
    # G = x at a = 0: twice the bivector exponential of x^y
    w = wedge_coords(x, y).coeffs[3]
    H = generating_H(x, y, 0.0, X).take(0)
    assert np.allclose(H.coeffs, [2 * np.cos(w), 0, 0, 2 * np.sin(w)], atol=1e-14)
    assert generating_kappa() == pytest.approx(2.0, abs=1e-13)
    with pytest.raises(ValueError):
        generating_H(x, y, 0.0, IntPoly((1, 1)))


@given(vec(3), vec(3))
def test_lagrange_identity_in_H(x, y):
    w = wedge_coords(x, y).coeffs
    lhs = (x @ x) * (y @ y) - (x @ y) ** 2
    assert lhs == pytest.approx(float(np.sum(np.abs(w) ** 2)), abs=1e-10)


@pytest.mark.parametrize("G", [ZERO, X, X2, IntPoly((3, 1, 2, 1))])
def test_generating_route_m2_matches_oracle(G, rng):
    x, y = rng.normal(size=(6, 2)), rng.normal(size=(6, 2))
    assert maxdiff(kernel_from_generating(G, 2, x, y), oracle_kernel(G, x, y)) < 1e-10


def test_generating_route_m4_examples():
    x, y = np.array([0.5, -1.0, 0.2, 0.7]), np.array([1.2, 0.3, -0.4, 0.1])
    assert maxdiff(kernel_from_generating(ZERO, 4, x, y), plane_wave(x, y)) < 1e-10
    G = IntPoly((0, 1, 0, 3))
    assert maxdiff(kernel_from_generating(G, 4, x, y), kernel_talbot(G, 4, x, y)) < 1e-8
    with pytest.raises(UnsupportedRoute):
        kernel_from_generating(ZERO, 3, x[:3], y[:3])


# ------------------------------------------------------------------ dispatch


def test_dispatch_examples():
    x, y = np.array([0.3, -0.8, 1.1]), np.array([0.9, 0.4, -0.2])
    smp = kernel_general(IntPoly((0, 4)), 3, x, y)
    assert smp.route == "closed-form"
    assert maxdiff(smp.value, plane_wave(x, y)) < 1e-14
    smp = kernel_general(X2, 2, x[:2], y[:2])
    p = x[:2] @ y[:2]
    assert smp.route == "oracle2d"
    assert smp.value.coeffs[0] == pytest.approx(np.cos(p) + np.sin(p), abs=1e-12)
    assert auto_route(IntPoly((0, 0, 0, 1)), 2) == "oracle2d"
    assert auto_route(X, 4) == "generating-function"
    assert auto_route(X, 5) == "talbot"
    assert "quadrature" in available_routes(IntPoly((4, 4, 5)), 4)
    assert cross_route(ZERO, 3, "closed-form") == "talbot"


@pytest.mark.parametrize("route", ["closed-form", "talbot"])
def test_identity_odd_m(route):
    x, y = np.array([0.3, -0.8, 1.1]), np.array([0.9, 0.4, -0.2])
    for G in (ZERO, IntPoly((0, 4))):
        assert maxdiff(kernel_general(G, 3, x, y, route=route).value, plane_wave(x, y)) < 1e-9


@settings(max_examples=10)
@given(polys, vec(2), vec(2))
def test_talbot_matches_oracle_m2(G, x, y):
    assert maxdiff(kernel_talbot(G, 2, x, y), oracle_kernel(G, x, y)) < 1e-7


def test_general_rejects_bad_input():
    with pytest.raises(UnsupportedRoute):
        kernel_general(ZERO, 2, [1, 1], [1, 1], route="magic")
    with pytest.raises(ValueError):
        kernel_general(ZERO, 2, [20, 0], [6, 0])
    with pytest.raises(ValueError):
        kernel_general(ZERO, 1, [1], [1])


# ------------------------------------------------------------------ bounds and output


def test_bound_audit_examples():
    r = bound_audit(ZERO, 3, q=0, n=60)
    assert r.max_ratio <= 1 + 1e-12
    r = bound_audit(X2, 2, q=1, n=200)
    assert r.passed and r.max_ratio <= math.sqrt(2) + 1e-9
    r = bound_audit(X, 2, q=0, n=200)
    assert r.max_ratio <= math.sqrt(2) + 1e-9


def test_sample_output_formats():
    x, y = np.array([[0.5, 0.25], [1.0, -1.0]]), np.array([[0.1, 0.2], [0.3, 0.4]])
    smp = kernel_general(X, 2, x, y)
    text = samples_to_csv([smp])
    lines = text.strip().split("\n")
    assert lines[0] == "x1,x2,y1,y2,blade,re,im,route"
    assert all(line.endswith(",oracle2d") for line in lines[1:])
    assert text == samples_to_csv([kernel_general(X, 2, x, y)])
    data = json.loads(samples_to_json([smp]))
    assert len(data) == 2 and data[0]["route"] == "oracle2d" and data[0]["G"] == "1,0"
    with pytest.raises(ValueError):
        KernelSample(x, y, 2, X, smp.value, "mystery")
