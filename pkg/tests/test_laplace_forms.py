import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfkernel.clifford import Multivector, wedge
from cfkernel.intpoly import IntPoly
from cfkernel.laplace_forms import (
    FRACTIONAL_LADDER,
    FormVariant,
    LaplaceContext,
    SingularContext,
    assembly_weights,
    eval_all,
    eval_form,
    eval_fractional,
    g_from_f,
    half_power,
    kernel_laplace_eigen,
    kernel_laplace_m2_display,
    kernel_laplace_th2_printed,
    kernel_laplace_th5,
    split_components,
)
from cfkernel.specfun import gamma_fn

X2 = IntPoly((0, 0, 1))
polys = st.lists(st.integers(-9, 9), min_size=1, max_size=6).map(lambda c: IntPoly(tuple(c)))


@st.composite
def contexts(draw, m=None):
    m = draw(st.integers(2, 6)) if m is None else m
    x = draw(st.lists(st.floats(-2, 2), min_size=m, max_size=m))
    y = draw(st.lists(st.floats(-2, 2), min_size=m, max_size=m))
    s = complex(draw(st.floats(0.5, 4)), draw(st.floats(-3, 3)))
    return LaplaceContext(s, np.array(x), np.array(y))


def close(a: Multivector, b, tol=1e-11):
    if not isinstance(b, Multivector):
        b = Multivector.scalar(b, a.m)
    scale = max(1.0, float(np.max(np.abs(b.coeffs))))
    return float(np.max(np.abs(a.coeffs - b.coeffs))) <= tol * scale


def test_f_example_orthogonal():
    ctx = LaplaceContext(1.0, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    f = eval_form(FormVariant("f"), ctx)
    r2 = math.sqrt(2)
    ref = (Multivector.scalar(1 + r2, 2) + wedge([1, 0], [0, 1]) * 1j) / r2
    assert close(f, ref, 1e-14)


@given(contexts())
def test_f_plus_g_is_plane_wave(ctx):
    f = eval_all(ctx, "f")
    g = eval_all(ctx, "g")
    assert close(f[0] + g[0], 2 / half_power(ctx.s + 1j * ctx.phi, ctx.m))
    assert close(f[2] - g[2], 2 / half_power(ctx.s - 1j * ctx.phi, ctx.m))


@given(contexts())
def test_reduced_g_forms_match_definition(ctx):
    for fv, gv in zip(eval_all(ctx, "f"), eval_all(ctx, "g")):
        assert close(gv, g_from_f(fv, ctx), 1e-10)


@given(contexts())
def test_fractional_ladder(ctx):
    for (part, tag), (fam, p) in FRACTIONAL_LADDER.items():
        assert close(eval_fractional(p, fam, ctx), eval_form(FormVariant(part, tag), ctx), 1e-10)


@given(contexts())
def test_split_components_reconstruct(ctx):
    fk = split_components(ctx)
    f, fa = eval_all(ctx, "f")[:2]
    assert close(fk[0] + fk[1] + fk[2] + fk[3], f)
    assert close(fk[0] + fk[1] * 1j - fk[2] - fk[3] * 1j, fa)


def test_odd_components_carry_bivector_when_orthogonal():
    ctx = LaplaceContext(1.3, np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.7, 0.0]))
    fk = split_components(ctx)
    f = eval_form(FormVariant("f"), ctx)
    assert close((fk[1] + fk[3]).grade(2), f.grade(2))
    assert np.max(np.abs((fk[0] + fk[2]).grade(2).coeffs)) < 1e-14


@given(contexts())
def test_eigen_special_cases(ctx):
    g = gamma_fn(ctx.m / 2)
    pw_minus = g / half_power(ctx.s + 1j * ctx.phi, ctx.m)
    pw_plus = g / half_power(ctx.s - 1j * ctx.phi, ctx.m)
    assert close(kernel_laplace_eigen(IntPoly(()), ctx), pw_minus)
    assert close(kernel_laplace_eigen(IntPoly((0, 4)), ctx), pw_minus)
    if ctx.m % 2 == 0:
        assert close(kernel_laplace_eigen(X2, ctx), pw_minus * (1 + 1j) / 2 + pw_plus * (1 - 1j) / 2)
        assert close(kernel_laplace_eigen(IntPoly((0, 0, 2)), ctx), pw_plus)


@given(polys, contexts())
def test_th5_equals_eigen(G, ctx):
    assert close(kernel_laplace_th5(G, ctx), kernel_laplace_eigen(G, ctx), 1e-12)


def test_weights_for_zero():
    w1, w2 = assembly_weights(IntPoly(()), 3)
    assert np.allclose(w1, [4, 0, 0, 0]) and np.allclose(w2, [4, 0, 0, 0])


@given(contexts(m=5))
def test_clifford_fourier_combination_m5(ctx):
    fa = eval_form(FormVariant("g", "alpha"), ctx)
    fc = eval_form(FormVariant("f", "gamma"), ctx)
    ref = (fc + fa) * (gamma_fn(2.5) / 2)
    assert close(kernel_laplace_eigen(IntPoly((0, 1)), ctx), ref)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_printed_x2_s_form_agrees(m, rng):
    for _ in range(5):
        ctx = LaplaceContext(complex(rng.uniform(0.5, 3), rng.uniform(-2, 2)), rng.normal(size=m), rng.normal(size=m))
        assert close(kernel_laplace_th2_printed(ctx), kernel_laplace_eigen(X2, ctx), 1e-12)


def test_m2_display_is_a_different_function():
    ctx = LaplaceContext(1.0, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    disp = kernel_laplace_m2_display(ctx)
    true = kernel_laplace_eigen(X2, ctx)
    assert float(np.max(np.abs(disp.coeffs - true.coeffs))) > 0.1
    with pytest.raises(ValueError):
        kernel_laplace_m2_display(LaplaceContext(1.0, np.ones(3), np.ones(3)))


def test_context_validation():
    with pytest.raises(SingularContext):
        LaplaceContext(0.0, np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        LaplaceContext(1.0, np.ones(2), np.ones(3))
    with pytest.raises(ValueError):
        FormVariant("h")


def test_vectorised_nodes_match_scalar():
    x, y = np.array([0.3, -1.0, 0.4]), np.array([1.1, 0.2, -0.5])
    s = np.array([1.0 + 0.5j, 2.0 - 1j, 0.7 + 3j])
    batch = kernel_laplace_eigen(IntPoly((1, 2, 3)), LaplaceContext(s, x, y))
    for i, si in enumerate(s):
        one = kernel_laplace_eigen(IntPoly((1, 2, 3)), LaplaceContext(si, x, y))
        assert np.allclose(batch.coeffs[i], one.coeffs, atol=1e-14)
