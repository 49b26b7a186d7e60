"""Ground-truth kernel in dimension 2 from exact Gamma-eigenfunctions.

With B = e1 e2, z = |x||y| and u the angle from x to y, Jacobi-Anger gives

    e^{-i(x,y)} = J_0(z) + sum_{k>=1} (-i)^k J_k(z) (e^{-Bku} + e^{+Bku}).

In the plane Gamma_y = -B d/dtheta_y, so e^{-Bku} has eigenvalue -k and
e^{+Bku} eigenvalue +k; the operator e^{i pi/2 G(Gamma_y)} multiplies each
piece by i^G(eigenvalue).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import Multivector
from .intpoly import IntPoly, ROOTS, residue_mod4
from .specfun import MAX_ARG, MAX_ORDER, bessel_j_orders

B_MASK = 0b11


class TruncationError(RuntimeError):
    pass


def _polar(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != 2 or y.shape[-1] != 2:
        raise ValueError("oracle2d works in dimension m = 2 only")
    nx = np.hypot(x[..., 0], x[..., 1])
    ny = np.hypot(y[..., 0], y[..., 1])
    z = nx * ny
    u = np.arctan2(y[..., 1], y[..., 0]) - np.arctan2(x[..., 1], x[..., 0])
    return np.broadcast_arrays(z, u)


def truncation_order(zmax: float, tol: float) -> int:
    """Smallest K with |J_k(z)| < tol/10 for 8 consecutive orders past K, all z <= zmax."""
    if zmax > MAX_ARG:
        raise TruncationError(f"|x||y| = {zmax:.3g} beyond supported {MAX_ARG}")
    kcap = min(MAX_ORDER, int(zmax) + 60)
    zs = np.linspace(0.0, zmax, 64) if zmax > 0 else np.zeros(1)
    J = np.abs(bessel_j_orders(kcap, zs)).max(axis=0)
    small = J < tol / 10
    for k in range(kcap - 7):
        if small[k : k + 8].all():
            return max(k, 1)
    raise TruncationError(f"no truncation below order {kcap} for tol={tol}")


@dataclass(frozen=True)
class EigenDecomposition2D:
    """Per-order data of the plane-wave split at one (x, y)."""

    z: float
    u: float
    k_max: int
    bessel: np.ndarray  # J_0..J_kmax
    minus_phase: tuple[complex, ...]  # i^G(-k)
    plus_phase: tuple[complex, ...]  # i^G(k)


def decompose(G: IntPoly, x, y, tol: float = 1e-12) -> EigenDecomposition2D:
    z, u = _polar(x, y)
    z, u = float(z), float(u)
    K = truncation_order(z, tol)
    return EigenDecomposition2D(
        z=z,
        u=u,
        k_max=K,
        bessel=bessel_j_orders(K, z),
        minus_phase=tuple(ROOTS[residue_mod4(G, -k)] for k in range(K + 1)),
        plus_phase=tuple(ROOTS[residue_mod4(G, k)] for k in range(K + 1)),
    )


def oracle_kernel(G: IntPoly, x, y, tol: float = 1e-12, chunk: int = 20000) -> Multivector:
    """e^{i pi/2 G(Gamma_y)} e^{-i(x,y)} in Cl(0,2); x, y broadcast over leading axes."""
    z, u = _polar(x, y)
    shape = z.shape
    zf, uf = z.ravel(), u.ravel()
    K = truncation_order(float(zf.max()) if zf.size else 0.0, tol)
    k = np.arange(K + 1)
    mi = (-1j) ** (k % 4)
    minus = mi * np.array([ROOTS[residue_mod4(G, -int(j))] for j in k])
    plus = mi * np.array([ROOTS[residue_mod4(G, int(j))] for j in k])
    plus[0] = 0.0  # the k = 0 piece is counted once
    out = np.zeros((zf.size, 4), dtype=complex)
    for lo in range(0, zf.size, chunk):
        sl = slice(lo, lo + chunk)
        J = bessel_j_orders(K, zf[sl])
        ku = uf[sl, None] * k[None, :]
        c, s = np.cos(ku), np.sin(ku)
        # e^{-Bku} = cos - B sin,  e^{+Bku} = cos + B sin
        out[sl, 0] = (J * (minus + plus) * c).sum(axis=1)
        out[sl, B_MASK] = (J * (plus - minus) * s).sum(axis=1)
    return Multivector(out.reshape(shape + (4,)), 2)


def component(k: int, sign: int, x, y) -> Multivector:
    """J_k(|x||y|) e^{sign B k u}: the order-k eigen-piece (no phase)."""
    z, u = _polar(x, y)
    J = bessel_j_orders(k, z)[..., k]
    c = np.zeros(np.shape(z) + (4,), dtype=complex)
    c[..., 0] = J * np.cos(k * u)
    c[..., B_MASK] = sign * J * np.sin(k * u)
    return Multivector(c, 2)


def gamma_operator_fd(fun, y, h: float = 1e-5) -> Multivector:
    """Gamma_y F = -e1e2 (y1 d/dy2 - y2 d/dy1) F by central differences."""
    y = np.asarray(y, dtype=float)
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    d1 = (fun(y + e1) - fun(y - e1)) / (2 * h)
    d2 = (fun(y + e2) - fun(y - e2)) / (2 * h)
    B = Multivector.blade(B_MASK, 2)
    return -(B * (d2 * y[0] - d1 * y[1]))


@dataclass(frozen=True)
class EigenCheck:
    eigenvalue: float
    expected: int
    residual: float


def gamma_finite_difference_check(x, y, k: int, sign: int = -1, h: float = 1e-5) -> EigenCheck:
    """Apply Gamma_y numerically to the order-k piece; expected eigenvalue sign*k."""
    x = np.asarray(x, dtype=float)
    fun = lambda yy: component(k, sign, x, yy)  # noqa: E731
    val = fun(np.asarray(y, dtype=float))
    g = gamma_operator_fd(fun, y, h)
    expected = sign * k
    denom = float(np.vdot(val.coeffs, val.coeffs).real)
    lam = float(np.vdot(val.coeffs, g.coeffs).real / denom) if denom > 0 else 0.0
    residual = float((g - val * expected).norm())
    return EigenCheck(eigenvalue=lam, expected=expected, residual=residual)
