"""The generalised transform as an integral operator in the plane, on Clifford-Hermite functions.

    T f(y) = (2 pi)^{-1} int K_G(x, y) f(x) dx,      K_G from :func:`kernel_general` (m = 2)

The integral is a tensor Gauss-Legendre rule on [-L, L]^2; the integrand
carries e^{-|x|^2/2}, so truncation at L = 6 costs ~1e-8 relative.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .clifford import Multivector, _product_tables, blade_label, parse_blade_label, vector
from .intpoly import IntPoly, ROOTS, residue_mod4
from .specfun import laguerre
from .time_kernel import kernel_general

M_DIM = 2
B_MASK = 0b11


class QuadratureBoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class HermiteGrid:
    """Quadrature and output grids for the planar transform."""

    quad_nodes: int = 120
    half_width: float = 6.0
    y_nodes: int = 16
    y_half_width: float = 4.0
    multiply: str = "left"  # kernel on the left of f, or "right" for sensitivity runs

    def __post_init__(self):
        if self.multiply not in ("left", "right"):
            raise ValueError("multiply must be 'left' or 'right'")
        if self.quad_nodes < 16 or self.y_nodes < 2:
            raise ValueError("grid too small")
        if self.y_half_width * self.half_width * 2 > 100:
            raise QuadratureBoundExceeded("|x||y| on the grids would exceed 100")

    def x_nodes(self):
        t, w = leggauss(self.quad_nodes)
        t = t * self.half_width
        w = w * self.half_width
        X1, X2 = np.meshgrid(t, t, indexing="ij")
        W = np.outer(w, w)
        return np.stack([X1.ravel(), X2.ravel()], axis=-1), W.ravel()

    def y_points(self):
        g = np.linspace(-self.y_half_width, self.y_half_width, self.y_nodes)
        Y1, Y2 = np.meshgrid(g, g, indexing="ij")
        return np.stack([Y1.ravel(), Y2.ravel()], axis=-1)


DEFAULT_GRID = HermiteGrid()


# --------------------------------------------------------------------------- basis


@dataclass(frozen=True)
class MonogenicBasis2D:
    """M_k^1(x) = (x1 - e12 x2)^k and M_k^2 = M_k^1 e1."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("degree must be non-negative")

    def __call__(self, l: int, x) -> Multivector:
        x = np.asarray(x, dtype=float)
        w = (x[..., 0] + 1j * x[..., 1]) ** self.k
        c = np.zeros(x.shape[:-1] + (4,), dtype=complex)
        if l == 1:
            c[..., 0] = w.real
            c[..., B_MASK] = -w.imag
        elif l == 2:
            # (a - b e12) e1 = a e1 - b e2
            c[..., 0b01] = w.real
            c[..., 0b10] = -w.imag
        else:
            raise ValueError("l must be 1 or 2")
        return Multivector(c, M_DIM)


@dataclass(frozen=True)
class HermiteBasisFunction:
    j: int
    k: int
    l: int

    def __post_init__(self):
        if self.j < 0 or self.k < 0 or self.l not in (1, 2):
            raise ValueError(f"bad Hermite indices {(self.j, self.k, self.l)}")

    def __call__(self, x) -> Multivector:
        x = np.asarray(x, dtype=float)
        p, odd = divmod(self.j, 2)
        r2 = np.einsum("...j,...j->...", x, x)
        alpha = M_DIM / 2 + self.k - 1 + odd
        radial = 2.0**p * math.factorial(p) * laguerre(p, alpha, r2) * np.exp(-r2 / 2)
        M = MonogenicBasis2D(self.k)(self.l, x)
        if odd:
            M = vector(x) * M
        return M * radial


def predicted_mu_exponent(G: IntPoly, j: int, k: int, m: int = M_DIM) -> int:
    """e with mu = i^e: Gamma eigenvalue -k (even j) or k+m-1 (odd j), times (-i)^(j+k)."""
    lam = -k if j % 2 == 0 else k + m - 1
    return (residue_mod4(G, lam) + 3 * (j + k)) % 4


def predicted_mu(G: IntPoly, j: int, k: int, m: int = M_DIM) -> complex:
    return ROOTS[predicted_mu_exponent(G, j, k, m)]


# --------------------------------------------------------------------------- sampled functions


@dataclass(frozen=True)
class SampledFunction:
    points: np.ndarray  # (n, 2)
    values: Multivector  # batch (n,)

    def to_csv(self, tol: float = 0.0) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x1", "x2", "blade", "re", "im"])
        C = self.values.coeffs
        for p in range(C.shape[0]):
            for mask in range(4):
                c = C[p, mask]
                if mask and abs(c) <= tol:
                    continue
                w.writerow([repr(float(self.points[p, 0])), repr(float(self.points[p, 1])), blade_label(mask),
                            repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> SampledFunction:
        rows = list(csv.DictReader(io.StringIO(text)))
        order: dict[tuple[float, float], int] = {}
        for r in rows:
            order.setdefault((float(r["x1"]), float(r["x2"])), len(order))
        c = np.zeros((len(order), 4), dtype=complex)
        for r in rows:
            idx = order[(float(r["x1"]), float(r["x2"]))]
            c[idx, parse_blade_label(r["blade"])] += float(r["re"]) + 1j * float(r["im"])
        pts = np.array(list(order.keys()), dtype=float).reshape(-1, 2)
        return cls(pts, Multivector(c, M_DIM))


def sample(f, points) -> SampledFunction:
    pts = np.asarray(points, dtype=float)
    return SampledFunction(pts, f(pts))


# --------------------------------------------------------------------------- transform

_kernel_cache: dict = {}


def kernel_matrix(G: IntPoly, grid: HermiteGrid = DEFAULT_GRID) -> np.ndarray:
    """K_G(x_n, y_p) coefficients, shape (n_y, n_x, 4); cached per residue table and grid."""
    key = (tuple(residue_mod4(G, k) for k in range(4)), grid.quad_nodes, grid.half_width, grid.y_nodes, grid.y_half_width)
    if key not in _kernel_cache:
        X, _ = grid.x_nodes()
        Y = grid.y_points()
        smp = kernel_general(G, M_DIM, X[None, :, :], Y[:, None, :])
        _kernel_cache.clear()  # one grid-sized matrix at a time
        _kernel_cache[key] = smp.value.coeffs
    return _kernel_cache[key]


def apply_transform(G: IntPoly, f, grid: HermiteGrid = DEFAULT_GRID) -> SampledFunction:
    """(2 pi)^{-1} sum_n w_n K(x_n, y) f(x_n) on the y-grid; ``f`` maps (n, 2) points to a Multivector."""
    X, W = grid.x_nodes()
    fv = f(X).coeffs * W[:, None]
    K = kernel_matrix(G, grid)
    perm, signs = _product_tables(M_DIM)
    out = np.zeros((K.shape[0], 4), dtype=complex)
    for a in range(4):
        Ka = K[:, :, a]
        if not np.any(Ka):
            continue
        for c in range(4):
            b = perm[a, c]
            if grid.multiply == "left":
                # (K f)[c] += K[a] f[a^c] sign(a, a^c)
                out[:, c] += signs[a, c] * (Ka @ fv[:, b])
            else:
                # (f K)[c] += f[b] K[b^c] sign(b, b^c), with b^c = a  ->  b = a^c
                out[:, c] += signs[b, c] * (Ka @ fv[:, b])
    return SampledFunction(grid.y_points(), Multivector(out / (2 * np.pi), M_DIM))


def eigen_residual(G: IntPoly, j: int, k: int, l: int, grid: HermiteGrid = DEFAULT_GRID) -> float:
    """||T psi - mu psi|| / ||psi|| over the y-grid."""
    psi = HermiteBasisFunction(j, k, l)
    Tpsi = apply_transform(G, psi, grid)
    ref = psi(Tpsi.points) * predicted_mu(G, j, k)
    num = np.linalg.norm((Tpsi.values - ref).coeffs)
    den = np.linalg.norm(psi(Tpsi.points).coeffs)
    return float(num / den)


def dirac_fd(fun, x, h: float = 1e-5) -> Multivector:
    """D f = e1 df/dx1 + e2 df/dx2 (generators on the left) by central differences."""
    x = np.asarray(x, dtype=float)
    out = None
    for jj in range(M_DIM):
        e = np.zeros(M_DIM)
        e[jj] = h
        d = (fun(x + e) - fun(x - e)) / (2 * h)
        term = Multivector.blade(1 << jj, M_DIM) * d
        out = term if out is None else out + term
    return out


def gamma_fd(fun, x, h: float = 1e-5) -> Multivector:
    """Gamma_x f = -e12 (x1 d/dx2 - x2 d/dx1) f by central differences."""
    x = np.asarray(x, dtype=float)
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    d1 = (fun(x + e1) - fun(x - e1)) / (2 * h)
    d2 = (fun(x + e2) - fun(x - e2)) / (2 * h)
    return -(Multivector.blade(B_MASK, M_DIM) * (d2 * x[0] - d1 * x[1]))


def helmholtz_residual(G: IntPoly, sign: int, grid: HermiteGrid = DEFAULT_GRID) -> float:
    """Relative residual of T(D psi_0) = sign * i y T(psi_0) on the y-grid, psi_0 the Gaussian.

    D psi_0 = -x e^{-|x|^2/2} exactly, so no differentiation is needed.
    """
    gauss = HermiteBasisFunction(0, 0, 1)
    lhs = apply_transform(G, lambda X: vector(X) * (-np.exp(-np.einsum("ij,ij->i", X, X) / 2)), grid)
    rhs = apply_transform(G, gauss, grid)
    rhs_v = vector(rhs.points) * rhs.values * (sign * 1j)
    return float(np.linalg.norm((lhs.values - rhs_v).coeffs) / np.linalg.norm(rhs_v.coeffs))
