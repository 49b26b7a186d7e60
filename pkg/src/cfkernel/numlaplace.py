"""Numerical forward and inverse Laplace transforms for multivector-valued functions.

Forward: composite Gauss-Legendre panels on [0, T] with a closed-form tail
bound choosing T.  The first panel is mapped by t = u^2 so integrands with a
t^(1/2) factor (odd dimensions) stay smooth.

Inverse: trapezoidal rule on a Talbot-type contour

    s(theta) = mu * (theta cot(theta) + i nu theta),   -pi < theta < pi,

with node doubling for the error estimate.  Transforms in this package have
all singularities in the band |Im s| <= h on or left of the imaginary axis;
``nu`` is stretched until the contour clears height h with Re s > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad_vec

from .clifford import Multivector


class TailBoundError(RuntimeError):
    pass


class InversionNotConverged(RuntimeError):
    pass


class QuadratureFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for every numerical integral and inversion in the package."""

    tol: float = 1e-10
    # forward transform
    panel_nodes: int = 20
    panel_width: float = 1.0
    max_T: float = 400.0
    growth_const: float = 1.0  # |h(t)| <= C (1 + t)^p
    growth_power: float = 3.0
    # contour inversion
    talbot_nodes: int = 48
    talbot_max_nodes: int = 8192
    talbot_mu: float = 6.0
    talbot_clearance: float = math.pi / 3
    # finite-interval quadrature (kernel integrals, convolutions)
    quad_nodes: int = 64
    quad_max_nodes: int = 4096

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.panel_nodes < 16 or self.talbot_nodes < 16:
            raise ValueError("node counts must be >= 16")
        if self.max_T <= 0 or self.panel_width <= 0:
            raise ValueError("T and panel width must be positive")

    def with_(self, **kw) -> QuadratureSpec:
        return replace(self, **kw)


DEFAULT_SPEC = QuadratureSpec()


def _as_coeffs(v):
    """Multivector -> (coeff array, m); plain arrays pass through with m=None."""
    if isinstance(v, Multivector):
        return v.coeffs, v.m
    return np.asarray(v, dtype=complex), None


def _wrap(c, m):
    return Multivector(c, m) if m is not None else (c if np.ndim(c) else complex(c))


def tail_truncation(sigma: float, spec: QuadratureSpec) -> float:
    """Smallest T with C int_T^inf (1+t)^p e^{-sigma t} dt <= tol / 4."""
    if sigma <= 0:
        raise TailBoundError("forward Laplace transform needs Re(s) > 0")
    C, p = spec.growth_const, spec.growth_power

    def bound(T):
        # integrate by parts: <= C (1+T)^p e^{-sigma T} / (sigma - p/(1+T)) when positive
        d = sigma - p / (1.0 + T)
        return math.inf if d <= 0 else C * (1.0 + T) ** p * math.exp(-sigma * T) / d

    T = 1.0
    while bound(T) > spec.tol / 4:
        T *= 1.25
        if T > spec.max_T:
            raise TailBoundError(f"tail bound needs T > {spec.max_T} at Re(s)={sigma}")
    return T


def forward_laplace(h: Callable, s: complex, spec: QuadratureSpec = DEFAULT_SPEC, omega: float = 0.0):
    """int_0^inf e^{-s t} h(t) dt.

    ``h`` maps a float array of times to a (batched) Multivector or complex
    array.  ``omega`` bounds the angular frequency of h; panels are kept to a
    quarter period of the combined oscillation.
    """
    s = complex(s)
    T = tail_truncation(s.real, spec)
    freq = abs(s.imag) + abs(omega)
    width = spec.panel_width if freq == 0 else min(spec.panel_width, 0.5 * math.pi / freq)
    edges = np.linspace(0.0, T, int(math.ceil(T / width)) + 1)
    x, w = leggauss(spec.panel_nodes)

    # graded first panel: t = u^2 on [0, edges[1]]
    a = math.sqrt(edges[1])
    u = 0.5 * a * (x + 1.0)
    t_first = u * u
    w_first = 0.5 * a * w * 2.0 * u

    lo, hi = edges[1:-1], edges[2:]
    t_rest = (0.5 * (hi - lo)[:, None] * (x[None, :] + 1.0) + lo[:, None]).ravel()
    w_rest = (0.5 * (hi - lo)[:, None] * w[None, :]).ravel()

    t = np.concatenate([t_first, t_rest])
    wt = np.concatenate([w_first, w_rest]) * np.exp(-s * t)
    vals, m = _as_coeffs(h(t))
    if vals.shape[0] != t.shape[0]:
        raise ValueError("h must return one value per time node")
    out = np.tensordot(wt, vals, axes=(0, 0))
    return _wrap(out, m)


@dataclass(frozen=True)
class TalbotContour:
    mu: float
    nu: float

    def nodes(self, n: int, t: float):
        th = -np.pi + (np.arange(n) + 0.5) * (2 * np.pi / n)
        cot = np.cos(th) / np.sin(th)
        s = self.mu * (th * cot + 1j * self.nu * th)
        ds = self.mu * (cot - th / np.sin(th) ** 2 + 1j * self.nu)
        keep = (s.real * t) > -700.0
        return s[keep], ds[keep]


def talbot_contour(t: float, band: float, spec: QuadratureSpec = DEFAULT_SPEC) -> TalbotContour:
    """Contour for singularities in |Im s| <= band, Re s <= 0, evaluated at time t."""
    mu = spec.talbot_mu / t
    nu = max(1.0, (band + 1.0) / (mu * spec.talbot_clearance))
    return TalbotContour(mu, nu)


def _talbot_sum(F, t, contour, n):
    s, ds = contour.nodes(n, t)
    vals, m = _as_coeffs(F(s))
    w = np.exp(s * t) * ds
    return np.tensordot(w, vals, axes=(0, 0)) / (1j * n), m


def inverse_laplace(
    F: Callable,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    band: float = 0.0,
    info: dict | None = None,
):
    """f(t) from its transform F by contour integration.

    ``F`` maps a complex array of s-values to a batched Multivector or complex
    array.  ``band`` bounds |Im| of the singularities of F.  Node count
    doubles from ``spec.talbot_nodes`` until two successive sums agree to
    ``spec.tol``; the finer sum is returned.
    """
    if not 0 < t <= 4:
        raise ValueError("inverse_laplace supports 0 < t <= 4")
    contour = talbot_contour(t, band, spec)
    n = spec.talbot_nodes
    prev, m = _talbot_sum(F, t, contour, n)
    while True:
        n *= 2
        cur, m = _talbot_sum(F, t, contour, n)
        diff = float(np.max(np.abs(cur - prev))) if np.size(cur) else 0.0
        scale = max(1.0, float(np.max(np.abs(cur))) if np.size(cur) else 1.0)
        if np.isfinite(diff) and diff <= spec.tol * scale:
            break
        if n >= spec.talbot_max_nodes:
            raise InversionNotConverged(
                f"contour sums with {n // 2} and {n} nodes differ by {diff:.3e}"
            )
        prev = cur
    if info is not None:
        info.update(nodes=n, estimate=diff, mu=contour.mu, nu=contour.nu)
    return _wrap(cur, m)


def gauss_legendre_adaptive(fun: Callable, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """int_a^b fun(t) dt with Gauss-Legendre node doubling until agreement."""
    n = spec.quad_nodes

    def rule(n):
        x, w = leggauss(n)
        t = 0.5 * (b - a) * (x + 1.0) + a
        vals, m = _as_coeffs(fun(t))
        return np.tensordot(0.5 * (b - a) * w, vals, axes=(0, 0)), m

    prev, m = rule(n)
    while True:
        n *= 2
        cur, m = rule(n)
        if np.max(np.abs(cur - prev)) <= spec.tol * max(1.0, np.max(np.abs(cur))):
            return _wrap(cur, m)
        if n >= spec.quad_max_nodes:
            raise QuadratureFailure(f"Gauss-Legendre did not settle by {n} nodes")
        prev = cur


@dataclass(frozen=True)
class ConvolutionCheck:
    direct: object
    via_transform: object | None
    residual: float | None


def convolve_check(
    g: Callable,
    f: Callable,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    g_laplace: Callable | None = None,
    f_laplace: Callable | None = None,
    band: float = 0.0,
) -> ConvolutionCheck:
    """int_0^t g(t - tau) f(tau) dtau, optionally against the inverse of G(s) F(s).

    ``g`` and ``f`` take a scalar time.  The product-transform route needs the
    closed-form transforms ``g_laplace``/``f_laplace`` (they are evaluated on the
    inversion contour, where the defining integral diverges).
    """

    def integrand(tau):
        gv, m1 = _as_coeffs(_mul(g(t - tau), f(tau)))
        return np.concatenate([gv.real.ravel(), gv.imag.ravel()])

    probe, m = _as_coeffs(_mul(g(t * 0.5), f(t * 0.5)))
    res, err = quad_vec(integrand, 0.0, t, epsabs=spec.tol * 0.1, epsrel=spec.tol * 0.1, limit=400)
    if err > spec.tol:
        raise QuadratureFailure(f"convolution quadrature error estimate {err:.2e}")
    k = probe.size
    direct = _wrap((res[:k] + 1j * res[k:]).reshape(probe.shape), m)
    if g_laplace is None or f_laplace is None:
        return ConvolutionCheck(direct, None, None)
    via = inverse_laplace(lambda s: _mul(g_laplace(s), f_laplace(s)), t, spec, band=band)
    d, _ = _as_coeffs(direct)
    v, _ = _as_coeffs(via)
    return ConvolutionCheck(direct, via, float(np.max(np.abs(d - v))))


def _mul(a, b):
    if isinstance(a, Multivector) or isinstance(b, Multivector):
        if not isinstance(a, Multivector):
            return b.__rmul__(a)
        return a * b
    return np.asarray(a) * np.asarray(b)
