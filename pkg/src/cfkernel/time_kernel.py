"""Time-domain kernel K_{m,G}(x, y) = e^{i pi/2 G(Gamma_y)} e^{-i(x,y)} by several routes.

Routes (the tag stored on every :class:`KernelSample`):

* ``oracle2d``             exact eigen-decomposition, m = 2 only
* ``closed-form``          bounded-family formula (even m)
* ``quadrature``           Bessel-convolution integrals for G = x^2, even m >= 4
* ``generating-function``  coefficient extraction from H(x, y, a, G), even m
* ``talbot``               contour inversion of the s-domain kernel at t = 1

Batched inputs: ``x`` and ``y`` are coordinate arrays of shape (..., m).
"""
from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import Multivector, blade_label, wedge_coords
from .intpoly import IntPoly, ROOTS, is_bounded_family, residue_mod4
from .laplace_forms import (
    FormVariant,
    LaplaceContext,
    eval_form,
    kernel_laplace_eigen,
)
from .numlaplace import (
    DEFAULT_SPEC,
    QuadratureSpec,
    gauss_legendre_adaptive,
    inverse_laplace,
)
from .oracle2d import oracle_kernel
from .specfun import MAX_ARG, bessel_j, gamma_fn

ROUTES = ("oracle2d", "closed-form", "quadrature", "generating-function", "talbot")
SINC_SERIES_BELOW = 1e-4
GEN_RADIUS = 1.0
GEN_NODES = 256
MAX_GEN_DIM = 12


class UnsupportedRoute(ValueError):
    pass


class NotBoundedFamily(ValueError):
    pass


class ExtractionNotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class KernelSample:
    """Kernel values at one or more (x, y) pairs plus the route that produced them."""

    x: np.ndarray
    y: np.ndarray
    m: int
    G: IntPoly
    value: Multivector
    route: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route tag {self.route!r}")

    def rows(self, tol: float = 0.0):
        """(x coords, y coords, blade label, re, im, route) per nonzero blade per point."""
        X = np.asarray(self.x, dtype=float).reshape(-1, self.m)
        Y = np.asarray(self.y, dtype=float).reshape(-1, self.m)
        C = self.value.coeffs.reshape(-1, 1 << self.m)
        for p in range(C.shape[0]):
            for mask in range(1 << self.m):
                c = C[p, mask]
                if mask and abs(c) <= tol:
                    continue
                yield (*X[p], *Y[p], blade_label(mask), float(c.real), float(c.imag), self.route)


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def samples_to_csv(samples, tol: float = 0.0) -> str:
    samples = list(samples)
    if not samples:
        return ""
    m = samples[0].m
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{j + 1}" for j in range(m)] + [f"y{j + 1}" for j in range(m)] + ["blade", "re", "im", "route"])
    for smp in samples:
        for row in smp.rows(tol):
            w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def samples_to_json(samples, tol: float = 0.0) -> str:
    out = []
    for smp in samples:
        X = np.asarray(smp.x, dtype=float).reshape(-1, smp.m)
        Y = np.asarray(smp.y, dtype=float).reshape(-1, smp.m)
        C = smp.value.coeffs.reshape(-1, 1 << smp.m)
        for p in range(C.shape[0]):
            terms = {
                blade_label(k): [float(C[p, k].real), float(C[p, k].imag)]
                for k in range(1 << smp.m)
                if k == 0 or abs(C[p, k]) > tol
            }
            out.append(
                {"x": X[p].tolist(), "y": Y[p].tolist(), "m": smp.m, "G": smp.G.compact(), "route": smp.route, "value": terms}
            )
    return json.dumps(out, indent=1, sort_keys=True)


# --------------------------------------------------------------------------- geometry


def _geometry(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError("x and y must have the same dimension")
    x, y = np.broadcast_arrays(x, y)
    phi = np.einsum("...j,...j->...", x, y)
    z = np.sqrt(np.einsum("...j,...j->...", x, x) * np.einsum("...j,...j->...", y, y))
    if z.size and z.max() > MAX_ARG:
        raise ValueError(f"|x||y| must not exceed {MAX_ARG}")
    return x, y, phi, z, wedge_coords(x, y)


def _scalar_mv(c, m):
    c = np.asarray(c, dtype=complex)
    out = np.zeros(c.shape + (1 << m,), dtype=complex)
    out[..., 0] = c
    return Multivector(out, m)


def plane_wave(x, y, sign: int = -1) -> Multivector:
    """e^{sign i (x,y)} as a scalar multivector."""
    x, y, phi, _, _ = _geometry(x, y)
    return _scalar_mv(np.exp(sign * 1j * phi), x.shape[-1])


# --------------------------------------------------------------------------- G = x^2 time forms

# (eps, a, b, w) per j; sigma = (-1)^(m-1) multiplies the entries marked 's'
_KU_TABLE = {
    1: (1, 1, 1, 1),
    2: (-1, 1, 1, -1),
    3: ("s", "s", "-s", -1),
    4: ("-s", "-s", "s", -1),
}


def _ku_coeffs(j: int, m: int):
    sg = (-1) ** (m - 1)

    def val(v):
        if v == "s":
            return sg
        if v == "-s":
            return -sg
        return v

    return tuple(val(v) for v in _KU_TABLE[j])


def _conv_integral(power: float, eps_phi, z, spec: QuadratureSpec):
    """int_0^1 tau^power e^{-i eps_phi tau} J_0(z (1 - tau)) dtau, batched over eps_phi, z."""
    ep = np.asarray(eps_phi, dtype=float)
    zz = np.asarray(z, dtype=float)

    def fun(t):
        tt = t.reshape((-1,) + (1,) * ep.ndim)
        return tt**power * np.exp(-1j * ep * tt) * bessel_j(0, zz * (1.0 - tt))

    return gauss_legendre_adaptive(fun, 0.0, 1.0, spec)


def kernel_KU(j: int, m: int, x, y, spec: QuadratureSpec = DEFAULT_SPEC, printed: bool = False) -> Multivector:
    """Time-domain counterpart of U^j_m / sqrt(+).

    Default: the form whose t-scaled Laplace transform is exactly U^j/sqrt(+)
    (the bivector integral carries tau^(m/2-1) e^{-i eps (x,y) tau}).  With
    ``printed=True`` the bivector integral uses the constant exponential and
    no power of tau, as in the displayed formula.
    """
    if j not in _KU_TABLE:
        raise ValueError("j must be 1, 2, 3 or 4")
    if m % 2 or m < 4:
        raise UnsupportedRoute("K_U forms need even m >= 4")
    x, y, phi, z, wedge = _geometry(x, y)
    if x.shape[-1] != m:
        raise ValueError(f"points have dimension {x.shape[-1]}, not m={m}")
    eps, a, b, w = _ku_coeffs(j, m)
    g = gamma_fn(m / 2)
    first = a * np.exp(-1j * eps * phi) / g
    second = b * _conv_integral(m / 2 - 2, eps * phi, z, spec) / gamma_fn(m / 2 - 1)
    if printed:
        third = np.exp(-1j * eps * phi) * _conv_integral(0.0, np.zeros_like(phi), z, spec)
    else:
        third = _conv_integral(m / 2 - 1, eps * phi, z, spec)
    return _scalar_mv(first + second, m) + wedge * (1j * w * third / g)


def kernel_x2_quadrature(m: int, x, y, spec: QuadratureSpec = DEFAULT_SPEC, printed: bool = False) -> Multivector:
    """G = x^2 kernel as Gamma(m/2)/4 ((1+i)K1 + (1-i)K2 + e^{i pi/2 (m-1)^2}((1+i)K3 + (1-i)K4))."""
    k = [kernel_KU(j, m, x, y, spec, printed) for j in (1, 2, 3, 4)]
    ph = ROOTS[((m - 1) ** 2) % 4]
    tot = k[0] * (1 + 1j) + k[1] * (1 - 1j) + (k[2] * (1 + 1j) + k[3] * (1 - 1j)) * ph
    return tot * (gamma_fn(m / 2) / 4)


def kernel_m2_gamma2_printed(x, y, spec: QuadratureSpec = DEFAULT_SPEC) -> Multivector:
    """The displayed m = 2 time-domain G = x^2 kernel, verbatim (audit only)."""
    x, y, phi, z, wedge = _geometry(x, y)
    if x.shape[-1] != 2:
        raise ValueError("m = 2 only")
    ep = np.asarray(phi, dtype=float)
    zz = np.asarray(z, dtype=float)

    def fun(t):
        tt = t.reshape((-1,) + (1,) * ep.ndim)
        return np.exp(-1j * ep * (1.0 - tt)) * bessel_j(0, zz * tt)

    integral = gauss_legendre_adaptive(fun, 0.0, 1.0, spec)
    return _scalar_mv(np.exp(1j * phi) + bessel_j(0, z), 2) + wedge * (1j * integral)


@dataclass(frozen=True)
class PrintedAudit:
    label: str
    m: int
    printed: complex
    reference: complex
    residual: float
    residual_half: float | None = None


def audit_m2_gamma2(x, y, spec: QuadratureSpec = DEFAULT_SPEC) -> PrintedAudit:
    """Printed m = 2 display vs the oracle, with and without an overall 1/2."""
    pr = kernel_m2_gamma2_printed(x, y, spec)
    ref = oracle_kernel(IntPoly((0, 0, 1)), x, y)
    return PrintedAudit(
        label="K_2,x^2 time domain",
        m=2,
        printed=complex(pr.coeffs[..., 0]),
        reference=complex(ref.coeffs[..., 0]),
        residual=float((pr - ref).norm()),
        residual_half=float((pr * 0.5 - ref).norm()),
    )


# --------------------------------------------------------------------------- bounded family


def bounded_coefficients(G: IntPoly) -> tuple[complex, complex]:
    """(c_plus, c_minus) = ((i^G(0) + i^G(1))/2, (i^G(0) - i^G(1))/2)."""
    p0 = ROOTS[residue_mod4(G, 0)]
    p1 = ROOTS[residue_mod4(G, 1)]
    return (p0 + p1) / 2, (p0 - p1) / 2


def kernel_pi_odd(m: int, x, y, spec: QuadratureSpec = DEFAULT_SPEC) -> Multivector:
    """K^pi for odd m: inverse transform of Gamma(m/2)/2 (f_b + g_b) at t = 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    batch = x.shape[:-1]
    X = x.reshape(-1, m)
    Y = y.reshape(-1, m)
    out = np.zeros((X.shape[0], 1 << m), dtype=complex)
    fb, gb = FormVariant("f", "beta"), FormVariant("g", "beta")
    sg = (-1) ** (m - 1)
    g = gamma_fn(m / 2)
    for p in range(X.shape[0]):
        band = float(np.linalg.norm(X[p]) * np.linalg.norm(Y[p]))

        def F(s, xp=X[p], yp=Y[p]):
            ctx = LaplaceContext(s, xp, yp)
            return (eval_form(fb, ctx) + eval_form(gb, ctx) * sg) * (g / 2)

        out[p] = inverse_laplace(F, 1.0, spec, band=band).coeffs
    return Multivector(out.reshape(batch + (1 << m,)), m)


def kernel_bounded_family(G: IntPoly, m: int, x, y, spec: QuadratureSpec = DEFAULT_SPEC) -> Multivector:
    """c_plus e^{-i(x,y)} + c_minus K^pi, with K^pi = e^{i(x,y)} for even m."""
    if not is_bounded_family(G):
        raise NotBoundedFamily(f"G = {G} is outside the bounded family")
    cp, cm = bounded_coefficients(G)
    first = plane_wave(x, y, -1) * cp
    if cm == 0:
        return first
    kpi = plane_wave(x, y, +1) if m % 2 == 0 else kernel_pi_odd(m, x, y, spec)
    return first + kpi * cm


# --------------------------------------------------------------------------- generating function


def _cos_sqrt(w):
    return np.cos(np.sqrt(w.astype(complex)))


def _sinc_sqrt(w):
    """sin(sqrt w)/sqrt w, entire in w; series for small |w|."""
    w = w.astype(complex)
    r = np.sqrt(w)
    small = np.abs(r) < SINC_SERIES_BELOW
    safe = np.where(small, 1.0, r)
    return np.where(small, 1.0 - w / 6.0 + w * w / 120.0, np.sin(safe) / safe)


@dataclass(frozen=True)
class GeneratingWeights:
    """The four printed coefficients for G with its constant term removed."""

    c_plus_shift: complex  # multiplies the ((x,y) + a) term
    c_minus_shift: complex  # multiplies the ((x,y) - a) term
    c_minus_wave: complex  # multiplies e^{a - i(x,y)}
    c_plus_wave: complex  # multiplies e^{a + i(x,y)}


def generating_weights(G: IntPoly) -> GeneratingWeights:
    gm1 = residue_mod4(G, -1)
    g1 = residue_mod4(G, 1)
    d0 = -1 if G.coefficient(1) % 2 else 1  # (-1)^{G'(0)}
    im1, ip1 = ROOTS[gm1], ROOTS[g1]
    im1s, ip1s = ROOTS[(gm1 + 1) % 4], ROOTS[(g1 + 1) % 4]
    return GeneratingWeights(
        c_plus_shift=(1 - im1s - d0 + ip1s) / 2,
        c_minus_shift=(1 + im1s - d0 - ip1s) / 2,
        c_minus_wave=(1 + im1 + d0 + ip1) / 2,
        c_plus_wave=(1 - im1 + d0 - ip1) / 2,
    )


def _generating_parts(phi, z, a, G: IntPoly):
    """H = A + B (x wedge y): returns (A, B) broadcast over points and a-nodes."""
    wts = generating_weights(G)
    phi = np.asarray(phi, dtype=float)[..., None]
    z2 = (np.asarray(z, dtype=float) ** 2)[..., None]
    wp = z2 - (phi + a) ** 2
    wm = z2 - (phi - a) ** 2
    sp, sm = _sinc_sqrt(wp), _sinc_sqrt(wm)
    A = (
        wts.c_plus_shift * (_cos_sqrt(wp) + a * sp)
        + wts.c_minus_shift * (_cos_sqrt(wm) + a * sm)
        + wts.c_minus_wave * np.exp(a - 1j * phi)
        + wts.c_plus_wave * np.exp(a + 1j * phi)
    )
    B = -wts.c_plus_shift * sp + wts.c_minus_shift * sm
    return A, B


def generating_H(x, y, a, G: IntPoly) -> Multivector:
    """H(x, y, a, G) as printed, for G with zero constant term.

    Batched over points (leading axes of x, y) and over ``a`` (a trailing axis
    is appended).  A nonzero constant term of G is rejected here; see
    :func:`kernel_from_generating` for how it is handled.
    """
    if G.coefficient(0) % 4:
        raise ValueError("generating_H expects G(0) = 0 mod 4")
    x, y, phi, z, wedge = _geometry(x, y)
    m = x.shape[-1]
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    A, B = _generating_parts(phi, z, a, G)
    out = wedge.coeffs[..., None, :] * B[..., None]
    out[..., 0] += A
    return Multivector(out, m)


def _extract(phi, z, G, n, nodes, rho):
    th = 2 * np.pi * np.arange(nodes) / nodes
    a = rho * np.exp(1j * th)
    A, B = _generating_parts(phi, z, a, G)
    w = a ** (-n) / nodes
    return A @ w, B @ w


@functools.lru_cache(maxsize=1)
def generating_kappa() -> float:
    """Normalisation of H fixed once at G = 0, m = 2 against e^{-i(x,y)}."""
    x = np.array([0.6, -0.3])
    y = np.array([0.4, 0.9])
    phi = float(x @ y)
    z = float(np.linalg.norm(x) * np.linalg.norm(y))
    A, _ = _extract(np.array(phi), np.array(z), IntPoly(()), 0, GEN_NODES, GEN_RADIUS)
    return float((A / np.exp(-1j * phi)).real)


def kernel_from_generating(
    G: IntPoly,
    m: int,
    x,
    y,
    spec: QuadratureSpec = DEFAULT_SPEC,
    nodes: int = GEN_NODES,
    rho: float = GEN_RADIUS,
    info: dict | None = None,
) -> Multivector:
    """Gamma(m/2) [a^{m/2-1}] H / kappa by trapezoidal contour integration on |a| = rho.

    The constant term a_0 of G only contributes the global factor i^{a_0}; H
    is evaluated for G - a_0.
    """
    if m % 2 or not 2 <= m <= MAX_GEN_DIM:
        raise UnsupportedRoute(f"generating-function route needs even 2 <= m <= {MAX_GEN_DIM}")
    x, y, phi, z, wedge = _geometry(x, y)
    if x.shape[-1] != m:
        raise ValueError(f"points have dimension {x.shape[-1]}, not m={m}")
    a0 = G.coefficient(0)
    Gs = G.without_constant()
    n = m // 2 - 1
    A1, B1 = _extract(phi, z, Gs, n, nodes, rho)
    A2, B2 = _extract(phi, z, Gs, n, 2 * nodes, rho)
    scale = gamma_fn(m / 2) / generating_kappa() * ROOTS[a0 % 4]
    diff = max(np.max(np.abs(A2 - A1), initial=0.0), np.max(np.abs(B2 - B1), initial=0.0)) * abs(scale)
    if info is not None:
        info.update(nodes=2 * nodes, estimate=float(diff), kappa=generating_kappa())
    if not diff <= spec.tol * max(1.0, float(np.max(np.abs(A2), initial=0.0)) * abs(scale)):
        raise ExtractionNotConverged(f"coefficient extraction changed by {diff:.2e} under node doubling")
    out = wedge.coeffs * (B2 * scale)[..., None]
    out[..., 0] += A2 * scale
    return Multivector(out, m)


# --------------------------------------------------------------------------- talbot route


def kernel_talbot(G: IntPoly, m: int, x, y, spec: QuadratureSpec = DEFAULT_SPEC, info: dict | None = None) -> Multivector:
    """Contour inversion of the eigen-assembled s-domain kernel at t = 1, point by point."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    if x.shape[-1] != m:
        raise ValueError(f"points have dimension {x.shape[-1]}, not m={m}")
    batch = x.shape[:-1]
    X = x.reshape(-1, m)
    Y = y.reshape(-1, m)
    out = np.zeros((X.shape[0], 1 << m), dtype=complex)
    worst = 0.0
    for p in range(X.shape[0]):
        band = float(np.linalg.norm(X[p]) * np.linalg.norm(Y[p]))
        if band > MAX_ARG:
            raise ValueError(f"|x||y| must not exceed {MAX_ARG}")
        loc: dict = {}

        def F(s, xp=X[p], yp=Y[p]):
            return kernel_laplace_eigen(G, LaplaceContext(s, xp, yp))

        out[p] = inverse_laplace(F, 1.0, spec, band=band, info=loc).coeffs
        worst = max(worst, loc.get("estimate", 0.0))
    if info is not None:
        info.update(estimate=worst)
    return Multivector(out.reshape(batch + (1 << m,)), m)


# --------------------------------------------------------------------------- dispatcher


def available_routes(G: IntPoly, m: int) -> tuple[str, ...]:
    r = []
    if m == 2:
        r.append("oracle2d")
    if is_bounded_family(G):
        r.append("closed-form")
    if m % 2 == 0 and m >= 4 and residue_table(G) == residue_table(IntPoly((0, 0, 1))):
        r.append("quadrature")
    if m % 2 == 0 and m <= MAX_GEN_DIM:
        r.append("generating-function")
    r.append("talbot")
    return tuple(r)


def residue_table(G: IntPoly) -> tuple[int, int, int, int]:
    return tuple(residue_mod4(G, k) for k in range(4))


def auto_route(G: IntPoly, m: int) -> str:
    if m == 2:
        return "oracle2d"
    if is_bounded_family(G):
        return "closed-form"
    if m % 2 == 0 and m <= MAX_GEN_DIM:
        return "generating-function"
    return "talbot"


def kernel_general(
    G: IntPoly,
    m: int,
    x,
    y,
    spec: QuadratureSpec = DEFAULT_SPEC,
    route: str = "auto",
) -> KernelSample:
    """Evaluate K_{m,G} at (x, y) by the automatic or a forced route."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if route == "auto":
        route = auto_route(G, m)
    elif route not in ROUTES:
        raise UnsupportedRoute(f"unknown route {route!r}")
    if route not in available_routes(G, m):
        raise UnsupportedRoute(f"route {route!r} is not available for G={G}, m={m}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _geometry(x, y)  # same |x||y| bound for every route
    meta: dict = {}
    if route == "oracle2d":
        val = oracle_kernel(G, x, y, tol=min(spec.tol, 1e-12))
    elif route == "closed-form":
        val = kernel_bounded_family(G, m, x, y, spec)
    elif route == "quadrature":
        val = kernel_x2_quadrature(m, x, y, spec)
    elif route == "generating-function":
        try:
            val = kernel_from_generating(G, m, x, y, spec, info=meta)
        except ExtractionNotConverged as exc:
            meta["fallback"] = str(exc)
            route = "talbot"
            val = kernel_talbot(G, m, x, y, spec, info=meta)
    else:
        val = kernel_talbot(G, m, x, y, spec, info=meta)
    return KernelSample(x=x, y=y, m=m, G=G, value=val, route=route, meta=meta)


def cross_route(G: IntPoly, m: int, used: str) -> str | None:
    """An independent second route for strict mode, or None."""
    for r in available_routes(G, m):
        if r != used:
            return r
    return None


# --------------------------------------------------------------------------- bounds


@dataclass(frozen=True)
class BoundReport:
    G: str
    m: int
    q: float
    n: int
    max_ratio: float
    median_ratio: float
    top_decile_median: float
    top_decile_max: float
    slope: float
    route: str

    @property
    def passed(self) -> bool:
        """No growth: the typical ratio among the largest 10% of |x||y| stays within 1.1x the overall median."""
        return self.top_decile_median <= 1.1 * self.median_ratio


def _random_pairs(rng, n, m, zmax):
    z = rng.uniform(0.0, zmax, n)
    dx = rng.normal(size=(n, m))
    dy = rng.normal(size=(n, m))
    dx /= np.linalg.norm(dx, axis=1, keepdims=True)
    dy /= np.linalg.norm(dy, axis=1, keepdims=True)
    r = np.sqrt(z)[:, None]
    return dx * r, dy * r, z


def bound_audit(
    G: IntPoly,
    m: int,
    q: float | None = None,
    n: int = 400,
    zmax: float = 50.0,
    seed: int = 0,
    spec: QuadratureSpec = DEFAULT_SPEC,
    route: str = "auto",
) -> BoundReport:
    """Sample |K| / (1 + |x||y|)^q for |x||y| uniform on [0, zmax].

    ``q`` defaults to (m - 2)/2.  The slope is the least-squares trend of the
    ratio against |x||y|.
    """
    if q is None:
        q = (m - 2) / 2
    rng = np.random.default_rng(seed)
    x, y, z = _random_pairs(rng, n, m, zmax)
    smp = kernel_general(G, m, x, y, spec, route)
    ratio = np.asarray(smp.value.norm()) / (1.0 + z) ** q
    top = z >= np.quantile(z, 0.9)
    slope = float(np.polyfit(z, ratio, 1)[0])
    return BoundReport(
        G=str(G),
        m=m,
        q=float(q),
        n=n,
        max_ratio=float(ratio.max()),
        median_ratio=float(np.median(ratio)),
        top_decile_median=float(np.median(ratio[top])),
        top_decile_max=float(ratio[top].max()),
        slope=slope,
        route=smp.route,
    )
