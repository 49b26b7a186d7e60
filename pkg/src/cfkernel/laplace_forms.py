"""Closed-form s-domain building blocks of the generalised Clifford-Fourier kernel.

Every object here is the Laplace transform (in t) of t^(m/2-1) times a
kernel-type function of (t x, y).  With ``phi = (x, y)`` and
``rp = sqrt(s^2 + |x|^2 |y|^2)`` the eight forms are

    f   = (s + rp - i yx) / (rp (s + i phi)^(m/2))
    f_a = (s + rp + yx)   / (rp (rp - phi)^(m/2))
    f_b = (s + rp + i yx) / (rp (s - i phi)^(m/2))
    f_c = (s + rp - yx)   / (rp (rp + phi)^(m/2))

and ``g_* = (i y / (s + rp)) f_* x``, evaluated here from their reduced
closed forms.  (``a, b, c`` stand for alpha, beta, gamma.)

Branches: ``rp`` is taken as ``s * sqrt(1 + |x|^2|y|^2 / s^2)`` with the
principal root.  For Re s > 0 this is the principal sqrt(s^2 + z^2); it also
continues analytically to the whole plane cut along [-iz, iz], which is what
contour inversion needs.  Half-integer powers use the principal square root.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .clifford import Multivector, vector, wedge_coords
from .intpoly import IntPoly, row_A1, row_A2
from .specfun import gamma_fn

Part = Literal["f", "g"]
Tag = Literal["plain", "alpha", "beta", "gamma"]

TAGS: tuple[Tag, ...] = ("plain", "alpha", "beta", "gamma")

# rows give 4 f_k = sum_j B[k, j] C_j with C = (f, f_a, f_b, f_c)
B_MATRIX = np.array(
    [
        [1, 1, 1, 1],
        [1, -1j, -1, 1j],
        [1, -1, 1, -1],
        [1, 1j, -1, -1j],
    ]
)


class SingularContext(ArithmeticError):
    pass


@dataclass(frozen=True)
class FormVariant:
    part: Part
    tag: Tag = "plain"

    def __post_init__(self):
        if self.part not in ("f", "g") or self.tag not in TAGS:
            raise ValueError(f"unknown form variant {self.part}/{self.tag}")


@dataclass(frozen=True, eq=False)
class LaplaceContext:
    """Evaluation point (s, x, y, m); ``s`` may be an array of nodes."""

    s: complex | np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be coordinate vectors of equal length")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise ValueError("x and y must be finite")
        s = np.asarray(self.s, dtype=complex)
        if np.any(s == 0):
            raise SingularContext("s = 0")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "s", s)

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @functools.cached_property
    def phi(self) -> float:
        return float(self.x @ self.y)

    @functools.cached_property
    def z2(self) -> float:
        return float((self.x @ self.x) * (self.y @ self.y))

    @functools.cached_property
    def sqrt_plus(self) -> np.ndarray:
        s = self.s
        return s * np.sqrt(1.0 + self.z2 / (s * s))

    @functools.cached_property
    def R(self) -> np.ndarray:
        r = self.s + self.sqrt_plus
        if np.any(r == 0):
            raise SingularContext("s + sqrt(s^2 + |x|^2|y|^2) = 0")
        return r

    @functools.cached_property
    def xv(self) -> Multivector:
        return vector(self.x)

    @functools.cached_property
    def yv(self) -> Multivector:
        return vector(self.y)

    @functools.cached_property
    def yx(self) -> Multivector:
        return self.yv * self.xv

    @functools.cached_property
    def wedge(self) -> Multivector:
        return wedge_coords(self.x, self.y)

    def g_left(self) -> Multivector:
        """The left factor i y / (s + rp)."""
        return self.yv * (1j / self.R)


def half_power(w, m: int):
    """w^(m/2); principal square root for odd m."""
    w = np.asarray(w, dtype=complex)
    out = w ** (m // 2)
    if m % 2:
        out = out * np.sqrt(w)
    return out


def _den(ctx: LaplaceContext, base) -> np.ndarray:
    d = ctx.sqrt_plus * half_power(base, ctx.m)
    if np.any(d == 0):
        raise SingularContext("vanishing denominator")
    return d


def eval_form(v: FormVariant, ctx: LaplaceContext) -> Multivector:
    s, rp, R, phi, yx = ctx.s, ctx.sqrt_plus, ctx.R, ctx.phi, ctx.yx
    one = Multivector.scalar(1.0, ctx.m)
    if v.tag == "plain":
        base = s + 1j * phi
    elif v.tag == "alpha":
        base = rp - phi
    elif v.tag == "beta":
        base = s - 1j * phi
    else:
        base = rp + phi
    if v.part == "f":
        scal, c_yx = R, {"plain": -1j, "alpha": 1, "beta": 1j, "gamma": -1}[v.tag]
    else:
        scal, c_yx = {
            "plain": (rp - s, 1j),
            "alpha": (1j * (rp - s), 1j),
            "beta": (s - rp, 1j),
            "gamma": (1j * (s - rp), 1j),
        }[v.tag]
    num = one * scal + yx * c_yx
    return num / _den(ctx, base)


def eval_all(ctx: LaplaceContext, part: Part = "f") -> tuple[Multivector, ...]:
    return tuple(eval_form(FormVariant(part, t), ctx) for t in TAGS)


def g_from_f(f: Multivector, ctx: LaplaceContext) -> Multivector:
    """The defining relation g = (i y / (s + rp)) f x."""
    return ctx.g_left() * f * ctx.xv


def eval_fractional(p: float, part: Literal["F", "G"], ctx: LaplaceContext) -> Multivector:
    """One-parameter family whose p in {0, +-pi/2, pi} members are the f/g forms."""
    s, rp, phi, yx = ctx.s, ctx.sqrt_plus, ctx.phi, ctx.yx
    one = Multivector.scalar(1.0, ctx.m)
    em = np.exp(-1j * p)
    if part == "F":
        num = one * (s + rp) - yx * (1j * em)
        base = em * (s * np.cos(p) + 1j * rp * np.sin(p) + 1j * phi)
        return num / _den(ctx, base)
    if part == "G":
        ep = np.exp(1j * p)
        num = (one * (s - rp) - yx * (1j * em)) * (-ep)
        base = ep * (s * np.cos(p) - 1j * rp * np.sin(p) + 1j * phi)
        return num / _den(ctx, base)
    raise ValueError(f"part must be 'F' or 'G', not {part!r}")


FRACTIONAL_LADDER = {
    ("f", "plain"): ("F", 0.0),
    ("f", "alpha"): ("F", -np.pi / 2),
    ("f", "beta"): ("F", np.pi),
    ("f", "gamma"): ("F", np.pi / 2),
    ("g", "plain"): ("G", 0.0),
    ("g", "alpha"): ("G", np.pi / 2),
    ("g", "beta"): ("G", np.pi),
    ("g", "gamma"): ("G", -np.pi / 2),
}


def split_components(ctx: LaplaceContext) -> tuple[Multivector, ...]:
    """f_0..f_3: the parts of f built from spherical monogenics of degree = k mod 4."""
    C = eval_all(ctx, "f")
    out = []
    for k in range(4):
        acc = C[0] * (B_MATRIX[k, 0] / 4)
        for j in range(1, 4):
            acc = acc + C[j] * (B_MATRIX[k, j] / 4)
        out.append(acc)
    return tuple(out)


def kernel_laplace_eigen(G: IntPoly, ctx: LaplaceContext) -> Multivector:
    """Laplace transform of t^(m/2-1) e^{i pi/2 G(Gamma_y)} e^{-i t (x,y)}.

    Each split component f_k carries eigenvalue -k (mod 4) of Gamma_y on the
    f side and m-1+k on the y(.)x side; the phase i^G(eigenvalue) is applied
    part by part.
    """
    m = ctx.m
    fk = split_components(ctx)
    a1 = row_A1(G).values
    a2 = row_A2(G, m).values
    first = sum((fk[k] * a1[k] for k in range(1, 4)), fk[0] * a1[0])
    inner = sum((fk[k] * a2[k] for k in range(1, 4)), fk[0] * a2[0])
    second = ctx.g_left() * inner * ctx.xv
    return (first + second) * (gamma_fn(m / 2) / 2)


def assembly_weights(G: IntPoly, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Row vectors A1 B and A2 B: weights on (f, f_a, f_b, f_c)."""
    a1 = np.array(row_A1(G).values)
    a2 = np.array(row_A2(G, m).values)
    return a1 @ B_MATRIX, a2 @ B_MATRIX


def kernel_laplace_th5(G: IntPoly, ctx: LaplaceContext) -> Multivector:
    """Same kernel assembled as Gamma(m/2)/8 (A1 B C^T + (iy/(s+rp)) A2 B C^T x)."""
    w1, w2 = assembly_weights(G, ctx.m)
    C = eval_all(ctx, "f")
    t1 = sum((C[j] * w1[j] for j in range(1, 4)), C[0] * w1[0])
    t2 = sum((C[j] * w2[j] for j in range(1, 4)), C[0] * w2[0])
    return (t1 + ctx.g_left() * t2 * ctx.xv) * (gamma_fn(ctx.m / 2) / 8)


def printed_U(ctx: LaplaceContext) -> tuple[Multivector, ...]:
    """U^1..U^4 exactly as displayed with the x^2-kernel in the s-domain."""
    s, rp, phi, yx, m = ctx.s, ctx.sqrt_plus, ctx.phi, ctx.yx, ctx.m
    one = Multivector.scalar(1.0, m)
    sg = (-1) ** (m - 1)
    u1 = (one * (s + rp) - yx * 1j) / half_power(s + 1j * phi, m)
    u2 = (one * (s + rp) + yx * 1j) / half_power(s - 1j * phi, m)
    u3 = (one * (sg * (rp - s)) + yx * 1j) / half_power(s + sg * 1j * phi, m)
    u4 = (one * (sg * (s - rp)) + yx * 1j) / half_power(s - sg * 1j * phi, m)
    return u1, u2, u3, u4


def kernel_laplace_th2_printed(ctx: LaplaceContext) -> Multivector:
    """The displayed s-domain x^2-kernel, evaluated verbatim (audit only)."""
    m = ctx.m
    u1, u2, u3, u4 = printed_U(ctx)
    ph = np.exp(0.5j * np.pi * (m - 1) ** 2)
    tot = u1 * (1 + 1j) + u2 * (1 - 1j) + (u3 * (1 + 1j) + u4 * (1 - 1j)) * ph
    return tot * (gamma_fn(m / 2) / 4) / ctx.sqrt_plus


def kernel_laplace_m2_display(ctx: LaplaceContext) -> Multivector:
    """The displayed m = 2 reduction of the x^2-kernel, verbatim (audit only)."""
    if ctx.m != 2:
        raise ValueError("m = 2 display only")
    s, rp, phi, yx = ctx.s, ctx.sqrt_plus, ctx.phi, ctx.yx
    one = Multivector.scalar(1.0, 2)
    t1 = one * (rp / (s - 1j * phi))
    t2 = (one * s - yx * 1j) / (s + 1j * phi)
    return (t1 + t2) / (2 * rp)


def plane_wave_laplace(ctx: LaplaceContext, sign: int = -1) -> np.ndarray:
    """Gamma(m/2) / (s - sign i phi)^(m/2): transform of t^(m/2-1) e^{sign i t phi}."""
    return gamma_fn(ctx.m / 2) / half_power(ctx.s - sign * 1j * ctx.phi, ctx.m)
