"""Numeric arithmetic in the complexified Clifford algebra Cl(0, m), 2 <= m <= 8.

Blades are bitmasks over the generators (bit ``i-1`` set means ``e_i`` is a
factor, factors in ascending order).  A :class:`Multivector` stores one complex
coefficient per blade in the last axis of a numpy array, so a single object can
hold a whole batch of multivectors (e.g. one per contour node); every operation
broadcasts over the leading axes.

The complex unit lives in the scalar field and commutes with every blade.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

MAX_DIM = 8


class DimensionMismatch(ValueError):
    pass


def _check_dim(m: int) -> None:
    if not 1 <= m <= MAX_DIM:
        raise ValueError(f"dimension m={m} outside supported range 1..{MAX_DIM}")


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def blade_sign(a: int, b: int) -> int:
    """Sign of e_a e_b = sign * e_(a xor b) in Cl(0, m)."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += grade_of(x & b)
        x >>= 1
    # each shared generator squares to -1
    swaps += grade_of(a & b)
    return -1 if swaps & 1 else 1


@functools.lru_cache(maxsize=None)
def _product_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    # out[c] = sum_a u[a] * S[a, c] * v[a ^ c]
    n = 1 << m
    a = np.arange(n)[:, None]
    c = np.arange(n)[None, :]
    perm = a ^ c
    signs = np.empty((n, n), dtype=float)
    for i in range(n):
        for j in range(n):
            signs[i, j] = blade_sign(i, i ^ j)
    perm.setflags(write=False)
    signs.setflags(write=False)
    return perm, signs


@functools.lru_cache(maxsize=None)
def _conjugation_signs(m: int) -> np.ndarray:
    # e_{j1}..e_{jl} -> (-1)^l e_{jl}..e_{j1} = (-1)^l (-1)^{l(l-1)/2} e_{j1}..e_{jl}
    g = np.array([grade_of(k) for k in range(1 << m)])
    s = np.where(((g + g * (g - 1) // 2) % 2) == 1, -1.0, 1.0)
    s.setflags(write=False)
    return s


@functools.lru_cache(maxsize=None)
def _grades(m: int) -> np.ndarray:
    g = np.array([grade_of(k) for k in range(1 << m)])
    g.setflags(write=False)
    return g


def blade_label(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIM) if mask >> i & 1)


def parse_blade_label(label: str) -> int:
    label = label.strip()
    if label == "1":
        return 0
    if not label.startswith("e") or not label[1:].isdigit():
        raise ValueError(f"bad blade label {label!r}")
    mask = 0
    prev = 0
    for ch in label[1:]:
        i = int(ch)
        if i <= prev:
            raise ValueError(f"blade label {label!r} not in ascending order")
        mask |= 1 << (i - 1)
        prev = i
    return mask


@dataclass(frozen=True, eq=False)
class Multivector:
    """Element (or batch of elements) of the complexified Cl(0, m).

    ``coeffs`` has shape ``batch + (2**m,)``; the last axis is indexed by
    blade bitmask.
    """

    coeffs: np.ndarray
    m: int

    # keep numpy from broadcasting over a Multivector as an object
    __array_ufunc__ = None

    def __post_init__(self):
        _check_dim(self.m)
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape[-1:] != (1 << self.m,):
            raise ValueError(f"coefficient array of shape {c.shape} does not fit m={self.m}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, m: int, batch: tuple[int, ...] = ()) -> Multivector:
        return cls(np.zeros(batch + (1 << m,), dtype=complex), m)

    @classmethod
    def scalar(cls, value, m: int) -> Multivector:
        value = np.asarray(value, dtype=complex)
        c = np.zeros(value.shape + (1 << m,), dtype=complex)
        c[..., 0] = value
        return cls(c, m)

    @classmethod
    def blade(cls, mask: int, m: int, value=1.0) -> Multivector:
        if mask >> m:
            raise ValueError(f"blade {blade_label(mask)} does not exist for m={m}")
        value = np.asarray(value, dtype=complex)
        c = np.zeros(value.shape + (1 << m,), dtype=complex)
        c[..., mask] = value
        return cls(c, m)

    @classmethod
    def from_dict(cls, terms: dict[str, complex], m: int) -> Multivector:
        c = np.zeros(1 << m, dtype=complex)
        for label, v in terms.items():
            k = parse_blade_label(label)
            if k >> m:
                raise ValueError(f"blade {label} does not exist for m={m}")
            c[k] += v
        return cls(c, m)

    # basic accessors --------------------------------------------------

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    def __getitem__(self, label: str):
        return self.coeffs[..., parse_blade_label(label)]

    def take(self, index) -> Multivector:
        """Select from the batch axes."""
        return Multivector(self.coeffs[index], self.m)

    def scalar_part(self):
        return self.coeffs[..., 0]

    def grade(self, k: int) -> Multivector:
        keep = _grades(self.m) == k
        return Multivector(np.where(keep, self.coeffs, 0), self.m)

    def terms(self, tol: float = 0.0) -> dict[str, complex]:
        if self.batch_shape:
            raise ValueError("terms() needs an unbatched multivector")
        return {
            blade_label(k): complex(v)
            for k, v in enumerate(self.coeffs)
            if abs(v) > tol
        }

    def __repr__(self):
        if self.batch_shape:
            return f"Multivector(m={self.m}, batch={self.batch_shape})"
        parts = [f"({v.real:.6g}{v.imag:+.6g}j)*{k}" for k, v in self.terms(1e-15).items()]
        return " + ".join(parts) if parts else "0"

    # arithmetic -------------------------------------------------------

    def _same_dim(self, other: Multivector) -> None:
        if other.m != self.m:
            raise DimensionMismatch(f"m={self.m} vs m={other.m}")

    def __add__(self, other):
        if isinstance(other, Multivector):
            self._same_dim(other)
            return Multivector(self.coeffs + other.coeffs, self.m)
        return self + Multivector.scalar(other, self.m)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(-self.coeffs, self.m)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        other = np.asarray(other)
        return Multivector(self.coeffs * other[..., None], self.m)

    def __rmul__(self, other):
        # scalars commute with every blade
        other = np.asarray(other)
        return Multivector(self.coeffs * other[..., None], self.m)

    def __truediv__(self, other):
        if isinstance(other, Multivector):
            raise TypeError("division by a multivector is not supported")
        other = np.asarray(other)
        return Multivector(self.coeffs / other[..., None], self.m)

    def conjugate(self) -> Multivector:
        return conjugate(self)

    def norm(self):
        return norm(self)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other, self.m)
        self._same_dim(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))


def geometric_product(u: Multivector, v: Multivector) -> Multivector:
    if u.m != v.m:
        raise DimensionMismatch(f"m={u.m} vs m={v.m}")
    perm, signs = _product_tables(u.m)
    vp = v.coeffs[..., perm]
    out = np.einsum("...a,ac,...ac->...c", u.coeffs, signs, vp)
    return Multivector(out, u.m)


def conjugate(u: Multivector) -> Multivector:
    """Clifford conjugation; an anti-automorphism that fixes the complex unit."""
    return Multivector(u.coeffs * _conjugation_signs(u.m), u.m)


def norm(u: Multivector):
    """Coefficient 2-norm (over the last axis)."""
    return np.sqrt(np.sum(np.abs(u.coeffs) ** 2, axis=-1))


def vector(coords) -> Multivector:
    """Embed coordinates ``(..., m)`` as the grade-1 element sum_j e_j x_j."""
    coords = np.asarray(coords)
    m = coords.shape[-1]
    _check_dim(m)
    c = np.zeros(coords.shape[:-1] + (1 << m,), dtype=complex)
    for j in range(m):
        c[..., 1 << j] = coords[..., j]
    return Multivector(c, m)


def _as_vector(x) -> Multivector:
    if isinstance(x, Multivector):
        off = x.coeffs * (_grades(x.m) != 1)
        if np.any(off != 0):
            raise ValueError("expected a grade-1 multivector")
        return x
    return vector(x)


def vector_norm(x):
    """|x| from the scalar x * conj(x); only meaningful for grade-1 input."""
    xv = _as_vector(x)
    sq = geometric_product(xv, conjugate(xv)).scalar_part()
    return np.sqrt(sq.real) if np.all(np.abs(sq.imag) < 1e-14) else np.sqrt(sq)


def inner(x, y):
    """(x, y) = -(xy + yx)/2, returned as a complex scalar (array)."""
    xv, yv = _as_vector(x), _as_vector(y)
    if xv.m != yv.m:
        raise DimensionMismatch(f"m={xv.m} vs m={yv.m}")
    return -0.5 * (xv * yv + yv * xv).scalar_part()


def wedge(x, y) -> Multivector:
    """x ^ y = (xy - yx)/2, a bivector."""
    xv, yv = _as_vector(x), _as_vector(y)
    if xv.m != yv.m:
        raise DimensionMismatch(f"m={xv.m} vs m={yv.m}")
    return 0.5 * (xv * yv - yv * xv)


def wedge_coords(x, y) -> Multivector:
    """Bivector sum_{j<k} e_j e_k (x_j y_k - x_k y_j) from coordinates."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"m={x.shape[-1]} vs m={y.shape[-1]}")
    m = x.shape[-1]
    batch = np.broadcast_shapes(x.shape[:-1], y.shape[:-1])
    c = np.zeros(batch + (1 << m,), dtype=complex)
    for j in range(m):
        for k in range(j + 1, m):
            c[..., (1 << j) | (1 << k)] = x[..., j] * y[..., k] - x[..., k] * y[..., j]
    return Multivector(c, m)


def wedge_square_check(x, y):
    """(x ^ y)^2 by blade multiplication; the result must be a scalar."""
    w = wedge(x, y)
    sq = w * w
    rest = sq.coeffs[..., 1:]
    if np.any(np.abs(rest) > 1e-9 * (1 + np.abs(sq.coeffs[..., :1]))):
        raise ArithmeticError("square of x^y has non-scalar part")
    return sq.scalar_part()


def exp_unit_bivector(B: Multivector, angle, tol: float = 1e-12) -> Multivector:
    """cos(angle) + B sin(angle) for B with B^2 = -1 (angle may be an array)."""
    sq = B * B
    if not np.allclose((sq + 1.0).coeffs, 0.0, atol=tol):
        raise ValueError("exp_unit_bivector needs B*B == -1")
    angle = np.asarray(angle, dtype=float)
    return np.cos(angle) * Multivector.scalar(1.0, B.m) + B * np.sin(angle)
