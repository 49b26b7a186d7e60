"""Bessel J_n of integer order, the Gamma function and Laguerre polynomials.

J_n uses the ascending power series for z <= 2 and Miller's backward
recurrence, normalised by J_0 + 2 sum_k J_2k = 1, elsewhere (the series loses
about three digits to cancellation by z ~ 12, the recurrence does not).  No asymptotic
expansions: requests outside ``n <= 200``, ``0 <= z <= 100`` raise.
"""
from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 200
MAX_ARG = 100.0
SERIES_MAX_ARG = 2.0

_RESCALE_AT = 1e250
_RESCALE_BY = 1e-250


class SpecialFunctionRangeError(ValueError):
    pass


def _check_bessel_args(n: int, z: np.ndarray) -> None:
    if not (0 <= n <= MAX_ORDER) or int(n) != n:
        raise SpecialFunctionRangeError(f"Bessel order {n} outside 0..{MAX_ORDER}")
    if z.size and (np.any(~np.isfinite(z)) or z.min() < 0 or z.max() > MAX_ARG):
        raise SpecialFunctionRangeError(f"Bessel argument outside [0, {MAX_ARG}]")


def _series(n: int, z: np.ndarray) -> np.ndarray:
    """sum_k (-1)^k (z/2)^(n+2k) / (k! (n+k)!)."""
    h = z / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_lead = n * np.log(h) - math.lgamma(n + 1)
    term = np.where(z > 0, np.exp(log_lead), 1.0 if n == 0 else 0.0)
    total = term.copy()
    h2 = h * h
    k = 0
    while True:
        term = -term * h2 / ((k + 1) * (n + k + 1))
        total += term
        k += 1
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)) or k > 400:
            break
    return total


def _miller_start(nmax: int, zmax: float) -> int:
    top = max(nmax, int(math.ceil(zmax)))
    start = top + int(math.sqrt(60.0 * max(top, 1))) + 20
    return start + (start % 2)


def _miller(nmax: int, z: np.ndarray) -> np.ndarray:
    """J_0..J_nmax at z > 0 by backward recurrence; shape (nmax+1,) + z.shape."""
    start = _miller_start(nmax, float(z.max()))
    out = np.zeros((nmax + 1,) + z.shape)
    j_next = np.zeros_like(z)
    j_cur = np.full_like(z, 1e-30)
    norm = np.zeros_like(z)
    for k in range(start, 0, -1):
        # j_cur = J_k (unnormalised); step to J_{k-1}
        if k <= nmax:
            out[k] = j_cur
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = (2.0 * k / z) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _RESCALE_AT
        if np.any(big):
            scale = np.where(big, _RESCALE_BY, 1.0)
            j_cur = j_cur * scale
            j_next = j_next * scale
            norm = norm * scale
            out[: nmax + 1] *= scale
    out[0] = j_cur
    norm += j_cur
    return out / norm


def bessel_j_orders(nmax: int, z) -> np.ndarray:
    """J_0(z), ..., J_nmax(z) stacked along a new last axis."""
    z = np.asarray(z, dtype=float)
    _check_bessel_args(nmax, z)
    flat = z.reshape(-1)
    res = np.zeros((nmax + 1, flat.size))
    small = flat <= SERIES_MAX_ARG
    if np.any(small):
        zs = flat[small]
        res[:, small] = np.stack([_series(n, zs) for n in range(nmax + 1)])
    if np.any(~small):
        res[:, ~small] = _miller(nmax, flat[~small])
    return np.moveaxis(res, 0, -1).reshape(z.shape + (nmax + 1,))


def bessel_j(n: int, z):
    """J_n(z) for integer 0 <= n <= 200 and real 0 <= z <= 100."""
    za = np.asarray(z, dtype=float)
    _check_bessel_args(n, za)
    flat = za.reshape(-1)
    res = np.zeros(flat.size)
    small = flat <= SERIES_MAX_ARG
    if np.any(small):
        res[small] = _series(n, flat[small])
    if np.any(~small):
        res[~small] = _miller(n, flat[~small])[n]
    res = res.reshape(za.shape)
    return float(res) if res.ndim == 0 else res


def gamma_fn(x):
    """Gamma(x) for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(~np.isfinite(xa)):
        raise SpecialFunctionRangeError("gamma_fn needs finite x > 0")
    if xa.ndim == 0:
        return math.gamma(float(xa))
    return np.vectorize(math.gamma, otypes=[float])(xa)


def laguerre(p: int, alpha: float, t):
    """Generalised Laguerre polynomial L_p^alpha(t) by the three-term recurrence."""
    if not 0 <= p <= 50 or int(p) != p:
        raise SpecialFunctionRangeError(f"Laguerre degree {p} outside 0..50")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if p == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - t
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
    return cur if np.ndim(cur) else float(cur)
