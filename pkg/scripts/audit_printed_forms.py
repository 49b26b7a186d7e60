"""Residuals of the displayed x^2-kernel formulas against the derived kernel.

Compares, over seeded random points and several dimensions:
  * the s-domain x^2 formula as displayed vs the eigen-phase assembly,
  * the m = 2 s-domain reduction vs the same assembly,
  * the displayed m = 2 time-domain kernel (and half of it) vs the oracle,
  * K_U time forms with the displayed bivector integral vs the corrected one.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from cfkernel.intpoly import IntPoly
from cfkernel.laplace_forms import (
    LaplaceContext,
    kernel_laplace_eigen,
    kernel_laplace_m2_display,
    kernel_laplace_th2_printed,
)
from cfkernel.time_kernel import audit_m2_gamma2, kernel_KU, kernel_x2_quadrature

X2 = IntPoly((0, 0, 1))


@dataclass
class AuditConfig:
    seed: int = 7
    samples: int = 20
    dims: tuple[int, ...] = (2, 3, 4, 5, 6)


def _max(a, b):
    return float(np.max(np.abs(a.coeffs - b.coeffs)))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=AuditConfig.seed)
    ap.add_argument("--samples", type=int, default=AuditConfig.samples)
    a = ap.parse_args(argv)
    cfg = AuditConfig(seed=a.seed, samples=a.samples)
    rng = np.random.default_rng(cfg.seed)

    print("s-domain x^2 formula (displayed) vs eigen assembly")
    for m in cfg.dims:
        r = 0.0
        for _ in range(cfg.samples):
            ctx = LaplaceContext(complex(rng.uniform(0.5, 3), rng.uniform(-2, 2)), rng.normal(size=m), rng.normal(size=m))
            r = max(r, _max(kernel_laplace_th2_printed(ctx), kernel_laplace_eigen(X2, ctx)))
        print(f"  m={m}: max residual {r:.3g}")

    r = 0.0
    for _ in range(cfg.samples):
        ctx = LaplaceContext(complex(rng.uniform(0.5, 3), rng.uniform(-2, 2)), rng.normal(size=2), rng.normal(size=2))
        r = max(r, _max(kernel_laplace_m2_display(ctx), kernel_laplace_eigen(X2, ctx)))
    print(f"m=2 s-domain display vs eigen assembly: max residual {r:.3g}")

    full = half = 0.0
    for _ in range(cfg.samples):
        aud = audit_m2_gamma2(rng.normal(size=2), rng.normal(size=2))
        full, half = max(full, aud.residual), max(half, aud.residual_half)
    print(f"m=2 time display vs oracle: max residual {full:.3g}, halved {half:.3g}")

    for m in (4, 6):
        x, y = rng.normal(size=(cfg.samples, m)), rng.normal(size=(cfg.samples, m))
        per = max(_max(kernel_KU(j, m, x, y, printed=True), kernel_KU(j, m, x, y)) for j in (1, 2, 3, 4))
        d = _max(kernel_x2_quadrature(m, x, y, printed=True), kernel_x2_quadrature(m, x, y))
        print(f"K_U displayed vs corrected, m={m}: per form {per:.3g}, in the x^2 combination {d:.3g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
