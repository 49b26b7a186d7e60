"""Growth audit |K| / (1 + |x||y|)^q over random G and dimensions; CSV to stdout."""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from cfkernel.intpoly import IntPoly, is_bounded_family
from cfkernel.time_kernel import bound_audit


@dataclass
class SweepConfig:
    seed: int = 3
    polys: int = 5
    dims: tuple[int, ...] = (2, 4)
    n: int = 400
    zmax: float = 50.0
    max_degree: int = 4


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--polys", type=int, default=SweepConfig.polys)
    ap.add_argument("--dims", type=int, nargs="+", default=list(SweepConfig.dims))
    ap.add_argument("--n", type=int, default=SweepConfig.n)
    a = ap.parse_args(argv)
    cfg = SweepConfig(seed=a.seed, polys=a.polys, dims=tuple(a.dims), n=a.n)
    rng = np.random.default_rng(cfg.seed)
    Gs = [IntPoly((0, 0, 1))]
    while len(Gs) < cfg.polys + 1:
        deg = int(rng.integers(2, cfg.max_degree + 1))
        Gs.append(IntPoly(tuple(int(v) for v in rng.integers(-7, 8, size=deg + 1))))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["G", "bounded", "m", "q", "route", "median", "top_decile_median", "top_decile_max", "slope", "passed"])
    for G in Gs:
        for m in cfg.dims:
            r = bound_audit(G, m, n=cfg.n, zmax=cfg.zmax, seed=int(rng.integers(1 << 30)))
            w.writerow([str(G), is_bounded_family(G), m, r.q, r.route, f"{r.median_ratio:.4g}",
                        f"{r.top_decile_median:.4g}", f"{r.top_decile_max:.4g}", f"{r.slope:.3g}", r.passed])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
