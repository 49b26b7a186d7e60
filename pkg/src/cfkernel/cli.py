"""Command-line entry point ``cfkernel``.

Exit codes: 0 success, 1 tolerance failure, 2 parse/config error, 3 unsupported route.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .clifford import Multivector
from .config import ConfigError, RunConfig, load_spec, thread_count
from .intpoly import (
    IntPoly,
    PolyParseError,
    is_bounded_family,
    parity_profile,
    parse_poly,
    residue_mod4,
    row_A1,
    row_A2,
    special_case_tag,
)
from .numlaplace import InversionNotConverged, QuadratureFailure
from .time_kernel import (
    ExtractionNotConverged,
    KernelSample,
    UnsupportedRoute,
    cross_route,
    kernel_general,
    kernel_talbot,
    samples_to_csv,
    samples_to_json,
)

EXIT_OK, EXIT_TOL, EXIT_PARSE, EXIT_ROUTE = 0, 1, 2, 3
POINT_CHUNK = 64

ROUTE_ALIASES = {
    "auto": "auto",
    "oracle": "oracle2d",
    "oracle2d": "oracle2d",
    "closed": "closed-form",
    "closed-form": "closed-form",
    "KU": "quadrature",
    "ku": "quadrature",
    "quadrature": "quadrature",
    "generating": "generating-function",
    "generating-function": "generating-function",
    "talbot": "talbot",
}

GRID_HELP = """\
grid syntax: comma-separated KEY=VALUE items, VALUE either a number or a:b:n
(n evenly spaced values from a to b).  KEY is x or y (all coordinates) or
x1..xm / y1..ym (one coordinate; overrides x/y).  The grid is the Cartesian
product of all coordinate ranges.  Example for m = 2:
    x1=-1:1:11,x2=-1:1:11,y=0.5
"""


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


# --------------------------------------------------------------------------- parsing helpers


def _parse_vector(text: str, m: int) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad coordinate list {text!r}") from exc
    if v.shape != (m,):
        raise CliError(EXIT_PARSE, f"expected {m} coordinates, got {v.size} in {text!r}")
    return v


def _parse_range(val: str) -> np.ndarray:
    parts = val.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            n = int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(float(parts[0]), float(parts[1]), n)
    except ValueError:
        pass
    raise CliError(EXIT_PARSE, f"bad grid range {val!r}")


def parse_grid(text: str, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid spec -> (x points, y points), each of shape (n, m)."""
    coords: dict[str, np.ndarray] = {}
    defaults: dict[str, np.ndarray] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise CliError(EXIT_PARSE, f"grid item {item!r} lacks '='")
        key, val = (s.strip() for s in item.split("=", 1))
        rng = _parse_range(val)
        if key in ("x", "y"):
            defaults[key] = rng
        elif len(key) > 1 and key[0] in "xy" and key[1:].isdigit() and 1 <= int(key[1:]) <= m:
            coords[key] = rng
        else:
            raise CliError(EXIT_PARSE, f"unknown grid key {key!r} for m={m}")
    axes = []
    for side in "xy":
        for j in range(1, m + 1):
            k = f"{side}{j}"
            if k in coords:
                axes.append(coords[k])
            elif side in defaults:
                axes.append(defaults[side])
            else:
                raise CliError(EXIT_PARSE, f"grid does not fix coordinate {k}")
    pts = np.array(list(itertools.product(*axes)), dtype=float)
    return pts[:, :m], pts[:, m:]


def _parse_G(text: str, strip: bool) -> IntPoly:
    try:
        G = parse_poly(text)
    except PolyParseError as exc:
        raise CliError(EXIT_PARSE, f"cannot parse polynomial: {exc}") from exc
    return G.without_constant() if strip else G


# --------------------------------------------------------------------------- commands


def classify_report(G: IntPoly, m: int) -> dict:
    prof = parity_profile(G)
    roots = ["1", "i", "-1", "-i"]
    return {
        "G": str(G),
        "compact": G.compact(),
        "residues": {str(k): residue_mod4(G, k) for k in range(-3, 4)},
        "A1": [roots[e] for e in row_A1(G).exponents],
        "A2": [roots[e] for e in row_A2(G, m).exponents],
        "m": m,
        "s0": prof.s0,
        "s1": prof.s1,
        "a1": prof.a1,
        "bounded_family": is_bounded_family(G),
        "tag": special_case_tag(G),
    }


def cmd_classify(args, out) -> int:
    if args.m < 2:
        raise CliError(EXIT_PARSE, "m must be >= 2")
    G = _parse_G(args.G, args.strip_constant)
    rep = classify_report(G, args.m)
    if args.json:
        out.write(json.dumps(rep, indent=1, sort_keys=True) + "\n")
        return EXIT_OK
    res = "  ".join(f"G({k})={v}" for k, v in rep["residues"].items())
    out.write(f"G = {rep['G']}    (compact {rep['compact']})\n")
    out.write(f"residues mod 4: {res}\n")
    out.write(f"A1 = ({', '.join(rep['A1'])})    A2(m={args.m}) = ({', '.join(rep['A2'])})\n")
    out.write(f"s0 = {rep['s0']}  s1 = {rep['s1']}  a1 = {rep['a1']}\n")
    out.write(f"bounded_family = {str(rep['bounded_family']).lower()}\n")
    out.write(f"tag = {rep['tag'] or 'none'}\n")
    return EXIT_OK


def _evaluate(cfg: RunConfig, G: IntPoly) -> list[KernelSample]:
    # chunking is fixed so the bytes do not depend on the thread count
    X, Y = cfg.x, cfg.y
    chunks = [np.arange(lo, min(lo + POINT_CHUNK, X.shape[0])) for lo in range(0, X.shape[0], POINT_CHUNK)]
    run = lambda idx: kernel_general(G, cfg.m, X[idx], Y[idx], cfg.spec, cfg.route)  # noqa: E731
    if cfg.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(idx) for idx in chunks]
    routes = {p.route for p in parts}
    coeffs = np.concatenate([p.value.coeffs for p in parts], axis=0)
    if len(routes) == 1:
        return [KernelSample(X, Y, cfg.m, G, Multivector(coeffs, cfg.m), parts[0].route)]
    # a chunk fell back to another route: emit per-chunk samples with their own tags
    return [KernelSample(X[idx], Y[idx], cfg.m, G, p.value, p.route) for idx, p in zip(chunks, parts)]


def _strict_check(cfg: RunConfig, G: IntPoly, smp: KernelSample) -> float:
    other = cross_route(G, cfg.m, smp.route)
    if other is None:
        # only contour inversion exists here: re-run it on a different contour
        alt = kernel_talbot(G, cfg.m, smp.x, smp.y, cfg.spec.with_(talbot_mu=cfg.spec.talbot_mu * 1.5))
    else:
        alt = kernel_general(G, cfg.m, smp.x, smp.y, cfg.spec, other).value
    return float(np.max(np.abs(alt.coeffs - smp.value.coeffs), initial=0.0))


def cmd_kernel(args, out) -> int:
    if args.m < 2:
        raise CliError(EXIT_PARSE, "m must be >= 2")
    G = _parse_G(args.G, args.strip_constant)
    if args.route not in ROUTE_ALIASES:
        raise CliError(EXIT_ROUTE, f"unsupported route: {args.route!r}")
    if args.grid:
        X, Y = parse_grid(args.grid, args.m)
    elif args.x is not None and args.y is not None:
        X = _parse_vector(args.x, args.m)[None, :]
        Y = _parse_vector(args.y, args.m)[None, :]
    else:
        raise CliError(EXIT_PARSE, "give either --grid or both --x and --y")
    try:
        spec = load_spec(args.config)
        if args.tol is not None:
            spec = spec.with_(tol=args.tol)
        threads = thread_count()
    except (ConfigError, ValueError) as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    cfg = RunConfig(
        command="kernel",
        G=args.G,
        m=args.m,
        x=X,
        y=Y,
        route=ROUTE_ALIASES[args.route],
        spec=spec,
        fmt=args.format,
        output=args.output,
        strict=args.strict,
        strict_tol=args.strict_tol,
        strip_constant=args.strip_constant,
        threads=threads,
    )
    try:
        samples = _evaluate(cfg, G)
        if cfg.strict:
            resid = max(_strict_check(cfg, G, smp) for smp in samples)
            if resid > cfg.strict_tol:
                raise CliError(EXIT_TOL, f"strict: second route disagrees by {resid:.3e} > {cfg.strict_tol:.1e}")
    except UnsupportedRoute as exc:
        raise CliError(EXIT_ROUTE, f"unsupported route: {exc}") from exc
    except (InversionNotConverged, QuadratureFailure, ExtractionNotConverged) as exc:
        raise CliError(EXIT_TOL, f"numerical tolerance not met: {exc}") from exc
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    text = samples_to_json(samples) + "\n" if cfg.fmt == "json" else samples_to_csv(samples)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .suites import DEFAULT_SEED, SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in SUITES:
            raise CliError(EXIT_PARSE, f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
    try:
        spec = load_spec(args.config)
    except ConfigError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    seed = DEFAULT_SEED if args.seed is None else args.seed
    reports = [run_suite(n, seed=seed, spec=spec) for n in names]
    if args.json:
        out.write(json.dumps([r.as_dict() for r in reports], indent=1, default=str) + "\n")
    else:
        for r in reports:
            out.write(r.summary() + "\n")
            for line in r.lines:
                out.write(f"    {line}\n")
            if args.table:
                for row in r.table:
                    out.write("    | " + "  ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_TOL


# --------------------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cfkernel",
        description="Generalised Clifford-Fourier kernels e^{i pi/2 G(Gamma_y)} e^{-i(x,y)}.",
        epilog="exit codes: 0 ok, 1 tolerance failure, 2 parse/config error, 3 unsupported route",
    )
    sub = p.add_subparsers(dest="command", required=True)

    poly_help = "integer polynomial, e.g. 'x^2+2x', '4x', or compact highest-first '1,0,0'"

    c = sub.add_parser("classify", help="residue table, phase rows, bounded-family verdict")
    c.add_argument("G", help=poly_help)
    c.add_argument("--m", type=int, default=2, help="dimension for the A2 row (default 2)")
    c.add_argument("--json", action="store_true")
    c.add_argument("--strip-constant", action="store_true", help="drop the constant term of G")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser(
        "kernel",
        help="evaluate the kernel at a point or on a grid",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=GRID_HELP,
    )
    k.add_argument("G", help=poly_help)
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--x", help="comma-separated coordinates of x")
    k.add_argument("--y", help="comma-separated coordinates of y")
    k.add_argument("--grid", help="grid spec, see below")
    k.add_argument("--route", default="auto", help="auto, oracle2d, closed-form, KU/quadrature, generating-function, talbot")
    k.add_argument("--format", choices=("csv", "json"), default="csv")
    k.add_argument("--output", help="write to this file instead of stdout")
    k.add_argument("--config", help="INI file with a [quadrature] section")
    k.add_argument("--tol", type=float, help="override the quadrature tolerance")
    k.add_argument("--strict", action="store_true", help="cross-check every value with a second route")
    k.add_argument("--strict-tol", type=float, default=1e-6)
    k.add_argument("--strip-constant", action="store_true", help="drop the constant term of G")
    k.add_argument("--seed", type=int, help="accepted for symmetry; kernel evaluation is deterministic")
    k.set_defaults(func=cmd_kernel)

    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("suite", help="lemma1, th5-vs-eigen, identity, inverse, oracle-cross, bounded, "
                   "generating, hermite, bounds, audit-th2, specfun, or all")
    v.add_argument("--seed", type=int)
    v.add_argument("--config", help="INI file with a [quadrature] section")
    v.add_argument("--json", action="store_true")
    v.add_argument("--table", action="store_true", help="print residual tables")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"cfkernel: {exc}", file=sys.stderr)
        return exc.code
