"""Run configuration: QuadratureSpec overrides from an INI file and the thread-count variable.

Config file format (``--config``)::

    [quadrature]
    tol = 1e-10
    talbot_nodes = 48
    talbot_mu = 6.0

Any field of :class:`~cfkernel.numlaplace.QuadratureSpec` may appear; unknown
keys are rejected.  ``CFKERNEL_THREADS`` (positive integer, default 1) sets the
number of worker threads for grid evaluation.
"""
from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field

import numpy as np

from .numlaplace import DEFAULT_SPEC, QuadratureSpec

THREADS_ENV = "CFKERNEL_THREADS"


class ConfigError(ValueError):
    pass


def load_spec(path: str | None, base: QuadratureSpec = DEFAULT_SPEC) -> QuadratureSpec:
    if path is None:
        return base
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep field names like max_T
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not cp.has_section("quadrature"):
        return base
    types = {f.name: type(getattr(base, f.name)) for f in dataclasses.fields(base)}
    kw = {}
    for key, raw in cp.items("quadrature"):
        if key not in types:
            raise ConfigError(f"unknown quadrature key {key!r}")
        try:
            kw[key] = types[key](float(raw)) if types[key] is int else types[key](raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    try:
        return base.with_(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def thread_count(env=None) -> int:
    raw = (os.environ if env is None else env).get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI invocation."""

    command: str
    G: str = "0"
    m: int = 2
    x: np.ndarray | None = None  # (n, m)
    y: np.ndarray | None = None
    route: str = "auto"
    spec: QuadratureSpec = DEFAULT_SPEC
    fmt: str = "csv"
    output: str | None = None
    strict: bool = False
    strict_tol: float = 1e-6
    strip_constant: bool = False
    seed: int | None = None
    threads: int = 1
    extra: dict = field(default_factory=dict)
