"""SuiteConfig: the parsed form of a suite config file.

Layout::

    [suite]
    n = 2
    seed = 20240601
    R = 8 16 32 64
    q = 4 6
    nu = 1 4
    N = 4 8 16 32 64
    draws = 20
    quadruples = 100
    narrow_width = 0.05

    [quadrature]
    nodes_per_wavelength = 10
    tolerance = 1e-10

    [output]
    outdir = results

    [mode]          # repeatable; same keys as surface files
    k = 0

Unset list keys fall back to the defaults of the suite being run.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import ConfigError, DomainError
from ..norms import is_dyadic
from ..quadrature import QuadratureSpec
from ..textio import (
    MODE_KEYS,
    as_float,
    as_int,
    as_str,
    fmt,
    format_surface,
    list_of,
    mode_from_section,
    parse_sections,
)
from ..spherical import SurfaceFunction

SUITES = ("bessel", "restriction", "operators", "kernel", "smoothing", "identities")


def _positive_int(s: str) -> int:
    v = as_int(s)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _seed(s: str) -> int:
    v = as_int(s)
    if v < 0:
        raise ValueError("seed must be nonnegative")
    return v


def _dyadic(s: str) -> float:
    v = as_float(s)
    if not is_dyadic(v):
        raise ValueError(f"R={s} is not dyadic")
    return v


SCHEMA = {
    "suite": {
        "n": _positive_int,
        "seed": _seed,
        "R": list_of(_dyadic),
        "q": list_of(as_float),
        "nu": list_of(as_float),
        "N": list_of(as_float),
        "draws": _positive_int,
        "quadruples": _positive_int,
        "narrow_width": as_float,
        "threads": _positive_int,
    },
    "quadrature": {
        "nodes_per_wavelength": as_int,
        "max_panels": as_int,
        "tolerance": as_float,
        "order": as_int,
    },
    "output": {"outdir": as_str},
    "mode": MODE_KEYS,
}


@dataclass(frozen=True)
class SuiteConfig:
    n: int = 2
    seed: int = 0
    modes: tuple = ()
    R: tuple | None = None
    q: tuple | None = None
    nu: tuple | None = None
    N: tuple | None = None
    draws: int = 20
    quadruples: int = 100
    narrow_width: float = 0.05
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    outdir: str = "."
    threads: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.seed < 0:
            raise DomainError("seed must be nonnegative")
        if self.R is not None:
            for R in self.R:
                if not is_dyadic(R):
                    raise DomainError(f"R={R} is not dyadic")
        if self.draws < 1 or self.quadruples < 1:
            raise DomainError("draws and quadruples must be positive")
        if not 0 < self.narrow_width <= 0.5:
            raise DomainError("narrow_width must lie in (0, 1/2]")
        for idx, _ in self.modes:
            if idx.n != self.n:
                raise DomainError(f"mode {idx} does not live in dimension {self.n}")

    def surface(self) -> SurfaceFunction:
        return SurfaceFunction(self.n, self.modes)

    def with_overrides(self, **kw) -> "SuiteConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    def canonical(self) -> str:
        """Text that determines every result; threads and output paths are excluded."""
        q = self.quad
        parts = [
            f"n={self.n}", f"seed={self.seed}",
            "R=" + _fmt_list(self.R), "q=" + _fmt_list(self.q), "nu=" + _fmt_list(self.nu),
            "N=" + _fmt_list(self.N), f"draws={self.draws}", f"quadruples={self.quadruples}",
            f"narrow_width={fmt(self.narrow_width)}",
            f"quad={q.nodes_per_wavelength},{q.max_panels},{fmt(q.tolerance)},{q.order}",
            format_surface(self.surface()),
        ]
        return "\n".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def _fmt_list(v) -> str:
    return "default" if v is None else " ".join(fmt(float(x)) for x in v)


def parse_config(text: str) -> SuiteConfig:
    secs = parse_sections(text, SCHEMA, frozenset({"mode"}))
    kw: dict = {}
    quad_kw: dict = {}
    first = {s.name: s for s in reversed(secs)}
    suite = first.get("suite")
    n = 2
    if suite is not None:
        kw.update(suite.values)
        n = kw.get("n", 2)
    if "quadrature" in first:
        quad_kw = dict(first["quadrature"].values)
    if "output" in first:
        kw["outdir"] = first["output"].values.get("outdir", ".")
    kw["modes"] = tuple(mode_from_section(s, n) for s in secs if s.name == "mode")
    if quad_kw:
        try:
            kw["quad"] = QuadratureSpec(**quad_kw)
        except DomainError as exc:
            raise ConfigError(f"line {first['quadrature'].line}: {exc}") from None
    try:
        return SuiteConfig(**kw)
    except DomainError as exc:
        raise ConfigError(f"line {suite.line if suite else 1}: {exc}") from None


def load_config(path: str | Path | None) -> SuiteConfig:
    if path is None:
        return SuiteConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"line 0: cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def dyadic_range(lo: float, hi: float) -> tuple:
    """Powers of two from lo to hi inclusive."""
    a, b = round(math.log2(lo)), round(math.log2(hi))
    return tuple(2.0 ** k for k in range(a, b + 1))
