"""Flat ``key = value`` text with ``[section]`` headers, used for suite
configs and surface-function files.

Blank lines and lines starting with ``#`` or ``;`` are ignored. Sections
listed as repeatable may appear any number of times; every other section at
most once. Unknown sections or keys raise ConfigError with the line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigError, DomainError
from .spherical import BumpProfile, ModeIndex, SampledProfile, SurfaceFunction

Converter = Callable[[str], object]


@dataclass
class Section:
    name: str
    line: int
    values: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)


def parse_sections(text: str, schema: Mapping[str, Mapping[str, Converter]],
                   repeatable: frozenset = frozenset()) -> list[Section]:
    """Split ``text`` into sections and convert values with ``schema[section][key]``.

    Keys before the first header belong to the section named "" (if the
    schema has one).
    """
    out: list[Section] = []
    current: Section | None = Section("", 0) if "" in schema else None
    seen: set[str] = set()
    if current is not None:
        out.append(current)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: unterminated section header {line!r}")
            name = line[1:-1].strip()
            if name not in schema:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            if name in seen and name not in repeatable:
                raise ConfigError(f"line {lineno}: section [{name}] repeated")
            seen.add(name)
            current = Section(name, lineno)
            out.append(current)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any section")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        conv = schema[current.name].get(key)
        if conv is None:
            where = f"[{current.name}]" if current.name else "top level"
            raise ConfigError(f"line {lineno}: unknown key {key!r} in {where}")
        if key in current.values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            current.values[key] = conv(value)
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
        current.lines[key] = lineno
    return out


# -- value converters ------------------------------------------------------------------

def as_int(s: str) -> int:
    return int(s)


def as_float(s: str) -> float:
    """Float, also accepting simple fractions such as 10/3."""
    if "/" in s:
        a, _, b = s.partition("/")
        return float(a) / float(b)
    return float(s)


def as_complex(s: str) -> complex:
    return complex(s.replace(" ", ""))


def as_str(s: str) -> str:
    if not s:
        raise ValueError("empty value")
    return s


def list_of(conv: Converter) -> Converter:
    def parse(s: str):
        items = s.replace(",", " ").split()
        if not items:
            raise ValueError("empty list")
        return tuple(conv(x) for x in items)
    return parse


def fmt(x) -> str:
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    if isinstance(x, complex):
        return "%.17g%+.17gj" % (x.real, x.imag)
    return str(x)


# -- mode sections and surface files ----------------------------------------------------------

MODE_KEYS: dict[str, Converter] = {
    "k": as_int,
    "l": as_int,
    "profile": as_str,
    "center": as_float,
    "width": as_float,
    "amplitude": as_complex,
    "poly": list_of(as_float),
    "nodes": list_of(as_float),
    "values": list_of(as_complex),
    "order": as_int,
}

SURFACE_SCHEMA = {
    "surface": {"n": as_int, "M": as_float},
    "mode": MODE_KEYS,
}


def mode_from_section(sec: Section, n: int):
    v = sec.values
    where = f"line {sec.line}"
    if "k" not in v:
        raise ConfigError(f"{where}: [mode] needs k")
    try:
        idx = ModeIndex(n, v["k"], v.get("l", 1))
        kind = v.get("profile", "bump")
        if kind == "bump":
            for key in ("nodes", "values", "order"):
                if key in v:
                    raise ConfigError(f"line {sec.lines[key]}: {key!r} only applies to sampled profiles")
            prof = BumpProfile(v.get("center", 1.5), v.get("width", 0.45), v.get("amplitude", 1.0), v.get("poly", ()))
        elif kind == "sampled":
            for key in ("center", "width", "poly"):
                if key in v:
                    raise ConfigError(f"line {sec.lines[key]}: {key!r} only applies to bump profiles")
            if "nodes" not in v or "values" not in v:
                raise ConfigError(f"{where}: sampled profile needs nodes and values")
            prof = SampledProfile(np.array(v["nodes"]), np.array(v["values"]) * v.get("amplitude", 1.0),
                                  v.get("order", 3))
        else:
            raise ConfigError(f"line {sec.lines['profile']}: profile must be 'bump' or 'sampled'")
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return idx, prof


def parse_surface(text: str) -> SurfaceFunction:
    secs = parse_sections(text, SURFACE_SCHEMA, frozenset({"mode"}))
    head = [s for s in secs if s.name == "surface"]
    if not head:
        raise ConfigError("line 1: missing [surface] section")
    n = head[0].values.get("n")
    if n is None:
        raise ConfigError(f"line {head[0].line}: [surface] needs n")
    modes = [mode_from_section(s, n) for s in secs if s.name == "mode"]
    try:
        return SurfaceFunction(n, tuple(modes), head[0].values.get("M", 1.0))
    except DomainError as exc:
        raise ConfigError(f"line {head[0].line}: {exc}") from None


def read_surface(path: str | Path) -> SurfaceFunction:
    return parse_surface(Path(path).read_text())


def format_surface(g: SurfaceFunction) -> str:
    lines = ["[surface]", f"n = {g.n}", f"M = {fmt(float(g.M))}"]
    for idx, prof in g.modes:
        lines += ["", "[mode]", f"k = {idx.k}", f"l = {idx.l}"]
        if isinstance(prof, BumpProfile):
            lines += ["profile = bump", f"center = {fmt(prof.center)}", f"width = {fmt(prof.width)}",
                      f"amplitude = {fmt(complex(prof.amplitude))}"]
            if prof.poly:
                lines.append("poly = " + " ".join(fmt(c) for c in prof.poly))
        else:
            lines += ["profile = sampled", f"order = {prof.order}",
                      "nodes = " + " ".join(fmt(float(x)) for x in prof.nodes),
                      "values = " + " ".join(fmt(complex(y)) for y in prof.values)]
    return "\n".join(lines) + "\n"


def write_surface(g: SurfaceFunction, path: str | Path) -> None:
    Path(path).write_text(format_surface(g))
