"""Command-line front end.

    rlab bessel eval --nu NU --r R [--method auto|series|schlafli|closed]
    rlab bessel regime --nu NU --r R
    rlab bessel suite [suite options]
    rlab extension eval --surface FILE (--point T X1 [X2 ...] | --grid T R THETA) [--method modal|direct] [--rescale-M M]
    rlab experiment SUITE [--config FILE] [--outdir DIR] [--seed S] [--threads N]
    rlab exponents --n N --q Q

Exit codes: 0 success, 1 a claim was violated, 2 configuration or domain
error, 3 time-window tail not controlled.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .besself import bessel_closed_form, bessel_j, bessel_schlafli, bessel_series, classify_regime
from .errors import ConfigError, DomainError, NonConvergent, TailNotControlled, UnsupportedBasis
from .experiments import SUITES, load_config, run_suite, write_outputs
from .experiments.report import header_lines
from .extension import extension_direct, extension_modal, rescale_dyadic
from .norms import exponent_table
from .parallel import resolve_threads
from .textio import as_float, fmt, parse_surface

log = logging.getLogger("rlab")

EXIT_OK, EXIT_VIOLATED, EXIT_CONFIG, EXIT_TAIL = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    """Options shared by the suite-running commands."""

    command: str
    config: str | None = None
    outdir: str | None = None
    seed: int | None = None
    threads: int | None = None
    verbosity: int = 0


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _number(s: str) -> float:
    try:
        return as_float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None


def _range(s: str) -> np.ndarray:
    """'start:stop:count' (inclusive) or a single value."""
    parts = s.split(":")
    try:
        if len(parts) == 1:
            return np.array([as_float(parts[0])])
        if len(parts) == 3 and int(parts[2]) >= 1:
            return np.linspace(as_float(parts[0]), as_float(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected START:STOP:COUNT or a number, got {s!r}")


def _add_suite_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="structured-text config file (key = value with [sections])")
    p.add_argument("--outdir", help="output directory (default: config value, else .)")
    p.add_argument("--seed", type=_nonneg_int, help="override the config seed")
    p.add_argument("--threads", type=_positive_int, help="worker threads (default: $RLAB_THREADS, else 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rlab", description="Numerical checks of angular-regularity restriction estimates.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bessel", help="Bessel function evaluation and regime checks")
    bsub = b.add_subparsers(dest="action", required=True)
    be = bsub.add_parser("eval", help="evaluate J_nu(r)")
    be.add_argument("--nu", type=_number, required=True)
    be.add_argument("--r", type=_number, required=True)
    be.add_argument("--method", choices=("auto", "series", "schlafli", "closed"), default="auto")
    br = bsub.add_parser("regime", help="classify (nu, r) into a decay regime")
    br.add_argument("--nu", type=_number, required=True)
    br.add_argument("--r", type=_number, required=True)
    bs = bsub.add_parser("suite", help="run the Bessel regime suite (same as 'experiment bessel')")
    _add_suite_options(bs)

    e = sub.add_parser("extension", help="evaluate the extension operator")
    esub = e.add_subparsers(dest="action", required=True)
    ee = esub.add_parser("eval", help="values at points or on a (t, r, theta) grid, as CSV")
    ee.add_argument("--surface", required=True, help="surface-function file")
    where = ee.add_mutually_exclusive_group(required=True)
    where.add_argument("--point", nargs="+", action="append", metavar="T_X", help="t followed by the n coordinates of x")
    where.add_argument("--grid", nargs=3, type=_range, metavar=("T", "R", "THETA"),
                       help="START:STOP:COUNT ranges for t, r and the polar angle")
    ee.add_argument("--method", choices=("modal", "direct"), default="modal")
    ee.add_argument("--rescale-M", type=_number, default=None, dest="rescale_M",
                    help="apply the dyadic rescaling g -> g(./M) first")
    ee.add_argument("--output", help="write CSV here instead of stdout")

    x = sub.add_parser("experiment", help="run a verification suite")
    x.add_argument("suite", choices=SUITES)
    _add_suite_options(x)

    t = sub.add_parser("exponents", help="exponent table for dimension n and exponent q")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--q", type=_number, required=True)
    return parser


# -- commands -----------------------------------------------------------------------------

def cmd_bessel(args) -> int:
    if args.action == "suite":
        return cmd_experiment(args, suite="bessel")
    if args.action == "regime":
        print(classify_regime(args.nu, args.r))
        return EXIT_OK
    method = {"auto": bessel_j, "series": bessel_series, "schlafli": bessel_schlafli}.get(args.method)
    val = bessel_closed_form(args.nu, args.r) if method is None else method(args.nu, args.r)
    print(f"value = {fmt(float(val.value))}")
    print(f"method = {val.method}")
    print(f"est_error = {fmt(float(val.est_error))}")
    return EXIT_OK


def _surface_points(args, n: int) -> tuple[np.ndarray, np.ndarray]:
    if args.point:
        pts = []
        for group in args.point:
            if len(group) != n + 1:
                raise DomainError(f"--point needs t and {n} coordinates, got {len(group)} values")
            try:
                pts.append([as_float(v) for v in group])
            except ValueError:
                raise DomainError(f"--point values must be numbers: {group}") from None
        arr = np.array(pts)
        return arr[:, 0], arr[:, 1:]
    tt, rr, th = args.grid
    if np.any(rr < 0):
        raise DomainError("radii must be nonnegative")
    T, Rr, TH = np.meshgrid(tt, rr, th, indexing="ij")
    T, Rr, TH = T.ravel(), Rr.ravel(), TH.ravel()
    if n == 1:
        x = (Rr * np.where(np.cos(TH) >= 0, 1.0, -1.0))[:, None]
    elif n == 2:
        x = np.stack([Rr * np.cos(TH), Rr * np.sin(TH)], -1)
    else:
        # polar angle measured from the last axis, in the (x_1, x_n) plane
        x = np.zeros((Rr.size, n))
        x[:, 0] = Rr * np.sin(TH)
        x[:, -1] = Rr * np.cos(TH)
    return T, x


def _polar_angle(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    r = np.linalg.norm(x, axis=1)
    if n == 1:
        return np.where(x[:, 0] < 0, math.pi, 0.0)
    if n == 2:
        return np.arctan2(x[:, 1], x[:, 0])
    return np.arccos(np.clip(np.divide(x[:, -1], r, out=np.ones_like(r), where=r > 0), -1, 1))


def cmd_extension(args) -> int:
    try:
        text = Path(args.surface).read_text()
    except OSError as exc:
        raise ConfigError(f"line 0: cannot read surface file {args.surface}: {exc.strerror}") from None
    g = parse_surface(text)
    if args.rescale_M is not None:
        g = rescale_dyadic(g, args.rescale_M)
    t, x = _surface_points(args, g.n)
    evaluate = extension_modal if args.method == "modal" else extension_direct
    vals = np.atleast_1d(evaluate(g, t, x))
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    lines = header_lines("extension", "none", digest)
    lines.append(f"# method={args.method} rescale_M={fmt(args.rescale_M) if args.rescale_M else 1}")
    lines.append("t,r,theta,re,im")
    r = np.linalg.norm(x, axis=1)
    th = _polar_angle(x)
    for i in range(t.size):
        lines.append(",".join(fmt(float(v)) for v in (t[i], r[i], th[i], vals[i].real, vals[i].imag)))
    out = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def run_config(args, suite: str) -> RunConfig:
    return RunConfig(suite, args.config, args.outdir, args.seed, args.threads, getattr(args, "verbose", 0))


def cmd_experiment(args, suite: str | None = None) -> int:
    rc = run_config(args, suite or args.suite)
    cfg = load_config(rc.config)
    cfg = cfg.with_overrides(seed=rc.seed, outdir=rc.outdir, threads=rc.threads)
    threads = resolve_threads(cfg.threads)
    log.info("suite %s: seed=%d config=%s threads=%d", rc.command, cfg.seed, cfg.digest(), threads)
    start = time.perf_counter()
    result = run_suite(rc.command, cfg)
    csv_path, json_path = write_outputs(result, cfg.outdir, cfg.seed, cfg.digest())
    log.info("suite %s finished in %.1fs", rc.command, time.perf_counter() - start)
    for c in result.claims:
        print(f"{c.claim_id}: {c.verdict}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_VIOLATED if result.verdict == "violated" else EXIT_OK


def cmd_exponents(args) -> int:
    tab = exponent_table(args.n, args.q)
    for key in ("n", "q", "q0", "q1", "qn", "sigma", "alpha", "s", "p_dual", "eps", "clamped"):
        print(f"{key} = {fmt(getattr(tab, key))}")
    return EXIT_OK


COMMANDS = {"bessel": cmd_bessel, "extension": cmd_extension, "experiment": cmd_experiment, "exponents": cmd_exponents}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except TailNotControlled as exc:
        print(f"rlab: tail not controlled: {exc}", file=sys.stderr)
        return EXIT_TAIL
    except (ConfigError, DomainError, UnsupportedBasis, NonConvergent) as exc:
        print(f"rlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
