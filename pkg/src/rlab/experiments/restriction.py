"""Localized restriction estimates over dyadic annuli: the L^2 growth law
min{R^{1/2}, R^{n/2}}, and L^4 / L^6 decay against angularly weighted
surface norms."""

from __future__ import annotations

import math

from ..errors import DomainError
from ..norms import (
    SLOPE_MARGIN,
    AnnulusGrid,
    ExtensionField,
    MixedNormSpec,
    fit_scaling,
    lp_surface_norm,
    lq_spacetime_norm,
    profile_lp,
)
from ..parallel import ordered_map
from ..spherical import BumpProfile, ModeIndex, SurfaceFunction
from .config import SuiteConfig, dyadic_range
from .report import SuiteResult

COLUMNS = ("claim", "k", "q", "R", "norm", "quad_error", "tail_bound", "rhs")
Q2_R = dyadic_range(1 / 8, 256)
DECAY_R = dyadic_range(8, 512)
DEEP_R = dyadic_range(1 / 1024, 1 / 128)
LARGE_FROM = 4.0  # the growth branch is fitted on R >= 4
DEFAULT_DEGREES = (0, 2, 4)


def default_modes(n: int) -> tuple:
    return tuple((ModeIndex(n, k), BumpProfile()) for k in DEFAULT_DEGREES)


def small_r_weight(n: int, k: int, q: float) -> float:
    """omega(k) = (1+k)^{2(n-1)(1/2-1/q)} of the small-annulus bound."""
    return (1 + k) ** (2 * (n - 1) * (0.5 - 1 / q))


def small_r_rhs(g: SurfaceFunction, q: float) -> float:
    """(sum_k omega(k) ||a_k phi||_{q'}^2)^{1/2}; phi = 1 on the shell [1, 2]."""
    qp = q / (q - 1)
    tot = sum(small_r_weight(g.n, idx.k, q) * profile_lp(a, qp) ** 2 for idx, a in g.modes)
    return math.sqrt(tot)


def _norms(g: SurfaceFunction, q: float, Rs, threads) -> list:
    field = ExtensionField(g)
    grid = AnnulusGrid(threads=1)
    return ordered_map(lambda R: lq_spacetime_norm(field, MixedNormSpec(q=q, R=R), grid), Rs, threads)


def _fit(claim, Rs, results, predicted, kind, rhs, margin=SLOPE_MARGIN):
    samples = [(R, res.value) for R, res in zip(Rs, results)]
    return fit_scaling(samples, predicted, margin, kind, claim, [r.rel_error for r in results], [rhs] * len(Rs))


def run(cfg: SuiteConfig) -> SuiteResult:
    n = cfg.n
    modes = cfg.modes or default_modes(n)
    qs = tuple(cfg.q or (2.0, 4.0, 6.0))
    for q in qs:
        if q not in (2.0, 4.0, 6.0):
            raise DomainError(f"restriction suite covers q in {{2, 4, 6}}, got {q}")
    rows, claims = [], []
    for q in qs:
        for idx, prof in modes:
            g = SurfaceFunction(n, ((idx, prof),))
            if q == 2:
                claims += _q2(g, idx.k, cfg, rows)
            else:
                claims += _decay(g, idx.k, q, cfg, rows)
        if q in (4.0, 6.0) and len(modes) > 1 and n == 2:
            g = SurfaceFunction(n, tuple(modes))
            claims += _decay(g, "all", q, cfg, rows)
    return SuiteResult("restriction", COLUMNS, rows, claims,
                       meta={"n": n, "degrees": [idx.k for idx, _ in modes]})


def _q2(g, k, cfg, rows) -> list:
    n = g.n
    Rs = tuple(cfg.R or Q2_R)
    results = _norms(g, 2.0, Rs, cfg.threads)
    rhs = lp_surface_norm(g, 2.0)
    for R, res in zip(Rs, results):
        rows.append(("q2", k, 2.0, R, res.value, res.quad_error, res.tail_bound, rhs))
    out = []
    large = [(R, r) for R, r in zip(Rs, results) if R >= LARGE_FROM]
    small = [(R, r) for R, r in zip(Rs, results) if R <= 1]
    if len(large) >= 3:
        out.append(_fit(f"restriction.q2.k{k}.large", [R for R, _ in large], [r for _, r in large],
                        0.5, "upper", rhs))
    # degree k > 0 vanishes like r^k at the origin, so R^{n/2} is only an upper bound there
    small_kind = "equal" if k == 0 else "lower"
    if len(small) >= 3:
        rep = _fit(f"restriction.q2.k{k}.small", [R for R, _ in small], [r for _, r in small],
                   n / 2, small_kind, rhs)
        rep.notes["C_per_R"] = [r.value / (R ** (n / 2) * rhs) for R, r in small]
        rep.notes["rhs_omega_weight"] = small_r_rhs(g, 2.0)
        out.append(rep)
    if cfg.R is None:
        deep = _norms(g, 2.0, DEEP_R, cfg.threads)
        for R, res in zip(DEEP_R, deep):
            rows.append(("q2_deep", k, 2.0, R, res.value, res.quad_error, res.tail_bound, rhs))
        rep = _fit(f"restriction.q2.k{k}.deep_small", DEEP_R, deep, n / 2, small_kind, rhs)
        rep.notes["purpose"] = "locates the small-annulus regime of the 2 pi normalised kernel"
        out.append(rep)
    return out


def _decay(g, k, q, cfg, rows) -> list:
    n = g.n
    Rs = tuple(cfg.R or DECAY_R)
    # exponent, surface p and angular order s of each decay law
    predicted, p, s = {4.0: (-(n - 1) / 4, 4.0, (n - 1) / 4), 6.0: (-(n - 1) / 3, 2.0, (n - 1) / 3)}[q]
    results = _norms(g, q, Rs, cfg.threads)
    rhs = lp_surface_norm(g, p, s)
    tag = f"q{q:g}"
    for R, res in zip(Rs, results):
        rows.append((tag, k, q, R, res.value, res.quad_error, res.tail_bound, rhs))
    rep = _fit(f"restriction.{tag}.k{k}", Rs, results, predicted, "upper", rhs)
    rep.notes.update(p=p, s=s)
    return [rep]

