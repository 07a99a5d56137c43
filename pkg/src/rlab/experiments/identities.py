"""Exact identities of the extension operator, checked numerically: Parseval on
spheres, modal vs direct evaluation, parabolic rescaling and conjugate
symmetry for real data."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..extension import extension_direct, extension_modal, rescale_dyadic
from ..parallel import ordered_map
from ..spherical import BumpProfile, ModeIndex, SurfaceFunction, harmonic_dimension, parseval_check
from .config import SuiteConfig
from .report import SuiteResult, check
from .rng import stream

COLUMNS = ("claim", "n", "k", "M", "t", "r", "deviation", "value")
POINTS_PER_MODE = {2: 50, 3: 12}
MAX_DEGREE = {2: 5, 3: 2}
RESCALE_M = (2.0, 4.0, 8.0)
PARSEVAL_TOL = 1e-10
MODAL_TOL = 1e-6
RESCALE_TOL = 1e-8
CONJ_TOL = 1e-8


def sample_points(seed: int, stream_id: int, n: int, count: int, t_max: float, r_max: float):
    rng = stream(seed, 3, stream_id)
    t = rng.uniform(-t_max, t_max, count)
    direction = rng.normal(size=(count, n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = r_max * rng.uniform(0, 1, count) ** (1 / n)
    return t, direction * r[:, None]


def _profile(k: int, l: int) -> BumpProfile:
    # distinct, slightly modulated profiles per mode
    return BumpProfile(center=1.5 + 0.02 * k, width=0.4, amplitude=1.0 + 0.1 * l, poly=(1.0, 0.3 * (k % 3)))


def full_surface(n: int, kmax: int) -> SurfaceFunction:
    modes = [(ModeIndex(n, k, l), _profile(k, l)) for k in range(kmax + 1)
             for l in range(1, harmonic_dimension(n, k) + 1)]
    return SurfaceFunction(n, tuple(modes))


def run(cfg: SuiteConfig) -> SuiteResult:
    n = cfg.n
    if n not in (2, 3):
        raise DomainError("the identities suite covers n in {2, 3}")
    quad = cfg.quad
    rows, claims = [], []
    g_all = full_surface(n, MAX_DEGREE[n])

    # Parseval on spheres |xi| = rho
    dev = 0.0
    for rho in np.linspace(1.05, 1.95, 7):
        lhs, rhs = parseval_check(g_all, float(rho))
        d = abs(lhs - rhs)
        dev = max(dev, d)
        rows.append(("parseval", n, -1, 1.0, math.nan, rho, d, lhs))
    claims.append(check(f"identities.parseval.n{n}", dev, PARSEVAL_TOL))

    # modal vs direct, one mode at a time
    modes = [(k, 1) for k in range(MAX_DEGREE[n] + 1)]
    count = POINTS_PER_MODE[n]

    def compare(item):
        mi, (k, l) = item
        g = SurfaceFunction(n, ((ModeIndex(n, k, l), _profile(k, l)),))
        t, x = sample_points(cfg.seed, mi, n, count, 2.0, 8.0)
        a = np.atleast_1d(extension_modal(g, t, x, quad))
        b = np.atleast_1d(extension_direct(g, t, x, quad))
        return k, t, np.linalg.norm(x, axis=1), np.abs(a - b), np.abs(a)
    worst = 0.0
    for k, t, r, d, v in ordered_map(compare, list(enumerate(modes)), cfg.threads):
        worst = max(worst, float(d.max()))
        for ti, ri, di, vi in zip(t, r, d, v):
            rows.append(("modal_direct", n, k, 1.0, ti, ri, di, vi))
    claims.append(check(f"identities.modal_direct.n{n}", worst, MODAL_TOL, points=count * len(modes)))

    # parabolic rescaling: E g_M (t, x) = M^n E g (M^2 t, M x)
    g = full_surface(n, 2)
    worst = 0.0
    for M in RESCALE_M:
        t, x = sample_points(cfg.seed, 100 + int(M), n, 12, 1.0 / M, 4.0 / M)
        lhs = np.atleast_1d(extension_modal(rescale_dyadic(g, M), t, x, quad))
        rhs = M ** n * np.atleast_1d(extension_modal(g, M * M * t, M * x, quad))
        rel = np.abs(lhs - rhs) / np.max(np.abs(rhs))
        worst = max(worst, float(rel.max()))
        for ti, xi, di, vi in zip(t, x, rel, np.abs(lhs)):
            rows.append(("rescaling", n, -1, M, ti, float(np.linalg.norm(xi)), di, vi))
    claims.append(check(f"identities.rescaling.n{n}", worst, RESCALE_TOL, M=list(RESCALE_M)))

    # conjugate symmetry for real data: E g(-t, -x) = conj E g(t, x)
    g = SurfaceFunction(n, tuple((ModeIndex(n, k), _profile(k, 1)) for k in (0, 1, 2)))
    t, x = sample_points(cfg.seed, 200, n, 12, 1.0, 3.0)
    a = np.atleast_1d(extension_direct(g, t, x, quad))
    b = np.atleast_1d(extension_direct(g, -t, -x, quad))
    d = np.abs(b - np.conj(a))
    for ti, xi, di, vi in zip(t, x, d, np.abs(a)):
        rows.append(("conjugate", n, -1, 1.0, ti, float(np.linalg.norm(xi)), di, vi))
    claims.append(check(f"identities.conjugate.n{n}", float(d.max()), CONJ_TOL))
    return SuiteResult("identities", COLUMNS, rows, claims)
