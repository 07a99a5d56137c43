"""The paraboloid extension operator

    E g(t, x) = int g(xi) exp(2 pi i (x.xi + t |xi|^2)) dxi

by direct tensor quadrature and by spherical-harmonic modes, together with
the model operators T_nu, H_nu, the quadrilinear kernel K and the free
Schroedinger evolution."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .besself import bc_threshold, h_remainder, jv, main_exponential, phase_theta
from .errors import DomainError, UnsupportedBasis
from .quadrature import (
    QuadratureSpec,
    chirp_grid,
    chirp_transform,
    gauss_legendre,
    integrate,
    panel_rule,
)
from .spherical import (
    RadialProfile,
    SurfaceFunction,
    check_basis,
    eval_harmonic,
    mode_sign,
    radial_kernel,
)

# Open question on the sign of the time phase: the modal formula agrees with
# the direct integral when the time factor is exp(+2 pi i t rho^2) together
# with the i^k prefactor; the suites record this choice.
MODAL_TIME_SIGN = +1


def chi(u):
    """Bump exp(1 - 1/(1 - (4u-3)^2)) supported exactly on [1/2, 1]."""
    u = np.asarray(u, dtype=float)
    v = 4 * u - 3
    out = np.zeros(u.shape)
    inside = np.abs(v) < 1
    out[inside] = np.exp(1 - 1 / (1 - v[inside] ** 2))
    return out[()] if out.ndim == 0 else out


def _smooth_step(x):
    # C-infinity step: 0 for x <= 0, 1 for x >= 1
    x = np.asarray(x, dtype=float)
    a = np.where(x > 0, np.exp(-1 / np.where(x > 0, x, 1)), 0.0)
    b = np.where(x < 1, np.exp(-1 / np.where(x < 1, 1 - x, 1)), 0.0)
    return a / (a + b)


def phi_cut(rho):
    """Smooth cutoff supported in (1/2, 4), identically 1 on [1, 2]."""
    rho = np.asarray(rho, dtype=float)
    out = _smooth_step(2 * rho - 1) * _smooth_step(2 - rho / 2)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(c) for c in np.atleast_1d(self.x)))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def theta(self) -> np.ndarray:
        """Unit direction of x (e_1 when x = 0)."""
        v = np.asarray(self.x)
        r = np.linalg.norm(v)
        if r == 0:
            e = np.zeros_like(v)
            e[0] = 1.0
            return e
        return v / r


def _points(t, x, n: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = np.asarray(x, dtype=float).reshape(-1, n)
    if t.size == 1 and x.shape[0] > 1:
        t = np.full(x.shape[0], t[0])
    if x.shape[0] == 1 and t.size > 1:
        x = np.repeat(x, t.size, axis=0)
    if t.size != x.shape[0]:
        raise DomainError("t and x must describe the same number of points")
    return t, x


def _scalar_or_array(vals: np.ndarray, t) -> complex | np.ndarray:
    return complex(vals[0]) if np.ndim(t) == 0 and vals.size == 1 else vals


def _value_scale(g: SurfaceFunction) -> float:
    """Rough size of |E g|, used to turn relative tolerances into absolute ones."""
    lo, hi = g.support
    if g.is_zero:
        return 1.0
    rho = np.linspace(lo, hi, 65)
    amax = float(np.max(np.abs(g.profile_values(rho))))
    return max(amax * hi ** g.n * len(g.modes), 1e-300)


# -- direct quadrature ------------------------------------------------------------

def _direct_one(g: SurfaceFunction, t: float, x: np.ndarray, quad: QuadratureSpec) -> complex:
    n = g.n
    lo, hi = g.support
    r = float(np.linalg.norm(x))
    kmax = g.max_degree
    rate = 2 * math.pi * (r + 2 * abs(t) * hi) + 1.0
    tol = quad.tolerance * _value_scale(g)

    if n == 1:
        def f(rho):
            out = 0
            for sgn in (1.0, -1.0):
                xi = sgn * rho
                out = out + g(xi[:, None]) * np.exp(2j * math.pi * (x[0] * xi + t * rho * rho))
            return out

        val, _ = integrate(f, lo, hi, quad, rate=rate, tol=tol)
        return complex(val)

    base = math.ceil(1.25 * 2 * math.pi * r * hi) + kmax + 40

    def angular(deg: int):
        if n == 2:
            m = deg + 1
            ph = 2 * math.pi * np.arange(m) / m
            return np.stack([np.cos(ph), np.sin(ph)], -1), np.full(m, 2 * math.pi / m)
        if n == 3:
            ct, wt = gauss_legendre(deg // 2 + 1)
            m = deg + 1
            ph = 2 * math.pi * np.arange(m) / m
            st = np.sqrt(1 - ct * ct)
            pts = np.stack(
                [np.outer(st, np.cos(ph)), np.outer(st, np.sin(ph)), np.repeat(ct[:, None], m, 1)], -1
            ).reshape(-1, 3)
            return pts, np.outer(wt, np.full(m, 2 * math.pi / m)).ravel()
        raise UnsupportedBasis("direct quadrature implemented for n <= 3")

    def estimate(deg: int):
        pts, w = angular(deg)
        proj = pts @ x

        def f(rho):
            gv = g.polar(rho, pts)  # (nrho, nang)
            ph = np.exp(2j * math.pi * (rho[:, None] * proj[None, :] + t * (rho * rho)[:, None]))
            return ((gv * ph) @ w) * rho ** (n - 1)

        val, _ = integrate(f, lo, hi, quad, rate=rate, tol=tol)
        return complex(val)

    prev = estimate(base)
    deg = base
    for _ in range(4):
        deg = int(deg * 1.5) + 8
        cur = estimate(deg)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def extension_direct(g: SurfaceFunction, t, x, quad: QuadratureSpec | None = None):
    """E g(t, x) by polar tensor quadrature (n in {1, 2, 3}); no Bessel functions involved."""
    if g.n not in (1, 2, 3):
        raise UnsupportedBasis("direct quadrature implemented for n <= 3")
    quad = quad or QuadratureSpec()
    ts, xs = _points(t, x, g.n)
    if g.is_zero:
        return _scalar_or_array(np.zeros(ts.size, dtype=complex), t)
    vals = np.array([_direct_one(g, ts[i], xs[i], quad) for i in range(ts.size)])
    return _scalar_or_array(vals, t)


# -- modal evaluation ----------------------------------------------------------------

def extension_modal(g: SurfaceFunction, t, x, quad: QuadratureSpec | None = None):
    """E g(t, x) = 2 pi r^{-(n-2)/2} sum_k i^k Y_k(x/r) int e^{2 pi i t rho^2} J_nu(2 pi r rho) a_k(rho/M) rho^{n/2} drho."""
    quad = quad or QuadratureSpec()
    n = g.n
    for idx in g.indices:
        check_basis(idx)
    ts, xs = _points(t, x, n)
    if g.is_zero:
        return _scalar_or_array(np.zeros(ts.size, dtype=complex), t)
    lo, hi = g.support
    tol = quad.tolerance * _value_scale(g)
    nus = np.array([idx.nu for idx in g.indices])
    signs = np.array([mode_sign(idx.k) for idx in g.indices])
    out = np.empty(ts.size, dtype=complex)
    for i in range(ts.size):
        ti, xi = ts[i], xs[i]
        r = float(np.linalg.norm(xi))
        omega = xi / r if r > 0 else np.eye(n)[0]
        y = np.array([float(eval_harmonic(idx, omega[None, :])[0]) for idx in g.indices])

        def f(rho):
            ker = radial_kernel(nus[:, None], n, r, rho[None, :])
            amp = g.profile_values(rho) * rho ** (n / 2)
            return ker * amp * np.exp(MODAL_TIME_SIGN * 2j * math.pi * ti * rho * rho)

        rate = 2 * math.pi * (r + 2 * abs(ti) * hi) + 1.0
        radial, _ = integrate(f, lo, hi, quad, rate=rate, tol=tol / max(len(nus), 1))
        out[i] = 2 * math.pi * np.sum(signs * y * radial)
    return _scalar_or_array(out, t)


def rescale_dyadic(g: SurfaceFunction, M: float) -> SurfaceFunction:
    """g_M(xi) = g(xi / M); then E g_M(t, x) = M^n E g(M^2 t, M x)."""
    if not M > 0 or abs(math.log2(M) - round(math.log2(M))) > 1e-12:
        raise DomainError(f"M={M} is not dyadic")
    return g.with_scale(g.M * M)


def schrodinger_evolve(u0_hat: SurfaceFunction, t, x, quad: QuadratureSpec | None = None):
    """e^{it Delta} u0 (x) = int e^{i(t|xi|^2 + x.xi)} u0_hat(xi) dxi = (2 pi)^n E g'(2 pi t, x), g'(eta) = u0_hat(2 pi eta)."""
    g = u0_hat.with_scale(u0_hat.M / (2 * math.pi))
    ts, xs = _points(t, x, u0_hat.n)
    vals = (2 * math.pi) ** u0_hat.n * np.atleast_1d(extension_modal(g, 2 * math.pi * ts, xs, quad))
    return _scalar_or_array(vals, t)


# -- model operators -------------------------------------------------------------------

def _check_operator_domain(kind: str, nu: float, a: RadialProfile, R: float) -> None:
    lo = a.support[0]
    rmin = R / 2
    limit = bc_threshold(nu) if kind == "T" else nu
    if rmin * lo <= limit:
        raise DomainError(f"r rho must exceed {limit:.4g} on the support; R={R} too small for nu={nu}")


def _operator_kernel(kind: str, nu: float) -> Callable[[np.ndarray], np.ndarray]:
    if kind == "T":
        return lambda z: h_remainder(nu, z)
    if kind == "H":
        return lambda z: main_exponential(nu, z)
    raise DomainError(f"unknown operator {kind!r}")


def _model_operator(kind, nu, a, R, t, r, n, quad):
    quad = quad or QuadratureSpec()
    _check_operator_domain(kind, nu, a, R)
    kern = _operator_kernel(kind, nu)
    t_arr, r_arr = np.broadcast_arrays(np.atleast_1d(np.asarray(t, float)), np.atleast_1d(np.asarray(r, float)))
    lo, hi = a.support
    out = np.zeros(t_arr.shape, dtype=complex)
    w = chi(r_arr / R)
    for i in np.flatnonzero(w > 0):
        ti, ri = t_arr.flat[i], r_arr.flat[i]

        def f(rho):
            return np.exp(-1j * ti * rho * rho) * kern(ri * rho) * a(rho) * rho ** (n / 2) * phi_cut(rho)

        val, _ = integrate(f, lo, hi, quad, rate=ri + 2 * abs(ti) * hi + 1.0)
        out.flat[i] = w.flat[i] * val
    return complex(out.flat[0]) if np.ndim(t) == 0 and np.ndim(r) == 0 else out


def op_T(nu: float, a: RadialProfile, R: float, t, r, n: int = 2, quad: QuadratureSpec | None = None):
    """T_nu a(t, r) = chi(r/R) int e^{-it rho^2} h_nu(r rho) a(rho) rho^{n/2} phi(rho) drho."""
    return _model_operator("T", nu, a, R, t, r, n, quad)


def op_H(nu: float, a: RadialProfile, R: float, t, r, n: int = 2, quad: QuadratureSpec | None = None):
    """H_nu a(t, r) = chi(r/R) int e^{-it rho^2} I_nu(r rho) a(rho) rho^{n/2} phi(rho) drho."""
    return _model_operator("H", nu, a, R, t, r, n, quad)


def kernel_K(R: float, nu: float, rhos, quad: QuadratureSpec | None = None) -> complex:
    """K = int chi^4(r/R) e^{i(theta(rho1 r) - theta(rho2 r) + theta(rho3 r) - theta(rho4 r))} / prod((r rho_i)^2 - nu^2)^{1/4} dr."""
    quad = quad or QuadratureSpec()
    rho = np.asarray(rhos, dtype=float)
    if rho.shape != (4,):
        raise DomainError("kernel needs four frequencies")
    if (R / 2 * rho.min()) ** 2 <= nu * nu:
        raise DomainError("(r rho_i)^2 must exceed nu^2 on [R/2, R]")
    signs = np.array([1.0, -1.0, 1.0, -1.0])

    def f(r):
        z = np.outer(rho, r)
        ph = signs @ phase_theta(nu, z)
        amp = np.prod((z * z - nu * nu) ** -0.25, axis=0)
        return chi(r / R) ** 4 * amp * np.exp(1j * ph)

    scale = R ** -1.0
    val, _ = integrate(f, R / 2, R, quad, rate=float(np.abs(signs @ rho)) + 1.0 / R, tol=quad.tolerance * scale)
    return complex(val)


def kernel_decay_shape(R: float, rhos, N: int = 2) -> float:
    r1, r2, r3, _ = rhos
    return R ** -1.0 * (1 + R * abs(r1 * r1 - r2 * r2) * abs(r3 * r3 - r2 * r2)) ** (-N)


# -- time series on radial slabs (FFT in t after tau = rho^2) ---------------------------------

TAU_SAMPLES = 128


def _profile_rate(lo: float, hi: float) -> float:
    # rate that puts at least TAU_SAMPLES nodes across the tau support of the profile
    return math.pi * TAU_SAMPLES / (4 * (hi * hi - lo * lo))


def mode_time_series(g: SurfaceFunction, r: np.ndarray, T: float, dt: float, time_factor: float = 1.0):
    """Radial factors F_m(t, r) of every mode of E g on |t| <= T.

    E g(t, r omega) = sum_m F_m(t, r) Y_m(omega). ``time_factor`` rescales
    time (used for the Schroedinger normalisation). Returns (t, F) with F of
    shape (modes, len(r), len(t)).
    """
    n = g.n
    lo, hi = g.support
    r = np.asarray(r, dtype=float)
    c = MODAL_TIME_SIGN * 2 * math.pi * time_factor
    rate = max(math.pi * float(np.max(r, initial=0.0)) / lo, _profile_rate(lo, hi))
    grid = chirp_grid(lo * lo, hi * hi, c, T, dt, rate)
    tau = grid.tau
    rho = np.sqrt(tau)
    prof = g.profile_values(rho) * (rho ** (n / 2) / (2 * rho))[None, :]
    out = np.empty((len(g.modes), r.size, grid.t.size), dtype=complex)
    for m, idx in enumerate(g.indices):
        ker = radial_kernel(idx.nu, n, r[:, None], rho[None, :])
        out[m] = 2 * math.pi * mode_sign(idx.k) * chirp_transform(grid, ker * prof[m][None, :])
    return grid.t, out


def operator_time_series(kind: str, nu: float, a: RadialProfile, R: float, r: np.ndarray, T: float, dt: float, n: int = 2):
    """T_nu a or H_nu a on |t| <= T at radii r; returns (t, values (len(r), len(t)))."""
    _check_operator_domain(kind, nu, a, R)
    kern = _operator_kernel(kind, nu)
    lo, hi = a.support
    r = np.asarray(r, dtype=float)
    rate = max(float(r.max()) / (2 * lo), _profile_rate(lo, hi))
    grid = chirp_grid(lo * lo, hi * hi, -1.0, T, dt, rate)
    rho = np.sqrt(grid.tau)
    prof = a(rho) * rho ** (n / 2) * phi_cut(rho) / (2 * rho)
    w = chi(r / R)
    vals = np.zeros((r.size, grid.t.size), dtype=complex)
    live = np.flatnonzero(w > 0)
    if live.size:
        amp = kern(r[live, None] * rho[None, :]) * prof[None, :]
        vals[live] = w[live, None] * chirp_transform(grid, amp)
    return grid.t, vals


def panel_nodes(a: float, b: float, panels: int, order: int = 16):
    """Convenience re-export for suites that build radial grids."""
    return panel_rule(a, b, panels, order)
