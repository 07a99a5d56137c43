"""Spherical harmonics on S^{n-1}, radial profiles, surface functions on the
dyadic shell and the Hankel formula for the radial factor of each mode."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy import special
from scipy.interpolate import make_interp_spline

from .errors import DomainError, UnsupportedBasis
from .quadrature import QuadratureSpec, gauss_gegenbauer, gauss_legendre, integrate


def harmonic_dimension(n: int, k: int) -> int:
    """Dimension d(k) of degree-k harmonics on S^{n-1}; d(0) = 1."""
    if k < 0:
        return 0
    if n == 1:
        return 1 if k in (0, 1) else 0
    if k == 0:
        return 1
    return (2 * k + n - 2) * math.comb(n + k - 3, k - 1) // k


def angular_weight(n: int, k: int, s: float) -> float:
    """Multiplier of (1 - Delta_omega)^{s/2} on degree-k harmonics."""
    return (1.0 + k * (k + n - 2)) ** (s / 2)


def sphere_area(n: int) -> float:
    """Surface measure of S^{n-1}."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Spherical-harmonic index (k, l) on S^{n-1}; nu = k + (n-2)/2 is derived."""

    n: int
    k: int
    l: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        d = harmonic_dimension(self.n, self.k)
        if not 1 <= self.l <= d:
            raise DomainError(f"l={self.l} outside [1, d(k)={d}] for n={self.n}, k={self.k}")

    @property
    def nu(self) -> float:
        return self.k + (self.n - 2) / 2

    @property
    def zonal(self) -> bool:
        return self.l == 1


# -- basis evaluation ---------------------------------------------------------

def circle_harmonic(k: int, l: int, phi):
    """Orthonormal basis on S^1: 1/sqrt(2 pi), cos(k phi)/sqrt(pi), sin(k phi)/sqrt(pi)."""
    phi = np.asarray(phi, dtype=float)
    if k == 0:
        return np.full(phi.shape, 1 / math.sqrt(2 * math.pi))
    f = np.cos if l == 1 else np.sin
    return f(k * phi) / math.sqrt(math.pi)


def _s2_order(l: int) -> tuple[int, str]:
    if l == 1:
        return 0, "cos"
    return l // 2, ("cos" if l % 2 == 0 else "sin")


def _s2_harmonic(k: int, l: int, x: np.ndarray) -> np.ndarray:
    m, kind = _s2_order(l)
    ct = np.clip(x[..., 2], -1.0, 1.0)
    phi = np.arctan2(x[..., 1], x[..., 0])
    lognorm = 0.5 * (math.log((2 * k + 1) / (4 * math.pi)) + math.lgamma(k - m + 1) - math.lgamma(k + m + 1))
    p = special.lpmv(m, k, ct) * math.exp(lognorm)
    if m == 0:
        return p
    ang = np.cos(m * phi) if kind == "cos" else np.sin(m * phi)
    return math.sqrt(2) * p * ang


@lru_cache(maxsize=256)
def _zonal_norm(n: int, k: int) -> float:
    lam = (n - 2) / 2
    # int_{-1}^1 (C_k^lam)^2 (1-t^2)^(lam-1/2) dt
    logh = (math.log(math.pi) + (1 - 2 * lam) * math.log(2) + math.lgamma(k + 2 * lam)
            - math.lgamma(k + 1) - math.log(k + lam) - 2 * math.lgamma(lam))
    return 1 / math.sqrt(sphere_area(n - 1) * math.exp(logh))


def eval_harmonic(idx: ModeIndex, points) -> np.ndarray:
    """Value of the real orthonormal harmonic Y_{k,l} at unit vectors ``points`` (..., n).

    n = 2: Fourier basis in the polar angle. n = 3: real spherical harmonics
    with polar axis e_3; l = 1 is m = 0, l = 2j is cos(j phi), l = 2j+1 is
    sin(j phi). n >= 4: zonal harmonics about e_n only.
    """
    x = np.asarray(points, dtype=float)
    n = idx.n
    if x.shape[-1] != n:
        raise DomainError(f"points must have last axis {n}")
    if n == 1:
        v = np.full(x.shape[:-1], 1 / math.sqrt(2))
        return v if idx.k == 0 else v * np.sign(x[..., 0])
    if n == 2:
        return circle_harmonic(idx.k, idx.l, np.arctan2(x[..., 1], x[..., 0]))
    if n == 3:
        return _s2_harmonic(idx.k, idx.l, x)
    if idx.l != 1:
        raise UnsupportedBasis(f"only zonal harmonics are implemented for n={n}")
    lam = (n - 2) / 2
    return _zonal_norm(n, idx.k) * special.eval_gegenbauer(idx.k, lam, np.clip(x[..., -1], -1, 1))


def check_basis(idx: ModeIndex) -> None:
    if idx.n >= 4 and idx.l != 1:
        raise UnsupportedBasis(f"only zonal harmonics are implemented for n={idx.n}")


def sphere_quadrature(n: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (m, n) and weights on S^{n-1} exact for polynomials of the given degree.

    For n >= 4 the rule lives on a meridian and is exact only for zonal
    integrands (functions of x_n), which is all the implemented basis needs.
    """
    degree = max(int(degree), 1)
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.ones(2)
    if n == 2:
        m = degree + 1
        phi = 2 * math.pi * np.arange(m) / m
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.full(m, 2 * math.pi / m)
    if n == 3:
        t, wt = gauss_legendre(degree // 2 + 1)
        m = degree + 1
        phi = 2 * math.pi * np.arange(m) / m
        st = np.sqrt(1 - t * t)
        pts = np.stack(
            [np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)), np.repeat(t[:, None], m, axis=1)], axis=-1
        ).reshape(-1, 3)
        w = np.outer(wt, np.full(m, 2 * math.pi / m)).ravel()
        return pts, w
    t, w = gauss_gegenbauer(degree // 2 + 1, (n - 2) / 2)
    pts = np.zeros((t.size, n))
    pts[:, 0] = np.sqrt(1 - t * t)
    pts[:, -1] = t
    return pts, w * sphere_area(n)


# -- radial profiles ----------------------------------------------------------

def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    inside = np.abs(u) < 1
    ui = u[inside]
    out[inside] = np.exp(1 - 1 / (1 - ui * ui))
    return out


@dataclass(frozen=True)
class BumpProfile:
    """a(rho) = amplitude * exp(1 - 1/(1-u^2)) * P(rho - center), u = (rho - center)/width.

    ``poly`` holds ascending coefficients of the modulation P (empty means 1).
    """

    center: float = 1.5
    width: float = 0.45
    amplitude: complex = 1.0
    poly: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "poly", tuple(float(c) for c in self.poly))
        if not self.width > 0:
            raise DomainError("bump width must be positive")
        lo, hi = self.support
        if lo < 1 - 1e-12 or hi > 2 + 1e-12:
            raise DomainError(f"bump support [{lo}, {hi}] leaves [1, 2]")

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.width, self.center + self.width

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        v = self.amplitude * _bump((rho - self.center) / self.width)
        if self.poly:
            v = v * np.polynomial.polynomial.polyval(rho - self.center, self.poly)
        return v

    def scaled(self, factor: complex) -> "BumpProfile":
        return BumpProfile(self.center, self.width, self.amplitude * factor, self.poly)


@dataclass(frozen=True, eq=False)
class SampledProfile:
    """Profile interpolated from samples on a grid inside [1, 2]; zero outside the grid."""

    nodes: np.ndarray
    values: np.ndarray
    order: int = 3
    _spline: object = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        y = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.shape != y.shape or x.size < self.order + 1:
            raise DomainError("sampled profile needs matching 1-D nodes/values")
        if np.any(np.diff(x) <= 0):
            raise DomainError("profile nodes must increase")
        if x[0] < 1 - 1e-12 or x[-1] > 2 + 1e-12:
            raise DomainError("profile nodes must lie in [1, 2]")
        if self.order not in (1, 3, 5):
            raise DomainError("interpolation order must be 1, 3 or 5")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "_spline", make_interp_spline(x, y, k=self.order))

    @property
    def support(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        lo, hi = self.support
        inside = (rho >= lo) & (rho <= hi)
        out = np.zeros(rho.shape, dtype=complex)
        out[inside] = self._spline(rho[inside])
        return out

    def scaled(self, factor: complex) -> "SampledProfile":
        return SampledProfile(self.nodes, self.values * factor, self.order)


RadialProfile = Union[BumpProfile, SampledProfile]


@dataclass(frozen=True, eq=False)
class SurfaceFunction:
    """g(xi) = sum a_{k,l}(|xi|/M) Y_{k,l}(xi/|xi|), a finite expansion on the shell M <= |xi| <= 2M."""

    n: int
    modes: tuple = ()
    M: float = 1.0

    def __post_init__(self):
        modes = tuple((idx, prof) for idx, prof in self.modes)
        object.__setattr__(self, "modes", modes)
        if not self.M > 0:
            raise DomainError("scale M must be positive")
        seen = set()
        for idx, _ in modes:
            if idx.n != self.n:
                raise DomainError(f"mode {idx} does not live in dimension {self.n}")
            if idx in seen:
                raise DomainError(f"duplicate mode {idx}")
            seen.add(idx)

    @property
    def indices(self) -> list[ModeIndex]:
        return [idx for idx, _ in self.modes]

    @property
    def is_zero(self) -> bool:
        return not self.modes

    @property
    def max_degree(self) -> int:
        return max((idx.k for idx, _ in self.modes), default=0)

    @property
    def support(self) -> tuple[float, float]:
        """Radial support [lo, hi] in frequency units (includes the scale M)."""
        if not self.modes:
            return self.M, 2 * self.M
        lo = min(p.support[0] for _, p in self.modes)
        hi = max(p.support[1] for _, p in self.modes)
        return self.M * lo, self.M * hi

    def with_scale(self, M: float) -> "SurfaceFunction":
        return SurfaceFunction(self.n, self.modes, M)

    def scaled(self, factor: complex) -> "SurfaceFunction":
        return SurfaceFunction(self.n, tuple((i, p.scaled(factor)) for i, p in self.modes), self.M)

    def profile_values(self, rho) -> np.ndarray:
        """Array (modes, len(rho)) of a_{k,l}(rho / M)."""
        rho = np.asarray(rho, dtype=float)
        if not self.modes:
            return np.zeros((0,) + rho.shape, dtype=complex)
        return np.stack([np.asarray(p(rho / self.M), dtype=complex) for _, p in self.modes])

    def harmonic_values(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if not self.modes:
            return np.zeros((0,) + pts.shape[:-1])
        return np.stack([eval_harmonic(idx, pts) for idx, _ in self.modes])

    def polar(self, rho, points) -> np.ndarray:
        """g(rho * omega) on the tensor grid (len(rho), len(points))."""
        a = self.profile_values(rho)
        y = self.harmonic_values(points)
        if a.shape[0] == 0:
            return np.zeros(np.shape(rho) + np.shape(points)[:-1], dtype=complex)
        return np.einsum("mi,mj->ij", a, y)

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        rho = np.linalg.norm(xi, axis=-1)
        safe = np.where(rho > 0, rho, 1.0)
        omega = xi / safe[..., None]
        out = np.zeros(rho.shape, dtype=complex)
        for idx, p in self.modes:
            out += p(rho / self.M) * eval_harmonic(idx, omega)
        return out


# -- Hankel formula -------------------------------------------------------------

def radial_kernel(nu, n: int, r, rho):
    """r^{-(n-2)/2} J_nu(2 pi r rho), continued to r = 0 (broadcasts over nu, r, rho)."""
    nu0 = (n - 2) / 2
    nn, rr, pp = np.broadcast_arrays(np.asarray(nu, float), np.asarray(r, float), np.asarray(rho, float))
    pos = rr > 0
    safe = np.where(pos, rr, 1.0)
    out = safe ** (-nu0) * special.jv(nn, 2 * math.pi * safe * pp)
    if not np.all(pos):
        with np.errstate(divide="ignore", invalid="ignore"):
            lim = np.where(np.abs(nn - nu0) < 1e-12, (math.pi * pp) ** nu0 / special.gamma(nu0 + 1), 0.0)
        out = np.where(pos, out, lim)
    return out


def hankel_mode(idx: ModeIndex, a: RadialProfile, r, quad: QuadratureSpec | None = None, M: float = 1.0):
    """2 pi i^k r^{-(n-2)/2} int J_nu(2 pi r rho) a(rho/M) rho^{n/2} drho.

    This is the radial factor of the (k, l) mode of the inverse Fourier
    transform of a(|xi|/M) Y_{k,l}(xi/|xi|).
    """
    quad = quad or QuadratureSpec()
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise DomainError("radius must be nonnegative")
    lo, hi = (M * s for s in a.support)
    n = idx.n

    def f(rho):
        return radial_kernel(idx.nu, n, r_arr[:, None], rho[None, :]) * a(rho / M) * rho ** (n / 2)

    scale = max(1.0, float(np.max(np.abs(a(np.linspace(*a.support, 33))))) * hi ** (n / 2))
    val, _ = integrate(f, lo, hi, quad, rate=2 * math.pi * float(r_arr.max()) + 1.0, tol=quad.tolerance * scale)
    out = 2 * math.pi * mode_sign(idx.k) * np.asarray(val)
    return complex(out[0]) if np.ndim(r) == 0 else out


def parseval_check(g: SurfaceFunction, rho: float, degree: int | None = None) -> tuple[float, float]:
    """(angular L^2 norm of g(rho .), l^2 norm of the coefficients a(rho/M))."""
    if g.n >= 4:
        raise UnsupportedBasis("Parseval check needs the full basis (n <= 3)")
    if g.is_zero:
        return 0.0, 0.0
    degree = degree if degree is not None else 2 * g.max_degree + 4
    pts, w = sphere_quadrature(g.n, degree)
    vals = g.polar(np.array([rho]), pts)[0]
    lhs = math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))
    rhs = math.sqrt(float(np.sum(np.abs(g.profile_values(np.array([rho]))[:, 0]) ** 2)))
    return lhs, rhs


def mode_sign(k: int) -> complex:
    """i^k, exact for integer k."""
    return (1, 1j, -1, -1j)[k % 4]


def unit_vector(theta: Sequence[float] | float, n: int) -> np.ndarray:
    """Unit vector from polar angle(s): n=2 angle phi; n=3 (polar, azimuth)."""
    if n == 1:
        return np.array([1.0 if float(np.atleast_1d(theta)[0]) < math.pi / 2 else -1.0])
    if n == 2:
        th = float(np.atleast_1d(theta)[0])
        return np.array([math.cos(th), math.sin(th)])
    if n == 3:
        th, ph = (list(np.atleast_1d(theta)) + [0.0])[:2]
        return np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    raise UnsupportedBasis("angle parametrisation implemented for n <= 3")


__all__ = [
    "ModeIndex", "BumpProfile", "SampledProfile", "SurfaceFunction", "RadialProfile",
    "harmonic_dimension", "angular_weight", "eval_harmonic", "circle_harmonic",
    "sphere_quadrature", "sphere_area", "hankel_mode", "radial_kernel", "parseval_check",
    "mode_sign", "unit_vector", "check_basis",
]
