"""Bessel functions J_nu(r) of real order: quadrature evaluators, regime
classification, asymptotic bounds and the oscillatory decomposition
J = sqrt(2/pi) cos(theta(r)) / (r^2 - nu^2)^(1/4) + h_nu(r)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import special
from scipy.optimize import brentq

from .errors import DomainError, NonConvergent
from .quadrature import (
    QuadratureSpec,
    gauss_gegenbauer,
    gauss_genlaguerre,
    integrate,
    MAX_GAUSS_NODES,
)

EPS = np.finfo(float).eps
# constant in the remainder bound for h_nu; fitted values are reported by the bessel suite
BC_DEFAULT_C = 1.0
CRUDE_C = 2.0


class BesselRegime(enum.Enum):
    EXPONENTIAL = "Exponential"
    TRANSITION = "Transition"
    OSCILLATORY = "Oscillatory"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BesselValue:
    value: float
    method: str
    est_error: float


@dataclass(frozen=True)
class OscillatoryDecomposition:
    main_amplitude: float
    phase: float
    remainder_bound: float

    @property
    def main(self) -> float:
        return math.sqrt(2 / math.pi) * math.cos(self.phase) * self.main_amplitude


@dataclass(frozen=True)
class FittedConstants:
    """Constants for the three regime bounds; see ``fit_constants``."""

    C_exp: float = 1.0
    c_exp: float = 1e-3
    C_trans: float = 1.0
    C_osc: float = 1.0


def default_tolerance(nu: float) -> float:
    return 1e-10 if nu <= 20 else 1e-8


def _spec_for(nu: float, quad: QuadratureSpec | None) -> QuadratureSpec:
    if quad is None:
        return QuadratureSpec(tolerance=default_tolerance(nu))
    return quad


def _check_args(nu: float, r: float) -> None:
    if not nu > -0.5:
        raise DomainError(f"order nu={nu} must exceed -1/2")
    if not r >= 0:
        raise DomainError(f"argument r={r} must be nonnegative")


# -- Poisson integral -------------------------------------------------------

def _log_real_scale(nu: float, r: float) -> float:
    # log of (r/2)^nu / Gamma(nu+1), the size of the real-line Poisson sum
    return nu * math.log(r / 2) - math.lgamma(nu + 1)


def _log_contour_scale(nu: float, r: float) -> float:
    x0 = max(nu - 0.5, 0.0) / (2 * r)
    return 0.5 * math.log(2 / (math.pi * r)) + 0.5 * (nu - 0.5) * math.log1p(x0 * x0)


def _poisson_real(nu: float, r: float, n: int) -> float:
    s, w = gauss_gegenbauer(n, nu)
    return math.exp(_log_real_scale(nu, r)) * float(w @ np.cos(s * r))


def _poisson_contour(nu: float, r: float, n: int) -> float:
    # Poisson integral with the s-path pushed to s = 1 + i v/r
    v, w = gauss_genlaguerre(n, nu - 0.5)
    z = w @ (v / (2 * r) - 1j) ** (nu - 0.5)
    return math.sqrt(2 / (math.pi * r)) * float(np.imag(np.exp(1j * r) * z))


def series_floor(nu: float, r: float) -> tuple[str, float]:
    """Cheaper of the two Poisson paths and its rounding floor (absolute)."""
    if r == 0:
        return "real", 0.0
    real = _log_real_scale(nu, r)
    contour = _log_contour_scale(nu, r)
    if real <= contour:
        return "real", EPS * 8 * math.exp(min(real, 700.0))
    return "contour", EPS * 8 * math.exp(min(contour, 700.0))


def bessel_series(nu: float, r: float, quad: QuadratureSpec | None = None) -> BesselValue:
    """J_nu(r) from the Poisson integral with weight (1 - s^2)^(nu - 1/2).

    Gauss-Gegenbauer nodes carry the weight exactly. When the cosine sum
    would cancel badly (r beyond about 3 nu / 4) the integral is evaluated on
    a deformed path with generalised Laguerre nodes instead. The node count
    doubles until two estimates agree.
    """
    _check_args(nu, r)
    quad = _spec_for(nu, quad)
    if r == 0:
        return BesselValue(1.0 if nu == 0 else 0.0, "series", 0.0)
    path, floor = series_floor(nu, r)
    if floor > quad.tolerance:
        raise NonConvergent(f"series rounding floor {floor:.2e} exceeds tolerance at nu={nu}, r={r}")
    fn = _poisson_real if path == "real" else _poisson_contour
    n = 16 + (int(r) if path == "real" else 0)
    n = min(1 << max(4, math.ceil(math.log2(n))), MAX_GAUSS_NODES // 2)
    prev = fn(nu, r, n)
    while n < MAX_GAUSS_NODES:
        n *= 2
        cur = fn(nu, r, n)
        err = abs(cur - prev) + floor + 4 * EPS * abs(cur)
        if abs(cur - prev) < quad.tolerance / 2:
            return BesselValue(cur, "series", err)
        prev = cur
    raise NonConvergent(f"series did not converge at nu={nu}, r={r}")


# -- Schlafli representation ------------------------------------------------

def schlafli_parts(nu: float, r: float, quad: QuadratureSpec | None = None) -> tuple[float, float, float]:
    """Return (J_tilde, E_nu, err) with J = J_tilde - E_nu.

    J_tilde = (1/pi) int_0^pi cos(r sin t - nu t) dt and
    E_nu = (sin(nu pi)/pi) int_0^inf exp(-r sinh s - nu s) ds, which is
    exactly zero for integer nu.
    """
    _check_args(nu, r)
    quad = _spec_for(nu, quad)
    tol = quad.tolerance / 2

    def osc(t):
        return np.cos(r * np.sin(t) - nu * t)

    jt, err1 = integrate(osc, 0.0, math.pi, quad, rate=r + abs(nu), tol=tol * math.pi)
    jt = float(jt) / math.pi
    err1 = err1 / math.pi + 8 * EPS
    if float(nu).is_integer():
        return jt, 0.0, err1
    sin_nu = math.sin(nu * math.pi)
    if r == 0 and nu <= 0:
        raise DomainError("E_nu diverges at r=0 for nu <= 0")
    smax = brentq(lambda s: r * math.sinh(s) + nu * s - 40.0, 0.0, 200.0)

    def decay(s):
        return np.exp(-(r * np.sinh(s) + nu * s))

    e, err2 = integrate(decay, 0.0, smax, quad, tol=tol)
    e = sin_nu / math.pi * float(e)
    return jt, e, err1 + abs(sin_nu) / math.pi * (err2 + math.exp(-40.0) / max(r + nu, 1e-300))


def bessel_schlafli(nu: float, r: float, quad: QuadratureSpec | None = None) -> BesselValue:
    if r <= 0:
        raise DomainError("Schlafli evaluation needs r > 0")
    jt, e, err = schlafli_parts(nu, r, quad)
    return BesselValue(jt - e, "schlafli", err)


def e_term_bound(nu: float, r: float) -> float:
    """|E_nu(r)| <= |sin(nu pi)| / (pi (r + nu)) since the integrand is below e^{-(r+nu)s}."""
    return abs(math.sin(nu * math.pi)) / (math.pi * (r + nu))


def bessel_closed_form(nu: float, r: float) -> BesselValue:
    """Elementary form J_{1/2}(r) = sqrt(2/(pi r)) sin r."""
    _check_args(nu, r)
    if nu == 0.5:
        v = 0.0 if r == 0 else math.sqrt(2 / (math.pi * r)) * math.sin(r)
    else:
        raise DomainError(f"no closed form implemented for nu={nu}")
    return BesselValue(v, "closed_form", 4 * EPS * max(abs(v), 1.0))


def bessel_j(nu: float, r: float, quad: QuadratureSpec | None = None, method: str = "auto") -> BesselValue:
    """Dispatch between the quadrature evaluators.

    ``auto`` uses the Poisson integral for r <= max(30, 2 nu) when its
    rounding floor is below the tolerance, and the Schlafli integral otherwise.
    """
    _check_args(nu, r)
    quad = _spec_for(nu, quad)
    if method == "series":
        return bessel_series(nu, r, quad)
    if method == "schlafli":
        return bessel_schlafli(nu, r, quad)
    if method == "closed_form":
        return bessel_closed_form(nu, r)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    if r == 0:
        return bessel_series(nu, r, quad)
    if r <= max(30.0, 2 * nu) and series_floor(nu, r)[1] <= quad.tolerance / 10:
        try:
            return bessel_series(nu, r, quad)
        except NonConvergent:
            pass
    return bessel_schlafli(nu, r, quad)


def jv(nu, x):
    """Vectorised J_nu for bulk use inside other evaluators (AMOS via scipy)."""
    return special.jv(nu, x)


# -- regimes and bounds -----------------------------------------------------

def classify_regime(nu: float, r: float) -> BesselRegime:
    """Exponential for r <= nu/2, Oscillatory for r >= 2 nu, Transition between."""
    if not nu > 0 or not r > 0:
        raise DomainError("regimes are defined for nu > 0, r > 0")
    if r <= nu / 2:
        return BesselRegime.EXPONENTIAL
    if r >= 2 * nu:
        return BesselRegime.OSCILLATORY
    return BesselRegime.TRANSITION


def shape_exponential(nu, r, c):
    return np.exp(-c * (np.asarray(nu) + np.asarray(r)))


def shape_transition(nu, r):
    nu = np.asarray(nu, dtype=float)
    a = nu ** (-1 / 3)
    return a * (a * np.abs(np.asarray(r) - nu) + 1) ** (-0.25)


def shape_oscillatory(r):
    r = np.asarray(r, dtype=float)
    return r ** -0.5 + 1 / r


def asymptotic_bound(nu: float, r: float, constants: FittedConstants = FittedConstants()) -> float:
    if nu < 1:
        raise DomainError("asymptotic bounds are stated for nu >= 1")
    regime = classify_regime(nu, r)
    if regime is BesselRegime.EXPONENTIAL:
        return float(constants.C_exp * shape_exponential(nu, r, constants.c_exp))
    if regime is BesselRegime.TRANSITION:
        return float(constants.C_trans * shape_transition(nu, r))
    return float(constants.C_osc * shape_oscillatory(r))


def fit_constants(samples: Iterable[tuple[float, float, float]], c_floor: float = 1e-3) -> tuple[FittedConstants, float]:
    """Fit the regime constants from (nu, r, J_nu(r)) triples.

    C = max |J| / shape in each regime; c = min -log|J| / (nu + r) over the
    exponential samples, floored at ``c_floor``. Returns the constants and
    the unfloored c (nan when there are no exponential samples).
    """
    ce, ct, co = 0.0, 0.0, 0.0
    c_raw = math.inf
    exp_samples = []
    for nu, r, j in samples:
        reg = classify_regime(nu, r)
        if reg is BesselRegime.EXPONENTIAL:
            exp_samples.append((nu, r, abs(j)))
            if j != 0:
                c_raw = min(c_raw, -math.log(abs(j)) / (nu + r))
        elif reg is BesselRegime.TRANSITION:
            ct = max(ct, abs(j) / float(shape_transition(nu, r)))
        else:
            co = max(co, abs(j) / float(shape_oscillatory(r)))
    c = max(c_raw, c_floor) if exp_samples else c_floor
    for nu, r, aj in exp_samples:
        ce = max(ce, aj * math.exp(c * (nu + r)))
    consts = FittedConstants(C_exp=ce or 1.0, c_exp=c, C_trans=ct or 1.0, C_osc=co or 1.0)
    return consts, (c_raw if exp_samples else math.nan)


def crude_bound(nu: float, r: float, C: float = CRUDE_C) -> float:
    """C r^nu / (2^nu Gamma(nu+1/2) Gamma(1/2)) (1 + 1/(nu+1/2)), evaluated in logs.

    With C = 2 this dominates |J_nu(r)|: bound the Poisson integrand by 1 and
    integrate the weight.
    """
    if not nu > -0.5 or r < 0:
        raise DomainError("crude bound needs nu > -1/2 and r >= 0")
    if r == 0:
        if nu > 0:
            return 0.0
        logv = 0.0
    else:
        logv = nu * (math.log(r) - math.log(2))
    logv += math.log(C) - math.lgamma(nu + 0.5) - 0.5 * math.log(math.pi) + math.log1p(1 / (nu + 0.5))
    if logv > 709.0:
        return math.inf
    return math.exp(logv)


# -- oscillatory decomposition -----------------------------------------------

def phase_theta(nu: float, r, order: int = 0):
    """theta(r) = sqrt(r^2 - nu^2) - nu arccos(nu/r) - pi/4 and its first three derivatives."""
    r = np.asarray(r, dtype=float)
    if nu < 0:
        raise DomainError("phase needs nu >= 0")
    if np.any(r <= nu):
        raise DomainError("phase is defined for r > nu")
    root = np.sqrt(r * r - nu * nu)
    if order == 0:
        out = root - nu * np.arccos(nu / r) - math.pi / 4
    elif order == 1:
        out = root / r
    elif order == 2:
        out = nu * nu / (r * r * root)
    elif order == 3:
        # derivative of nu^2 r^-2 (r^2 - nu^2)^-1/2
        out = nu * nu / r * root ** -3 * (-3 + 2 * nu * nu / (r * r))
    else:
        raise DomainError("order must be 0..3")
    return out[()] if out.ndim == 0 else out


def main_term(nu: float, r):
    """sqrt(2/pi) cos(theta(r)) / (r^2 - nu^2)^(1/4)."""
    r = np.asarray(r, dtype=float)
    return math.sqrt(2 / math.pi) * np.cos(phase_theta(nu, r)) * (r * r - nu * nu) ** -0.25


def main_exponential(nu: float, r):
    """I_nu(r) = sqrt(2/pi) e^{i theta(r)} / (r^2 - nu^2)^(1/4)."""
    r = np.asarray(r, dtype=float)
    return math.sqrt(2 / math.pi) * np.exp(1j * phase_theta(nu, r)) * (r * r - nu * nu) ** -0.25


def h_remainder(nu: float, r):
    """h_nu(r) = J_nu(r) - main term (bulk, scipy J)."""
    return jv(nu, r) - main_term(nu, r)


def bc_threshold(nu: float) -> float:
    return nu + nu ** (1 / 3)


def bc_remainder_shape(nu: float, r):
    """(nu^2 / (r^2-nu^2)^(7/4) + 1/r) on [nu + nu^(1/3), 2 nu]; 1/r beyond."""
    r = np.asarray(r, dtype=float)
    near = nu * nu * (r * r - nu * nu) ** -1.75 + 1 / r
    out = np.where(r < 2 * nu, near, 1 / r)
    return out[()] if out.ndim == 0 else out


def bc_decompose(nu: float, r: float, C: float = BC_DEFAULT_C) -> OscillatoryDecomposition:
    if nu < 0:
        raise DomainError("decomposition needs nu >= 0")
    if r <= bc_threshold(nu):
        raise DomainError(f"r={r} must exceed nu + nu^(1/3) = {bc_threshold(nu)}")
    amp = (r * r - nu * nu) ** -0.25
    return OscillatoryDecomposition(
        main_amplitude=amp,
        phase=float(phase_theta(nu, r)),
        remainder_bound=C * float(bc_remainder_shape(nu, r)),
    )


def project_oscillatory(nu: float, r0: float, order: int = 64) -> tuple[complex, complex]:
    """Coefficients a_+-, the projection of sqrt(r) J_nu(r) onto e^{+-ir} over [r0 - pi, r0 + pi]."""
    from .quadrature import panel_rule

    x, w = panel_rule(r0 - math.pi, r0 + math.pi, 4, order // 4)
    f = np.sqrt(x) * jv(nu, x)
    ap = complex(np.sum(w * f * np.exp(-1j * x))) / (2 * math.pi)
    am = complex(np.sum(w * f * np.exp(1j * x))) / (2 * math.pi)
    return ap, am
