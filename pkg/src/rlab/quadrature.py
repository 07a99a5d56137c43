"""Quadrature building blocks: Gauss rules, refined panel integration and a
chirp-transform engine for integrals of the form int e^{i c t tau} A(tau) dtau."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import fft as sfft
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NonConvergent

MAX_GAUSS_NODES = 2048


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution and stopping rule for oscillatory quadrature.

    Panels are sized so that there are at least ``nodes_per_wavelength``
    Gauss-Legendre nodes per local wavelength, then doubled until two
    successive estimates differ by less than ``tolerance``.
    """

    nodes_per_wavelength: int = 10
    max_panels: int = 1 << 14
    tolerance: float = 1e-10
    order: int = 16

    def __post_init__(self):
        if self.nodes_per_wavelength < 4:
            raise DomainError("nodes_per_wavelength must be >= 4")
        if self.max_panels < 1:
            raise DomainError("max_panels must be >= 1")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.order < 2:
            raise DomainError("order must be >= 2")

    def with_tolerance(self, tol: float) -> "QuadratureSpec":
        return QuadratureSpec(self.nodes_per_wavelength, self.max_panels, tol, self.order)


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a: float, b: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b] with equal panels."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def initial_panels(a: float, b: float, rate: float, quad: QuadratureSpec) -> int:
    """Panel count giving at least nodes_per_wavelength nodes per 2*pi/rate."""
    if rate <= 0:
        return 1
    wavelengths = (b - a) * rate / (2 * math.pi)
    return max(1, math.ceil(wavelengths * quad.nodes_per_wavelength / quad.order))


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadratureSpec,
    rate: float = 0.0,
    tol: float | None = None,
) -> tuple[np.ndarray | complex, float]:
    """Integrate a vectorised ``f`` over [a, b] by panel doubling.

    ``f`` maps a 1-D node array to an array whose last axis runs over the
    nodes; the result keeps the leading axes. ``rate`` is an upper bound on
    the phase derivative of the integrand and fixes the starting panel size.
    Returns ``(value, err)`` where ``err`` is the last successive difference.
    """
    tol = quad.tolerance if tol is None else tol
    if b <= a:
        probe = np.asarray(f(np.array([a])))
        return np.zeros(probe.shape[:-1], dtype=probe.dtype)[()], 0.0
    m = initial_panels(a, b, rate, quad)
    x, w = panel_rule(a, b, m, quad.order)
    prev = np.asarray(f(x)) @ w
    while True:
        m *= 2
        if m > quad.max_panels:
            raise NonConvergent(f"panel cap {quad.max_panels} reached on [{a}, {b}]")
        x, w = panel_rule(a, b, m, quad.order)
        cur = np.asarray(f(x)) @ w
        err = float(np.max(np.abs(cur - prev))) if np.size(cur) else 0.0
        if err < tol:
            return cur[()] if np.ndim(cur) == 0 else cur, err
        prev = cur


def _golub_welsch(diag: np.ndarray, off: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x, v = eigh_tridiagonal(diag, off)
    w = v[0] ** 2
    return x, w / w.sum()


@lru_cache(maxsize=128)
def gauss_gegenbauer(n: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalised weights (sum 1) for the weight (1 - s^2)^(lam - 1/2) on [-1, 1].

    Built from the three-term recurrence so that it stays accurate for large
    ``lam``, where library root finders lose precision.
    """
    if n < 1 or n > MAX_GAUSS_NODES:
        raise DomainError(f"node count {n} outside [1, {MAX_GAUSS_NODES}]")
    if lam <= -0.5:
        raise DomainError("Gegenbauer parameter must exceed -1/2")
    k = np.arange(1, n, dtype=float)
    b = np.empty_like(k)
    if n > 1:
        b[0] = 1.0 / (2.0 * (1.0 + lam))
        kk = k[1:]
        b[1:] = kk * (kk + 2 * lam - 1) / (4 * (kk + lam) * (kk + lam - 1))
    x, w = _golub_welsch(np.zeros(n), np.sqrt(b))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=128)
def gauss_genlaguerre(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalised weights for x^alpha e^{-x} on (0, inf)."""
    if n < 1 or n > MAX_GAUSS_NODES:
        raise DomainError(f"node count {n} outside [1, {MAX_GAUSS_NODES}]")
    if alpha <= -1:
        raise DomainError("Laguerre parameter must exceed -1")
    k = np.arange(n, dtype=float)
    x, w = _golub_welsch(2 * k + alpha + 1, np.sqrt(k[1:] * (k[1:] + alpha)))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def simpson_weights(m: int, h: float) -> np.ndarray:
    """Composite Simpson weights for m (odd) equally spaced nodes."""
    if m < 3 or m % 2 == 0:
        raise DomainError("Simpson rule needs an odd node count >= 3")
    w = np.ones(m)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


@dataclass(frozen=True)
class ChirpGrid:
    """Sampling plan for ``chirp_transform``."""

    t: np.ndarray
    tau: np.ndarray
    dtau: float
    nfft: int
    index: np.ndarray
    phase: np.ndarray


def chirp_grid(tau_lo: float, tau_hi: float, c: float, T: float, dt: float, rate: float = 0.0) -> ChirpGrid:
    """Plan the evaluation of F(t) = int_{tau_lo}^{tau_hi} e^{i c t tau} A(tau) dtau on |t| <= T.

    The substitution s = c t / 2pi turns F into a Fourier integral sampled
    by one FFT. The tau step avoids aliasing on the window and resolves an
    amplitude whose phase moves at most ``rate`` radians per unit tau.
    """
    if c == 0 or T <= 0 or dt <= 0:
        raise DomainError("chirp grid needs c != 0, T > 0, dt > 0")
    width = tau_hi - tau_lo
    # output band: keep dt below the Nyquist spacing of the tau support
    dt = min(dt, 2 * math.pi / (abs(c) * width * 1.05))
    S = abs(c) * T / (2 * math.pi)
    mmax = max(1, math.ceil(T / dt))
    ds = S / mmax
    dtau_max = 1.0 / (4.0 * S)
    if rate > 0:
        dtau_max = min(dtau_max, math.pi / (4.0 * rate))
    nfft = sfft.next_fast_len(max(4 * mmax, math.ceil(1.0 / (dtau_max * ds))))
    dtau = 1.0 / (nfft * ds)
    ntau = int(math.floor(width / dtau)) + 1
    tau = tau_lo + dtau * np.arange(ntau)
    m = np.arange(-mmax, mmax + 1)
    s = m * ds
    t = 2 * math.pi * s / c
    order = np.argsort(t)
    m, s, t = m[order], s[order], t[order]
    phase = dtau * np.exp(2j * math.pi * s * tau_lo)
    return ChirpGrid(t=t, tau=tau, dtau=dtau, nfft=nfft, index=np.mod(m, nfft), phase=phase)


def chirp_transform(grid: ChirpGrid, samples: np.ndarray) -> np.ndarray:
    """Apply a ``chirp_grid`` plan to amplitude samples A(tau_j) (last axis over tau)."""
    spec = sfft.ifft(samples, n=grid.nfft, axis=-1) * grid.nfft
    return spec[..., grid.index] * grid.phase
