import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from rlab.errors import DomainError, NonConvergent
from rlab.parallel import ordered_map, resolve_threads
from rlab.quadrature import (
    QuadratureSpec,
    chirp_grid,
    chirp_transform,
    gauss_gegenbauer,
    gauss_genlaguerre,
    integrate,
    panel_rule,
    simpson_weights,
)


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(nodes_per_wavelength=3)
    with pytest.raises(DomainError):
        QuadratureSpec(tolerance=0)
    assert QuadratureSpec().with_tolerance(1e-4).tolerance == 1e-4


def test_integrate_oscillatory():
    val, err = integrate(lambda x: np.exp(1j * 200 * x), 0.0, 1.0, QuadratureSpec(), rate=200)
    assert abs(val - (np.exp(200j) - 1) / 200j) <= 1e-12 and err < 1e-10


def test_integrate_refinement_order():
    # the stopping difference tracks the true error
    f = lambda x: np.cos(50 * x) * np.exp(-x)
    exact = ((np.exp(-1) * (50 * np.sin(50) - np.cos(50))) + 1) / (1 + 2500)
    val, err = integrate(f, 0.0, 1.0, QuadratureSpec(tolerance=1e-12), rate=50)
    assert abs(val - exact) <= max(err, 1e-14)


def test_integrate_panel_cap():
    with pytest.raises(NonConvergent):
        integrate(lambda x: np.sign(x - 0.3337), 0.0, 1.0, QuadratureSpec(max_panels=8, tolerance=1e-14))


def test_gegenbauer_weights():
    for lam in (0.0, 0.5, 3.0, 150.0):
        s, w = gauss_gegenbauer(24, lam)
        assert w.sum() == pytest.approx(1.0)
        # E[s^2] under (1 - s^2)^(lam - 1/2), normalised
        assert float(w @ s ** 2) == pytest.approx(1 / (2 * lam + 2), rel=1e-12)


def test_genlaguerre_weights():
    # weights are normalised, so the first moment is Gamma(a+2)/Gamma(a+1)
    x, w = gauss_genlaguerre(20, 1.5)
    assert w.sum() == pytest.approx(1.0)
    assert float(np.sum(w * x)) == pytest.approx(special.gamma(3.5) / special.gamma(2.5), rel=1e-12)


@given(st.integers(1, 50))
def test_simpson_exact_on_cubics(m):
    n = 2 * m + 1
    x = np.linspace(0, 2, n)
    w = simpson_weights(n, x[1] - x[0])
    assert float(w @ (x ** 3 - x)) == pytest.approx(2.0, rel=1e-12)


def test_simpson_even_rejected():
    with pytest.raises(DomainError):
        simpson_weights(4, 0.1)


def test_chirp_transform_matches_quadrature():
    def A(tau):
        u = (tau - 2.5) / 1.5
        out = np.zeros_like(tau)
        inside = np.abs(u) < 1
        out[inside] = np.exp(-1 / (1 - u[inside] ** 2))
        return out
    # rate bounds how fast the amplitude varies; 50 resolves this bump
    grid = chirp_grid(1.0, 4.0, 2 * math.pi, 3.0, 0.05, rate=50.0)
    F = chirp_transform(grid, A(grid.tau))
    x, w = panel_rule(1.0, 4.0, 64, 16)
    for i in (0, len(grid.t) // 3, len(grid.t) // 2, len(grid.t) - 1):
        ref = np.sum(w * A(x) * np.exp(2j * math.pi * grid.t[i] * x))
        assert abs(F[i] - ref) <= 1e-10


def test_ordered_map_independent_of_threads():
    items = list(range(37))
    f = lambda i: math.sin(i) ** 3
    assert ordered_map(f, items, 1) == ordered_map(f, items, 4)


def test_resolve_threads(monkeypatch):
    monkeypatch.setenv("RLAB_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    monkeypatch.delenv("RLAB_THREADS")
    assert resolve_threads() == 1
