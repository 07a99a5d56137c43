import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.besself import main_exponential
from rlab.errors import DomainError, UnsupportedBasis
from rlab.extension import (
    chi,
    extension_direct,
    extension_modal,
    kernel_K,
    kernel_decay_shape,
    op_H,
    op_T,
    phi_cut,
    rescale_dyadic,
    schrodinger_evolve,
)
from rlab.norms import profile_lp
from rlab.spherical import BumpProfile, ModeIndex, SurfaceFunction
from rlab.quadrature import panel_rule


def single(k, l=1, n=2, prof=None):
    return SurfaceFunction(n, ((ModeIndex(n, k, l), prof or BumpProfile(poly=(1.0, 0.3))),))


def random_points(seed, count, n=2, t_max=2.0, r_max=8.0):
    rng = np.random.default_rng(seed)
    t = rng.uniform(-t_max, t_max, count)
    x = rng.uniform(-1, 1, (count, n))
    x *= (r_max * rng.uniform(0, 1, count) / np.linalg.norm(x, axis=1))[:, None]
    return t, x


def test_cutoffs():
    u = np.linspace(0, 1.5, 301)
    c = chi(u)
    assert np.all(c[(u <= 0.5) | (u >= 1)] == 0) and chi(0.75) == pytest.approx(1.0)
    rho = np.linspace(0.2, 5, 500)
    p = phi_cut(rho)
    assert np.all(p[(rho >= 1) & (rho <= 2)] == 1.0)
    assert np.all(p[(rho <= 0.5) | (rho >= 4)] == 0.0)


def test_zero_function():
    g = SurfaceFunction(2)
    t, x = random_points(0, 5)
    assert np.all(extension_modal(g, t, x) == 0)
    assert np.all(extension_direct(g, t, x) == 0)


def test_origin_is_integral_of_g():
    a = BumpProfile()
    g = single(0, prof=a)
    rho, w = panel_rule(1.05, 1.95, 16, 16)
    integral = math.sqrt(2 * math.pi) * float(w @ (a(rho).real * rho))
    assert extension_direct(g, 0.0, [0.0, 0.0]) == pytest.approx(integral, rel=1e-10)
    assert extension_modal(g, 0.0, [0.0, 0.0]) == pytest.approx(integral, rel=1e-10)


@pytest.mark.parametrize("k", [0, 3])
def test_modal_matches_direct(k):
    g = single(k)
    t, x = random_points(10 + k, 50)
    assert np.max(np.abs(extension_modal(g, t, x) - extension_direct(g, t, x))) <= 1e-6


def test_modal_matches_direct_sine_mode_and_n3():
    g = single(2, 2)
    t, x = random_points(3, 10)
    assert np.max(np.abs(extension_modal(g, t, x) - extension_direct(g, t, x))) <= 1e-6
    g3 = single(2, 4, n=3)
    t, x = random_points(4, 6, n=3, r_max=3.0)
    assert np.max(np.abs(extension_modal(g3, t, x) - extension_direct(g3, t, x))) <= 1e-6


def test_conjugate_symmetry_real_data():
    g = SurfaceFunction(2, tuple((ModeIndex(2, k), BumpProfile(center=1.5 + 0.03 * k, width=0.4)) for k in (0, 2)))
    t, x = random_points(5, 10, r_max=4.0)
    a = extension_direct(g, t, x)
    b = extension_direct(g, -t, -x)
    assert np.max(np.abs(b - np.conj(a))) <= 1e-9


def test_rescale_identity_and_support():
    g = single(1)
    assert rescale_dyadic(g, 1).M == g.M
    t, x = random_points(6, 8, t_max=0.3, r_max=2.0)
    for M in (2.0, 4.0):
        gm = rescale_dyadic(g, M)
        lo, hi = gm.support
        assert M <= lo and hi <= 2 * M
        lhs = extension_modal(gm, t, x)
        rhs = M ** 2 * extension_modal(g, M * M * t, M * x)
        assert np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)) <= 1e-8
    with pytest.raises(DomainError):
        rescale_dyadic(g, 3)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(0.5, 4))
def test_modal_linear(re, im):
    g = single(2)
    t, x = random_points(7, 4)
    lam = complex(re, im)
    assert np.allclose(extension_modal(g.scaled(lam), t, x), lam * extension_modal(g, t, x), rtol=1e-9, atol=1e-12)


def test_unsupported_basis():
    g = SurfaceFunction(4, ((ModeIndex(4, 1, 2), BumpProfile()),))
    with pytest.raises(UnsupportedBasis):
        extension_modal(g, 0.0, [0, 0, 0, 1.0])
    with pytest.raises(UnsupportedBasis):
        extension_direct(SurfaceFunction(4, ((ModeIndex(4, 0), BumpProfile()),)), 0.0, [0, 0, 0, 1.0])


# -- model operators -------------------------------------------------------------------------

def test_operators_vanish():
    zero = BumpProfile(amplitude=0.0)
    for op in (op_T, op_H):
        assert op(1.0, zero, 128, 0.3, 100.0) == 0
        assert op(1.0, BumpProfile(), 128, 0.3, 40.0) == 0  # r < R/2
        assert op(1.0, BumpProfile(), 128, 0.3, 130.0) == 0  # r > R


def test_operators_linear():
    a = BumpProfile(poly=(1.0, -0.5))
    for op in (op_T, op_H):
        v1 = op(4.0, a, 128, np.array([0.0, 0.7]), np.array([90.0, 110.0]))
        v2 = op(4.0, a.scaled(2 - 1j), 128, np.array([0.0, 0.7]), np.array([90.0, 110.0]))
        assert np.allclose(v2, (2 - 1j) * v1, rtol=1e-10, atol=1e-15)


def test_operator_domain():
    with pytest.raises(DomainError):
        op_H(40.0, BumpProfile(), 64, 0.0, 50.0)
    with pytest.raises(DomainError):
        op_T(31.0, BumpProfile(), 64, 0.0, 50.0)


def test_H_sup_bound():
    a = BumpProfile()
    l1 = profile_lp(a, 1.0)
    for R in (128, 256, 512):
        r = np.linspace(R / 2, R, 33)
        vals = [np.max(np.abs(op_H(1.0, a, R, t, r))) for t in (0.0, 3.0, 20.0)]
        assert max(vals) <= 2.0 * R ** -0.5 * l1


def test_H_tracks_main_amplitude_for_narrow_bump():
    # |H a| -> |I_nu(r rho0)| rho0 chi ||a||_1 as the bump narrows (t = 0)
    # the phase r rho must be nearly constant across the bump, so width << 1/r
    nu, R, r = 1.0, 256, 200.0
    errs = []
    for w in (2.5e-3, 2.5e-4):
        a = BumpProfile(center=1.5, width=w)
        v = abs(op_H(nu, a, R, 0.0, r))
        ref = abs(main_exponential(nu, r * 1.5)) * 1.5 * chi(r / R) * profile_lp(a, 1.0)
        errs.append(abs(v / ref - 1))
    assert errs[-1] <= 0.1 and errs[-1] < errs[0]


# -- kernel -----------------------------------------------------------------------------------

def test_kernel_diagonal():
    u, w = panel_rule(0.5, 1.0, 16, 16)
    ref = float(w @ (chi(u) ** 4 / u ** 2))
    for R in (128, 512):
        assert kernel_K(R, 0.0, [1, 1, 1, 1]).real * R == pytest.approx(ref, rel=1e-9)
        assert abs(kernel_K(R, 0.0, [1, 1, 1, 1]).imag) <= 1e-12


def test_kernel_conjugation():
    rho = [1.2, 1.5, 1.7, math.sqrt(1.2 ** 2 - 1.5 ** 2 + 1.7 ** 2)]
    k = kernel_K(256, 1.0, rho)
    swapped = kernel_K(256, 1.0, [rho[1], rho[0], rho[3], rho[2]])
    assert abs(swapped - np.conj(k)) <= 1e-12


def test_kernel_decay_bound_on_resonant_quadruples():
    rng = np.random.default_rng(2)
    ratios = []
    while len(ratios) < 20:
        r1, r2, r3 = rng.uniform(1, 2, 3)
        s = r1 * r1 - r2 * r2 + r3 * r3
        if not 1 <= s <= 4:
            continue
        rho = [r1, r2, r3, math.sqrt(s)]
        ratios.append(abs(kernel_K(256, 1.0, rho)) / kernel_decay_shape(256, rho))
    assert max(ratios) < 1e4


def test_kernel_domain():
    with pytest.raises(DomainError):
        kernel_K(8, 5.0, [1, 1, 1, 1])
    with pytest.raises(DomainError):
        kernel_K(128, 0.0, [1, 1, 1])


# -- Schroedinger evolution -------------------------------------------------------------------

def test_schrodinger_at_time_zero():
    a = BumpProfile()
    u0 = single(0, prof=a)
    h = 4.0 / 400
    s = -2.0 + h * np.arange(401)
    X, Y = np.meshgrid(s, s, indexing="ij")
    f = u0(np.stack([X, Y], -1))
    for x in ([0.0, 0.0], [1.3, -0.4], [3.0, 2.0]):
        ref = np.sum(f * np.exp(1j * (x[0] * X + x[1] * Y))) * h * h
        assert abs(schrodinger_evolve(u0, 0.0, x) - ref) <= 1e-6


def test_schrodinger_mass_conserved():
    a = BumpProfile()
    u0 = single(0, prof=a)
    rho, wr = panel_rule(1.05, 1.95, 16, 16)
    mass_hat = (2 * math.pi) ** 2 * float(wr @ (np.abs(a(rho)) ** 2 * rho))
    # the bump profile's transform decays slower than any Gaussian; 160 leaves a tail below 1e-8
    r, w = panel_rule(0.0, 160.0, 320, 16)
    x = np.stack([r, 0 * r], -1)
    masses = []
    for t in (0.0, 0.5, 2.0):
        u = schrodinger_evolve(u0, np.full(r.size, t), x)
        masses.append(2 * math.pi * float(w @ (np.abs(u) ** 2 * r)))
    assert max(abs(m / mass_hat - 1) for m in masses) <= 1e-6


def test_schrodinger_dispersive_decay():
    a = BumpProfile()
    u0 = single(0, prof=a)
    rho, wr = panel_rule(1.05, 1.95, 16, 16)
    l1_hat = 2 * math.pi * float(wr @ (np.abs(a(rho)) * rho)) / math.sqrt(2 * math.pi)
    C = []
    # t |u| is bounded once t exceeds the spatial width of u0 squared
    for t in (8.0, 16.0, 32.0):
        r = np.linspace(0, 4.2 * t, 1500)
        u = schrodinger_evolve(u0, np.full(r.size, t), np.stack([r, 0 * r], -1))
        C.append(float(np.max(np.abs(u))) * t / l1_hat)
    assert max(C) / min(C) <= 2.0


def test_time_series_matches_pointwise():
    # the FFT time series behind every space-time norm, against pointwise modal values
    from rlab.extension import mode_time_series
    from rlab.norms import SERIES_RTOL
    from rlab.spherical import eval_harmonic
    cases = [(single(0), np.array([0.06, 0.125]), 4.0, 1.0),
             (single(4), np.array([0.5, 1.0, 30.0]), 4.0, 1.0),
             (single(0).with_scale(2 / (2 * math.pi)), np.array([0.0, 0.3, 2.0]), 0.5, 2 * math.pi)]
    for g, r, T, tf in cases:
        t, F = mode_time_series(g, r, T, 0.01, tf)
        y = float(eval_harmonic(g.indices[0], np.array([[1.0, 0.0]]))[0])
        pick = np.linspace(0, t.size - 1, 7).astype(int)
        ref = np.array([[extension_modal(g, tf * t[i], [rr, 0.0]) for i in pick] for rr in r])
        err = np.max(np.abs(F[0][:, pick] * y - ref))
        assert err <= SERIES_RTOL * np.max(np.abs(ref))
