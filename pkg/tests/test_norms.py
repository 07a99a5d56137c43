import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from rlab.errors import DegenerateData, DomainError
from rlab.norms import (
    AnnulusGrid,
    ExtensionField,
    MixedNormSpec,
    OperatorField,
    critical_q,
    exponent_table,
    fit_scaling,
    lp_surface_norm,
    lq_spacetime_norm,
    profile_lp,
    smoothing_norm,
)
from rlab.quadrature import panel_rule
from rlab.spherical import BumpProfile, ModeIndex, SurfaceFunction, eval_harmonic, sphere_quadrature


def single(k, prof=None, n=2, l=1):
    return SurfaceFunction(n, ((ModeIndex(n, k, l), prof or BumpProfile()),))


def l2_oracle(k, a, R):
    """||E g||_{L^2(R x A_R)} for one n = 2 mode, via Plancherel in t."""
    r, wr = panel_rule(R / 2, R, max(8, int(8 * R)), 16)
    rho, wp = panel_rule(*a.support, 64, 16)
    J = special.jv(k, 2 * math.pi * np.outer(r, rho))
    inner = (np.abs(J * a(rho)) ** 2 * rho) @ wp
    return math.sqrt(2 * math.pi ** 2 * float(wr @ (r * inner)))


# -- space-time norm --------------------------------------------------------------------------

@pytest.mark.parametrize("k,R", [(0, 64.0), (0, 0.125), (3, 4.0)])
def test_l2_norm_against_plancherel(k, R):
    a = BumpProfile(poly=(1.0, 0.5))
    res = lq_spacetime_norm(ExtensionField(single(k, a)), MixedNormSpec(q=2, R=R))
    ref = l2_oracle(k, a, R)
    assert abs(res.value - ref) <= 2e-3 * ref
    assert res.tail_bound <= 1e-3 * res.value


def test_zero_field():
    res = lq_spacetime_norm(ExtensionField(SurfaceFunction(2)), MixedNormSpec(q=4, R=8))
    assert res.value == 0 and res.tail_bound == 0


@settings(max_examples=5, deadline=None)
@given(st.floats(0.1, 10))
def test_homogeneity(lam):
    g = single(2)
    spec = MixedNormSpec(q=4, R=8)
    grid = AnnulusGrid(n_r=33)
    base = lq_spacetime_norm(ExtensionField(g), spec, grid).value
    scaled = lq_spacetime_norm(ExtensionField(g, amplitude=lam), spec, grid).value
    assert scaled == pytest.approx(lam * base, rel=1e-10)


def test_grid_doubling_stability():
    f = ExtensionField(single(0))
    spec = MixedNormSpec(q=2, R=64)
    coarse = lq_spacetime_norm(f, spec, AnnulusGrid())
    fine = lq_spacetime_norm(f, spec, AnnulusGrid().refined())
    assert abs(fine.value - coarse.value) <= 1e-3 * fine.value
    assert abs(fine.value - coarse.value) <= coarse.quad_error + coarse.tail_bound


def test_monotone_in_window():
    f = ExtensionField(single(1))
    vals = [lq_spacetime_norm(f, MixedNormSpec(q=4, R=16, time_window=T, tail_rtol=1e9)).value
            for T in (2.0, 4.0, 8.0, 16.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_operator_field_norm_positive():
    res = lq_spacetime_norm(OperatorField("H", 1.0, BumpProfile(), 128), MixedNormSpec(q=4, R=128),
                            AnnulusGrid(n_r=129))
    assert res.value > 0 and res.rel_error < 1e-2


def test_spec_validation():
    with pytest.raises(DomainError):
        MixedNormSpec(q=4, R=3)
    with pytest.raises(DomainError):
        MixedNormSpec(q=math.inf)
    with pytest.raises(DomainError):
        lq_spacetime_norm(ExtensionField(single(0)), MixedNormSpec(q=1.5, R=4))
    with pytest.raises(DomainError):
        AnnulusGrid(n_r=63)


# -- surface norms ----------------------------------------------------------------------------

def test_surface_norm_factorises():
    a = BumpProfile(poly=(1.0, 0.2))
    idx = ModeIndex(2, 3)
    g = SurfaceFunction(2, ((idx, a),))
    pts, w = sphere_quadrature(2, 400)
    yp = float(w @ np.abs(eval_harmonic(idx, pts)) ** 4) ** 0.25
    ap = profile_lp(a, 4.0, weight=lambda rho: rho ** 0.25)
    assert lp_surface_norm(g, 4.0) == pytest.approx(ap * yp, rel=1e-10)


def test_surface_norm_parseval():
    rng = np.random.default_rng(0)
    modes = tuple((ModeIndex(2, k, l), BumpProfile(center=1.4 + 0.05 * k, width=0.35, amplitude=complex(*rng.normal(size=2))))
                  for k, l in ((0, 1), (1, 2), (2, 1), (4, 2)))
    g = SurfaceFunction(2, modes)
    coeff = math.sqrt(sum(profile_lp(a, 2.0, weight=np.sqrt) ** 2 for _, a in modes))
    assert lp_surface_norm(g, 2.0) == pytest.approx(coeff, rel=1e-10)
    # the general path (angular quadrature) agrees with the coefficient path
    assert lp_surface_norm(g, 2.0 + 1e-12) == pytest.approx(coeff, rel=1e-9)


@given(st.floats(0, 3), st.floats(0, 3))
def test_surface_norm_monotone_in_s(s1, s2):
    g = SurfaceFunction(2, ((ModeIndex(2, 0), BumpProfile()), (ModeIndex(2, 3), BumpProfile(width=0.3))))
    lo, hi = sorted((s1, s2))
    assert lp_surface_norm(g, 4.0, lo) <= lp_surface_norm(g, 4.0, hi) * (1 + 1e-12)


# -- exponent algebra -------------------------------------------------------------------------

def test_critical_q_examples():
    assert critical_q(2) == pytest.approx(10 / 3)
    assert critical_q(3) == pytest.approx(3.0)
    assert critical_q(4) == pytest.approx(8 / 3)


@given(st.integers(2, 9), st.floats(0.0, 6.0))
def test_exponent_identities(n, extra):
    q = 2 * (n + 1) / n + 1e-6 + extra
    tab = exponent_table(n, q)
    ids = tab.identities()
    assert max(ids.values()) <= 1e-12
    assert 0 <= tab.alpha <= 1
    assert tab.sigma == pytest.approx((n - 1) * (0.5 - 1 / tab.q0))


def test_exponent_at_q0():
    tab = exponent_table(3, 8 / 3 + 0.01)
    assert tab.alpha == pytest.approx(1.0) and tab.s == pytest.approx(tab.sigma)


def test_exponent_domain():
    with pytest.raises(DomainError):
        exponent_table(2, 3.0)


# -- scaling fits -----------------------------------------------------------------------------

def test_fit_exact_power():
    rep = fit_scaling([(2, 2 ** 0.5), (4, 2.0), (8, 8 ** 0.5)], 0.5, 0.05, "equal")
    assert rep.slope == pytest.approx(0.5) and rep.residual <= 1e-14 and rep.verdict == "holds"


def test_fit_constant():
    assert fit_scaling([(1, 3.0), (2, 3.0), (4, 3.0)]).slope == pytest.approx(0.0, abs=1e-14)


def test_fit_noisy_synthetic():
    rng = np.random.default_rng(42)
    x = 2.0 ** np.arange(3, 11)
    y = 5 * x ** -0.25 * (1 + 0.01 * rng.standard_normal(x.size))
    rep = fit_scaling(list(zip(x, y)), -0.25, 0.05, "upper")
    assert abs(rep.slope + 0.25) <= 0.01 and rep.verdict == "holds"


def test_fit_verdicts():
    samples = [(2, 1.0), (4, 2.0), (8, 4.0)]
    assert fit_scaling(samples, 0.5, 0.05, "upper").verdict == "violated"
    assert fit_scaling(samples, 0.5, 0.05, "lower").verdict == "holds"
    assert fit_scaling(samples, 1.0, 0.05, "upper", rel_errors=[0.2, 0, 0]).verdict == "inconclusive"


def test_fit_constant_is_smallest():
    samples = [(2, 3.0), (4, 5.0), (8, 6.0)]
    rep = fit_scaling(samples, 0.5, 0.05, "none", rhs=[2.0] * 3)
    assert rep.C == pytest.approx(max(v / (2.0 * s ** 0.5) for s, v in samples))


def test_fit_degenerate():
    with pytest.raises(DegenerateData):
        fit_scaling([(1, 1.0), (2, 2.0)])
    with pytest.raises(DegenerateData):
        fit_scaling([(1, 1.0), (1, 2.0), (2, 3.0)])
    with pytest.raises(DegenerateData):
        fit_scaling([(1, 1.0), (2, 0.0), (4, 3.0)])


# -- local smoothing norm ---------------------------------------------------------------------

def test_smoothing_l2_is_mass():
    # at q = 2 the unit-time norm equals the conserved mass 2 pi ||g||_2
    g = SurfaceFunction(2, ((ModeIndex(2, 1), BumpProfile()),), M=4.0)
    res = smoothing_norm(g, 2.0, 8.0)
    mass = 2 * math.pi * lp_surface_norm(g, 2.0)
    assert res.value == pytest.approx(mass, rel=1e-4)
    assert res.data_norm == pytest.approx(mass, rel=1e-4)


def test_smoothing_linear():
    g = SurfaceFunction(2, ((ModeIndex(2, 0), BumpProfile()),), M=2.0)
    a = smoothing_norm(g, 4.0, 4.0)
    b = smoothing_norm(g.scaled(3.0), 4.0, 4.0)
    assert b.value == pytest.approx(3 * a.value, rel=1e-12)


def test_smoothing_domain():
    g = SurfaceFunction(2, ((ModeIndex(2, 0), BumpProfile()),), M=4.0)
    with pytest.raises(DomainError):
        smoothing_norm(g, 4.0, 4.0)
    with pytest.raises(DomainError):
        smoothing_norm(g, 4.0, 8.0, t0=0.25)
