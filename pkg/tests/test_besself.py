import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.besself import (
    BesselRegime,
    FittedConstants,
    asymptotic_bound,
    bc_decompose,
    bessel_closed_form,
    bessel_j,
    bessel_schlafli,
    bessel_series,
    classify_regime,
    crude_bound,
    e_term_bound,
    fit_constants,
    jv,
    main_term,
    phase_theta,
    schlafli_parts,
)
from rlab.errors import DomainError
from rlab.quadrature import QuadratureSpec

# frozen high-precision oracle: ascending series for J_2(1)
J2_AT_1 = 0.11490348493190048


def oracle(nu, r):
    return float(mpmath.besselj(nu, r))


# -- evaluators -------------------------------------------------------------------------------

def test_series_at_origin():
    v = bessel_series(0, 0)
    assert v.value == 1.0 and v.method == "series"
    assert bessel_series(3, 0).value == 0.0


def test_series_half_order_zero_at_pi():
    assert abs(bessel_series(0.5, math.pi).value) <= 1e-12


def test_series_frozen_value():
    assert abs(bessel_series(2, 1).value - J2_AT_1) <= 1e-12
    assert abs(J2_AT_1 - oracle(2, 1)) <= 1e-15


def test_schlafli_agrees_with_series():
    assert abs(bessel_schlafli(3, 7).value - bessel_series(3, 7).value) <= 1e-8


def test_schlafli_integer_order_has_no_e_term():
    for r in (0.5, 3.0, 40.0):
        _, e, _ = schlafli_parts(5, r)
        assert e == 0.0


def test_schlafli_e_term_bound():
    _, e, _ = schlafli_parts(2.5, 10.0)
    assert 0 < abs(e) <= e_term_bound(2.5, 10.0)


@pytest.mark.parametrize("nu", [0.3, 1.7, 2.5, 7.25])
def test_fractional_order_against_oracle(nu):
    for r in (0.2, 2.0, 9.0, 35.0):
        v = bessel_j(nu, r)
        assert abs(v.value - oracle(nu, r)) <= 1e-9


def test_est_error_bounds_true_error():
    rng = np.random.default_rng(1)
    for nu, r in zip(rng.uniform(0, 20, 40), rng.uniform(0.1, 50, 40)):
        for fn in (bessel_series, bessel_schlafli):
            try:
                v = fn(float(nu), float(r))
            except Exception:
                continue
            assert abs(v.value - oracle(nu, r)) <= max(v.est_error, 1e-14) * 10
            assert v.est_error <= QuadratureSpec(tolerance=1e-10).tolerance * 10


def test_large_order_tolerance():
    for nu, r in ((50, 30), (100, 100), (200, 450)):
        assert abs(bessel_j(nu, r).value - oracle(nu, r)) <= 1e-8


def test_closed_form():
    for r in np.linspace(0.1, 50, 60):
        assert abs(bessel_closed_form(0.5, r).value - math.sqrt(2 / (math.pi * r)) * math.sin(r)) <= 1e-15
        assert abs(bessel_closed_form(0.5, r).value - oracle(0.5, r)) <= 1e-14
    with pytest.raises(DomainError):
        bessel_closed_form(1.0, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_series(-0.7, 1.0)
    with pytest.raises(DomainError):
        bessel_j(1.0, -1.0)
    with pytest.raises(DomainError):
        bessel_schlafli(1.0, 0.0)
    with pytest.raises(DomainError):
        bessel_j(1.0, 1.0, method="nope")


def test_jv_matches_oracle():
    x = np.linspace(0.5, 80, 30)
    ref = np.array([oracle(3.5, v) for v in x])
    assert np.max(np.abs(jv(3.5, x) - ref)) < 1e-13


# -- regimes ---------------------------------------------------------------------------------

def test_regime_examples():
    assert classify_regime(100, 50) is BesselRegime.EXPONENTIAL
    assert classify_regime(100, 100) is BesselRegime.TRANSITION
    assert classify_regime(100, 300) is BesselRegime.OSCILLATORY
    assert classify_regime(100, 200) is BesselRegime.OSCILLATORY
    assert str(classify_regime(100, 50)) == "Exponential"


@given(st.floats(0.01, 1e4), st.floats(0.01, 1e5))
def test_regime_partition(nu, r):
    reg = classify_regime(nu, r)
    expected = [r <= nu / 2, nu / 2 < r < 2 * nu, r >= 2 * nu]
    assert sum(expected) == 1
    assert reg is [BesselRegime.EXPONENTIAL, BesselRegime.TRANSITION, BesselRegime.OSCILLATORY][expected.index(True)]
    assert classify_regime(nu, r) is reg


def test_regime_domain():
    with pytest.raises(DomainError):
        classify_regime(0, 1)


def test_asymptotic_bound_forms():
    c = FittedConstants(C_exp=2.0, c_exp=0.1, C_trans=1.5, C_osc=1.2)
    assert asymptotic_bound(10, 2, c) > asymptotic_bound(10, 3, c)
    assert asymptotic_bound(10, 2, c) > asymptotic_bound(12, 2, c)
    assert asymptotic_bound(64, 64, c) == pytest.approx(1.5 * 64 ** (-1 / 3))
    assert asymptotic_bound(10, 1000, c) == pytest.approx(1.2 * 1000 ** -0.5, rel=0.04)


def test_fitted_bounds_hold_on_grid():
    samples = []
    for nu in (20.0, 50.0, 100.0):
        for r in np.linspace(nu / 40, 4 * nu, 60):
            samples.append((nu, float(r), float(jv(nu, r))))
    consts, c_raw = fit_constants(samples)
    assert c_raw > 0 and consts.c_exp > 0
    for nu, r, j in samples:
        assert abs(j) <= asymptotic_bound(nu, r, consts) * (1 + 1e-12)


def test_transition_slope():
    nus = 2.0 ** np.arange(3, 10)
    vals = [abs(bessel_j(float(nu), float(nu)).value) for nu in nus]
    slope = np.polyfit(np.log(nus), np.log(vals), 1)[0]
    assert abs(slope + 1 / 3) <= 0.02


# -- oscillatory decomposition --------------------------------------------------------------

def test_phase_examples():
    r = np.array([1.0, 5.0, 20.0])
    assert np.allclose(phase_theta(0, r, 1), 1.0)
    assert np.allclose(phase_theta(0, r, 2), 0.0)
    assert phase_theta(3, 5, 2) == pytest.approx(0.09, abs=1e-15)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_phase_finite_differences(order):
    nu, r = 7.0, 15.0
    errs = []
    for h in (1e-2, 5e-3):
        fd = (phase_theta(nu, r + h, order) - phase_theta(nu, r - h, order)) / (2 * h)
        errs.append(abs(fd - phase_theta(nu, r, order + 1)))
    assert errs[1] < errs[0] / 3  # O(h^2)


def test_phase_domain():
    with pytest.raises(DomainError):
        phase_theta(3, 3)


def test_bc_main_at_order_zero():
    d = bc_decompose(0, 10)
    assert d.main == pytest.approx(math.sqrt(2 / math.pi) * math.cos(10 - math.pi / 4) / math.sqrt(10), rel=1e-14)


def test_bc_remainder_beyond_2nu_is_c_over_r():
    assert bc_decompose(4, 50, C=3.0).remainder_bound == pytest.approx(3.0 / 50)


def test_bc_domain():
    with pytest.raises(DomainError):
        bc_decompose(8, 8 + 2.0 - 1e-9)


def test_bc_residual_within_bound():
    for nu in (4.0, 16.0, 64.0):
        for r in np.geomspace(2 * nu, 100 * nu, 25):
            d = bc_decompose(nu, float(r))
            assert abs(oracle(nu, r) - d.main) <= d.remainder_bound


def test_main_term_vectorised():
    r = np.array([30.0, 40.0])
    assert np.allclose(main_term(4, r), [bc_decompose(4, v).main for v in r])


# -- crude bound -----------------------------------------------------------------------------

def test_crude_bound_origin():
    v = crude_bound(0, 0)
    assert 0 < v < math.inf


def test_crude_bound_dominates():
    for nu in range(0, 21, 2):
        for r in np.linspace(0, 40, 41):
            assert abs(jv(nu, r)) <= crude_bound(nu, float(r))


@given(st.floats(0.1, 30), st.floats(0, 50), st.floats(0.01, 10))
def test_crude_bound_monotone_in_r(nu, r, dr):
    assert crude_bound(nu, r + dr) >= crude_bound(nu, r)


def test_crude_bound_overflow():
    assert crude_bound(10, 1e300) == math.inf


# -- cross-method property ---------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20), st.floats(0.1, 50))
def test_cross_method(nu, r):
    assert abs(bessel_series(nu, r).value - bessel_schlafli(nu, r).value) <= 1e-8
