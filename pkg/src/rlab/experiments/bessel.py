"""Regime bounds for J_nu: exponential decay below nu/2, the nu^{-1/3} transition
profile, and the oscillatory form r^{-1/2}(a_+ e^{ir} + a_- e^{-ir}) + O(1/r)."""

from __future__ import annotations

import math

import numpy as np

from ..besself import (
    bessel_j,
    fit_constants,
    project_oscillatory,
    shape_transition,
)
from ..errors import DomainError
from ..norms import fit_scaling
from ..parallel import ordered_map
from .config import SuiteConfig, dyadic_range
from .report import SuiteResult, check

REGIME_NUS = (20.0, 50.0, 100.0, 200.0)
SLOPE_NUS = dyadic_range(8, 512)
COLUMNS = ("claim", "nu", "r", "J", "method", "est_error", "bound_ratio")


def _grid(nu: float) -> dict:
    return {
        "exponential": np.linspace(nu / 50, nu / 2, 40),
        "transition": np.linspace(nu / 2, 2 * nu, 81)[1:-1],
        "oscillatory": np.linspace(2 * nu, 16 * nu, 60),
    }


def _evaluate(nu: float, quad) -> dict:
    out = {}
    for regime, rs in _grid(nu).items():
        out[regime] = [(float(r), bessel_j(nu, float(r), quad)) for r in rs]
    return out


def run(cfg: SuiteConfig) -> SuiteResult:
    nus = tuple(float(v) for v in (cfg.nu or REGIME_NUS))
    for nu in nus:
        if not 4 <= nu <= 512:
            raise DomainError(f"nu={nu} outside the suite range [4, 512]")
    quad = cfg.quad
    evals = ordered_map(lambda nu: _evaluate(nu, quad), nus, cfg.threads)
    rows, claims = [], []

    # (b1): one c for all nu, fitted from the exponential samples
    samples = [(nu, r, v.value) for nu, ev in zip(nus, evals) for r, v in ev["exponential"]]
    consts, c_raw = fit_constants(samples)
    for nu, r, j in samples:
        bound = consts.C_exp * math.exp(-consts.c_exp * (nu + r))
        rows.append(("b1", nu, r, j, "", math.nan, abs(j) / bound))
    claims.append(check("bessel.b1.exponential", c_raw, 1e-3, mode="ge", C=consts.C_exp,
                        c_fitted=c_raw, nus=list(nus)))

    # (b2): C per nu from the transition samples, uniform within a factor 2
    c_trans = []
    for nu, ev in zip(nus, evals):
        ratios = [abs(v.value) / float(shape_transition(nu, r)) for r, v in ev["transition"]]
        c_trans.append(max(ratios))
        for (r, v), ratio in zip(ev["transition"], ratios):
            rows.append(("b2", nu, r, v.value, v.method, v.est_error, ratio))
    spread = max(c_trans) / min(c_trans)
    claims.append(check("bessel.b2.transition", spread, 2.0, C=max(c_trans), per_nu=c_trans, nus=list(nus)))

    # (b3): residual of the locally projected main part is O(1/r)
    c_osc, a_max = [], 0.0
    for nu, ev in zip(nus, evals):
        worst = 0.0
        for r, v in ev["oscillatory"]:
            ap, am = project_oscillatory(nu, r)
            a_max = max(a_max, abs(ap), abs(am))
            resid = abs(v.value - r ** -0.5 * (ap * np.exp(1j * r) + am * np.exp(-1j * r)))
            worst = max(worst, resid * r)
            rows.append(("b3", nu, r, v.value, v.method, v.est_error, resid * r))
        c_osc.append(worst)
    claims.append(check("bessel.b3.oscillatory", max(c_osc) / min(c_osc), 2.0, C=max(c_osc),
                        per_nu=c_osc, a_max=a_max, nus=list(nus)))

    # J_nu(nu) ~ nu^{-1/3}
    diag = ordered_map(lambda nu: bessel_j(nu, nu, quad), SLOPE_NUS, cfg.threads)
    for nu, v in zip(SLOPE_NUS, diag):
        rows.append(("transition_slope", nu, nu, v.value, v.method, v.est_error, math.nan))
    rep = fit_scaling([(nu, abs(v.value)) for nu, v in zip(SLOPE_NUS, diag)], predicted=-1 / 3, margin=0.02,
                      kind="equal", claim_id="bessel.transition_slope")
    claims.append(rep)
    return SuiteResult("bessel", COLUMNS, rows, claims)
