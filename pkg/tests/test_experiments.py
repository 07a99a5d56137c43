"""Suites on reduced configurations: schema, claim ids and thread-count determinism."""

import math

import pytest

from rlab.experiments import SUITES, parse_config, run_suite
from rlab.experiments.kernel import resonant_quadruples
from rlab.experiments.report import csv_text

SMALL = {
    "bessel": "[suite]\nnu = 20 50\n",
    "identities": "[suite]\nseed = 4\n",
    "restriction": "[suite]\nq = 2 4\nR = 8 16 32\n[mode]\nk = 2\n",
    "operators": "[suite]\nnu = 1\nR = 128 256 512\n",
    "kernel": "[suite]\nnu = 0\nR = 128 256\nquadruples = 12\ndraws = 2\n",
    "smoothing": "[suite]\nq = 4\nN = 4 8 16\n[mode]\nk = 0\n",
}


def small(name, threads):
    return parse_config(SMALL[name]).with_overrides(threads=threads)


def test_every_suite_has_a_small_config():
    assert set(SMALL) == set(SUITES)


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITES)
def test_csv_bytes_independent_of_threads(name):
    a = run_suite(name, small(name, 1))
    b = run_suite(name, small(name, 2))
    assert csv_text(a, 0, "x") == csv_text(b, 0, "x")
    assert [c.verdict for c in a.claims] == [c.verdict for c in b.claims]
    assert a.rows and all(len(r) == len(a.columns) for r in a.rows)


def test_bessel_claims():
    res = run_suite("bessel", small("bessel", 1))
    ids = [c.claim_id for c in res.claims]
    assert ids == ["bessel.b1.exponential", "bessel.b2.transition", "bessel.b3.oscillatory", "bessel.transition_slope"]
    slope = res.claim("bessel.transition_slope")
    assert abs(slope.slope + 1 / 3) <= 0.02


def test_identities_hold():
    res = run_suite("identities", small("identities", 1))
    assert res.verdict == "holds" and len(res.claims) == 4


def test_restriction_reduced():
    res = run_suite("restriction", small("restriction", 1))
    cols = res.columns
    assert {"R", "norm", "quad_error", "tail_bound"} <= set(cols)
    qs = {row[cols.index("q")] for row in res.rows}
    assert qs == {2.0, 4.0}
    for row in res.rows:
        assert row[cols.index("norm")] > 0 and row[cols.index("tail_bound")] <= 1e-2 * row[cols.index("norm")]


def test_operators_reduced():
    res = run_suite("operators", small("operators", 1))
    laws = [c for c in res.claims if c.claim_id.count(".") == 3 and not c.claim_id.endswith("sup")]
    assert {c.claim_id for c in laws} == {"operators.T.nu1.q4", "operators.T.nu1.q6",
                                         "operators.H.nu1.q4", "operators.H.nu1.q6"}


def test_kernel_quadruples_are_resonant():
    q = resonant_quadruples(3, 40)
    assert q.shape == (40, 4)
    assert ((q[:, 0] ** 2 - q[:, 1] ** 2) - (q[:, 3] ** 2 - q[:, 2] ** 2)).__abs__().max() <= 1e-12
    assert q.min() >= 1 and q.max() <= 2


def test_smoothing_reduced():
    res = run_suite("smoothing", small("smoothing", 1))
    rep = res.claim("smoothing.q4.k0")
    assert rep.slope <= 0.55 and res.claim("smoothing.linearity").verdict == "holds"
    assert all(math.isfinite(row[res.columns.index("norm")]) for row in res.rows)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
