"""Local smoothing for frequency-localised data in the plane:
||e^{itD} (1 - D_w)^{-s/2} u0||_{L^q([0,1] x R^2)} <= C N^{gamma} ||u0||_q with
gamma = (2n(1/2 - 1/q) - 2/q)_+.

The data focus at t = 1/2 (u0 = e^{-iD/2} psi_N) so that the fixed-time norm
is small and the space-time norm is large; this is the configuration in
which the gain is sharp. Norms are reported for data normalised to
||u0||_q = 1.
"""

from __future__ import annotations

from ..errors import DomainError, TailNotControlled
from ..norms import SLOPE_MARGIN, exponent_table, fit_scaling, smoothing_norm
from ..parallel import ordered_map
from ..spherical import BumpProfile, ModeIndex, SurfaceFunction, angular_weight
from .config import SuiteConfig, dyadic_range
from .report import SuiteResult, check

COLUMNS = ("claim", "k", "q", "N", "norm", "quad_error", "tail_bound", "data_norm", "raw_norm", "weight")
SMOOTH_N = dyadic_range(4, 64)
SMOOTH_Q = (10 / 3, 4.0)
SMOOTH_DEGREES = (0, 4)
TAIL_RTOL = 1e-3
LINEARITY_LAMBDA = 3.0


def predicted_exponent(n: int, q: float) -> float:
    return max(2 * n * (0.5 - 1 / q) - 2 / q, 0.0)


def angular_order(n: int, q: float) -> float:
    """s(q, n) from the exponent table, or 0 where the table does not apply."""
    if q <= 2 * (n + 1) / n:
        return 0.0
    return exponent_table(n, q).s


def data_at(N: float, idx: ModeIndex, prof, s: float) -> SurfaceFunction:
    """psi_N^ = (1 - D_w)^{-s/2} applied to a(|xi| / (N/2)) Y(xi/|xi|); support |xi| <= N."""
    w = angular_weight(idx.n, idx.k, -s)
    return SurfaceFunction(idx.n, ((idx, prof.scaled(w)),), M=N / 2)


def _measure(g, q, N):
    res = smoothing_norm(g, q, N)
    if res.tail_bound > TAIL_RTOL * res.value:
        raise TailNotControlled(f"spatial tail {res.tail_bound:.3e} above {TAIL_RTOL} x {res.value:.3e} at N={N}")
    return res


def run(cfg: SuiteConfig) -> SuiteResult:
    n = cfg.n
    if n != 2:
        raise DomainError("the smoothing suite is set up for n = 2")
    Ns = tuple(cfg.N or SMOOTH_N)
    qs = tuple(cfg.q or SMOOTH_Q)
    modes = cfg.modes or tuple((ModeIndex(n, k), BumpProfile()) for k in SMOOTH_DEGREES)
    for N in Ns:
        if N < 2:
            raise DomainError("frequency scale N must be >= 2")
    rows, claims = [], []
    for q in qs:
        s = angular_order(n, q)
        gamma = predicted_exponent(n, q)
        for idx, prof in modes:
            gs = [data_at(N, idx, prof, s) for N in Ns]
            results = ordered_map(lambda pair: _measure(pair[0], q, pair[1]), list(zip(gs, Ns)), cfg.threads)
            weight = angular_weight(n, idx.k, -s)
            samples, rel = [], []
            for N, res in zip(Ns, results):
                v = res.value / res.data_norm
                samples.append((N, v))
                rel.append(res.rel_error + res.data_error / res.data_norm)
                rows.append(("smoothing", idx.k, q, N, v, res.quad_error / res.data_norm,
                             res.tail_bound / res.data_norm, res.data_norm, res.value, weight))
            rep = fit_scaling(samples, gamma, SLOPE_MARGIN, "upper", f"smoothing.q{q:.4g}.k{idx.k}", rel)
            rep.notes.update(s=s, weight=weight)
            claims.append(rep)

    # linearity in the data
    idx, prof = modes[0]
    N0 = Ns[0]
    q0 = qs[-1]
    base = smoothing_norm(data_at(N0, idx, prof, 0.0), q0, N0)
    scaled = smoothing_norm(data_at(N0, idx, prof.scaled(LINEARITY_LAMBDA), 0.0), q0, N0)
    dev = abs(scaled.value / base.value - LINEARITY_LAMBDA) / LINEARITY_LAMBDA
    rows.append(("linearity", idx.k, q0, N0, scaled.value / base.value, 0.0, 0.0, base.data_norm, base.value, 1.0))
    claims.append(check("smoothing.linearity", dev, 1e-10, lam=LINEARITY_LAMBDA))
    return SuiteResult("smoothing", COLUMNS, rows, claims, meta={"t0": 0.5})
