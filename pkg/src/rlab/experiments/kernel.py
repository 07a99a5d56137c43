"""Quadrilinear kernel decay on resonant quadruples, the dyadic-shell integral
bound I(i, j) <= C 2^{-(i+j)} ||b||_4^4, and the weighted triple integral
with its R^{-1+eps} law.

With delta = rho1 - rho2 and eta = rho3 - rho2 the triple integrals reduce to
double integrals of

    Q(delta, eta) = int b(x) b(x + delta) b(x + eta) b(x + delta + eta) dx,

and Hoelder gives Q <= ||b||_4^4, which is the crude bound used below.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateData
from ..extension import kernel_decay_shape, kernel_K
from ..norms import fit_scaling
from ..parallel import ordered_map
from ..quadrature import gauss_legendre, panel_rule
from .config import SuiteConfig, dyadic_range
from .report import SuiteResult, check
from .rng import bump_mixture, random_bump_mixture, stream

COLUMNS = ("claim", "index", "nu", "R", "i", "j", "rho1", "rho2", "rho3", "rho4", "value", "bound_ratio")
KERNEL_R = dyadic_range(128, 1024)
KERNEL_NU = (0.0, 1.0, 4.0)
SHELLS = range(0, 7)
GOAL_R = dyadic_range(2 ** 4, 2 ** 14)
GOAL_SHELLS = range(-2, 25)
GOAL_DRAWS = 3
B_SUPPORT = (1.0, 4.0)
SHELL_ORDER = 12


# -- resonant quadruples ---------------------------------------------------------------------

def resonant_quadruples(seed: int, count: int, max_tries: int = 100_000) -> np.ndarray:
    """Rows (rho1, rho2, rho3, rho4) in [1, 2] with rho1^2 - rho2^2 = rho4^2 - rho3^2."""
    out = []
    for attempt in range(max_tries):
        if len(out) == count:
            break
        r1, r2, r3 = stream(seed, 1, attempt).uniform(1.0, 2.0, 3)
        s4 = r1 * r1 - r2 * r2 + r3 * r3
        if 1.0 <= s4 <= 4.0:
            out.append((r1, r2, r3, math.sqrt(s4)))
    if len(out) < count:
        raise DegenerateData(f"only {len(out)} resonant quadruples found")
    return np.array(out)


# -- Q on dyadic shells -----------------------------------------------------------------------

def shell_rule(i: int, order: int = SHELL_ORDER, signed: bool = True):
    """Gauss nodes on 2^{-i-1} <= |d| < 2^{-i} (both signs when ``signed``)."""
    x, w = gauss_legendre(order)
    a, b = 2.0 ** (-i - 1), 2.0 ** (-i)
    d = 0.5 * (a + b) + 0.5 * (b - a) * x
    wd = 0.5 * (b - a) * w
    if not signed:
        return d, wd
    return np.concatenate([-d[::-1], d]), np.concatenate([wd[::-1], wd])


def q_matrix(bfun, D: np.ndarray, E: np.ndarray, panels: int = 24, chunk: int = 16) -> np.ndarray:
    """Q(D_a, E_b) for all pairs by Gauss-Legendre in x over the support of b."""
    x, wx = panel_rule(B_SUPPORT[0], B_SUPPORT[1], panels, 16)
    b0 = bfun(x) * wx
    bd = bfun(x[None, :] + D[:, None])
    be = bfun(x[None, :] + E[:, None])
    out = np.empty((D.size, E.size))
    for s in range(0, D.size, chunk):
        dd = D[s:s + chunk]
        bde = bfun(x[None, None, :] + dd[:, None, None] + E[None, :, None])
        out[s:s + chunk] = np.einsum("x,dx,ex,dex->de", b0, bd[s:s + chunk], be, bde)
    return out


def shell_integral(bfun, i: int, j: int) -> float:
    """I(i, j): Q integrated over |delta| ~ 2^{-i}, |eta| ~ 2^{-j}.

    Q(-d, -e) = Q(d, e), so only delta > 0 is computed and doubled.
    """
    D, wD = shell_rule(i, signed=False)
    E, wE = shell_rule(j)
    return 2.0 * float(wD @ q_matrix(bfun, D, E) @ wE)


def l4_fourth(bfun) -> float:
    x, w = panel_rule(B_SUPPORT[0], B_SUPPORT[1], 24, 16)
    return float(w @ bfun(x) ** 4)


def unit_bump(x):
    """The bump exp(1 - 1/(1-u^2)) filling [1, 4]."""
    return bump_mixture(x, [2.5], [1.5], [1.0])


def draw_b(seed: int, index: int):
    centers, widths, weights = random_bump_mixture(stream(seed, 2, index), *B_SUPPORT)
    return lambda x: bump_mixture(x, centers, widths, weights)


def goal_integral(bfun, Rs, shells=GOAL_SHELLS, N: int = 2) -> np.ndarray:
    """G(R) = int b b b b / (1 + R |delta| |eta|)^N over all shells, for each R."""
    pos = [shell_rule(i, signed=False) for i in shells]
    full = [shell_rule(j) for j in shells]
    D = np.concatenate([d for d, _ in pos])
    wD = np.concatenate([w for _, w in pos])
    E = np.concatenate([e for e, _ in full])
    wE = np.concatenate([w for _, w in full])
    Q = q_matrix(bfun, D, E)
    prod = np.abs(D)[:, None] * np.abs(E)[None, :]
    return np.array([2.0 * float(wD @ (Q / (1 + R * prod) ** N) @ wE) for R in Rs])


# -- suite ----------------------------------------------------------------------------------

def run(cfg: SuiteConfig) -> SuiteResult:
    rows, claims = [], []
    Rs = tuple(cfg.R or KERNEL_R)
    nus = tuple(cfg.nu or KERNEL_NU)
    quads = resonant_quadruples(cfg.seed, cfg.quadruples)
    quad = cfg.quad

    # (a) pointwise decay with N = 2
    jobs = [(qi, nu, R) for qi in range(len(quads)) for nu in nus for R in Rs]

    def one(job):
        qi, nu, R = job
        rho = quads[qi]
        k = kernel_K(R, nu, rho, quad)
        return abs(k), abs(k) / kernel_decay_shape(R, rho, 2)
    vals = ordered_map(one, jobs, cfg.threads)
    per_R = {R: 0.0 for R in Rs}
    for (qi, nu, R), (absk, ratio) in zip(jobs, vals):
        per_R[R] = max(per_R[R], ratio)
        rows.append(("decay", qi, nu, R, -1, -1, *quads[qi], absk, ratio))
    C = max(per_R.values())
    c_list = [per_R[R] for R in Rs]
    claims.append(check("kernel.decay.uniform_C", max(c_list) / c_list[0], 2.0, C=C,
                        C_per_R=c_list, quadruples=len(quads), nus=list(nus)))

    # diagonal: K R constant across R
    for nu in nus:
        kr = []
        for R in Rs:
            k = kernel_K(R, nu, [1.0, 1.0, 1.0, 1.0], quad)
            kr.append(k.real * R)
            rows.append(("diagonal", -1, nu, R, -1, -1, 1.0, 1.0, 1.0, 1.0, k.real * R, math.nan))
        spread = (max(kr) - min(kr)) / min(kr)
        claims.append(check(f"kernel.diagonal.nu{nu:g}", spread, 0.05, KR=kr))

    # (b) dyadic-shell integral bound
    bs = [("unit", unit_bump)] + [(f"draw{d}", draw_b(cfg.seed, d)) for d in range(cfg.draws)]

    def lemma(item):
        _, bfun = item
        n4 = l4_fourth(bfun)
        return n4, [[shell_integral(bfun, i, j) * 2.0 ** (i + j) / n4 for j in SHELLS] for i in SHELLS]
    lem = ordered_map(lemma, bs, cfg.threads)
    c_draw = []
    for bi, ((name, _), (n4, grid)) in enumerate(zip(bs, lem)):
        for i in SHELLS:
            for j in SHELLS:
                rows.append(("shell_integral", bi, math.nan, math.nan, i, j,
                             math.nan, math.nan, math.nan, math.nan, grid[i][j], math.nan))
        if name != "unit":
            c_draw.append(max(max(r) for r in grid))
    unit00 = lem[0][1][0][0]
    claims.append(check("kernel.shell.unit_bump_00", unit00, 1.0, C=unit00, crude_bound=1.0))
    claims.append(check("kernel.shell.uniform_C", max(c_draw) / min(c_draw), 3.0, C=max(c_draw),
                        C_per_draw=c_draw, max_ratio=max(c_draw)))

    # (c) weighted triple integral: R^{-1+eps}, realised as R^{-1} log R
    goal = ordered_map(lambda item: (l4_fourth(item[1]), goal_integral(item[1], GOAL_R)),
                       bs[1:1 + GOAL_DRAWS], cfg.threads)
    spreads, slopes = [], []
    for gi, (n4, G) in enumerate(goal):
        scaled = G * np.array(GOAL_R) / np.log(GOAL_R) / n4
        for R, v, s in zip(GOAL_R, G, scaled):
            rows.append(("goal", gi, math.nan, R, -1, -1, math.nan, math.nan, math.nan, math.nan, v, s))
        spreads.append(float(scaled.max() / scaled.min()))
        slopes.append(fit_scaling(list(zip(GOAL_R, G)), -1.0, 0.05, "none", "goal").slope)
    claims.append(check("kernel.goal.log_law", max(spreads), 2.0, spreads=spreads, raw_slopes=slopes))
    return SuiteResult("kernel", COLUMNS, rows, claims)
