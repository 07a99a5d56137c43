"""Localized L^q norms of the extension of one mode, with fitted slopes in R."""

from rlab.norms import ExtensionField, MixedNormSpec, fit_scaling, lq_spacetime_norm
from rlab.spherical import BumpProfile, ModeIndex, SurfaceFunction

g = SurfaceFunction(2, ((ModeIndex(2, 2), BumpProfile()),))
field = ExtensionField(g)
for q, predicted in ((2.0, 0.5), (4.0, -0.25)):
    samples = []
    for R in (16.0, 32.0, 64.0, 128.0):
        res = lq_spacetime_norm(field, MixedNormSpec(q=q, R=R))
        samples.append((R, res.value))
        print(f"q={q:g} R={R:5g} norm={res.value:.6e} rel_error={res.rel_error:.1e}")
    rep = fit_scaling(samples, predicted, 0.05, "upper", f"q{q:g}")
    print(f"q={q:g} slope {rep.slope:.3f} vs {predicted} -> {rep.verdict}")
