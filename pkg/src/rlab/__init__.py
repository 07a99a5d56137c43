"""Numerical laboratory for restriction estimates with angular regularity:
Bessel functions by regime, spherical-harmonic expansions, the paraboloid
extension operator, space-time mixed norms and verification suites."""

from .besself import BesselRegime, BesselValue, bessel_j, classify_regime
from .errors import (
    ConfigError,
    DegenerateData,
    DomainError,
    NonConvergent,
    RlabError,
    TailNotControlled,
    UnsupportedBasis,
)
from .extension import extension_direct, extension_modal, rescale_dyadic, schrodinger_evolve
from .norms import exponent_table, fit_scaling, lp_surface_norm, lq_spacetime_norm
from .quadrature import QuadratureSpec
from .spherical import BumpProfile, ModeIndex, SampledProfile, SurfaceFunction

__version__ = "0.1.0"

__all__ = [
    "BesselRegime", "BesselValue", "bessel_j", "classify_regime",
    "ConfigError", "DegenerateData", "DomainError", "NonConvergent", "RlabError", "TailNotControlled",
    "UnsupportedBasis", "extension_direct", "extension_modal", "rescale_dyadic", "schrodinger_evolve",
    "exponent_table", "fit_scaling", "lp_surface_norm", "lq_spacetime_norm", "QuadratureSpec",
    "BumpProfile", "ModeIndex", "SampledProfile", "SurfaceFunction", "__version__",
]
