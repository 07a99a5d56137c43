"""Exception hierarchy shared by all modules."""


class RlabError(Exception):
    """Base class for library errors."""


class DomainError(RlabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NonConvergent(RlabError, ArithmeticError):
    """Quadrature refinement failed to reach the requested tolerance."""


class UnsupportedBasis(RlabError, NotImplementedError):
    """Spherical-harmonic index outside the implemented basis."""


class TailNotControlled(RlabError, ArithmeticError):
    """Time window cap reached before the tail estimate fell below tolerance."""


class DegenerateData(RlabError, ValueError):
    """Too few or ill-posed samples for a fit or a check."""


class ConfigError(RlabError, ValueError):
    """Malformed configuration text; message carries the line number."""
