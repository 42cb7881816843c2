"""Exception hierarchy.

Exit-code mapping used by the CLI: NumericalError -> 1,
ConfigError / CompatibilityError -> 2, HypothesisError -> 3.
"""


class RelspecError(Exception):
    """Base class for all package errors."""


class ShapeError(RelspecError):
    """Operands live on incompatible grids or spaces."""


class DomainError(RelspecError):
    """Argument outside the mathematical domain (t <= 0, nonpositive density, ...)."""


class ComponentViolationError(RelspecError):
    """The requested pair does not lie in one generalized component
    (non-decaying perturbation, exterior disagreement of a padded pair)."""


class GradingError(RelspecError):
    """Grading missing or incompatible between the two operators."""


class HypothesisError(RelspecError):
    """A spectral hypothesis required by the invariant is violated
    (typically: no positive gap above the kernel)."""


class FitError(RelspecError):
    """Asymptotic fit failed (ill-conditioned basis or residual above tolerance)."""


class NumericalError(RelspecError):
    """Eigensolver or quadrature failure."""


class ConfigError(RelspecError):
    """Malformed run configuration."""


class CompatibilityError(RelspecError):
    """Requested invariant is incompatible with the configured model."""
