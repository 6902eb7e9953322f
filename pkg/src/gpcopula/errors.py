"""Exception types shared across the package."""


class GpCopulaError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(GpCopulaError, ValueError):
    """A copula parameter lies outside its valid set."""


class BoundaryError(GpCopulaError, ValueError):
    """A unit-square coordinate sits on the closed boundary {0, 1}."""


class LatentArityError(GpCopulaError, ValueError):
    """Latent vector length does not match the family's parameter count."""


class ShapeMismatchError(GpCopulaError, ValueError):
    """Inconsistent array dimensions."""


class ConditioningError(GpCopulaError, ArithmeticError):
    """A Gram matrix stayed singular or indefinite after jitter."""


class QuadratureError(GpCopulaError, ArithmeticError):
    """Numerical integration failed (non-finite integrand or no convergence)."""


class EpDivergenceError(GpCopulaError, ArithmeticError):
    """EP kept producing improper cavities on most sites."""


class EvidenceUnavailableError(GpCopulaError, RuntimeError):
    """EP evidence requested from a state with flat or improper sites."""


class FitError(GpCopulaError, RuntimeError):
    """A maximum-likelihood fit failed.

    ``best_so_far`` carries the least-bad parameters seen, when any exist.
    """

    def __init__(self, message, best_so_far=None):
        super().__init__(message)
        self.best_so_far = best_so_far


class AlignmentError(GpCopulaError, ValueError):
    """Two input series do not share a common timestamp grid."""


class ConfigError(GpCopulaError, ValueError):
    """Invalid or unknown run-configuration entry."""
