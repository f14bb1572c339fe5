"""Exception taxonomy shared across the library.

Every refusal an operation can issue maps to one class here, so callers
(and the command line driver) can distinguish usage mistakes from genuine
verification failures.
"""


class GreenLabError(Exception):
    """Base class for all library errors."""


class DomainError(GreenLabError):
    """A point lies outside the model domain."""


class ModelDomainError(GreenLabError):
    """The requested model configuration is outside the supported range."""


class PreconditionError(GreenLabError):
    """A documented operation precondition failed at a sampled point."""


class UndeclaredSingularityError(GreenLabError):
    """The integrand blew up away from every declared singular point."""


class StencilError(GreenLabError):
    """A finite-difference stencil hit a non-finite function value."""


class RegularityError(GreenLabError):
    """A subdomain is unusable: singular or ill-conditioned basis interpolation."""


class ConditioningError(GreenLabError):
    """The request is too close to a singular configuration to evaluate reliably."""


class ClassificationError(GreenLabError):
    """A pair violates the structural property the operation requires."""


class ConfigError(GreenLabError):
    """Bad run configuration: unknown key, unparsable value, missing input."""
