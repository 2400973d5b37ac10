"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by the toolkit."""


class DomainError(GeometryError):
    """An input lies outside the domain of an operation."""


class NonRealizableError(GeometryError):
    """Side lengths cannot be realized in the requested model space."""


class OutOfRangeError(GeometryError):
    """A solution would exceed the finite timelike diameter."""


class NotApplicableError(GeometryError):
    """A construction was asked for on input it does not cover."""


class PreconditionError(GeometryError):
    pass


class DataError(GeometryError):
    """A time-separation oracle returned inconsistent values."""


class UnsupportedConfigurationError(GeometryError):
    pass


class InputError(GeometryError):
    pass


class TerminationError(RuntimeError):
    """A recursive construction went deeper than its input allows."""
