"""Exception types raised by the riccati_cert package."""


class RiccatiError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(RiccatiError):
    """Matrix or coefficient dimensions are inconsistent."""


class DomainError(RiccatiError):
    """A time value lies outside the declared domain of a function."""


class NotHermitianError(RiccatiError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPositiveDefiniteError(RiccatiError):
    """A matrix required to be positive definite is not.

    The offending minimum eigenvalue is stored in ``min_eigenvalue``.
    """

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class EigenSolverError(RiccatiError):
    """The underlying eigenvalue solver failed to converge.

    Raised instead of silently reporting a negative verdict.
    """


class InstanceFormatError(RiccatiError):
    """An instance file or JSON object violates the input schema.

    The message names the offending field.
    """


class IntegrationError(RiccatiError):
    """An integration run could not proceed (bad options, collapsed steps
    on a linear flow, or no usable data for a post-hoc check)."""
