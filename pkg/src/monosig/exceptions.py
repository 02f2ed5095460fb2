"""Exception hierarchy used across the package and mapped to CLI exit codes."""


class MonosigError(ValueError):
    """Base class for all validation errors raised by monosig."""


class DegeneratePathError(MonosigError):
    pass


class NotMonotoneError(MonosigError):
    pass


class SignatureNotNormalizedError(MonosigError):
    pass


class CapabilityError(MonosigError):
    """Requested size exceeds what the library is configured to compute."""
