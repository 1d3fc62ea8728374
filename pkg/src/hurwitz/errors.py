"""Exceptions shared across modules."""


class GuardExceeded(RuntimeError):
    """A configured size limit (enumeration, visited states, search) was hit."""


class RegimeError(ValueError):
    """The input is outside every regime a reducer knows how to handle."""


class VerificationError(AssertionError):
    """A certificate failed to replay to its claimed result."""
