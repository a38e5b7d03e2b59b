# relay-kit/src/relay_kit/contracts/errors.py

"""
Defines the exception hierarchy shared by every relay-kit module.

All errors derive from `RelayKitError`, so callers (the CLI in particular)
can separate domain failures from programming errors. Validation-type errors
also derive from the matching built-in exception.
"""


class RelayKitError(Exception):
    """Base class for all relay-kit errors."""


class NetworkValidationError(RelayKitError, ValueError):
    """A network document or model failed schema or graph validation."""


class PreconditionError(RelayKitError, ValueError):
    """An operation was called with arguments outside its contract."""


class SearchLimitError(RelayKitError, RuntimeError):
    """An exhaustive search exceeded its configured cap."""


class NoiseModelError(RelayKitError, ValueError):
    """The effective noise covariance is not positive definite."""


class CertificateError(RelayKitError, AssertionError):
    """A rank certificate did not reach its claimed rank."""
