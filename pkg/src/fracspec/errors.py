"""Exception types shared across the package."""


class FracspecError(Exception):
    """Base class for all package errors."""


class InvalidInputError(FracspecError, ValueError):
    """Input data is malformed: non-finite samples, mismatched lengths, bad files."""


class ConfigurationError(FracspecError, ValueError):
    """Parameters are inconsistent with each other or with the input size."""
