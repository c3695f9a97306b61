"""Exception types shared across the package."""


class LocalCdError(Exception):
    """Base class for errors raised by this package."""


class DataError(LocalCdError):
    """Unusable input data: unreadable files, malformed lines, empty graphs."""


class AlgorithmError(LocalCdError):
    """An algorithm could not produce a result (e.g. solver non-convergence)."""
