"""Exception types raised by the transform library."""


class OshtError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class InvalidDegreeOrder(OshtError, ValueError):
    pass


class InvalidBandlimit(OshtError, ValueError):
    pass


class DimensionMismatch(OshtError, ValueError):
    pass


class OracleCapExceeded(OshtError, ValueError):
    pass


class SingularSystemError(OshtError, ArithmeticError):
    """A per-order matrix P_m is numerically singular."""

    def __init__(self, m, message=None):
        self.m = m
        super().__init__(message or f"singular system for order m={m}")


class SchemeError(OshtError, ValueError):
    """A sampling scheme is not a permutation of the candidate grid."""


class FileFormatError(OshtError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        loc = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{loc}: {message}")
