"""Exception hierarchy; each family maps to a distinct CLI exit code."""


class HeckeError(Exception):
    exit_code = 1


class ParseError(HeckeError):
    exit_code = 2

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class DomainError(HeckeError):
    exit_code = 3


class CoverageError(DomainError):
    """A module spec is too small to express a requested element."""


class ConsistencyError(DomainError):
    """A module spec violates an algebra relation it is able to check."""


class ResourceError(HeckeError):
    exit_code = 4

    def __init__(self, message, size=None):
        super().__init__(message if size is None else f"{message} (size {size})")
        self.size = size


class PropertyFailure(HeckeError):
    exit_code = 5


class InvariantViolation(PropertyFailure):
    """Internal bug trap: two routes that must agree did not."""
