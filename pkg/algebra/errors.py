"""
Exception types raised by the engine.
The CLI maps every NasError subclass except check failures to exit code 2.
"""


class NasError(Exception):
    """Base class for engine errors"""


class ParseError(NasError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class RegistryError(NasError):
    """Duplicate, missing or malformed variety definitions"""


class InputError(NasError):
    """Arguments that violate an operation's preconditions"""


class BasisError(NasError):
    """A supplied basis does not pass verification"""


class DegreeGuardError(NasError):
    """Requested degree is above the configured --max-degree"""
