"""Exception hierarchy shared across the package."""


class MisotweetError(Exception):
    """Base class for all errors raised by this package."""


class DataError(MisotweetError):
    """A data file is missing, malformed, or violates a consistency rule.

    ``line`` is the 1-based line number in the offending file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(MisotweetError):
    """A configuration value is out of range or inconsistent."""


class ModelFormatError(MisotweetError):
    """A model file could not be parsed.

    ``byte_offset`` points at the start of the line where parsing failed.
    """

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (at byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class EngineTypeError(MisotweetError):
    """A model file holds a different engine type than the caller expects."""


class LayoutMismatchError(MisotweetError):
    """A feature vector's layout fingerprint does not match the model's."""
