"""Exception hierarchy shared by every obcstego module."""

from __future__ import annotations


class ObcError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(ObcError, ValueError):
    """A numeric parameter (q, r, d, block count, ...) is out of its domain."""


class NotACodewordError(ObcError, ValueError):
    """A bit string is not a member of the requested codebook."""


class StreamUnderflowError(ObcError):
    """A read ran past the end of a bit stream in the middle of a codeword."""


class CapacityExceededError(ObcError):
    """The frame does not fit in the available blocks."""

    def __init__(self, required_bits: int, available_bits: int) -> None:
        self.required_bits = required_bits
        self.available_bits = available_bits
        super().__init__(
            f"capacity exceeded: frame needs {required_bits} bits, "
            f"cover guarantees {available_bits} bits"
        )


class CorruptFrameError(ObcError):
    """Extracted bits do not form a valid frame."""


class UnreachableStateError(ObcError):
    """No in-range modification of a block realizes the requested state."""


class CoverFormatError(ObcError, ValueError):
    """A cover file could not be parsed."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class EnumerationRangeError(ObcError, ValueError):
    """Exhaustive enumeration was requested outside its supported range."""


class InvalidCodeError(ObcError, ValueError):
    """A leaf-depth multiset does not describe a complete prefix code."""
