"""MSB-first bit sequences with a read cursor.

Bytes are unpacked most-significant bit first: ``b"\\xa0"`` is
``1 0 1 0 0 0 0 0``.  Packing pads the final byte with zero bits on the
right.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .errors import StreamUnderflowError


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits: Union[np.ndarray, Iterable[int]]) -> bytes:
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    return np.packbits(arr).tobytes()


def int_to_bits(value: int, width: int) -> list[int]:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return [(value >> (width - 1 - k)) & 1 for k in range(width)]


class BitStream:
    """Growable bit sequence with a read cursor.

    Reads consume from ``cursor`` towards the end; writes always append.
    Reading past the end raises :class:`StreamUnderflowError` and leaves the
    cursor where it was.
    """

    def __init__(self, bits: Union[np.ndarray, Iterable[int], None] = None) -> None:
        if bits is None:
            data = b""
        elif isinstance(bits, np.ndarray):
            data = bits.astype(np.uint8).tobytes()
        else:
            data = bytes(int(b) for b in bits)
        self._bits = bytearray(data)
        if any(b > 1 for b in self._bits):
            raise ValueError("bit values must be 0 or 1")
        self.cursor = 0

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitStream":
        return cls(bytes_to_bits(data))

    def __len__(self) -> int:
        return len(self._bits)

    @property
    def remaining(self) -> int:
        return len(self._bits) - self.cursor

    def exhausted(self) -> bool:
        return self.cursor >= len(self._bits)

    def read(self, count: int) -> int:
        """Consume ``count`` bits and return them as an unsigned integer."""
        if count > self.remaining:
            raise StreamUnderflowError(
                f"need {count} bits at position {self.cursor}, only {self.remaining} left"
            )
        value = 0
        for b in self._bits[self.cursor : self.cursor + count]:
            value = (value << 1) | b
        self.cursor += count
        return value

    def read_bit(self) -> int:
        if self.cursor >= len(self._bits):
            raise StreamUnderflowError(f"stream exhausted at position {self.cursor}")
        b = self._bits[self.cursor]
        self.cursor += 1
        return b

    def write(self, value: int, length: int) -> None:
        """Append the low ``length`` bits of ``value``, most significant first."""
        self._bits.extend(int_to_bits(value, length))

    def extend(self, bits: Iterable[int]) -> None:
        self._bits.extend(bits)

    def bits(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        return np.frombuffer(bytes(self._bits[start:stop]), dtype=np.uint8)

    def to_bytes(self) -> bytes:
        return bits_to_bytes(self.bits())

    def __repr__(self) -> str:
        return f"BitStream(len={len(self)}, cursor={self.cursor})"
