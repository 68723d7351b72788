"""Embed and extract bit streams as sequences of block states.

Each block takes the state whose codeword is the prefix of the unread
message bits.  Because the canonical code is complete, exactly one
codeword matches, and it is found with one ``floor(log2 q)``-bit read plus
at most one extra bit.

Frame layout (MSB first)::

    64-bit big-endian payload bit count | payload bits | zero padding

Padding only ever completes the codeword of the final used block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .bitstream import BitStream, bits_to_bytes, bytes_to_bits, int_to_bits
from .codebook import code_params, codeword_of_index, optimal_expected_length
from .errors import (
    CapacityExceededError,
    CorruptFrameError,
    InvalidParameterError,
    StreamUnderflowError,
)

HEADER_BITS = 64


@dataclass(frozen=True)
class Frame:
    payload_bit_count: int
    payload: np.ndarray
    padding: np.ndarray

    @property
    def header(self) -> List[int]:
        return int_to_bits(self.payload_bit_count, HEADER_BITS)

    @property
    def total_bits(self) -> int:
        return HEADER_BITS + self.payload_bit_count + len(self.padding)


@dataclass(frozen=True)
class EmbeddingRecord:
    block_index: int
    state_index: int
    bits_consumed: int


class PayloadBound(NamedTuple):
    entropy_bound: float
    achievable: Fraction


def match_next_codeword(q: int, stream: BitStream) -> Tuple[int, int]:
    """Consume the codeword that prefixes ``stream``; return ``(state, bits)``.

    On underflow the cursor is restored and :class:`StreamUnderflowError`
    propagates.
    """
    _, floor_log, _, n2 = code_params(q)
    start = stream.cursor
    try:
        v = stream.read(floor_log)
        if v < n2 // 2:
            return 2 * v + stream.read_bit(), floor_log + 1
    except StreamUnderflowError:
        stream.cursor = start
        raise
    return n2 + v - n2 // 2, floor_log


def iter_matches(q: int, stream: BitStream, stop: int) -> Iterator[EmbeddingRecord]:
    """Match codewords block after block until the cursor reaches ``stop``."""
    block = 0
    while stream.cursor < stop:
        state, used = match_next_codeword(q, stream)
        yield EmbeddingRecord(block, state, used)
        block += 1


def frame_capacity(q: int, block_count: int) -> int:
    """Bits guaranteed to fit in ``block_count`` blocks, whatever the message."""
    return block_count * code_params(q).floor_log


def embed_bits(payload: Sequence[int], q: int, block_count: int) -> Tuple[List[int], Frame]:
    """Frame ``payload`` (a 0/1 sequence) and map it to one state per used block."""
    _, floor_log, _, _ = code_params(q)
    if block_count < 1:
        raise InvalidParameterError(f"block_count must be positive, got {block_count}")
    payload = np.asarray(payload, dtype=np.uint8)
    frame_len = HEADER_BITS + payload.size
    available = frame_capacity(q, block_count)
    if frame_len > available:
        raise CapacityExceededError(frame_len, available)

    stream = BitStream(int_to_bits(payload.size, HEADER_BITS))
    stream.extend(payload.tobytes())
    stream.extend(bytes(floor_log + 1))
    states = [rec.state_index for rec in iter_matches(q, stream, frame_len)]
    frame = Frame(
        payload_bit_count=int(payload.size),
        payload=payload,
        padding=np.zeros(stream.cursor - frame_len, dtype=np.uint8),
    )
    return states, frame


def embed_message(message: bytes, q: int, block_count: int) -> Tuple[List[int], Frame]:
    """Byte-oriented :func:`embed_bits`; bytes are unpacked MSB first."""
    return embed_bits(bytes_to_bits(message), q, block_count)


def _stream_of_states(states: Sequence[int], q: int) -> Iterator[Tuple[int, int]]:
    for k, s in enumerate(states):
        try:
            w = codeword_of_index(q, s)
        except IndexError:
            raise CorruptFrameError(f"block {k}: state {s} out of range for q={q}") from None
        yield w.value, w.length


def extract_bits(states: Sequence[int], q: int) -> np.ndarray:
    """Recover the payload bits framed by :func:`embed_bits`.

    Trailing padding and any states beyond the frame are ignored.
    """
    floor_log = code_params(q).floor_log
    stream = BitStream()
    words = _stream_of_states(states, q)
    declared = None
    need = HEADER_BITS
    for value, length in words:
        stream.write(value, length)
        if declared is None and len(stream) >= HEADER_BITS:
            declared = stream.read(HEADER_BITS)
            ceiling = len(states) * (floor_log + 1) - HEADER_BITS
            if declared > ceiling:
                raise CorruptFrameError(
                    f"header declares {declared} payload bits, "
                    f"{len(states)} blocks hold at most {ceiling}"
                )
            need = HEADER_BITS + declared
        if len(stream) >= need:
            break
    if declared is None or len(stream) < need:
        raise CorruptFrameError(
            f"frame truncated: need {need} bits, states yield {len(stream)}"
        )
    return stream.bits(HEADER_BITS, need).copy()


def extract_message(states: Sequence[int], q: int) -> bytes:
    """Recover a byte message framed by :func:`embed_message`."""
    bits = extract_bits(states, q)
    if bits.size % 8:
        raise CorruptFrameError(f"payload of {bits.size} bits is not a whole number of bytes")
    return bits_to_bytes(bits)


def expected_payload_bound(q: int, block_count: int) -> PayloadBound:
    """Entropy ceiling ``block_count * log2 q`` and the optimal code's expectation."""
    code_params(q)
    if block_count < 0:
        raise InvalidParameterError(f"block_count must be non-negative, got {block_count}")
    return PayloadBound(
        entropy_bound=block_count * math.log2(q),
        achievable=block_count * optimal_expected_length(q),
    )
