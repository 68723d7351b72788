"""Cover objects, block states, and minimal-change state realization.

A cover of ``n`` elements of ``d`` bits is cut into ``s = n // r`` blocks of
``r`` consecutive elements; the ``n - s*r`` trailing elements are never
touched.  A block's state is the sum of its elements modulo ``q``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from .errors import CoverFormatError, InvalidParameterError, UnreachableStateError

FORMATS = ("raw8", "pgm")
_WHITESPACE = b" \t\n\r\v\f"


@dataclass
class CoverObject:
    """Block-partitioned carrier.

    ``header`` and ``trailer`` hold the container bytes around the element
    data so a stego file can be written back with an identical layout.
    """

    elements: np.ndarray
    d: int
    r: int
    format: str = "raw8"
    header: bytes = field(default=b"", repr=False)
    trailer: bytes = field(default=b"", repr=False)
    width: int | None = None
    height: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.d <= 32:
            raise InvalidParameterError(f"element width d must be in [1, 32], got {self.d}")
        if self.r < 1:
            raise InvalidParameterError(f"block size r must be positive, got {self.r}")
        self.elements = np.array(self.elements, dtype=np.int64).ravel()
        if self.elements.size and (
            self.elements.min() < 0 or self.elements.max() > self.max_value
        ):
            raise InvalidParameterError(f"elements must lie in [0, {self.max_value}]")

    @property
    def n(self) -> int:
        return int(self.elements.size)

    @property
    def s(self) -> int:
        return self.n // self.r

    @property
    def max_value(self) -> int:
        return (1 << self.d) - 1

    def block(self, k: int) -> np.ndarray:
        if not 0 <= k < self.s:
            raise IndexError(f"block {k} out of range (s={self.s})")
        return self.elements[k * self.r : (k + 1) * self.r]

    def to_bytes(self) -> bytes:
        if self.d != 8:
            raise CoverFormatError(f"only 8-bit elements serialize to bytes, d={self.d}")
        return self.header + self.elements.astype(np.uint8).tobytes() + self.trailer


class StegoObject(CoverObject):
    """Cover after embedding; same shape and container as its source."""


@dataclass
class BlockChange:
    block_index: int
    changed_elements: int
    absolute_change: int


@dataclass
class ModificationReport:
    blocks_used: int
    changed_elements: int = 0
    total_absolute_change: int = 0
    per_block_changes: List[BlockChange] = field(default_factory=list)

    @property
    def changed_blocks(self) -> int:
        return sum(1 for c in self.per_block_changes if c.changed_elements)


def block_state(block: Sequence[int], q: int) -> int:
    """State of one block: element sum modulo ``q``."""
    if len(block) == 0:
        raise InvalidParameterError("block must be non-empty")
    if q < 2:
        raise InvalidParameterError(f"q must be at least 2, got {q}")
    return int(sum(int(x) for x in block) % q)


def max_reachable_q(r: int, d: int) -> int:
    """Largest ``q`` for which every block can reach every state."""
    return r * ((1 << d) - 1) + 1


def _distribute(block: List[int], adjustment: int, top: int) -> List[int]:
    # round-robin passes of one unit per element, left to right
    out = list(block)
    step = 1 if adjustment > 0 else -1
    residual = abs(adjustment)
    while residual:
        for j, x in enumerate(out):
            if residual == 0:
                break
            if 0 <= x + step <= top:
                out[j] = x + step
                residual -= 1
    return out


def realize_state(block: Sequence[int], target: int, q: int, d: int) -> List[int]:
    """Return a copy of ``block`` whose state is ``target``.

    With ``delta = (target - current) mod q`` the two candidate adjustments
    are ``+delta`` and ``delta - q``.  The smaller one (``+delta`` on a tie)
    goes to the first element that stays in ``[0, 2**d - 1]``; failing that,
    the other candidate is tried the same way.  If no single element can
    absorb either, the smallest-magnitude congruent adjustment that the block
    has room for is spread as unit steps over the elements, left to right.
    """
    if not 0 <= target < q:
        raise InvalidParameterError(f"target {target} out of range for q={q}")
    values = [int(x) for x in block]
    current = block_state(values, q)
    if current == target:
        return values
    top = (1 << d) - 1
    delta = (target - current) % q
    candidates = sorted((delta, delta - q), key=lambda a: (abs(a), a < 0))

    for adj in candidates:
        for j, x in enumerate(values):
            if 0 <= x + adj <= top:
                out = list(values)
                out[j] = x + adj
                return out

    room_up = sum(top - x for x in values)
    room_down = sum(values)
    feasible = [
        a
        for a in range(delta - q * ((room_down + delta) // q), room_up + 1, q)
        if -room_down <= a <= room_up and a != 0
    ]
    if not feasible:
        raise UnreachableStateError(
            f"state {target} unreachable for block of {len(values)} "
            f"{d}-bit elements with q={q}"
        )
    adj = min(feasible, key=lambda a: (abs(a), a < 0))
    return _distribute(values, adj, top)


def read_states(obj: CoverObject, q: int, count: int | None = None) -> np.ndarray:
    """Vectorized :func:`block_state` over the first ``count`` blocks."""
    if q < 2:
        raise InvalidParameterError(f"q must be at least 2, got {q}")
    s = obj.s if count is None else count
    if not 0 <= s <= obj.s:
        raise IndexError(f"requested {s} blocks, cover has {obj.s}")
    blocks = obj.elements[: s * obj.r].reshape(s, obj.r)
    return blocks.sum(axis=1) % q


def apply_embedding(
    cover: CoverObject, states: Sequence[int], q: int
) -> Tuple[StegoObject, ModificationReport]:
    """Drive block ``k`` to ``states[k]``; every other element is copied."""
    if len(states) > cover.s:
        raise InvalidParameterError(
            f"{len(states)} states for a cover with only {cover.s} blocks"
        )
    elements = cover.elements.copy()
    report = ModificationReport(blocks_used=len(states))
    r = cover.r
    for k, target in enumerate(states):
        original = elements[k * r : (k + 1) * r]
        try:
            updated = np.asarray(realize_state(original, int(target), q, cover.d), dtype=np.int64)
        except UnreachableStateError as exc:
            raise UnreachableStateError(f"block {k}: {exc}") from None
        diff = np.abs(updated - original)
        change = BlockChange(k, int(np.count_nonzero(diff)), int(diff.sum()))
        report.per_block_changes.append(change)
        report.changed_elements += change.changed_elements
        report.total_absolute_change += change.absolute_change
        elements[k * r : (k + 1) * r] = updated
    fields = {f: getattr(cover, f) for f in cover.__dataclass_fields__}
    fields["elements"] = elements
    return StegoObject(**fields), report


def _skip_header_space(data: bytes, pos: int) -> int:
    while pos < len(data):
        c = data[pos : pos + 1]
        if c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_header_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    start = _skip_header_space(data, pos)
    if start == pos:
        raise CoverFormatError(f"expected whitespace before PGM {name}", pos)
    end = start
    while end < len(data) and data[end : end + 1].isdigit():
        end += 1
    if end == start:
        raise CoverFormatError(f"malformed PGM header: missing {name}", start)
    return int(data[start:end]), end


def parse_pgm(data: bytes, r: int) -> CoverObject:
    """Parse a binary (P5) 8-bit PGM."""
    if data[:2] != b"P5":
        raise CoverFormatError("not a binary PGM: missing P5 magic", 0)
    pos = 2
    width, pos = _read_header_int(data, pos, "width")
    height, pos = _read_header_int(data, pos, "height")
    maxval_at = _skip_header_space(data, pos)
    maxval, pos = _read_header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise CoverFormatError(f"PGM dimensions must be positive, got {width}x{height}", 2)
    if maxval != 255:
        raise CoverFormatError(f"unsupported PGM maxval {maxval}, only 255 is supported", maxval_at)
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise CoverFormatError("missing whitespace after PGM maxval", pos)
    raster = pos + 1
    end = raster + width * height
    if end > len(data):
        raise CoverFormatError(
            f"truncated PGM raster: expected {width * height} bytes, found {len(data) - raster}",
            len(data),
        )
    pixels = np.frombuffer(data[raster:end], dtype=np.uint8)
    return CoverObject(
        pixels,
        d=8,
        r=r,
        format="pgm",
        header=bytes(data[:raster]),
        trailer=bytes(data[end:]),
        width=width,
        height=height,
    )


def make_pgm(pixels: np.ndarray) -> bytes:
    """Serialize a 2-D uint8 array as a binary PGM."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2:
        raise InvalidParameterError("PGM pixels must be a 2-D array")
    height, width = pixels.shape
    return b"P5\n%d %d\n255\n" % (width, height) + pixels.tobytes()


def load_cover(source: Union[str, os.PathLike, bytes, bytearray], format: str, r: int) -> CoverObject:
    """Load a ``raw8`` byte stream or a ``pgm`` image from a path or raw bytes."""
    if format not in FORMATS:
        raise CoverFormatError(f"unknown cover format {format!r}; expected one of {FORMATS}")
    if isinstance(source, (bytes, bytearray, memoryview)):
        data = bytes(source)
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    if format == "pgm":
        return parse_pgm(data, r)
    return CoverObject(np.frombuffer(data, dtype=np.uint8), d=8, r=r, format="raw8")


def save_cover(obj: CoverObject, path: Union[str, os.PathLike]) -> None:
    with open(path, "wb") as fh:
        fh.write(obj.to_bytes())
