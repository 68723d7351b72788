"""Optimal binary codes for a fixed number of stego states.

A block that can be driven into one of ``q`` states carries the most
expected payload when its states are labelled with a complete prefix code
whose codeword lengths differ by at most one.  With ``L = floor(log2 q)``
such a code has ``n1 = 2**(L+1) - q`` words of length ``L`` and
``n2 = 2*q - 2**(L+1)`` words of length ``L + 1``.

The canonical code built here extends the ``n2 // 2`` numerically smallest
length-``L`` words by ``0`` and ``1`` and lists the result in
lexicographic order, which gives a closed form for the ``i``-th codeword::

    i <  n2  ->  value i,               length L + 1
    i >= n2  ->  value n2//2 + i - n2,  length L

Expected lengths and state probabilities are dyadic rationals and are
returned as exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, List, NamedTuple, Union

import numpy as np

from .errors import InvalidParameterError, NotACodewordError

MAX_Q = 1 << 30
"""Largest supported state count; keeps codewords at or below 31 bits."""


@dataclass(frozen=True, order=True)
class Codeword:
    """A codeword stored as its integer value and explicit bit length.

    ``Codeword(3, 3)`` is the string ``"011"``.  Leading zeros are significant,
    which is why the length is carried separately.
    """

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("codeword length must be at least 1")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_bits(cls, bits: Union[str, Iterable[int]]) -> "Codeword":
        """Build a codeword from ``"0110"`` or an iterable of 0/1 ints."""
        if isinstance(bits, str):
            text = bits
        else:
            text = "".join(str(int(b)) for b in bits)
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(int(text, 2), len(text))

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.length}b")

    def bit_tuple(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - 1 - k)) & 1 for k in range(self.length))

    def is_prefix_of(self, other: "Codeword") -> bool:
        if self.length > other.length:
            return False
        return other.value >> (other.length - self.length) == self.value

    def __str__(self) -> str:
        return self.bits


class CodeParams(NamedTuple):
    q: int
    floor_log: int
    n1: int
    n2: int


def _check_q(q: int) -> None:
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)):
        raise InvalidParameterError(f"q must be an integer, got {q!r}")
    if q < 2:
        raise InvalidParameterError(f"q must be at least 2 (a single state carries no bits), got {q}")
    if q > MAX_Q:
        raise InvalidParameterError(f"q must not exceed 2**30, got {q}")


@lru_cache(maxsize=1024)
def code_params(q: int) -> CodeParams:
    """Return ``(q, floor_log, n1, n2)`` for the optimal code with ``q`` words."""
    _check_q(q)
    q = int(q)
    floor_log = q.bit_length() - 1
    top = 1 << (floor_log + 1)
    return CodeParams(q, floor_log, top - q, 2 * q - top)


@dataclass(frozen=True)
class Codebook:
    """Canonical optimal code for ``q`` states.

    ``values`` and ``lengths`` are read-only numpy arrays in canonical
    (lexicographic) order; ``words`` materializes them as :class:`Codeword`
    objects on first access.
    """

    q: int
    floor_log: int
    n1: int
    n2: int
    values: np.ndarray = field(repr=False, compare=False)
    lengths: np.ndarray = field(repr=False, compare=False)

    @cached_property
    def words(self) -> List[Codeword]:
        return [Codeword(int(v), int(n)) for v, n in zip(self.values, self.lengths)]

    @property
    def max_length(self) -> int:
        return self.floor_log + (1 if self.n2 else 0)

    def __len__(self) -> int:
        return self.q

    def __getitem__(self, i: int) -> Codeword:
        return Codeword(int(self.values[i]), int(self.lengths[i]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        return (
            self.q == other.q
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.lengths, other.lengths)
        )

    def __hash__(self) -> int:
        return hash(("Codebook", self.q))

    def bit_strings(self) -> List[str]:
        return [w.bits for w in self.words]


def build_obc(q: int) -> Codebook:
    """Construct the canonical optimal binary code for ``q`` states.

    All ``2**L`` words of length ``L = floor(log2 q)`` are collected, the
    ``n2 // 2`` smallest are split into two children by appending ``0`` and
    ``1``, and the untouched words follow.  The split words precede the
    untouched ones numerically, so the concatenation is already in
    lexicographic order.

    >>> build_obc(6).bit_strings()
    ['000', '001', '010', '011', '10', '11']
    """
    q, floor_log, n1, n2 = code_params(q)
    short_words = np.arange(1 << floor_log, dtype=np.uint32)
    split = short_words[: n2 // 2]
    children = (split[:, None] * 2 + np.array([0, 1], dtype=np.uint32)).ravel()
    kept = short_words[n2 // 2 :]

    values = np.concatenate([children, kept])
    lengths = np.concatenate(
        [
            np.full(children.size, floor_log + 1, dtype=np.uint8),
            np.full(kept.size, floor_log, dtype=np.uint8),
        ]
    )
    values.flags.writeable = False
    lengths.flags.writeable = False
    return Codebook(q=q, floor_log=floor_log, n1=n1, n2=n2, values=values, lengths=lengths)


def codeword_of_index(q: int, i: int) -> Codeword:
    """Return the ``i``-th canonical codeword without building the code."""
    q, floor_log, _, n2 = code_params(q)
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i < q:
        raise IndexError(f"state index {i!r} out of range for q={q}")
    i = int(i)
    if i < n2:
        return Codeword(i, floor_log + 1)
    return Codeword(n2 // 2 + i - n2, floor_log)


def index_of_codeword(q: int, w: Union[Codeword, str]) -> int:
    """Inverse of :func:`codeword_of_index`."""
    if isinstance(w, str):
        w = Codeword.from_bits(w)
    _, floor_log, _, n2 = code_params(q)
    if w.length == floor_log + 1 and w.value < n2:
        return w.value
    if w.length == floor_log and n2 // 2 <= w.value < (1 << floor_log):
        return n2 + w.value - n2 // 2
    raise NotACodewordError(f"{w.bits!r} is not a codeword of the q={q} code")


def codeword_arrays(q: int, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`codeword_of_index`: ``(values, lengths)`` for many indices."""
    _, floor_log, _, n2 = code_params(q)
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= q):
        raise IndexError(f"state index out of range for q={q}")
    long_word = idx < n2
    values = np.where(long_word, idx, n2 // 2 + idx - n2)
    lengths = np.where(long_word, floor_log + 1, floor_log)
    return values, lengths


def kraft_sum(cb: Codebook) -> Fraction:
    """Exact ``sum(2**-length)`` over the code."""
    top = cb.max_length
    total = int(np.sum(np.left_shift(np.int64(1), top - cb.lengths.astype(np.int64))))
    return Fraction(total, 1 << top)


def expected_length(cb: Codebook) -> Fraction:
    """Expected bits per block, ``sum(l * 2**-l)``, by direct summation."""
    top = cb.max_length
    lengths = cb.lengths.astype(np.int64)
    total = int(np.sum(lengths << (top - lengths)))
    return Fraction(total, 1 << top)


def optimal_expected_length(q: int) -> Fraction:
    """Closed form ``floor_log + q / 2**floor_log - 1``."""
    q, floor_log, _, _ = code_params(q)
    return floor_log - 1 + Fraction(q, 1 << floor_log)


def state_probabilities(cb: Codebook) -> List[Fraction]:
    """Probability that each state is selected when the message bits are uniform."""
    return [Fraction(1, 1 << int(n)) for n in cb.lengths]


def min_redundancy(q: int) -> float:
    """``1 - l_max / log2(q)``; exactly ``0.0`` when ``q`` is a power of two."""
    q, floor_log, _, n2 = code_params(q)
    if n2 == 0:
        return 0.0
    return 1.0 - float(optimal_expected_length(q)) / math.log2(q)


def redundancy_is_positive(q: int) -> bool:
    """Decide ``min_redundancy(q) > 0`` exactly.

    Writing ``t = q / 2**L`` the redundancy is positive iff
    ``log2(t) > t - 1``, i.e. ``q**(2**L) > 2**(q - 2**L + L * 2**L)``.
    Both sides are integers, so the comparison involves no rounding.
    """
    q, floor_log, _, _ = code_params(q)
    base = 1 << floor_log
    return q**base > 1 << (q - base + floor_log * base)


def is_dyadic(x: Fraction) -> bool:
    """True when the reduced denominator of ``x`` is a power of two."""
    d = x.denominator
    return d & (d - 1) == 0
