"""Capacity curves and Monte Carlo checks of the code's usage law.

Random message bits come from numpy's ``PCG64`` generator seeded with the
caller's seed; the generator name travels with every result so reports
record exactly how they were produced.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, TextIO, Tuple

import numpy as np

from .bitstream import BitStream
from .codebook import build_obc, code_params, min_redundancy, optimal_expected_length, state_probabilities
from .coder import match_next_codeword
from .errors import InvalidParameterError

GENERATOR = "numpy.random.PCG64"


@dataclass(frozen=True)
class CapacityCurvePoint:
    q: int
    entropy_bound: float
    achievable: float
    redundancy: float
    achievable_exact: Fraction


@dataclass
class UsageStats:
    q: int
    block_count: int
    counts: np.ndarray
    empirical: np.ndarray
    expected: List[Fraction]
    tv_distance: float
    mean_bits: float
    seed: int
    generator: str = GENERATOR


@dataclass
class PayloadStats:
    q: int
    block_count: int
    mean_bits: float
    std_bits: float
    min_bits: int
    max_bits: int
    total_bits: int
    seed: int
    generator: str = GENERATOR


def capacity_curve(q_min: int, q_max: int) -> List[CapacityCurvePoint]:
    """Entropy bound, optimal payload and redundancy for every ``q`` in range."""
    if not 2 <= q_min <= q_max:
        raise InvalidParameterError(f"need 2 <= q_min <= q_max, got {q_min}, {q_max}")
    points = []
    for q in range(q_min, q_max + 1):
        exact = optimal_expected_length(q)
        points.append(
            CapacityCurvePoint(
                q=q,
                entropy_bound=math.log2(q),
                achievable=float(exact),
                redundancy=min_redundancy(q),
                achievable_exact=exact,
            )
        )
    return points


def _run_blocks(q: int, block_count: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    if block_count < 1:
        raise InvalidParameterError(f"block count must be positive, got {block_count}")
    floor_log = code_params(q).floor_log
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = rng.integers(0, 2, size=block_count * (floor_log + 1), dtype=np.uint8)
    stream = BitStream(bits)
    states = np.empty(block_count, dtype=np.int64)
    consumed = np.empty(block_count, dtype=np.int64)
    for k in range(block_count):
        states[k], consumed[k] = match_next_codeword(q, stream)
    return states, consumed


def usage_experiment(q: int, block_count: int, seed: int) -> UsageStats:
    """Tally which state each of ``block_count`` blocks takes under uniform bits."""
    states, consumed = _run_blocks(q, block_count, seed)
    counts = np.bincount(states, minlength=q)
    empirical = counts / block_count
    expected = state_probabilities(build_obc(q))
    tv = 0.5 * float(np.abs(empirical - np.array([float(p) for p in expected])).sum())
    return UsageStats(
        q=q,
        block_count=block_count,
        counts=counts,
        empirical=empirical,
        expected=expected,
        tv_distance=tv,
        mean_bits=float(consumed.mean()),
        seed=seed,
    )


def payload_experiment(q: int, block_count: int, seed: int) -> PayloadStats:
    """Bits consumed per block when embedding uniform random bits."""
    _, consumed = _run_blocks(q, block_count, seed)
    return PayloadStats(
        q=q,
        block_count=block_count,
        mean_bits=float(consumed.mean()),
        std_bits=float(consumed.std()),
        min_bits=int(consumed.min()),
        max_bits=int(consumed.max()),
        total_bits=int(consumed.sum()),
        seed=seed,
    )


def length_variance(q: int) -> Fraction:
    """Variance of the codeword length under the code's own usage law."""
    probs = state_probabilities(build_obc(q))
    lengths = [p.denominator.bit_length() - 1 for p in probs]
    mean = sum((p * n for p, n in zip(probs, lengths)), Fraction(0))
    return sum((p * n * n for p, n in zip(probs, lengths)), Fraction(0)) - mean * mean


def _g(x: float) -> str:
    return f"{x:.12g}"


def write_curve_csv(points: Sequence[CapacityCurvePoint], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["q", "entropy_bound", "achievable_payload", "min_redundancy"])
    for p in points:
        writer.writerow([p.q, _g(p.entropy_bound), _g(p.achievable), _g(p.redundancy)])


def write_usage_csv(stats: UsageStats, fh: TextIO) -> None:
    """Rows per state, then ``# key=value`` metadata lines."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["state_index", "expected_prob", "empirical_freq"])
    for i, (p, f) in enumerate(zip(stats.expected, stats.empirical)):
        writer.writerow([i, _g(float(p)), _g(float(f))])
    for key, value in (
        ("q", stats.q),
        ("blocks", stats.block_count),
        ("seed", stats.seed),
        ("generator", stats.generator),
        ("tv_distance", _g(stats.tv_distance)),
        ("mean_bits_per_block", _g(stats.mean_bits)),
    ):
        fh.write(f"# {key}={value}\n")
