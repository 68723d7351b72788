import io
import math
from fractions import Fraction

import numpy as np
import pytest

from obcstego.analysis import (
    GENERATOR,
    capacity_curve,
    length_variance,
    payload_experiment,
    usage_experiment,
    write_curve_csv,
    write_usage_csv,
)
from obcstego.codebook import build_obc, expected_length, min_redundancy
from obcstego.errors import InvalidParameterError
from obcstego.plotting import plot_capacity_curve, plot_usage


def test_curve_single_point():
    (p,) = capacity_curve(2, 2)
    assert (p.q, p.entropy_bound, p.achievable, p.redundancy) == (2, 1.0, 1.0, 0.0)


def test_curve_points_q6_q16():
    points = {p.q: p for p in capacity_curve(2, 16)}
    assert points[6].entropy_bound == pytest.approx(2.584962500721156, abs=1e-12)
    assert points[6].achievable == 2.5
    assert points[6].redundancy == pytest.approx(1 - 2.5 / math.log2(6), abs=1e-15)
    assert (points[16].entropy_bound, points[16].achievable, points[16].redundancy) == (4, 4, 0)


def test_curve_invariants():
    points = capacity_curve(2, 300)
    for prev, p in zip(points, points[1:]):
        assert p.achievable >= prev.achievable
    for p in points:
        assert p.redundancy == min_redundancy(p.q)
        assert p.achievable_exact == expected_length(build_obc(p.q))
        assert 0 <= p.achievable <= p.entropy_bound
        power = p.q & (p.q - 1) == 0
        assert (p.entropy_bound - p.achievable == 0) is power


def test_curve_range_error():
    with pytest.raises(InvalidParameterError):
        capacity_curve(1, 5)
    with pytest.raises(InvalidParameterError):
        capacity_curve(9, 5)


def test_length_variance_q6():
    assert length_variance(6) == Fraction(1, 4)
    assert length_variance(8) == 0


def test_usage_q4():
    stats = usage_experiment(4, 100_000, seed=7)
    assert stats.tv_distance < 0.01
    assert stats.counts.sum() == 100_000


def test_usage_q6():
    stats = usage_experiment(6, 100_000, seed=3)
    assert stats.tv_distance < 0.02
    assert np.allclose(stats.empirical, [1 / 8] * 4 + [1 / 4] * 2, atol=0.01)
    assert stats.generator == GENERATOR


def test_usage_single_block():
    stats = usage_experiment(2, 1, seed=0)
    assert stats.counts.sum() == 1
    assert 0 <= stats.tv_distance <= 1


def test_usage_reproducible():
    a = usage_experiment(11, 5000, seed=42)
    b = usage_experiment(11, 5000, seed=42)
    assert np.array_equal(a.counts, b.counts)
    c = usage_experiment(11, 5000, seed=43)
    assert not np.array_equal(a.counts, c.counts)


@pytest.mark.parametrize("q", [2, 3, 5, 7, 9, 13, 16])
def test_usage_tv_small_q(q):
    assert usage_experiment(q, 100_000, seed=q).tv_distance < 0.02


def test_payload_power_of_two_exact():
    for n in (1, 17, 1000):
        stats = payload_experiment(8, n, seed=n)
        assert stats.mean_bits == 3.0 and stats.std_bits == 0.0


@pytest.mark.parametrize("q,target", [(6, 2.5), (3, 1.5)])
def test_payload_converges(q, target):
    stats = payload_experiment(q, 100_000, seed=11)
    assert abs(stats.mean_bits - target) < 0.01


@pytest.mark.parametrize("q", [2, 3, 5, 6, 10, 33, 64])
def test_payload_hard_bounds(q):
    L = q.bit_length() - 1
    stats = payload_experiment(q, 2000, seed=1)
    assert L <= stats.min_bits <= stats.max_bits <= L + 1
    assert L <= stats.mean_bits <= L + 1


def test_curve_csv():
    buf = io.StringIO()
    write_curve_csv(capacity_curve(2, 6), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "q,entropy_bound,achievable_payload,min_redundancy"
    assert lines[5] == "6,2.58496250072,2.5,0.0328679819136"
    assert len(lines) == 6


def test_usage_csv():
    buf = io.StringIO()
    write_usage_csv(usage_experiment(6, 1000, seed=1), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "state_index,expected_prob,empirical_freq"
    assert lines[1].startswith("0,0.125,")
    assert lines[6].startswith("5,0.25,")
    meta = dict(line[2:].split("=", 1) for line in lines if line.startswith("# "))
    assert meta["generator"] == GENERATOR and meta["seed"] == "1"
    assert float(meta["tv_distance"]) >= 0


def test_figures_written(tmp_path):
    plot_capacity_curve(capacity_curve(2, 32), tmp_path / "curve.png")
    plot_usage(usage_experiment(6, 500, seed=0), tmp_path / "usage.png")
    for name in ("curve.png", "usage.png"):
        data = (tmp_path / name).read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
