from collections import Counter
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obcstego.codebook import optimal_expected_length
from obcstego.errors import EnumerationRangeError, InvalidCodeError
from obcstego.oracle import (
    brute_force_max_expected_length,
    certify_obc,
    count_code_trees,
    enumerate_code_trees,
    exchange_gain,
    exchange_improvement,
    expected_length_of_depths,
    iter_full_trees,
    kraft,
    leaf_depths,
)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_enumeration_small_cases():
    assert list(enumerate_code_trees(2)) == [(1, 1)]
    assert list(enumerate_code_trees(3)) == [(1, 2, 2)]
    assert sorted(enumerate_code_trees(4)) == [(1, 2, 3, 3), (2, 2, 2, 2)]


@pytest.mark.parametrize("q", range(2, 15))
def test_tree_count_is_catalan(q):
    assert count_code_trees(q) == catalan(q - 1)


@pytest.mark.parametrize("q", range(2, 10))
def test_multisets_match_materialized_trees(q):
    # independent path: build every tree explicitly and collect depth profiles
    trees = list(iter_full_trees(q))
    assert len(trees) == catalan(q - 1)
    profiles = Counter(tuple(sorted(leaf_depths(t))) for t in trees)
    assert set(profiles) == set(enumerate_code_trees(q))


@pytest.mark.parametrize("q", range(2, 15))
def test_every_enumerated_profile_is_complete(q):
    for depths in enumerate_code_trees(q):
        assert len(depths) == q
        assert kraft(depths) == 1


@pytest.mark.parametrize("q", [1, 15, 0])
def test_enumeration_range(q):
    with pytest.raises(EnumerationRangeError):
        list(enumerate_code_trees(q))
    with pytest.raises(EnumerationRangeError):
        brute_force_max_expected_length(q)


@pytest.mark.parametrize(
    "q,best,winner",
    [(2, Fraction(1), (1, 1)), (6, Fraction(5, 2), (2, 2, 3, 3, 3, 3)), (4, Fraction(2), (2, 2, 2, 2))],
)
def test_brute_force_examples(q, best, winner):
    value, winners = brute_force_max_expected_length(q)
    assert value == best
    assert winners == [winner]


def test_q4_runner_up_score():
    assert expected_length_of_depths((1, 2, 3, 3)) == Fraction(7, 4)


@pytest.mark.parametrize("q", range(2, 13))
def test_brute_force_equals_closed_form(q):
    value, winners = brute_force_max_expected_length(q)
    assert value == optimal_expected_length(q)
    assert len(winners) == 1


@pytest.mark.parametrize("q,maximum", [(5, Fraction(9, 4)), (8, Fraction(3)), (12, Fraction(7, 2))])
def test_certify_examples(q, maximum):
    cert = certify_obc(q)
    assert cert.passed
    assert cert.maximum == maximum
    assert [c.clause_id for c in cert.clauses] == ["a", "b", "c", "d"]
    lines = cert.to_text().splitlines()
    assert len(lines) == 4
    assert all(f"q={q} result=pass" in line for line in lines)
    assert cert.summary_line().startswith("PASS")


def test_certify_q8_unique_complete_tree():
    cert = certify_obc(8)
    assert cert.maximizers == [(3,) * 8]


# -- exchange -----------------------------------------------------------------


def test_exchange_example():
    before = (1, 2, 3, 3)
    after = exchange_improvement(before)
    assert after == (2, 2, 2, 2)
    gain = expected_length_of_depths(after) - expected_length_of_depths(before)
    assert gain == Fraction(1, 4) == exchange_gain(before)


@pytest.mark.parametrize("depths", [(2, 2, 2, 2), (1, 1), (2, 2, 2, 3, 3)])
def test_exchange_noop_when_balanced(depths):
    assert exchange_improvement(depths) is None


def test_exchange_rejects_incomplete():
    with pytest.raises(InvalidCodeError):
        exchange_improvement((1, 2))


def _sq(depths):
    return sum(d * d for d in depths)


@pytest.mark.parametrize("q", range(3, 13))
def test_exchange_strictly_improves_and_terminates(q):
    target = brute_force_max_expected_length(q)[1][0]
    for depths in enumerate_code_trees(q):
        current = depths
        steps = 0
        while (nxt := exchange_improvement(current)) is not None:
            assert kraft(nxt) == 1 and len(nxt) == q
            gain = expected_length_of_depths(nxt) - expected_length_of_depths(current)
            assert gain == exchange_gain(current) > 0
            # termination measure: sum of squared depths drops each step
            assert _sq(nxt) < _sq(current)
            current = nxt
            steps += 1
            assert steps <= _sq(depths)
        assert current == target


@given(st.integers(2, 40), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_exchange_from_random_trees(q, rnd):
    # random full tree by repeatedly splitting a random leaf
    depths = [0]
    while len(depths) < q:
        d = depths.pop(rnd.randrange(len(depths)))
        depths += [d + 1, d + 1]
    current = tuple(sorted(depths))
    while (nxt := exchange_improvement(current)) is not None:
        assert expected_length_of_depths(nxt) > expected_length_of_depths(current)
        current = nxt
    assert current[-1] - current[0] <= 1
    assert expected_length_of_depths(current) == optimal_expected_length(q)
