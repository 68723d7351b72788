"""Exhaustive certification of the optimal code for small ``q``.

Every complete binary prefix code with ``q`` words is a full binary tree
with ``q`` leaves, and its expected length depends only on the multiset of
leaf depths.  Trees are built recursively (root = left subtree with ``k``
leaves + right subtree with ``q - k``), so the set of depth multisets for
``q`` is assembled from those of smaller leaf counts, each tagged with the
number of distinct trees that produce it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from .codebook import build_obc, code_params, optimal_expected_length
from .errors import EnumerationRangeError, InvalidCodeError

MAX_ENUM_Q = 14

DepthMultiset = Tuple[int, ...]


def _check_range(q: int) -> None:
    if not 2 <= q <= MAX_ENUM_Q:
        raise EnumerationRangeError(f"enumeration supports 2 <= q <= {MAX_ENUM_Q}, got {q}")


@lru_cache(maxsize=None)
def _depth_multisets(leaves: int) -> Dict[DepthMultiset, int]:
    # sorted depth tuple -> number of full binary trees with that profile
    if leaves == 1:
        return {(0,): 1}
    out: Counter = Counter()
    for k in range(1, leaves):
        for left, n_left in _depth_multisets(k).items():
            for right, n_right in _depth_multisets(leaves - k).items():
                merged = tuple(sorted(d + 1 for d in left + right))
                out[merged] += n_left * n_right
    return dict(out)


def enumerate_code_trees(q: int) -> Iterator[DepthMultiset]:
    """Yield each distinct leaf-depth multiset of a full binary tree with ``q`` leaves.

    Multisets are ascending tuples, e.g. ``(1, 2, 3, 3)``.
    """
    _check_range(q)
    yield from sorted(_depth_multisets(q))


def count_code_trees(q: int) -> int:
    """Number of full binary trees with ``q`` leaves (before deduplication)."""
    _check_range(q)
    return sum(_depth_multisets(q).values())


def iter_full_trees(leaves: int) -> Iterator[object]:
    """Materialize every full binary tree; a leaf is ``None``, a node a pair."""
    if leaves == 1:
        yield None
        return
    for k in range(1, leaves):
        for left in iter_full_trees(k):
            for right in iter_full_trees(leaves - k):
                yield (left, right)


def leaf_depths(tree: object, depth: int = 0) -> List[int]:
    if tree is None:
        return [depth]
    left, right = tree
    return leaf_depths(left, depth + 1) + leaf_depths(right, depth + 1)


def kraft(depths: DepthMultiset) -> Fraction:
    return sum((Fraction(1, 1 << d) for d in depths), Fraction(0))


def expected_length_of_depths(depths: DepthMultiset) -> Fraction:
    return sum((Fraction(d, 1 << d) for d in depths), Fraction(0))


def brute_force_max_expected_length(q: int) -> Tuple[Fraction, List[DepthMultiset]]:
    """Maximum of ``sum(d * 2**-d)`` over all complete codes, with every maximizer."""
    best: Optional[Fraction] = None
    winners: List[DepthMultiset] = []
    for depths in enumerate_code_trees(q):
        value = expected_length_of_depths(depths)
        if best is None or value > best:
            best, winners = value, [depths]
        elif value == best:
            winners.append(depths)
    assert best is not None
    return best, winners


def exchange_improvement(depths: DepthMultiset) -> Optional[DepthMultiset]:
    """Apply one split/merge exchange to a code whose depths spread by 2 or more.

    A shallowest leaf at depth ``a`` is split into two leaves at ``a + 1`` and
    a deepest sibling pair at depth ``b`` is merged into one leaf at
    ``b - 1``.  The expected length grows by ``2**-a - 2**-(b-1) > 0``.
    Returns ``None`` when the spread is already at most one.
    """
    depths = tuple(sorted(depths))
    if not depths or kraft(depths) != 1:
        raise InvalidCodeError(f"depths {depths} do not satisfy the Kraft equality")
    shallow, deep = depths[0], depths[-1]
    if deep - shallow < 2:
        return None
    out = list(depths)
    out.remove(shallow)
    out.remove(deep)
    out.remove(deep)
    out += [shallow + 1, shallow + 1, deep - 1]
    return tuple(sorted(out))


def exchange_gain(depths: DepthMultiset) -> Fraction:
    """Expected-length gain of :func:`exchange_improvement`, from the depths alone."""
    shallow, deep = min(depths), max(depths)
    return Fraction(1, 1 << shallow) - Fraction(1, 1 << (deep - 1))


def optimal_depths(q: int) -> DepthMultiset:
    _, floor_log, n1, n2 = code_params(q)
    return tuple(sorted([floor_log] * n1 + [floor_log + 1] * n2))


@dataclass
class Clause:
    clause_id: str
    q: int
    passed: bool
    witness: str

    def line(self) -> str:
        return f"clause={self.clause_id} q={self.q} result={'pass' if self.passed else 'fail'} witness={self.witness}"


@dataclass
class Certificate:
    q: int
    maximum: Fraction
    maximizers: List[DepthMultiset]
    clauses: List[Clause] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} q={self.q} max={self.maximum} maximizers={len(self.maximizers)}"

    def to_text(self) -> str:
        return "\n".join(c.line() for c in self.clauses)


def _fmt(depths: DepthMultiset) -> str:
    return "{" + ",".join(map(str, depths)) + "}"


def certify_obc(q: int) -> Certificate:
    """Check the closed-form optimum and the constructed code against enumeration.

    Clauses: ``a`` max equals the closed form, ``b`` every maximizer has
    depth spread at most one, ``c`` every maximizer has the predicted
    short/long counts, ``d`` the built code's lengths equal that multiset.
    Uniqueness of the maximizer is reported in the witness of ``c``.
    """
    maximum, maximizers = brute_force_max_expected_length(q)
    closed = optimal_expected_length(q)
    predicted = optimal_depths(q)
    built = tuple(sorted(int(n) for n in build_obc(q).lengths))
    spreads = [m[-1] - m[0] for m in maximizers]
    clauses = [
        Clause("a", q, maximum == closed, f"max={maximum} closed_form={closed}"),
        Clause("b", q, all(s <= 1 for s in spreads), f"spreads={spreads}"),
        Clause(
            "c",
            q,
            all(m == predicted for m in maximizers),
            f"predicted={_fmt(predicted)} unique={len(maximizers) == 1}",
        ),
        Clause("d", q, built == predicted, f"built={_fmt(built)}"),
    ]
    return Certificate(q, maximum, maximizers, clauses)
