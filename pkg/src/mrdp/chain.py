"""Finite totally ordered chains and grading functions on them.

A chain is a finite sequence of distinct labels; the list order *is* the
total order.  A grading function attaches strictly increasing real values to
the chain's elements, and its increments (differences of adjacent values)
are the raw material of the relative-divergence functional.

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .errors import ChainError, MonotonicityError, SizeError

__all__ = [
    "Chain",
    "GradingFunction",
    "IncrementSequence",
    "make_chain",
    "make_grading",
    "indexing_function",
    "increments",
]


@dataclass(frozen=True)
class Chain:
    """A finite totally ordered set of labeled elements.

    The position of a label in ``labels`` is its rank in the order; element
    ``k`` precedes element ``k+1``.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 2:
            raise ChainError(
                f"a chain needs at least 2 elements, got {len(self.labels)}")
        seen: set[str] = set()
        for label in self.labels:
            if label in seen:
                raise ChainError(f"duplicate label {label!r}")
            seen.add(label)

    @property
    def length(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class GradingFunction:
    """Strictly increasing real values attached to a chain's elements.

    Strict monotonicity along the chain order is enforced exactly: each
    adjacent difference must be > 0, with no epsilon slack.
    """

    chain: Chain
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != self.chain.length:
            raise SizeError(
                f"expected {self.chain.length} values for chain of length "
                f"{self.chain.length}, got {len(self.values)}")
        for k in range(1, len(self.values)):
            if not self.values[k] > self.values[k - 1]:
                raise MonotonicityError(
                    f"grading values must be strictly increasing; "
                    f"values[{k}]={self.values[k]!r} does not exceed "
                    f"values[{k - 1}]={self.values[k - 1]!r}",
                    index=k)


@dataclass(frozen=True)
class IncrementSequence:
    """Adjacent differences of a grading function's values.

    When produced by :func:`increments` every entry is strictly positive and
    the length is the chain length minus one.
    """

    deltas: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.deltas)

    def __iter__(self) -> Iterator[float]:
        return iter(self.deltas)

    def __getitem__(self, k: int) -> float:
        return self.deltas[k]


def make_chain(labels: Sequence[str]) -> Chain:
    """Build a chain whose order is the given list order.

    Raises ChainError on duplicate labels or fewer than two elements.
    """
    return Chain(tuple(labels))


def make_grading(chain: Chain, values: Sequence[float]) -> GradingFunction:
    """Attach grading values to a chain, verifying strict monotonicity.

    Raises SizeError on a length mismatch and MonotonicityError (with the
    offending index) when adjacent values fail to increase.
    """
    return GradingFunction(chain, tuple(float(v) for v in values))


def indexing_function(chain: Chain) -> GradingFunction:
    """The grading function assigning each element its position index.

    This is the natural "null" grading function used when no other
    information is available; its increments are all 1.
    """
    return GradingFunction(chain, tuple(float(k) for k in range(chain.length)))


def increments(gf: GradingFunction) -> IncrementSequence:
    """Adjacent differences of ``gf``'s values, one per neighboring pair."""
    values = gf.values
    return IncrementSequence(
        tuple(values[k] - values[k - 1] for k in range(1, len(values))))
