"""Least-presuming joint probability for two events with known marginals.

Fix P(A) = p1 and P(B) = p2 and treat x = P(A and B) as the only unknown.
Grading the two five-node chains

    empty <= A and B <= A <= A or B <= everything
    empty <= A and B <= B <= A or B <= everything

by probability gives increment vectors

    [x, p1 - x, p2 - x, 1 - p1 - p2 + x]     (first chain)
    [x, p2 - x, p1 - x, 1 - p1 - p2 + x]     (second chain)

which are permutations of each other, so both chains share one divergence
profile from the unit-increment null grading:

    d(x) = -x ln x - (p1 - x) ln(p1 - x) - (p2 - x) ln(p2 - x)
           - (1 - p1 - p2 + x) ln(1 - p1 - p2 + x)

d is strictly concave in x, and d'(x) = 0 reduces to
x (1 - p1 - p2 + x) = (p1 - x)(p2 - x), i.e. x = p1 p2: the maximally
noncommittal joint probability is the independent one.

This module provides both the closed form and the generic-solver route
(which maximizes the sum over both chains; same argmax since the chains
tie), so they can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import indexing_function, make_chain
from .divergence import relative_divergence
from .errors import BoundaryError, DomainError
from .solver import AffineMap, GradingTemplate, MrdpProblem, maximize

__all__ = [
    "CHAIN_THROUGH_A",
    "CHAIN_THROUGH_B",
    "IndependenceInstance",
    "ObjectiveCurve",
    "closed_form",
    "d_double_prime",
    "d_prime",
    "feasible_interval",
    "independence_problem",
    "objective_d",
    "solve_independence",
    "sweep_curve",
]

#: The two maximal chains from the empty event to the sure event that pass
#: through the intersection and the union.
CHAIN_THROUGH_A = make_chain(("empty", "A&B", "A", "A|B", "everything"))
CHAIN_THROUGH_B = make_chain(("empty", "A&B", "B", "A|B", "everything"))

_UNIT_NULL = (1.0, 1.0, 1.0, 1.0)


def _check_probability(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def feasible_interval(p1: float, p2: float) -> tuple[float, float]:
    """Closed interval of joint probabilities consistent with the marginals:
    [max(0, p1 + p2 - 1), min(p1, p2)].

    Boundary marginals are resolved exactly: a marginal of 0 gives [0, 0]
    and a marginal of 1 pins the interval to the other marginal, matching
    the algebraic simplification of the formula instead of rounding
    ``p1 + p2 - 1``.  Elsewhere the lower end is clamped to the upper end
    if rounding ever pushes it past, so the interval is never inverted.
    """
    p1 = _check_probability("p1", p1)
    p2 = _check_probability("p2", p2)
    if p1 == 0.0 or p2 == 0.0:
        return 0.0, 0.0
    if p1 == 1.0:
        return p2, p2
    if p2 == 1.0:
        return p1, p1
    hi = min(p1, p2)
    lo = max(0.0, p1 + p2 - 1.0)
    if lo > hi:
        lo = hi
    return lo, hi


def closed_form(p1: float, p2: float) -> float:
    """The joint probability under independence, p1 * p2."""
    return _check_probability("p1", p1) * _check_probability("p2", p2)


def _increments(p1: float, p2: float, x: float) -> list[float]:
    return [x, p1 - x, p2 - x, 1.0 - p1 - p2 + x]


def objective_d(p1: float, p2: float, x: float) -> float:
    """d(x): relative divergence of one chain's grading from the
    unit-increment null, at joint probability ``x``.

    Both chains give the same value (their increments are permutations).
    Defined on the closed feasible interval; increments that round to just
    below zero at the interval ends are clamped to 0 (the 0 ln 0 := 0
    convention covers them).
    """
    lo, hi = feasible_interval(p1, p2)
    x = float(x)
    if not lo <= x <= hi:
        raise DomainError(
            f"x={x!r} is outside the feasible interval [{lo!r}, {hi!r}]")
    inc = [0.0 if -1e-12 < v < 0.0 else v for v in _increments(p1, p2, x)]
    return relative_divergence(inc, _UNIT_NULL)


def d_prime(p1: float, p2: float, x: float) -> float:
    """d'(x) = -ln x + ln(p1 - x) + ln(p2 - x) - ln(1 - p1 - p2 + x).

    Only defined strictly inside the feasible interval, where all four
    increments are positive.  Vanishes exactly at x = p1 p2.
    """
    x = float(x)
    f1, f2, f3, f4 = _increments(p1, p2, _check_x_interior(p1, p2, x))
    return -math.log(f1) + math.log(f2) + math.log(f3) - math.log(f4)


def d_double_prime(p1: float, p2: float, x: float) -> float:
    """d''(x) = -1/x - 1/(p1 - x) - 1/(p2 - x) - 1/(1 - p1 - p2 + x).

    Strictly negative everywhere it is defined, which is what makes the
    interior stationary point the unique maximum.
    """
    x = float(x)
    f1, f2, f3, f4 = _increments(p1, p2, _check_x_interior(p1, p2, x))
    return -1.0 / f1 - 1.0 / f2 - 1.0 / f3 - 1.0 / f4


def _check_x_interior(p1: float, p2: float, x: float) -> float:
    lo, hi = feasible_interval(p1, p2)
    if not lo < x < hi:
        raise BoundaryError(
            f"x={x!r} is not strictly inside the feasible interval "
            f"({lo!r}, {hi!r}); the derivatives diverge at the ends")
    if min(_increments(p1, p2, x)) <= 0.0:
        raise BoundaryError(
            f"an increment vanishes at x={x!r}; the derivatives diverge "
            "where increments vanish")
    return x


@dataclass(frozen=True)
class IndependenceInstance:
    """Two marginals bundled with the chains and interval they induce."""

    p1: float
    p2: float

    def __post_init__(self):
        _check_probability("p1", self.p1)
        _check_probability("p2", self.p2)

    @property
    def chain_c1(self):
        return CHAIN_THROUGH_A

    @property
    def chain_c2(self):
        return CHAIN_THROUGH_B

    @property
    def interval(self) -> tuple[float, float]:
        return feasible_interval(self.p1, self.p2)

    def problem(self) -> MrdpProblem:
        return independence_problem(self.p1, self.p2)


def independence_problem(p1: float, p2: float) -> MrdpProblem:
    """The two-chain setup as a generic one-parameter solver problem.

    The solver objective sums both chains' divergences (twice d, since the
    chains tie), so its argmax matches the argmax of d itself.
    """
    lo, hi = feasible_interval(p1, p2)

    def template(chain, own_marginal):
        return GradingTemplate(chain, (
            AffineMap(0.0, (0.0,)),
            AffineMap(0.0, (1.0,)),
            AffineMap(own_marginal, (0.0,)),
            AffineMap(p1 + p2, (-1.0,)),
            AffineMap(1.0, (0.0,)),
        ))

    return MrdpProblem(
        templates=(
            (template(CHAIN_THROUGH_A, p1), indexing_function(CHAIN_THROUGH_A)),
            (template(CHAIN_THROUGH_B, p2), indexing_function(CHAIN_THROUGH_B)),
        ),
        bounds=((lo, hi),),
    )


def solve_independence(p1: float, p2: float, tol: float = 1e-12) -> float:
    """Joint probability maximizing d, via the generic solver.

    Agrees with :func:`closed_form` to within ``tol``.  A degenerate
    feasible interval (a marginal of 0 or 1) collapses to its single point,
    which is returned exactly.
    """
    report = maximize(independence_problem(p1, p2), tol)
    return report.argmax[0]


@dataclass(frozen=True)
class ObjectiveCurve:
    """d sampled on a uniform grid over the feasible interval, with the
    derivatives at interior points (None at the ends, where they diverge)."""

    xs: tuple[float, ...]
    d_values: tuple[float, ...]
    d_prime_values: tuple[float | None, ...]
    d_double_prime_values: tuple[float | None, ...]


def sweep_curve(p1: float, p2: float, steps: int) -> ObjectiveCurve:
    """Sample d (and its derivatives where defined) at ``steps`` evenly
    spaced points spanning the closed feasible interval.

    A degenerate interval yields a single-row curve with the derivatives
    omitted, whatever ``steps`` says.
    """
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    lo, hi = feasible_interval(p1, p2)
    if lo == hi:
        return ObjectiveCurve(
            (lo,), (objective_d(p1, p2, lo),), (None,), (None,))
    width = hi - lo
    xs = [lo + width * i / (steps - 1) for i in range(steps)]
    xs[0] = lo
    xs[-1] = hi
    ds = []
    dps: list[float | None] = []
    ddps: list[float | None] = []
    for i, x in enumerate(xs):
        ds.append(objective_d(p1, p2, x))
        if i == 0 or i == steps - 1:
            dps.append(None)
            ddps.append(None)
        else:
            try:
                dps.append(d_prime(p1, p2, x))
                ddps.append(d_double_prime(p1, p2, x))
            except BoundaryError:
                # Rounding can land an interior grid point on the ends of a
                # near-degenerate interval.
                dps.append(None)
                ddps.append(None)
    return ObjectiveCurve(tuple(xs), tuple(ds), tuple(dps), tuple(ddps))
