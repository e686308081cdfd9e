"""Relative divergence of grading functions on finite chains, and the
maximum-relative-divergence solver built on it.

A grading function assigns strictly increasing real values along a finite
totally ordered chain; its relative divergence from a null grading function
is -sum f_k ln(f_k / g_k) over the increment sequences.  Maximizing that
divergence over whatever freedom the known values leave picks the least
presuming grading; for two events with known marginals the maximizer is
the independent joint probability p1 * p2.

The HTTP facade lives in :mod:`mrdp.service`, the command-line client in
:mod:`mrdp.cli`; importing :mod:`mrdp` itself stays lightweight.
"""

from . import errors
from .chain import (
    Chain,
    GradingFunction,
    IncrementSequence,
    increments,
    indexing_function,
    make_chain,
    make_grading,
)
from .divergence import relative_divergence, shannon_entropy, xlnx
from .independence import (
    CHAIN_THROUGH_A,
    CHAIN_THROUGH_B,
    IndependenceInstance,
    ObjectiveCurve,
    closed_form,
    d_double_prime,
    d_prime,
    feasible_interval,
    independence_problem,
    objective_d,
    solve_independence,
    sweep_curve,
)
from .problemfile import format_problem, parse_problem
from .solver import (
    AffineMap,
    GradingTemplate,
    MrdpProblem,
    SolveReport,
    gradient,
    grid_oracle,
    maximize,
    objective,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "CHAIN_THROUGH_A",
    "CHAIN_THROUGH_B",
    "Chain",
    "GradingFunction",
    "GradingTemplate",
    "IncrementSequence",
    "IndependenceInstance",
    "MrdpProblem",
    "ObjectiveCurve",
    "SolveReport",
    "closed_form",
    "d_double_prime",
    "d_prime",
    "errors",
    "feasible_interval",
    "format_problem",
    "gradient",
    "grid_oracle",
    "increments",
    "independence_problem",
    "indexing_function",
    "make_chain",
    "make_grading",
    "maximize",
    "objective",
    "objective_d",
    "parse_problem",
    "relative_divergence",
    "shannon_entropy",
    "solve_independence",
    "sweep_curve",
    "xlnx",
]
