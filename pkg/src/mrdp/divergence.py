"""The relative-divergence functional and its Shannon-entropy special case.

For increment sequences ``f`` and ``g`` of the same length, the relative
divergence is

    D(F || G) = -sum_k f_k * ln(f_k / g_k)

in natural-log units (nats).  Terms with ``f_k = 0`` contribute exactly 0
(the closure convention ``0 * ln 0 := 0``), which extends the functional
continuously to sequences with vanishing increments so that boundary points
of a feasible interval can be evaluated.

Sign note: when ``g`` is a probability vector, ``-D(f || g)`` is the
Kullback-Leibler divergence of ``f`` from ``g``, so ``D`` is then <= 0 with
equality iff ``f == g``.  The sign here is chosen so that larger values mean
"less presuming": against unit increments, ``D`` of a probability vector is
its Shannon entropy.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

from .errors import DomainError, NormalizationError, SizeError

__all__ = ["relative_divergence", "shannon_entropy", "xlnx"]

#: Permitted deviation of a probability vector's sum from 1.
PROBABILITY_SUM_TOL = 1e-9


def xlnx(t: float) -> float:
    """``t * ln(t)`` extended by continuity with ``xlnx(0) == 0``."""
    if t < 0:
        raise DomainError(f"xlnx requires t >= 0, got {t!r}")
    if t == 0.0:
        return 0.0
    return t * math.log(t)


def relative_divergence(f: Iterable[float], g: Iterable[float]) -> float:
    """Relative divergence ``-sum f_k ln(f_k/g_k)`` of ``f`` from ``g``.

    ``f`` and ``g`` may be :class:`~mrdp.chain.IncrementSequence` instances
    or plain sequences.  ``g`` entries must be strictly positive; ``f``
    entries must be nonnegative (zeros are allowed and contribute nothing),
    so candidate points that sit on the boundary of a feasible region can be
    scored.

    Returns the divergence in nats.
    """
    fs = [float(v) for v in f]
    gs = [float(v) for v in g]
    if len(fs) != len(gs):
        raise SizeError(
            f"f and g must have the same length, got {len(fs)} and {len(gs)}")
    total = 0.0
    for k, (fk, gk) in enumerate(zip(fs, gs)):
        if gk <= 0:
            raise DomainError(f"g[{k}]={gk!r} must be > 0")
        if fk < 0:
            raise DomainError(f"f[{k}]={fk!r} must be >= 0")
        if fk == 0.0:
            continue
        total -= fk * math.log(fk / gk)
    return total


def shannon_entropy(p: Iterable[float]) -> float:
    """Shannon entropy ``-sum p_k ln(p_k)`` of a probability vector, in nats.

    Equals :func:`relative_divergence` of ``p`` from all-ones increments,
    i.e. the divergence of a cumulative distribution from the indexing
    grading function.
    """
    ps = [float(v) for v in p]
    total = 0.0
    acc = 0.0
    for k, pk in enumerate(ps):
        if pk < 0:
            raise DomainError(f"p[{k}]={pk!r} must be >= 0")
        acc += pk
        total -= xlnx(pk)
    if abs(acc - 1.0) > PROBABILITY_SUM_TOL:
        raise NormalizationError(
            f"probabilities must sum to 1 within {PROBABILITY_SUM_TOL}, "
            f"got {acc!r}")
    return total
