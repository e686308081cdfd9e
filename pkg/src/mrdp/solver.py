"""Generic maximum-relative-divergence problems and their solver.

A problem pairs one or more grading-function templates (chain values affine
in a shared parameter vector) with fixed null grading functions, and asks
for the parameter vector inside a bounds box that maximizes the summed
relative divergence of the templates from their nulls.

Because every increment is affine in the parameters, the objective is
concave on the feasible box and the per-coordinate derivative is strictly
decreasing wherever some increment actually varies.  The 1-D solver
exploits this: it brackets a sign change of the derivative (which diverges
to +/- infinity where increments vanish at the interval ends) and closes in
by bisection with Newton acceleration.  Higher dimensions run coordinate
ascent over 1-D solves.

The bounds box must keep all template increments nonnegative; evaluating a
point where an increment goes negative raises
:class:`~mrdp.errors.InfeasiblePointError`.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .chain import Chain, GradingFunction, increments
from .errors import (
    BoundaryError,
    ChainError,
    ConcavityError,
    DomainError,
    InfeasiblePointError,
    InfeasibleProblemError,
    SizeError,
)

__all__ = [
    "AffineMap",
    "GradingTemplate",
    "MrdpProblem",
    "SolveReport",
    "objective",
    "gradient",
    "maximize",
    "grid_oracle",
]

#: Increments at most this far below zero are treated as rounding noise at a
#: closed bound and clamped to 0; anything lower is a genuine violation.
INCREMENT_NOISE_TOL = 1e-12

#: Hard cap on derivative evaluations of one 1-D solve.  Bisection alone
#: reaches width 1e-12 from width 1 in about 40 halvings, so this is ample.
_MAX_ITER = 200

#: Hard cap on coordinate-ascent sweeps for multi-parameter problems.
_MAX_SWEEPS = 500


@dataclass(frozen=True)
class AffineMap:
    """``x -> constant + sum_j coeffs[j] * x[j]``."""

    constant: float
    coeffs: tuple[float, ...]

    def __call__(self, x: Sequence[float]) -> float:
        total = self.constant
        for a, xj in zip(self.coeffs, x, strict=True):
            total += a * xj
        return total


@dataclass(frozen=True)
class GradingTemplate:
    """A chain whose grading values are affine in a shared parameter vector.

    The first and last node maps are typically constants (e.g. the
    probability axioms pin 0 and 1), but that is a modeling convention, not
    a requirement of the type.
    """

    chain: Chain
    node_maps: tuple[AffineMap, ...]

    def __post_init__(self):
        if len(self.node_maps) != self.chain.length:
            raise SizeError(
                f"expected {self.chain.length} node maps for chain of length "
                f"{self.chain.length}, got {len(self.node_maps)}")
        dims = {len(m.coeffs) for m in self.node_maps}
        if len(dims) != 1:
            raise SizeError(
                f"node maps disagree on parameter dimension: {sorted(dims)}")

    @property
    def dimension(self) -> int:
        return len(self.node_maps[0].coeffs)

    def values_at(self, x: Sequence[float]) -> list[float]:
        return [m(x) for m in self.node_maps]

    def increment_maps(self) -> tuple[AffineMap, ...]:
        """Affine maps of the increments: differences of adjacent node maps."""
        out = []
        for k in range(1, len(self.node_maps)):
            top, bot = self.node_maps[k], self.node_maps[k - 1]
            out.append(AffineMap(
                top.constant - bot.constant,
                tuple(a - b for a, b in zip(top.coeffs, bot.coeffs))))
        return tuple(out)


@dataclass(frozen=True)
class MrdpProblem:
    """One or more (template, null grading function) pairs sharing a
    parameter vector, plus per-parameter closed bounds."""

    templates: tuple[tuple[GradingTemplate, GradingFunction], ...]
    bounds: tuple[tuple[float, float], ...]
    # per template: (increment constants, increment coefficient rows,
    # null increments, log null increments), precomputed for evaluation
    _forms: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.templates:
            raise SizeError("a problem needs at least one template")
        m = len(self.bounds)
        if m < 1:
            raise SizeError("a problem needs at least one parameter")
        for j, (lo, hi) in enumerate(self.bounds):
            if not lo <= hi:
                raise InfeasibleProblemError(
                    f"empty feasible region: bounds[{j}] has lo={lo!r} > hi={hi!r}")
        forms = []
        for t, (template, null_gf) in enumerate(self.templates):
            if null_gf.chain != template.chain:
                raise ChainError(
                    f"template {t}: null grading function lives on a different chain")
            if template.dimension != m:
                raise SizeError(
                    f"template {t} has parameter dimension {template.dimension}, "
                    f"expected {m}")
            inc_maps = template.increment_maps()
            g = increments(null_gf).deltas
            forms.append((
                tuple(im.constant for im in inc_maps),
                tuple(im.coeffs for im in inc_maps),
                g,
                tuple(math.log(gk) for gk in g),
            ))
        object.__setattr__(self, "_forms", tuple(forms))

    @property
    def dimension(self) -> int:
        return len(self.bounds)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of :func:`maximize`.

    ``gradient_norm_at_exit`` is ``inf`` when the maximizer sits on the
    boundary, where the one-sided derivative diverges.
    """

    argmax: tuple[float, ...]
    objective_at_argmax: float
    iterations: int
    gradient_norm_at_exit: float
    converged: bool


def _check_point(problem: MrdpProblem, x: Sequence[float]) -> tuple[float, ...]:
    pt = tuple(float(v) for v in x)
    if len(pt) != problem.dimension:
        raise SizeError(
            f"point has dimension {len(pt)}, problem has {problem.dimension}")
    return pt


def objective(problem: MrdpProblem, x: Sequence[float]) -> float:
    """Summed relative divergence of all templates from their nulls at ``x``.

    Equals the sum over templates of ``relative_divergence`` of the template
    increments at ``x`` from the null increments, with vanishing increments
    contributing nothing (0 ln 0 := 0).  Increments within rounding noise
    below zero (>= -1e-12) are clamped to 0 so closed bounds can be
    evaluated; anything lower raises InfeasiblePointError.
    """
    pt = _check_point(problem, x)
    total = 0.0
    for t, (dc, da, _g, ln_g) in enumerate(problem._forms):
        for k in range(len(dc)):
            fk = dc[k]
            for j, a in enumerate(da[k]):
                fk += a * pt[j]
            if fk <= 0.0:
                if fk < -INCREMENT_NOISE_TOL:
                    raise InfeasiblePointError(
                        f"template {t}: increment {k + 1} (nodes {k} -> {k + 1}) "
                        f"is negative ({fk!r}) at x={list(pt)!r}")
                continue
            total -= fk * (math.log(fk) - ln_g[k])
    return total


def gradient(problem: MrdpProblem, x: Sequence[float]) -> tuple[float, ...]:
    """Analytic gradient of :func:`objective` at a strictly interior point.

    With increment ``f_k`` affine in ``x`` (coefficient row ``a_k``), the
    derivative is ``dD/dx_j = sum_k a_kj * (-ln(f_k / g_k) - 1)``.  Any
    vanishing increment makes the derivative diverge, so such points raise
    BoundaryError.
    """
    pt = _check_point(problem, x)
    m = problem.dimension
    grad = [0.0] * m
    for t, (dc, da, _g, ln_g) in enumerate(problem._forms):
        for k in range(len(dc)):
            row = da[k]
            fk = dc[k]
            for j, a in enumerate(row):
                fk += a * pt[j]
            if fk <= 0.0:
                raise BoundaryError(
                    f"template {t}: increment {k + 1} is {fk!r} at "
                    f"x={list(pt)!r}; the gradient diverges where increments "
                    "vanish")
            s = ln_g[k] - math.log(fk) - 1.0
            for j, a in enumerate(row):
                if a != 0.0:
                    grad[j] += a * s
    return tuple(grad)


def _line_data(forms, x: Sequence[float], j: int):
    """Restrict the increment forms to the line through ``x`` along axis ``j``.

    Returns flat parallel lists (base, slope, log-null, template/node ids)
    covering only increments that actually vary along the axis.
    """
    base: list[float] = []
    slope: list[float] = []
    lng: list[float] = []
    ids: list[tuple[int, int]] = []
    for t, (dc, da, _g, ln_g) in enumerate(forms):
        for k in range(len(dc)):
            row = da[k]
            s = row[j]
            if s == 0.0:
                continue
            b = dc[k]
            for i, a in enumerate(row):
                if i != j and a != 0.0:
                    b += a * x[i]
            base.append(b)
            slope.append(s)
            lng.append(ln_g[k])
            ids.append((t, k))
    return base, slope, lng, ids


def _make_line_eval(base, slope, lng, ids) -> Callable[[float], tuple[float, float]]:
    """Derivative (and its derivative) of the objective along one line."""

    def eval_fn(t: float) -> tuple[float, float]:
        phi = 0.0
        dphi = 0.0
        for b, s, lg, (ti, ki) in zip(base, slope, lng, ids):
            f = b + s * t
            if f <= 0.0:
                raise InfeasiblePointError(
                    f"template {ti}: increment {ki + 1} is {f!r} at "
                    f"parameter value {t!r}; bounds must keep increments "
                    "nonnegative")
            phi += s * (lg - math.log(f) - 1.0)
            dphi -= s * s / f
        return phi, dphi

    return eval_fn


def _maximize_scalar(eval_fn, lo: float, hi: float, tol: float,
                     trace: list | None = None) -> tuple[float, int, bool]:
    """Maximize a concave function on [lo, hi] given its derivative.

    ``eval_fn(t) -> (phi, dphi)`` evaluates the derivative ``phi`` of the
    objective and the derivative of ``phi``, finite for ``t`` strictly
    inside ``(lo, hi)``.

    Brackets a sign change of ``phi`` and closes in with Newton steps,
    falling back to bisection so the bracket at least halves every loop
    pass; when ``phi`` keeps one sign the maximizer is the matching
    endpoint.  Returns ``(argmax, derivative evaluations, converged)``.
    ``trace``, when given, receives the bracket after each loop pass.
    """
    width = hi - lo
    if width <= tol:
        return 0.5 * (lo + hi), 0, True
    evals = 0

    def ev(t: float) -> tuple[float, float]:
        nonlocal evals
        evals += 1
        return eval_fn(t)

    quarter = 0.25 * width
    a = lo + quarter
    b = hi - quarter
    pa, da = ev(a)
    pb, db = ev(b)
    # Concavity means phi is nonincreasing; a rising second difference
    # beyond noise flags a modeling bug, not a numeric failure.
    if pb - pa > 1e-9 * (1.0 + abs(pa) + abs(pb)):
        raise ConcavityError(
            f"derivative rises from {pa!r} at t={a!r} to {pb!r} at t={b!r}; "
            "the objective is not concave")
    if pa == 0.0 and pb == 0.0:
        return 0.5 * (lo + hi), evals, True
    if pa == 0.0:
        return a, evals, True
    if pb == 0.0:
        return b, evals, True

    if pa < 0.0:
        # Maximizer lies left of a; walk toward lo looking for positive phi.
        found = False
        b, pb, db = a, pa, da
        step = quarter
        while step > 0.25 * tol:
            step *= 0.5
            t = lo + step
            if t <= lo or t >= b:
                break
            pt, dt = ev(t)
            if pt == 0.0:
                return t, evals, True
            if pt > 0.0:
                a, pa, da = t, pt, dt
                found = True
                break
            b, pb, db = t, pt, dt
        if not found:
            # phi < 0 arbitrarily close to lo: boundary maximum.
            return lo, evals, True
    elif pb > 0.0:
        found = False
        a, pa, da = b, pb, db
        step = quarter
        while step > 0.25 * tol:
            step *= 0.5
            t = hi - step
            if t >= hi or t <= a:
                break
            pt, dt = ev(t)
            if pt == 0.0:
                return t, evals, True
            if pt < 0.0:
                b, pb, db = t, pt, dt
                found = True
                break
            a, pa, da = t, pt, dt
        if not found:
            return hi, evals, True

    # Invariant: a < b, phi(a) > 0 > phi(b); the root is the maximizer.
    while b - a > tol and evals < _MAX_ITER:
        w0 = b - a
        if abs(pa) <= abs(pb):
            p0, f0, d0 = a, pa, da
        else:
            p0, f0, d0 = b, pb, db
        x_new = p0 - f0 / d0 if d0 != 0.0 else math.inf
        if not a < x_new < b:
            x_new = 0.5 * (a + b)
            if not a < x_new < b:
                break  # bracket is at floating-point resolution
        px, dx = ev(x_new)
        if px == 0.0:
            if trace is not None:
                trace.append((x_new, x_new))
            return x_new, evals, True
        if px > 0.0:
            a, pa, da = x_new, px, dx
        else:
            b, pb, db = x_new, px, dx
        if b - a > 0.5 * w0:
            mid = 0.5 * (a + b)
            if not a < mid < b:
                break
            pm, dm = ev(mid)
            if pm == 0.0:
                if trace is not None:
                    trace.append((mid, mid))
                return mid, evals, True
            if pm > 0.0:
                a, pa, da = mid, pm, dm
            else:
                b, pb, db = mid, pm, dm
        if trace is not None:
            trace.append((a, b))
    return 0.5 * (a + b), evals, b - a <= tol


def maximize(problem: MrdpProblem, tol: float = 1e-12) -> SolveReport:
    """Global maximizer of the (concave) problem objective over its bounds.

    For one parameter this is the safeguarded derivative search of
    ``_maximize_scalar`` with ``|x - x*| <= tol``; for more parameters,
    coordinate ascent over 1-D solves until the largest parameter change in
    a sweep drops below ``tol``.  Single-point bounds are returned as-is
    with zero iterations.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainError(f"tol must be positive and finite, got {tol!r}")
    m = problem.dimension
    forms = problem._forms

    if m == 1:
        lo, hi = problem.bounds[0]
        line = _line_data(forms, (0.0,), 0)
        x1, iterations, converged = _maximize_scalar(
            _make_line_eval(*line), lo, hi, tol)
        argmax = (x1,)
    else:
        x = [0.5 * (lo + hi) for lo, hi in problem.bounds]
        iterations = 0
        converged = False
        lines_ok = True
        for _sweep in range(_MAX_SWEEPS):
            delta = 0.0
            for j in range(m):
                lo, hi = problem.bounds[j]
                line = _line_data(forms, x, j)
                xj, its, ok = _maximize_scalar(
                    _make_line_eval(*line), lo, hi, 0.25 * tol)
                iterations += its
                lines_ok = lines_ok and ok
                delta = max(delta, abs(xj - x[j]))
                x[j] = xj
            if delta < tol:
                converged = True
                break
        converged = converged and lines_ok
        argmax = tuple(x)

    try:
        gnorm = math.hypot(*gradient(problem, argmax))
    except (BoundaryError, InfeasiblePointError):
        gnorm = math.inf
    return SolveReport(
        argmax=argmax,
        objective_at_argmax=objective(problem, argmax),
        iterations=iterations,
        gradient_norm_at_exit=gnorm,
        converged=converged,
    )


def _min_increment(problem: MrdpProblem, x: Sequence[float]) -> float:
    smallest = math.inf
    for dc, da, _g, _ln_g in problem._forms:
        for k in range(len(dc)):
            fk = dc[k]
            for j, a in enumerate(da[k]):
                fk += a * x[j]
            smallest = min(smallest, fk)
    return smallest


def _vanishes_at(problem: MrdpProblem, axis: int, edge: float) -> bool:
    """True when some increment (nearly) vanishes on the box face
    ``x[axis] == edge``, probed at the face's corners."""
    m = problem.dimension
    combos: list[list[float]] = [[]]
    for i in range(m):
        if i == axis:
            continue
        lo, hi = problem.bounds[i]
        ends = (lo,) if lo == hi else (lo, hi)
        combos = [c + [v] for c in combos for v in ends]
    for combo in combos:
        probe: list[float] = []
        it = iter(combo)
        for i in range(m):
            probe.append(edge if i == axis else next(it))
        if _min_increment(problem, probe) < INCREMENT_NOISE_TOL:
            return True
    return False


def _objective_on_grid(problem: MrdpProblem, pts: np.ndarray) -> np.ndarray:
    """Vectorized objective over an (n, m) array of parameter points."""
    total = np.zeros(pts.shape[0])
    for t, (dc, da, _g, ln_g) in enumerate(problem._forms):
        f = np.asarray(dc, dtype=float) + pts @ np.asarray(da, dtype=float).T
        bad = f < -INCREMENT_NOISE_TOL
        if bad.any():
            i, k = map(int, np.argwhere(bad)[0])
            raise InfeasiblePointError(
                f"template {t}: increment {k + 1} is negative "
                f"({f[i, k]!r}) at x={pts[i].tolist()!r}")
        f = np.maximum(f, 0.0)
        pos = f > 0.0
        safe = np.where(pos, f, 1.0)
        total -= np.where(
            pos, f * (np.log(safe) - np.asarray(ln_g, dtype=float)), 0.0
        ).sum(axis=1)
    return total


def grid_oracle(problem: MrdpProblem, points_per_axis: int) -> tuple[float, ...]:
    """Brute-force argmax of the objective on a uniform grid over the bounds.

    An independent desk-scale check on :func:`maximize` (search by
    exhaustive evaluation instead of derivative iteration); supports one or
    two parameters.  Grid endpoints are inset by 1e-12 where increments
    vanish at the bounds, so no log is ever taken hard against the wall.
    """
    if points_per_axis < 3:
        raise DomainError(
            f"points_per_axis must be >= 3, got {points_per_axis}")
    m = problem.dimension
    if m > 2:
        raise DomainError(
            f"the grid oracle handles at most 2 parameters, got {m}")
    axes = []
    for j in range(m):
        lo, hi = problem.bounds[j]
        lo_e = lo + 1e-12 if _vanishes_at(problem, j, lo) else lo
        hi_e = hi - 1e-12 if _vanishes_at(problem, j, hi) else hi
        if lo_e > hi_e:
            lo_e = hi_e = 0.5 * (lo + hi)
        axes.append(np.linspace(lo_e, hi_e, points_per_axis))
    if m == 1:
        pts = axes[0][:, None]
    else:
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([g0.ravel(), g1.ravel()])
    values = _objective_on_grid(problem, pts)
    best = int(np.argmax(values))
    return tuple(float(v) for v in pts[best])
