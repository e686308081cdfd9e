"""FastAPI application exposing the divergence and solver operations.

Domain validation failures (bad values, infeasible geometry) map to HTTP
400 with a body of the form

    {"error": {"kind": "validation" | "infeasible", "message": ...,
               "index": ..., "argument": ...}}

where index/argument appear only when the underlying error carries them.
Malformed request shapes are FastAPI's usual 422.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..divergence import relative_divergence
from ..errors import InfeasibleProblemError, MonotonicityError, MrdpError, SizeError
from ..independence import (
    closed_form,
    feasible_interval,
    independence_problem,
    objective_d,
    sweep_curve,
)
from ..solver import maximize
from .schemas import (
    DivergenceRequest,
    DivergenceResponse,
    IndependenceRequest,
    IndependenceResponse,
    SolveRequest,
    SolveResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
    spec_to_problem,
)

app = FastAPI(
    title="mrdp",
    version=__version__,
    description=(
        "Relative divergence of grading functions on finite chains, and "
        "maximum-relative-divergence solves over bounded parameters."
    ),
)


@app.exception_handler(MrdpError)
async def _domain_error(request: Request, exc: MrdpError) -> JSONResponse:
    kind = "infeasible" if isinstance(exc, InfeasibleProblemError) else "validation"
    payload: dict = {"kind": kind, "message": str(exc)}
    index = getattr(exc, "index", None)
    if index is not None:
        payload["index"] = index
    argument = getattr(exc, "argument", None)
    if argument is not None:
        payload["argument"] = argument
    return JSONResponse(status_code=400, content={"error": payload})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/divergence", response_model=DivergenceResponse)
def divergence_endpoint(req: DivergenceRequest) -> DivergenceResponse:
    f, g = req.f_values, req.g_values
    if len(f) != len(g):
        raise SizeError(
            f"f has {len(f)} values, g has {len(g)}; counts must match")
    if len(f) < 2:
        raise SizeError("need at least two values per grading function")
    for k in range(1, len(g)):
        if not g[k] > g[k - 1]:
            raise MonotonicityError(
                f"g values must increase strictly: g[{k}]={g[k]!r} does not "
                f"exceed g[{k - 1}]={g[k - 1]!r}",
                index=k, argument="g_values")
    for k in range(1, len(f)):
        if f[k] < f[k - 1]:
            raise MonotonicityError(
                f"f values must be nondecreasing: f[{k}]={f[k]!r} is below "
                f"f[{k - 1}]={f[k - 1]!r}",
                index=k, argument="f_values")
    value = relative_divergence(
        [f[k] - f[k - 1] for k in range(1, len(f))],
        [g[k] - g[k - 1] for k in range(1, len(g))],
    )
    return DivergenceResponse(value=value)


@app.post("/independence", response_model=IndependenceResponse)
def independence_endpoint(req: IndependenceRequest) -> IndependenceResponse:
    lo, hi = feasible_interval(req.p1, req.p2)
    report = maximize(independence_problem(req.p1, req.p2), req.tol)
    x = report.argmax[0]
    expected = closed_form(req.p1, req.p2)
    return IndependenceResponse(
        argmax=x,
        closed_form=expected,
        difference=abs(x - expected),
        interval_lo=lo,
        interval_hi=hi,
        objective=objective_d(req.p1, req.p2, x),
        iterations=report.iterations,
        converged=report.converged,
    )


@app.post("/sweep", response_model=SweepResponse)
def sweep_endpoint(req: SweepRequest) -> SweepResponse:
    curve = sweep_curve(req.p1, req.p2, req.steps)
    return SweepResponse(rows=[
        SweepRow(x=x, d=d, d_prime=dp, d_double_prime=ddp)
        for x, d, dp, ddp in zip(
            curve.xs, curve.d_values, curve.d_prime_values,
            curve.d_double_prime_values)
    ])


@app.post("/solve", response_model=SolveResponse)
def solve_endpoint(req: SolveRequest) -> SolveResponse:
    problem = spec_to_problem(req.problem)
    report = maximize(problem, req.tol)
    gnorm = report.gradient_norm_at_exit
    return SolveResponse(
        argmax=list(report.argmax),
        objective=report.objective_at_argmax,
        iterations=report.iterations,
        gradient_norm=gnorm if math.isfinite(gnorm) else None,
        converged=report.converged,
    )
