"""Request/response models for the HTTP service, plus converters between
the wire problem description and the core problem type."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..chain import make_chain, make_grading
from ..solver import AffineMap, GradingTemplate, MrdpProblem


class DivergenceRequest(BaseModel):
    """Grading-function values (not increments) on a shared chain shape;
    g must increase strictly, f may plateau."""

    f_values: list[float]
    g_values: list[float]


class DivergenceResponse(BaseModel):
    value: float


class IndependenceRequest(BaseModel):
    p1: float = Field(ge=0.0, le=1.0)
    p2: float = Field(ge=0.0, le=1.0)
    tol: float = Field(default=1e-12, gt=0.0)


class IndependenceResponse(BaseModel):
    argmax: float
    closed_form: float
    difference: float
    interval_lo: float
    interval_hi: float
    objective: float
    iterations: int
    converged: bool


class SweepRequest(BaseModel):
    p1: float = Field(ge=0.0, le=1.0)
    p2: float = Field(ge=0.0, le=1.0)
    steps: int = Field(ge=2)


class SweepRow(BaseModel):
    x: float
    d: float
    d_prime: float | None = None
    d_double_prime: float | None = None


class SweepResponse(BaseModel):
    rows: list[SweepRow]


class AffineMapSpec(BaseModel):
    constant: float
    coeffs: list[float]


class TemplateSpec(BaseModel):
    labels: list[str]
    null_values: list[float]
    node_maps: list[AffineMapSpec]


class BoundsSpec(BaseModel):
    lo: float
    hi: float


class ProblemSpec(BaseModel):
    """Wire form of MrdpProblem; the parameter dimension is implied by the
    number of bounds."""

    bounds: list[BoundsSpec]
    templates: list[TemplateSpec]


class SolveRequest(BaseModel):
    problem: ProblemSpec
    tol: float = Field(default=1e-12, gt=0.0)


class SolveResponse(BaseModel):
    argmax: list[float]
    objective: float
    iterations: int
    #: None when the maximizer sits on the boundary, where the norm diverges.
    gradient_norm: float | None
    converged: bool


def spec_to_problem(spec: ProblemSpec) -> MrdpProblem:
    """Build the core problem; core validation errors propagate."""
    templates = []
    for t in spec.templates:
        chain = make_chain(t.labels)
        null_gf = make_grading(chain, t.null_values)
        node_maps = tuple(
            AffineMap(m.constant, tuple(m.coeffs)) for m in t.node_maps)
        templates.append((GradingTemplate(chain, node_maps), null_gf))
    return MrdpProblem(
        templates=tuple(templates),
        bounds=tuple((b.lo, b.hi) for b in spec.bounds),
    )


def problem_to_spec(problem: MrdpProblem) -> ProblemSpec:
    return ProblemSpec(
        bounds=[BoundsSpec(lo=lo, hi=hi) for lo, hi in problem.bounds],
        templates=[
            TemplateSpec(
                labels=list(template.chain.labels),
                null_values=list(null_gf.values),
                node_maps=[
                    AffineMapSpec(constant=m.constant, coeffs=list(m.coeffs))
                    for m in template.node_maps
                ],
            )
            for template, null_gf in problem.templates
        ],
    )
