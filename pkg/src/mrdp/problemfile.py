"""Plain-text serialization of solver problems.

Grammar, one statement per line; blank lines and lines whose first
non-space character is ``#`` are ignored; tokens are separated by ASCII
whitespace:

    dimension M           one statement, before any template; M >= 1
    bounds LO HI          exactly M statements, the j-th giving [lo_j, hi_j]
    chain L0 L1 ... Ln    opens a template block; labels are distinct,
                          whitespace-free, and may not start with '#'
    null V0 V1 ... Vn     the block's null grading values, one per label
    map C A1 ... AM       one per label, in chain order: node value
                          C + A1 x1 + ... + AM xM

Reals use any form ``float`` accepts (scientific notation included) and
must be finite.  ``format_problem`` writes ``repr`` floats, so a
format/parse round trip reproduces the problem exactly.
"""

from __future__ import annotations

import math

from .chain import make_chain, make_grading
from .errors import ChainError, FileFormatError, MonotonicityError, SizeError
from .solver import AffineMap, GradingTemplate, MrdpProblem

__all__ = ["parse_problem", "format_problem"]


def _real(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FileFormatError(
            f"not a real number: {token!r}", line=line) from None
    if not math.isfinite(value):
        raise FileFormatError(
            f"reals must be finite, got {token!r}", line=line)
    return value


def _count(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FileFormatError(
            f"not an integer: {token!r}", line=line) from None
    return value


class _Block:
    def __init__(self, labels: list[str], line: int):
        self.labels = labels
        self.line = line
        self.null_values: list[float] | None = None
        self.null_line = 0
        self.maps: list[AffineMap] = []


def parse_problem(text: str) -> MrdpProblem:
    """Parse the problem grammar above into an MrdpProblem.

    Malformed input raises FileFormatError carrying the 1-based line
    number; inverted bounds surface as InfeasibleProblemError from problem
    construction.
    """
    dimension: int | None = None
    bounds: list[tuple[float, float]] = []
    blocks: list[_Block] = []
    current: _Block | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        keyword, *args = stripped.split()

        if keyword == "dimension":
            if dimension is not None:
                raise FileFormatError(
                    "duplicate dimension statement", line=lineno)
            if len(args) != 1:
                raise FileFormatError(
                    "dimension takes exactly one integer", line=lineno)
            dimension = _count(args[0], lineno)
            if dimension < 1:
                raise FileFormatError(
                    f"dimension must be >= 1, got {dimension}", line=lineno)

        elif keyword == "bounds":
            if dimension is None:
                raise FileFormatError(
                    "bounds before dimension", line=lineno)
            if len(args) != 2:
                raise FileFormatError(
                    "bounds takes exactly two reals (lo hi)", line=lineno)
            if len(bounds) == dimension:
                raise FileFormatError(
                    f"more than {dimension} bounds statements", line=lineno)
            bounds.append((_real(args[0], lineno), _real(args[1], lineno)))

        elif keyword == "chain":
            if dimension is None:
                raise FileFormatError(
                    "chain before dimension", line=lineno)
            if current is not None and _block_incomplete(current):
                raise FileFormatError(
                    f"previous template (line {current.line}) is incomplete: "
                    + _block_incomplete(current), line=lineno)
            if len(args) < 2:
                raise FileFormatError(
                    "chain needs at least two labels", line=lineno)
            for label in args:
                if label.startswith("#"):
                    raise FileFormatError(
                        f"label may not start with '#': {label!r}",
                        line=lineno)
            current = _Block(list(args), lineno)
            blocks.append(current)

        elif keyword == "null":
            if current is None:
                raise FileFormatError("null before any chain", line=lineno)
            if current.null_values is not None:
                raise FileFormatError(
                    "duplicate null statement in template", line=lineno)
            if current.maps:
                raise FileFormatError(
                    "null must come before the template's map lines",
                    line=lineno)
            if len(args) != len(current.labels):
                raise FileFormatError(
                    f"null needs {len(current.labels)} values, got "
                    f"{len(args)}", line=lineno)
            current.null_values = [_real(a, lineno) for a in args]
            current.null_line = lineno

        elif keyword == "map":
            if current is None:
                raise FileFormatError("map before any chain", line=lineno)
            if current.null_values is None:
                raise FileFormatError(
                    "map before the template's null statement", line=lineno)
            if len(args) != 1 + dimension:
                raise FileFormatError(
                    f"map needs a constant plus {dimension} coefficients, "
                    f"got {len(args)} values", line=lineno)
            if len(current.maps) == len(current.labels):
                raise FileFormatError(
                    f"more than {len(current.labels)} map lines in template",
                    line=lineno)
            values = [_real(a, lineno) for a in args]
            current.maps.append(AffineMap(values[0], tuple(values[1:])))

        else:
            raise FileFormatError(
                f"unknown keyword {keyword!r}", line=lineno)

    if dimension is None:
        raise FileFormatError("missing dimension statement")
    if len(bounds) != dimension:
        raise FileFormatError(
            f"expected {dimension} bounds statements, found {len(bounds)}")
    if not blocks:
        raise FileFormatError("no templates (need at least one chain block)")
    if current is not None and _block_incomplete(current):
        raise FileFormatError(
            "template is incomplete: " + _block_incomplete(current),
            line=current.line)

    templates = []
    for block in blocks:
        try:
            chain = make_chain(block.labels)
        except (ChainError, SizeError) as exc:
            raise FileFormatError(str(exc), line=block.line) from exc
        try:
            null_gf = make_grading(chain, block.null_values)
        except (SizeError, MonotonicityError) as exc:
            raise FileFormatError(
                f"null grading: {exc}", line=block.null_line) from exc
        templates.append((GradingTemplate(chain, tuple(block.maps)), null_gf))
    return MrdpProblem(templates=tuple(templates), bounds=tuple(bounds))


def _block_incomplete(block: _Block) -> str:
    if block.null_values is None:
        return "missing null statement"
    if len(block.maps) != len(block.labels):
        return (f"expected {len(block.labels)} map lines, "
                f"found {len(block.maps)}")
    return ""


def format_problem(problem: MrdpProblem) -> str:
    """Serialize a problem in the grammar above, with repr floats so
    parse_problem(format_problem(p)) == p."""
    lines = [f"dimension {problem.dimension}"]
    for lo, hi in problem.bounds:
        lines.append(f"bounds {lo!r} {hi!r}")
    for template, null_gf in problem.templates:
        lines.append("")
        for label in template.chain.labels:
            if not label or label.startswith("#") or label.split() != [label]:
                raise FileFormatError(
                    f"label not representable in the problem grammar: "
                    f"{label!r}")
        lines.append("chain " + " ".join(template.chain.labels))
        lines.append("null " + " ".join(repr(v) for v in null_gf.values))
        for node_map in template.node_maps:
            lines.append(
                "map " + " ".join(
                    repr(v) for v in (node_map.constant, *node_map.coeffs)))
    return "\n".join(lines) + "\n"
