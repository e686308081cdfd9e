"""Command-line client for the divergence service.

Every computation goes through the HTTP API.  By default the service runs
in-process (no server to start); pass ``--url`` to talk to a remote
instance launched with ``mrdp serve``.

Exit codes: 0 success, 2 input validation, 3 I/O, 4 non-convergence,
5 infeasible problem.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import math
import sys

import httpx

from . import __version__
from .errors import FileFormatError, InfeasibleProblemError, MrdpError
from .problemfile import parse_problem
from .service.schemas import problem_to_spec

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NONCONVERGENCE = 4
EXIT_INFEASIBLE = 5


def _post(url: str | None, path: str, payload: dict) -> httpx.Response:
    if url:
        with httpx.Client(base_url=url, timeout=60.0) as client:
            return client.post(path, json=payload)
    # In-process: run the ASGI app directly, no sockets involved.
    from .service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
                transport=transport, base_url="http://mrdp.internal") as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _error_body(resp: httpx.Response) -> dict | None:
    try:
        body = resp.json()
    except ValueError:
        return None
    return body if isinstance(body, dict) else None


def _report_http_error(resp: httpx.Response) -> int:
    """Print the service's error to stderr and pick the exit code."""
    body = _error_body(resp)
    if body and "error" in body:
        err = body["error"]
        print(f"error: {err.get('message', 'invalid input')}", file=sys.stderr)
        if err.get("kind") == "infeasible":
            return EXIT_INFEASIBLE
        return EXIT_VALIDATION
    if resp.status_code == 422 and body is not None:
        print(f"error: invalid request: {body.get('detail')}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"error: service returned status {resp.status_code}",
          file=sys.stderr)
    return 1


def _read_value_file(path: str) -> tuple[list[float], list[int]]:
    """Read one real per line ('#' comments and blank lines skipped).

    Returns the values and the 1-based line each came from, so later
    validation errors can name their line.
    """
    values: list[float] = []
    lines: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                value = float(stripped)
            except ValueError:
                raise FileFormatError(
                    f"not a real number: {stripped!r}", line=lineno) from None
            if not math.isfinite(value):
                raise FileFormatError(
                    f"values must be finite, got {stripped}", line=lineno)
            values.append(value)
            lines.append(lineno)
    return values, lines


def _cmd_divergence(args: argparse.Namespace) -> int:
    data = {}
    for field, path in (("f_values", args.f_file), ("g_values", args.g_file)):
        try:
            data[field] = _read_value_file(path)
        except FileFormatError as exc:
            print(f"error: {path}:{exc.line}: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except OSError as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
    resp = _post(args.url, "/divergence", {
        "f_values": data["f_values"][0],
        "g_values": data["g_values"][0],
    })
    if resp.status_code == 200:
        print(f"{resp.json()['value']:.12g}")
        return EXIT_OK
    body = _error_body(resp)
    err = (body or {}).get("error", {})
    if err.get("argument") in data and err.get("index") is not None:
        # Map the offending value index back to its source line.
        path = args.f_file if err["argument"] == "f_values" else args.g_file
        lines = data[err["argument"]][1]
        index = err["index"]
        line = lines[index] if 0 <= index < len(lines) else "?"
        print(f"error: {path}:{line}: {err['message']}", file=sys.stderr)
        return EXIT_VALIDATION
    return _report_http_error(resp)


def _check_probability_flag(parser: argparse.ArgumentParser, name: str,
                            value: float) -> None:
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        parser.error(f"{name} must lie in [0, 1], got {value!r}")


def _check_tol_flag(parser: argparse.ArgumentParser, tol: float) -> None:
    if not (math.isfinite(tol) and tol > 0.0):
        parser.error(f"--tol must be a positive real, got {tol!r}")


def _cmd_independence(args: argparse.Namespace) -> int:
    _check_probability_flag(args.parser, "--p1", args.p1)
    _check_probability_flag(args.parser, "--p2", args.p2)
    _check_tol_flag(args.parser, args.tol)
    resp = _post(args.url, "/independence",
                 {"p1": args.p1, "p2": args.p2, "tol": args.tol})
    if resp.status_code != 200:
        return _report_http_error(resp)
    r = resp.json()
    print(f"argmax: {r['argmax']!r}")
    print(f"closed_form: {r['closed_form']!r}")
    print(f"difference: {r['difference']!r}")
    print(f"interval: {r['interval_lo']!r} {r['interval_hi']!r}")
    print(f"objective: {r['objective']!r}")
    print(f"iterations: {r['iterations']}")
    print(f"converged: {'true' if r['converged'] else 'false'}")
    return EXIT_OK if r["converged"] else EXIT_NONCONVERGENCE


def _cmd_sweep(args: argparse.Namespace) -> int:
    _check_probability_flag(args.parser, "--p1", args.p1)
    _check_probability_flag(args.parser, "--p2", args.p2)
    if args.steps < 2:
        args.parser.error(f"--steps must be >= 2, got {args.steps}")
    resp = _post(args.url, "/sweep",
                 {"p1": args.p1, "p2": args.p2, "steps": args.steps})
    if resp.status_code != 200:
        return _report_http_error(resp)
    rows = resp.json()["rows"]
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "d", "d_prime", "d_double_prime"])
            for row in rows:
                writer.writerow([
                    repr(row["x"]),
                    repr(row["d"]),
                    "" if row["d_prime"] is None else repr(row["d_prime"]),
                    "" if row["d_double_prime"] is None
                    else repr(row["d_double_prime"]),
                ])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        with open(args.problem_file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.problem_file}: {exc}",
              file=sys.stderr)
        return EXIT_IO
    _check_tol_flag(args.parser, args.tol)
    try:
        problem = parse_problem(text)
    except FileFormatError as exc:
        where = f":{exc.line}" if exc.line is not None else ""
        print(f"error: {args.problem_file}{where}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleProblemError as exc:
        print(f"error: {args.problem_file}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MrdpError as exc:
        print(f"error: {args.problem_file}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    payload = {
        "problem": problem_to_spec(problem).model_dump(mode="json"),
        "tol": args.tol,
    }
    resp = _post(args.url, "/solve", payload)
    if resp.status_code != 200:
        return _report_http_error(resp)
    r = resp.json()
    print("argmax: " + " ".join(repr(v) for v in r["argmax"]))
    print(f"objective: {r['objective']!r}")
    print(f"iterations: {r['iterations']}")
    gnorm = r["gradient_norm"]
    print("gradient_norm: " + ("inf" if gnorm is None else repr(gnorm)))
    print(f"converged: {'true' if r['converged'] else 'false'}")
    return EXIT_OK if r["converged"] else EXIT_NONCONVERGENCE


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrdp",
        description=(
            "Relative divergence of grading functions on finite chains, "
            "and maximum-relative-divergence solves."),
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--url", default=None, metavar="URL",
        help="base URL of a running service (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "divergence",
        help="relative divergence of grading function F from G",
        description=(
            "Compute the relative divergence of grading function F from G. "
            "Each file holds one value per line ('#' comments allowed); "
            "g values must increase strictly, f values may plateau."))
    p.add_argument("f_file", metavar="F_FILE")
    p.add_argument("g_file", metavar="G_FILE")
    p.set_defaults(func=_cmd_divergence)

    p = sub.add_parser(
        "independence",
        help="least-presuming joint probability for two marginals",
        description=(
            "Maximize the divergence over the feasible joint probabilities "
            "for marginals p1, p2 and compare with the closed form p1*p2."))
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_independence, parser=p)

    p = sub.add_parser(
        "sweep",
        help="CSV of d, d', d'' across the feasible interval",
        description=(
            "Sample the objective d and its derivatives on a uniform grid "
            "over the feasible interval and write them as CSV."))
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_sweep, parser=p)

    p = sub.add_parser(
        "solve",
        help="solve a problem file",
        description="Solve a serialized divergence-maximization problem.")
    p.add_argument("problem_file", metavar="PROBLEM_FILE")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_solve, parser=p)

    p = sub.add_parser(
        "serve",
        help="run the HTTP service",
        description="Run the HTTP service that the other commands talk to.")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "parser"):
        args.parser = parser
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
