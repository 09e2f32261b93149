"""
Command line front end: ``unwind {expand,unwind,afd,verify} --input JOB``.

Exit codes: 0 success, 2 malformed job or invalid parameters, 3 numerical
failure (contraction, headroom, deflation, exhausted strategy, failed checks).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .diagnostics import run_checks
from .errors import DomainError, UnwindingError
from .expansion import expand
from .jobs import (
    JobError,
    build_function,
    build_strategy,
    complex_pair,
    dumps_csv,
    dumps_json,
    override,
    parse_job,
    result_record,
)
from .strategies import ClassicalUnwinding, GreedyAFD, classical_unwinding

log = logging.getLogger("unwinding")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


def _load_input(text: str) -> dict:
    s = text.strip()
    if s.startswith("{"):
        return json.loads(s)
    return json.loads(Path(text).read_text())


def _run(job, command):
    f = build_function(job.function, job.M)
    strategy = build_strategy(job.strategy)
    extra = {"command": command, "seed": job.seed}
    if command == "unwind":
        if not isinstance(strategy, ClassicalUnwinding):
            strategy = ClassicalUnwinding()
        series = classical_unwinding(f, strategy.eps_root, max_degree=strategy.max_degree)
    elif command == "afd" and not isinstance(strategy, GreedyAFD):
        strategy = GreedyAFD()
    log.info("running %s with %s on order %d", command, strategy, job.M)
    result = expand(f, strategy, job.max_terms, job.p, job.tol, job.N)
    record = result_record(result, f, extra)
    if command == "unwind":
        record["unwinding"] = {
            "constants": [complex_pair(c) for c in series.constants],
            "degrees": series.degrees,
            "excluded_roots": [complex_pair(z) for z in series.excluded],
        }
    elif command == "afd":
        record["afd"] = {
            "lambdas": [complex_pair(t.lam) for t in result.terms],
            "energy": [float(t.energy) for t in result.terms],
        }
    elif command == "verify":
        record["checks"] = [c.as_dict() for c in run_checks(result, f, job.seed)]
    return result, record


def _print_checks(checks, stream):
    width = max(len(c["name"]) for c in checks)
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        stream.write(f"{status}  {c['name']:<{width}}  value={c['value']:.3e}  tol={c['tol']:.1e}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unwind", description="Unwinding series expansions on the unit disc.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("expand", "run the general expansion with the job's strategy"),
        ("unwind", "classical Blaschke unwinding (root extraction)"),
        ("afd", "greedy adaptive selection of Blaschke factors"),
        ("verify", "run the invariant checks and print a pass/fail table"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="job file or inline JSON")
        p.add_argument("--out", help="output path (default: job 'out' or stdout)")
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--M", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--max-terms", type=int, dest="max_terms")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("UNWIND_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        job = parse_job(_load_input(args.input))
        job = override(
            job, format=args.format, out=args.out, M=args.M, N=args.N, p=args.p,
            max_terms=args.max_terms, tol=args.tol, seed=args.seed,
        )
        result, record = _run(job, args.command)
    except (json.JSONDecodeError, OSError, JobError, DomainError, TypeError, KeyError) as exc:
        print(f"invalid job: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnwindingError as exc:
        idx = getattr(exc, "term_index", None)
        where = f" (term {idx})" if idx is not None else ""
        print(f"numerical failure{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = dumps_json(record) if job.format == "json" else dumps_csv(result)
    if job.out:
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify":
        _print_checks(record["checks"], sys.stderr if not job.out and job.format == "json" else sys.stdout)
        if not all(c["pass"] for c in record["checks"]):
            return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
