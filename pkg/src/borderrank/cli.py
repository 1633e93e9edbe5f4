"""Command-line front end: bounds, search, verify, macaulay, corpus.

Each invocation writes exactly one JSON document to stdout (or --output).
Errors are mirrored as machine-readable JSON on stderr with distinct exit
codes: 2 for parse/validation problems, 3 for violated preconditions, 4 for
budget exhaustion (the outcome document is still written), 1 for anything
unexpected.  The default worker count comes from BORDERRANK_JOBS.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .apolarity import Tensor, tensor_from_json
from .bounds import bounds_report, closed_form_border_rank
from .errors import (
    EXIT_BUDGET,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    BorderRankError,
    ParseError,
    PreconditionError,
    ShapeMismatchError,
)
from .ideals import ideal_from_json, ideal_to_json
from .macaulay import lexbar_profile, macaulay_coefficients
from .movefit import BUDGET_EXCEEDED, SearchConfig, search, verify_candidate
from .ring import monomial_to_text

JOBS_ENV_VAR = "BORDERRANK_JOBS"


@dataclass
class Job:
    command: str
    inputs: dict  # role -> path
    config: SearchConfig | None
    output: str | None
    options: dict


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV_VAR, "1")
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"{JOBS_ENV_VAR} must be an integer, got {raw!r}")
    if value < 1:
        raise PreconditionError(f"{JOBS_ENV_VAR} must be >= 1, got {value}")
    return value


def _load_schema(name: str) -> dict:
    ref = importlib.resources.files("borderrank") / "schemas" / name
    return json.loads(ref.read_text())


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}")


def _validate(data: dict, schema_name: str, path: str) -> None:
    schema = _load_schema(schema_name)
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "(root)"
        raise ParseError(f"{path} fails {schema_name} at {where}: {first.message}")


def load_tensor(path: str) -> Tensor:
    data = _load_json_file(path)
    _validate(data, "tensor.schema.json", path)
    return tensor_from_json(data)


def load_ideal(path: str):
    data = _load_json_file(path)
    _validate(data, "ideal.schema.json", path)
    return ideal_from_json(data)


def _tensor_text(F: Tensor) -> str:
    parts = []
    for mon, coeff in F.terms():
        prefix = "" if coeff == 1 else f"({coeff})*"
        parts.append(prefix + monomial_to_text(mon))
    return " + ".join(parts) if parts else "0"


def _emit(document: dict, output: str | None) -> None:
    text = json.dumps(document, indent=2, sort_keys=False)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_bounds(job: Job) -> int:
    F = load_tensor(job.inputs["tensor"])
    report = bounds_report(F)
    _emit(
        {
            "command": "bounds",
            "input": job.inputs["tensor"],
            "tensor": _tensor_text(F),
            "shape": list(F.shape.factors),
            "degree": list(F.degree),
            "report": report.to_json(),
        },
        job.output,
    )
    return EXIT_OK


def cmd_search(job: Job) -> int:
    F = load_tensor(job.inputs["tensor"])
    outcome = search(F, job.config)
    document = {
        "command": "search",
        "input": job.inputs["tensor"],
        "tensor": _tensor_text(F),
        "shape": list(F.shape.factors),
        "config": {
            "r": job.config.r,
            "horizon": outcome.horizon,
            "symmetry_pruning": job.config.symmetry_pruning,
            "growth_pruning": job.config.growth_pruning,
            "parallel_width": job.config.parallel_width,
            "node_budget": job.config.node_budget,
        },
        "outcome": outcome.to_json(),
    }
    if outcome.candidate is not None:
        document["outcome"]["candidate_ideal"] = ideal_to_json(outcome.candidate)
    else:
        document["outcome"]["candidate_ideal"] = None
    _emit(document, job.output)
    if outcome.status == BUDGET_EXCEEDED:
        _print_error(
            "BudgetExceededError",
            "node budget exhausted; the emitted outcome is partial",
            EXIT_BUDGET,
        )
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(job: Job) -> int:
    I = load_ideal(job.inputs["ideal"])
    F = load_tensor(job.inputs["tensor"])
    report = verify_candidate(I, F, job.options["r"], job.options.get("horizon"))
    _emit(
        {
            "command": "verify",
            "input": job.inputs["ideal"],
            "tensor_input": job.inputs["tensor"],
            "tensor": _tensor_text(F),
            "shape": list(F.shape.factors),
            "report": report.to_json(),
        },
        job.output,
    )
    return EXIT_OK


def cmd_macaulay(job: Job) -> int:
    document = {"command": "macaulay", "decomposition": None, "lexbar": None}
    r = job.options["r"]
    if job.options.get("d") is not None:
        document["decomposition"] = macaulay_coefficients(r, job.options["d"]).to_json()
    if job.options.get("summands") is not None:
        profile = lexbar_profile(job.options["summands"], job.options["n"], r)
        document["lexbar"] = profile.to_json()
    _emit(document, job.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

def _corpus_dir():
    return importlib.resources.files("borderrank") / "corpus"


def corpus_catalog() -> list:
    return json.loads((_corpus_dir() / "catalog.json").read_text())


def _corpus_path(filename: str) -> str:
    return str(_corpus_dir() / filename)


def _run_corpus_case(case: dict, jobs: int) -> dict:
    expected = case["expected"]
    start = time.perf_counter()
    if case["command"] == "search":
        F = load_tensor(_corpus_path(case["tensor"]))
        config = SearchConfig(
            r=case["r"],
            horizon=case.get("horizon"),
            parallel_width=jobs,
        )
        outcome = search(F, config)
        actual = {"status": outcome.status}
    elif case["command"] == "bounds":
        F = load_tensor(_corpus_path(case["tensor"]))
        report = bounds_report(F)
        actual = {"lower": report.lower, "upper": report.upper}
        if "catalecticant" in expected:
            actual["catalecticant"] = report.components["catalecticant"]["value"]
    elif case["command"] == "closed-form":
        F = load_tensor(_corpus_path(case["tensor"]))
        actual = {"value": closed_form_border_rank(F)}
    elif case["command"] == "verify":
        I = load_ideal(_corpus_path(case["ideal"]))
        F = load_tensor(_corpus_path(case["tensor"]))
        report = verify_candidate(I, F, case["r"], case.get("horizon"))
        actual = {
            "passed": report.passed,
            "saturated": report.saturation["saturated"],
        }
        if "generator_count" in expected:
            actual["generator_count"] = len(I.generators)
    else:
        raise PreconditionError(f"unknown corpus command {case['command']!r}")
    return {
        "name": case["name"],
        "class": case["class"],
        "command": case["command"],
        "expected": expected,
        "actual": actual,
        "pass": actual == expected,
        "seconds": round(time.perf_counter() - start, 3),
    }


def cmd_corpus(job: Job) -> int:
    catalog = corpus_catalog()
    action = job.options["action"]
    if action == "list":
        flt = job.options.get("filter") or ""
        cases = [
            {k: c[k] for k in ("name", "class", "command", "expected")}
            for c in catalog
            if flt in c["name"]
        ]
        _emit({"command": "corpus", "action": "list", "cases": cases}, job.output)
        return EXIT_OK

    target = job.options["target"]
    include_slow = job.options.get("slow", False)
    jobs = job.options.get("jobs") or _default_jobs()
    selected = [c for c in catalog if target == "all" or c["name"] == target]
    if not selected:
        raise ParseError(f"no corpus case named {target!r}")
    results = []
    for case in selected:
        if case["class"] == "slow" and not include_slow:
            results.append({"name": case["name"], "class": "slow", "skipped": True})
            continue
        results.append(_run_corpus_case(case, jobs))
    ran = [x for x in results if not x.get("skipped")]
    summary = {
        "total": len(results),
        "passed": sum(1 for x in ran if x["pass"]),
        "failed": sum(1 for x in ran if not x["pass"]),
        "skipped": len(results) - len(ran),
    }
    _emit(
        {"command": "corpus", "action": "run", "cases": results, "summary": summary},
        job.output,
    )
    return EXIT_OK if summary["failed"] == 0 else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borderrank",
        description="Exact border-rank bounds and certificates for monomials "
        "and partially symmetric tensors on products of projective spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="compute the lower/upper bound sandwich")
    p_bounds.add_argument("tensor", help="tensor JSON file")
    p_bounds.add_argument("--output", help="write the report here instead of stdout")

    p_search = sub.add_parser("search", help="move-fit search for border rank <= r")
    p_search.add_argument("tensor", help="monomial tensor JSON file")
    p_search.add_argument("--r", type=int, required=True, help="candidate border rank")
    p_search.add_argument("--horizon", type=int, help="max total degree (default |L|)")
    p_search.add_argument(
        "--no-symmetry", action="store_true", help="disable symmetry pruning"
    )
    p_search.add_argument(
        "--growth-prune", action="store_true", help="enable the static growth prune"
    )
    p_search.add_argument(
        "--jobs", type=int, help=f"worker count (default ${JOBS_ENV_VAR} or 1)"
    )
    p_search.add_argument("--budget", type=int, help="node budget per subtree")
    p_search.add_argument("--output", help="write the report here instead of stdout")

    p_verify = sub.add_parser("verify", help="replay move-fit conditions on an ideal")
    p_verify.add_argument("ideal", help="ideal JSON file")
    p_verify.add_argument("tensor", help="tensor JSON file")
    p_verify.add_argument("--r", type=int, required=True)
    p_verify.add_argument("--horizon", type=int)
    p_verify.add_argument("--output", help="write the report here instead of stdout")

    p_mac = sub.add_parser(
        "macaulay", help="Macaulay decompositions, exponents, Lex-bar profiles"
    )
    p_mac.add_argument("--r", type=int, required=True, help="codimension")
    p_mac.add_argument("--d", type=int, help="degree for the exponent r^<d>")
    p_mac.add_argument(
        "--summands", help="comma-separated summand degrees for a Lex-bar profile"
    )
    p_mac.add_argument("--n", type=int, help="ambient P^n for the Lex-bar profile")
    p_mac.add_argument("--output", help="write the report here instead of stdout")

    p_corpus = sub.add_parser("corpus", help="list or run the shipped corpus")
    corpus_sub = p_corpus.add_subparsers(dest="action", required=True)
    p_list = corpus_sub.add_parser("list")
    p_list.add_argument("--filter", help="substring filter on case names")
    p_list.add_argument("--output")
    p_run = corpus_sub.add_parser("run")
    p_run.add_argument("target", help="case name or 'all'")
    p_run.add_argument("--slow", action="store_true", help="include slow cases")
    p_run.add_argument("--jobs", type=int)
    p_run.add_argument("--output")

    return parser


def _job_from_args(args: argparse.Namespace) -> Job:
    if args.command == "bounds":
        return Job("bounds", {"tensor": args.tensor}, None, args.output, {})
    if args.command == "search":
        jobs = args.jobs if args.jobs is not None else _default_jobs()
        config = SearchConfig(
            r=args.r,
            horizon=args.horizon,
            symmetry_pruning=not args.no_symmetry,
            growth_pruning=args.growth_prune,
            parallel_width=jobs,
            node_budget=args.budget,
        )
        return Job("search", {"tensor": args.tensor}, config, args.output, {})
    if args.command == "verify":
        return Job(
            "verify",
            {"ideal": args.ideal, "tensor": args.tensor},
            None,
            args.output,
            {"r": args.r, "horizon": args.horizon},
        )
    if args.command == "macaulay":
        if args.d is None and args.summands is None:
            raise ParseError("macaulay needs --d and/or --summands")
        options = {"r": args.r, "d": args.d, "summands": None, "n": args.n}
        if args.summands is not None:
            if args.n is None:
                raise ParseError("--summands needs --n")
            try:
                options["summands"] = [int(x) for x in args.summands.split(",")]
            except ValueError:
                raise ParseError(f"bad --summands value {args.summands!r}")
        return Job("macaulay", {}, None, args.output, options)
    if args.command == "corpus":
        options = {"action": args.action}
        if args.action == "list":
            options["filter"] = args.filter
        else:
            options.update(
                {"target": args.target, "slow": args.slow, "jobs": args.jobs}
            )
        return Job("corpus", {}, None, args.output, options)
    raise ParseError(f"unknown command {args.command!r}")


_DISPATCH = {
    "bounds": cmd_bounds,
    "search": cmd_search,
    "verify": cmd_verify,
    "macaulay": cmd_macaulay,
    "corpus": cmd_corpus,
}


def _print_error(kind: str, message: str, code: int) -> None:
    print(
        json.dumps({"error": {"type": kind, "message": message}, "exit_code": code}),
        file=sys.stderr,
    )


def run(job: Job) -> int:
    return _DISPATCH[job.command](job)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        job = _job_from_args(args)
        return run(job)
    except ParseError as exc:
        _print_error(type(exc).__name__, str(exc), EXIT_PARSE)
        return EXIT_PARSE
    except (PreconditionError, ShapeMismatchError) as exc:
        _print_error(type(exc).__name__, str(exc), EXIT_PRECONDITION)
        return EXIT_PRECONDITION
    except BorderRankError as exc:
        _print_error(type(exc).__name__, str(exc), EXIT_INTERNAL)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - safety net
        _print_error(type(exc).__name__, str(exc), EXIT_INTERNAL)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
