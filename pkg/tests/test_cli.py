"""End-to-end CLI tests: exit codes, document shapes, schema conformance."""

import json

import jsonschema
import pytest

from borderrank.apolarity import tensor_from_json, tensor_to_json
from borderrank.cli import (
    JOBS_ENV_VAR,
    _corpus_path,
    _load_schema,
    corpus_catalog,
    main,
)
from borderrank.errors import (
    EXIT_BUDGET,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
)
from borderrank.ideals import ideal_from_json, ideal_to_json

REPORT_SCHEMA = _load_schema("report.schema.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_and_check(text: str) -> dict:
    document = json.loads(text)
    jsonschema.validate(document, REPORT_SCHEMA)
    return document


def corpus(filename: str) -> str:
    return _corpus_path(filename)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def test_bounds_flagship(capsys):
    code, out, err = run_cli(capsys, "bounds", corpus("mono-4443.json"))
    assert code == EXIT_OK
    assert err == ""
    document = parse_and_check(out)
    assert document["command"] == "bounds"
    assert document["tensor"] == "a0^4*a1^4*a2^4*a3^3"
    assert document["report"]["lower"] == 86
    assert document["report"]["upper"] == 100
    assert document["report"]["components"]["catalecticant"]["value"] == 70


def test_bounds_closed_form_product(capsys):
    code, out, _ = run_cli(capsys, "bounds", corpus("mono-211x31.json"))
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["report"]["lower"] == document["report"]["upper"] == 8
    assert document["report"]["lower_provenance"] == "closed-form"


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def test_search_found_document(capsys):
    code, out, err = run_cli(capsys, "search", corpus("mono-21.json"), "--r", "2")
    assert code == EXIT_OK
    assert err == ""
    document = parse_and_check(out)
    assert document["outcome"]["status"] == "Found"
    assert document["config"]["horizon"] == 3
    assert document["outcome"]["candidate_generators"] == ["a1^2"]
    assert document["outcome"]["candidate_pieces"]["3"] == ["a0*a1^2", "a1^3"]
    ideal = document["outcome"]["candidate_ideal"]
    assert ideal["monomial_generators"] == [[[0, 2]]]


def test_search_exhausted_document(capsys):
    code, out, _ = run_cli(
        capsys, "search", corpus("mono-222.json"), "--r", "8", "--horizon", "5"
    )
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["outcome"]["status"] == "Exhausted"
    assert document["outcome"]["candidate_ideal"] is None
    assert "border rank exceeds 8" in document["outcome"]["note"]


def test_search_flag_plumbing(capsys):
    code, out, _ = run_cli(
        capsys,
        "search",
        corpus("mono-222.json"),
        "--r",
        "8",
        "--horizon",
        "5",
        "--no-symmetry",
        "--growth-prune",
        "--jobs",
        "2",
        "--budget",
        "50000",
    )
    assert code == EXIT_OK
    document = parse_and_check(out)
    config = document["config"]
    assert config["symmetry_pruning"] is False
    assert config["growth_pruning"] is True
    assert config["parallel_width"] == 2
    assert config["node_budget"] == 50000
    # the static growth rule settles this case before any node is explored
    assert document["outcome"]["statistics"]["prunings"] == {"growth": 1}


def test_search_budget_exit_code(capsys):
    code, out, err = run_cli(
        capsys, "search", corpus("mono-222.json"), "--r", "9", "--budget", "1"
    )
    assert code == EXIT_BUDGET
    document = parse_and_check(out)
    assert document["outcome"]["status"] == "BudgetExceeded"
    error = parse_and_check(err)
    assert error["exit_code"] == EXIT_BUDGET
    assert error["error"]["type"] == "BudgetExceededError"


def test_search_vacuous_r_is_precondition(capsys):
    code, out, err = run_cli(capsys, "search", corpus("mono-21.json"), "--r", "5")
    assert code == EXIT_PRECONDITION
    assert out == ""
    error = parse_and_check(err)
    assert error["error"]["type"] == "PreconditionError"
    assert "vacuous" in error["error"]["message"]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_document(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        corpus("ideal-tangent-p3.json"),
        corpus("mono-31-p3.json"),
        "--r",
        "2",
    )
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["report"]["passed"] is True
    assert document["report"]["saturation"]["saturated"] is True


def test_verify_shape_mismatch_is_precondition(capsys):
    code, out, err = run_cli(
        capsys,
        "verify",
        corpus("ideal-tangent-p3.json"),
        corpus("mono-222.json"),
        "--r",
        "2",
    )
    assert code == EXIT_PRECONDITION
    error = parse_and_check(err)
    assert error["error"]["type"] == "ShapeMismatchError"


# ---------------------------------------------------------------------------
# macaulay
# ---------------------------------------------------------------------------

def test_macaulay_decomposition(capsys):
    code, out, _ = run_cli(capsys, "macaulay", "--r", "15", "--d", "3")
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["decomposition"]["coefficients"] == [5, 3, 2]
    assert document["decomposition"]["exponent"] == 22
    assert document["lexbar"] is None


def test_macaulay_lexbar(capsys):
    code, out, _ = run_cli(
        capsys, "macaulay", "--r", "38", "--summands", "2,3,3,4", "--n", "3"
    )
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["lexbar"]["codims"] == [10, 20, 8, 0]
    assert document["lexbar"]["growth"] == 65


def test_macaulay_flag_validation(capsys):
    code, _, err = run_cli(capsys, "macaulay", "--r", "15")
    assert code == EXIT_PARSE
    assert "needs --d and/or --summands" in json.loads(err)["error"]["message"]
    code, _, err = run_cli(capsys, "macaulay", "--r", "3", "--summands", "1,2")
    assert code == EXIT_PARSE
    code, _, err = run_cli(
        capsys, "macaulay", "--r", "3", "--summands", "1,x", "--n", "2"
    )
    assert code == EXIT_PARSE
    # negative r is a domain violation, not a parse problem
    code, _, err = run_cli(capsys, "macaulay", "--r", "-1", "--d", "2")
    assert code == EXIT_PRECONDITION


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def test_corpus_list(capsys):
    code, out, _ = run_cli(capsys, "corpus", "list")
    assert code == EXIT_OK
    document = parse_and_check(out)
    names = [c["name"] for c in document["cases"]]
    assert len(names) == len(set(names)) >= 13
    code, out, _ = run_cli(capsys, "corpus", "list", "--filter", "4443")
    filtered = parse_and_check(out)["cases"]
    assert [c["name"] for c in filtered] == ["bounds-4443"]


def test_corpus_run_all_fast(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "all")
    assert code == EXIT_OK
    document = parse_and_check(out)
    summary = document["summary"]
    assert summary["failed"] == 0
    assert summary["skipped"] == 3  # the slow class stays off by default
    assert summary["passed"] == summary["total"] - summary["skipped"]
    for case in document["cases"]:
        if not case.get("skipped"):
            assert case["pass"] is True, case["name"]


def test_corpus_run_single(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "search-21-r2")
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["summary"] == {
        "total": 1,
        "passed": 1,
        "failed": 0,
        "skipped": 0,
    }
    code, _, err = run_cli(capsys, "corpus", "run", "no-such-case")
    assert code == EXIT_PARSE


def test_corpus_files_round_trip():
    for case in corpus_catalog():
        for key in ("tensor", "ideal"):
            if key not in case:
                continue
            with open(corpus(case[key])) as fh:
                data = json.load(fh)
            if key == "tensor":
                assert tensor_to_json(tensor_from_json(data)) == data
            else:
                assert ideal_to_json(ideal_from_json(data)) == data


# ---------------------------------------------------------------------------
# Parse failures and output plumbing
# ---------------------------------------------------------------------------

def test_missing_file_is_parse_error(capsys):
    code, out, err = run_cli(capsys, "bounds", "/nonexistent/tensor.json")
    assert code == EXIT_PARSE
    assert out == ""
    error = parse_and_check(err)
    assert "no such file" in error["error"]["message"]


def test_invalid_json_is_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, "bounds", str(bad))
    assert code == EXIT_PARSE
    assert "not valid JSON" in json.loads(err)["error"]["message"]


def test_schema_violation_is_parse_error(tmp_path, capsys):
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps({"shape": [1], "terms": []}))
    code, _, err = run_cli(capsys, "bounds", str(incomplete))
    assert code == EXIT_PARSE
    message = json.loads(err)["error"]["message"]
    assert "tensor.schema.json" in message


def test_output_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "macaulay", "--r", "15", "--d", "3", "--output", str(target)
    )
    assert code == EXIT_OK
    assert out == ""
    document = parse_and_check(target.read_text())
    assert document["decomposition"]["exponent"] == 22


# ---------------------------------------------------------------------------
# Worker-count environment variable
# ---------------------------------------------------------------------------

def test_jobs_env_var_used(monkeypatch, capsys):
    monkeypatch.setenv(JOBS_ENV_VAR, "2")
    code, out, _ = run_cli(capsys, "search", corpus("mono-21.json"), "--r", "2")
    assert code == EXIT_OK
    assert parse_and_check(out)["config"]["parallel_width"] == 2


def test_jobs_flag_overrides_env(monkeypatch, capsys):
    monkeypatch.setenv(JOBS_ENV_VAR, "4")
    code, out, _ = run_cli(
        capsys, "search", corpus("mono-21.json"), "--r", "2", "--jobs", "1"
    )
    assert code == EXIT_OK
    assert parse_and_check(out)["config"]["parallel_width"] == 1


def test_jobs_env_var_validated(monkeypatch, capsys):
    monkeypatch.setenv(JOBS_ENV_VAR, "zero")
    code, _, err = run_cli(capsys, "search", corpus("mono-21.json"), "--r", "2")
    assert code == EXIT_PRECONDITION
    assert JOBS_ENV_VAR in json.loads(err)["error"]["message"]
    monkeypatch.setenv(JOBS_ENV_VAR, "0")
    code, _, _ = run_cli(capsys, "search", corpus("mono-21.json"), "--r", "2")
    assert code == EXIT_PRECONDITION


# ---------------------------------------------------------------------------
# Slow corpus through the CLI
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_corpus_run_all_with_slow(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "all", "--slow", "--jobs", "4")
    assert code == EXIT_OK
    document = parse_and_check(out)
    assert document["summary"]["failed"] == 0
    assert document["summary"]["skipped"] == 0
