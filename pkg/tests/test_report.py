import json

import pytest
from conftest import AIII_N1

from gklo_verifier.gklo import FamilySpec
from gklo_verifier.relations import CheckStatus, verify
from gklo_verifier.report import SCHEMA_VERSION, CheckModel, build_document, render_text
from gklo_verifier.spec_file import read_spec


@pytest.fixture(scope="module")
def spec_file():
    return read_spec(AIII_N1)


@pytest.fixture(scope="module")
def report(spec_file):
    spec = FamilySpec(spec_file.quiver(), spec_file.dims(), max_mode=1)
    return verify(spec, ["hh", "serre0"])


def test_field_order(report, spec_file):
    data = json.loads(build_document(report, spec_file).to_json())
    assert list(data) == [
        "schema_version",
        "tool_version",
        "input_digest",
        "quiver",
        "dims",
        "conventions",
        "suites",
        "checks",
        "cited_assumptions",
        "summary",
    ]
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["input_digest"] == f"sha256:{spec_file.digest()}"
    assert data["quiver"] == {"vertices": [1, 2], "tau": [[1, 2]], "edges": [[1, 2]], "plus": [1]}
    assert data["dims"] == {"v": {"1": 1, "2": 1}, "w": {"1": 1, "2": 1}}
    assert data["conventions"]["tau_edge_shift"] == "3/2"
    assert data["suites"] == ["hh", "serre0"]


def test_checks(report, spec_file):
    data = json.loads(build_document(report, spec_file).to_json())
    first = data["checks"][0]
    assert first == {
        "name": "hh",
        "indices": [1, 1],
        "status": "pass",
        "reason": None,
        "detail": None,
        "residual": [],
    }
    skipped = [check for check in data["checks"] if check["status"] == "skipped"]
    assert [check["name"] for check in skipped] == ["comm-serre", "comm-serre"]
    assert data["summary"] == {"total": 6, "pass": 4, "fail": 0, "skipped": 2}


def test_timings_opt_in(report, spec_file):
    document = build_document(report, spec_file, include_timings=True)
    data = json.loads(document.to_json())
    assert list(data)[-1] == "timings"
    assert set(data["timings"]) == {check.label for check in report.checks}


def test_text_rendering(report, spec_file):
    text = render_text(build_document(report, spec_file))
    lines = text.splitlines()
    assert lines[0].startswith("gklo-verifier ")
    assert lines[1] == "conventions: default"
    assert "PASS  hh(1,2)" in lines
    assert any(line.startswith("SKIP  comm-serre(1,2)  commuting Serre needs") for line in lines)
    assert lines[-1] == "summary: 6 checks, 4 passed, 0 failed, 2 skipped"


def test_residual_is_cut(report, spec_file):
    document = build_document(report, spec_file)
    failing = CheckModel(name="hb", indices=[1, 2], status=CheckStatus.FAIL, residual=["a", "b", "c"])
    document = document.model_copy(update={"checks": [failing]})
    text = render_text(document, residual_terms=2)
    assert "FAIL  hb(1,2)" in text
    assert "      residual: a + b + ... (1 more terms)" in text
