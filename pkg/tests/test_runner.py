import io
import json
import sys
from pathlib import Path

import pytest
from conftest import AIII_N1

from gklo_verifier import main
from gklo_verifier.config import Config
from gklo_verifier.runner import (
    EXIT_CHECK_FAILED,
    EXIT_INTERNAL,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    operator_text,
    run,
)

NO_EDGES = """\
vertices = 1 2
tau      = 1:2
dims_v   = 1:1 2:1
"""


@pytest.fixture
def spec_path(tmp_path: Path) -> Path:
    path = tmp_path / "aiii_n1.quiver"
    path.write_text(AIII_N1)
    return path


def _run(command: str, path: Path, **kwargs) -> tuple[int, str]:
    out = io.StringIO()
    code = run(Config(command=command, spec_path=path, **kwargs), out)
    return code, out.getvalue()


def test_validate(spec_path: Path):
    assert _run("validate", spec_path) == (EXIT_OK, "valid: 2 vertices, 1 edges, Q0+ = 1\n")


def test_parse_error(tmp_path: Path):
    path = tmp_path / "broken.quiver"
    path.write_text("vertices = 1 2\ntau = 1-2\n")
    assert _run("validate", path)[0] == EXIT_PARSE_ERROR


def test_missing_file(tmp_path: Path):
    assert _run("validate", tmp_path / "absent.quiver")[0] == EXIT_PARSE_ERROR


def test_invalid(tmp_path: Path):
    path = tmp_path / "odd.quiver"
    path.write_text("vertices = 1 2\ntau = 1:2\ndims_v = 1:2 2:1\n")
    assert _run("validate", path)[0] == EXIT_INVALID


def test_internal_error(spec_path: Path):
    assert _run("explode", spec_path)[0] == EXIT_INTERNAL


def test_build(spec_path: Path):
    code, text = _run("build", spec_path)
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "vertex 1 (tau = 2, v = 1, w = 1)"
    assert lines[1].startswith("  y[1,1] = ")
    assert "vertex 2 (tau = 1, v = 1, w = 1)" in lines


def test_build_one_vertex(aiii1):
    text = operator_text(aiii1, 2)
    assert text.startswith("vertex 2 (tau = 1, v = 2, w = 1)\n")
    assert "vertex 1 " not in text


def test_check_passes(spec_path: Path):
    code, text = _run("check", spec_path, suites=("hh", "bb"), max_mode=1)
    assert code == EXIT_OK
    assert "summary: 8 checks, 8 passed, 0 failed, 0 skipped" in text


def test_check_fails_under_mutation(spec_path: Path):
    code, text = _run("check", spec_path, suites=("lemmas",), max_mode=1, mutation="flip-mirror-sign")
    assert code == EXIT_CHECK_FAILED
    assert "conventions: flip-mirror-sign" in text
    assert "FAIL  lemma.y-tau-display(1,1)" in text


def test_report_is_deterministic(spec_path: Path):
    options = dict(suites=("hh", "hb", "lemmas"), max_mode=1, report_format="json")
    first = _run("report", spec_path, **options)
    second = _run("report", spec_path, **options)
    pooled = _run("report", spec_path, parallel=2, **options)
    assert first[0] == EXIT_OK
    assert first == second == pooled


def test_iserre_without_fixed_edge(tmp_path: Path):
    path = tmp_path / "no_edges.quiver"
    path.write_text(NO_EDGES)
    code, text = _run("report", path, suites=("iserre",), report_format="json")
    data = json.loads(text)
    assert code == EXIT_OK
    assert [check["status"] for check in data["checks"]] == ["skipped", "skipped"]
    assert len(data["cited_assumptions"]) == 1


def test_main(spec_path: Path, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["gklo-verifier", "validate", str(spec_path)])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == EXIT_OK
    assert capsys.readouterr().out.startswith("valid: 2 vertices")


def test_main_report_flags(spec_path: Path, monkeypatch, capsys):
    argv = ["gklo-verifier", "report", str(spec_path), "--suite", "hh", "--max-mode", "1", "--timings"]
    monkeypatch.setattr(sys, "argv", argv)
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["suites"] == ["hh"]
    assert "timings" in data
