import asyncio

import pytest
from conftest import AIII_N1
from mcp import McpError

from gklo_verifier.config import Config
from gklo_verifier.server import VerifierToolAdapter, VerifierTools, new_server


@pytest.fixture
def adapter() -> VerifierToolAdapter:
    return VerifierToolAdapter(Config(command="serve"))


def _text(result) -> str:
    (content,) = result
    return content.text


def test_validate_quiver(adapter: VerifierToolAdapter):
    text = _text(asyncio.run(adapter.validate_quiver({"spec": AIII_N1})))
    assert text == "Valid: 2 vertices, Q0+ = 1"


def test_validate_quiver_reports_violations(adapter: VerifierToolAdapter):
    spec = "vertices = 1 2\ntau = 1:2\ndims_v = 1:2 2:1\n"
    text = _text(asyncio.run(adapter.validate_quiver({"spec": spec})))
    assert text.startswith("Invalid:\n")
    assert "tau-invariant-v" in text


def test_missing_argument(adapter: VerifierToolAdapter):
    with pytest.raises(McpError):
        asyncio.run(adapter.validate_quiver({}))


def test_build_operators(adapter: VerifierToolAdapter):
    text = _text(asyncio.run(adapter.build_operators({"spec": AIII_N1, "vertex": 2})))
    assert text.startswith("vertex 2 (tau = 1, v = 1, w = 1)")


def test_build_operators_bad_vertex(adapter: VerifierToolAdapter):
    with pytest.raises(McpError):
        asyncio.run(adapter.build_operators({"spec": AIII_N1, "vertex": 7}))


def test_check_relations(adapter: VerifierToolAdapter):
    args = {"spec": AIII_N1, "suites": ["hh"], "max_mode": 1}
    text = _text(asyncio.run(adapter.check_relations(args)))
    assert "summary: 4 checks, 4 passed, 0 failed, 0 skipped" in text


def test_check_relations_rejects_unknown_suite(adapter: VerifierToolAdapter):
    with pytest.raises(McpError):
        asyncio.run(adapter.check_relations({"spec": AIII_N1, "suites": ["nope"]}))


def test_server_builds():
    server = new_server(Config(command="serve"))
    assert server.name == "gklo-verifier"
    assert {tool.value for tool in VerifierTools} == {"validate_quiver", "build_operators", "check_relations"}
