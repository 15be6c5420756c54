"""Report documents: the JSON schema and the text rendering."""

from __future__ import annotations

import json
from importlib.metadata import PackageNotFoundError, version
from typing import Annotated

from pydantic import BaseModel, Field

from .relations import CheckStatus, RelationCheck, VerificationReport
from .spec_file import QuiverSpecFile

SCHEMA_VERSION = 1

try:
    TOOL_VERSION = version("gklo-verifier")
except PackageNotFoundError:
    TOOL_VERSION = "0.1.0"


class QuiverModel(BaseModel):
    vertices: list[int]
    tau: list[tuple[int, int]]
    edges: list[tuple[int, int]]
    plus: list[int]


class DimsModel(BaseModel):
    v: dict[str, int]
    w: dict[str, int]


class ConventionsModel(BaseModel):
    tau_edge_shift: str
    h_prefactor: bool
    mirror_sign: int
    mutation: str | None


class CheckModel(BaseModel):
    name: str
    indices: list[int]
    status: CheckStatus
    reason: str | None = None
    detail: str | None = None
    residual: Annotated[
        list[str],
        Field(default_factory=list, description="Canonical text of each residual term, in term order."),
    ]

    @classmethod
    def from_check(cls, check: RelationCheck) -> CheckModel:
        return cls(
            name=check.name,
            indices=list(check.indices),
            status=check.status,
            reason=check.reason,
            detail=check.detail,
            residual=list(check.residual_terms),
        )


class ReportDocument(BaseModel):
    schema_version: int = SCHEMA_VERSION
    tool_version: str = TOOL_VERSION
    input_digest: str
    quiver: QuiverModel
    dims: DimsModel
    conventions: ConventionsModel
    suites: list[str]
    checks: list[CheckModel]
    cited_assumptions: list[str]
    summary: dict[str, int]
    timings: Annotated[
        dict[str, float] | None,
        Field(default=None, description="Seconds per check; excluded from determinism guarantees."),
    ]

    def to_json(self) -> str:
        data = self.model_dump(mode="json")
        if data["timings"] is None:
            del data["timings"]
        return json.dumps(data, sort_keys=False, indent=2) + "\n"

    @property
    def ok(self) -> bool:
        return self.summary.get(CheckStatus.FAIL.value, 0) == 0


def build_document(
    report: VerificationReport,
    spec_file: QuiverSpecFile,
    *,
    include_timings: bool = False,
) -> ReportDocument:
    quiver = report.spec.quiver
    dims = report.spec.dims
    return ReportDocument(
        input_digest=f"sha256:{spec_file.digest()}",
        quiver=QuiverModel(
            vertices=sorted(quiver.vertices),
            tau=[(i, j) for i, j in quiver.tau if i < j],
            edges=sorted(quiver.edges),
            plus=list(quiver.plus_vertices),
        ),
        dims=DimsModel(
            v={str(i): n for i, n in dims.v},
            w={str(i): n for i, n in dims.w},
        ),
        conventions=ConventionsModel(**report.spec.conventions.describe()),
        suites=[suite.value for suite in report.suites],
        checks=[CheckModel.from_check(check) for check in report.checks],
        cited_assumptions=list(report.cited_assumptions),
        summary=report.summary(),
        timings=report.timings() if include_timings else None,
    )


_STATUS_LABELS = {
    CheckStatus.PASS: "PASS",
    CheckStatus.FAIL: "FAIL",
    CheckStatus.SKIPPED: "SKIP",
}


def _residual_text(terms: list[str], max_terms: int) -> str:
    if not terms:
        return "0"
    shown = terms[:max_terms]
    text = " + ".join(shown)
    if len(terms) > max_terms:
        text += f" + ... ({len(terms) - max_terms} more terms)"
    return text


def render_text(document: ReportDocument, *, residual_terms: int = 4) -> str:
    lines = [
        f"gklo-verifier {document.tool_version}  input {document.input_digest}",
        f"conventions: {document.conventions.mutation or 'default'}",
        f"suites: {', '.join(document.suites)}",
        "",
    ]
    for check in document.checks:
        label = f"{check.name}({','.join(map(str, check.indices))})"
        line = f"{_STATUS_LABELS[check.status]}  {label}"
        note = check.reason or check.detail
        if note:
            line += f"  {note}"
        lines.append(line)
        if check.status is CheckStatus.FAIL and check.residual:
            lines.append(f"      residual: {_residual_text(check.residual, residual_terms)}")
    for assumption in document.cited_assumptions:
        lines.append(f"assumption: {assumption}")
    summary = document.summary
    lines.append("")
    lines.append(
        f"summary: {summary['total']} checks, {summary['pass']} passed, "
        f"{summary['fail']} failed, {summary['skipped']} skipped"
    )
    if document.timings is not None:
        lines.append(f"elapsed: {sum(document.timings.values()):.3f}s")
    return "\n".join(lines) + "\n"
