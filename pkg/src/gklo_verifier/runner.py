"""Command execution for the CLI: validate, build, check and report."""

from __future__ import annotations

import logging
import sys
from typing import TextIO

from .config import Config
from .errors import ParseError, ValidationError
from .gklo import FamilySpec, GkloFamily
from .relations import verify
from .report import build_document, render_text
from .spec_file import QuiverSpecFile, load_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_INVALID = 3
EXIT_INTERNAL = 4


def operator_text(family: GkloFamily, vertex: int | None = None) -> str:
    """Canonical text of y, B, H and the Cartan data, for one vertex or all."""
    if vertex is not None:
        family.quiver.check_vertex(vertex)
    vertices = family.vertices if vertex is None else (vertex,)
    lines = []
    for i in vertices:
        lines.append(f"vertex {i} (tau = {family.tau(i)}, v = {family.dim_v(i)}, w = {family.dims.dim_w(i)})")
        for r in family.slots(i):
            lines.append(f"  y[{i},{r}] = {family.build_y(i, r)}")
        lines.append(f"  B[{i}](u) = {family.build_B(i)}")
        lines.append(f"  H[{i}](u) = {family.build_H(i)}")
        lines.append(f"  mu = {family.mu_pairing(i)}")
        lines.append(f"  hbar*zeta = {family.hbar_zeta(i)}")
    return "\n".join(lines) + "\n"


def _family_spec(config: Config, spec_file: QuiverSpecFile) -> FamilySpec:
    return FamilySpec(spec_file.quiver(), spec_file.dims(), config.conventions(), config.max_mode)


def _verify(config: Config, spec_file: QuiverSpecFile, out: TextIO, *, as_json: bool) -> int:
    spec = _family_spec(config, spec_file)
    report = verify(
        spec,
        config.suites,
        parallel=config.parallel,
        fail_fast=config.fail_fast,
        seed=config.seed,
    )
    document = build_document(report, spec_file, include_timings=config.include_timings)
    if as_json:
        out.write(document.to_json())
    else:
        out.write(render_text(document, residual_terms=config.residual_terms))
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def _execute(config: Config, out: TextIO) -> int:
    spec_file = load_spec(config.spec_path)
    match config.command:
        case "validate":
            quiver = spec_file.quiver()
            out.write(
                f"valid: {len(quiver.vertices)} vertices, {len(quiver.edges)} edges, "
                f"Q0+ = {' '.join(map(str, quiver.plus_vertices))}\n"
            )
            return EXIT_OK
        case "build":
            family = _family_spec(config, spec_file).build()
            out.write(operator_text(family, config.vertex))
            return EXIT_OK
        case "check":
            return _verify(config, spec_file, out, as_json=False)
        case "report":
            return _verify(config, spec_file, out, as_json=config.report_format == "json")
        case _:
            raise ValueError(f"unknown command {config.command!r}")


def run(config: Config, out: TextIO | None = None) -> int:
    """Run one command and map its outcome to an exit code."""
    out = out or sys.stdout
    try:
        return _execute(config, out)
    except ParseError as e:
        logger.error("%s: %s", config.spec_path, e)
        return EXIT_PARSE_ERROR
    except OSError as e:
        logger.error("cannot read %s: %s", config.spec_path, e)
        return EXIT_PARSE_ERROR
    except ValidationError as e:
        logger.error("%s: %s", config.spec_path, e)
        return EXIT_INVALID
    except Exception:
        logger.exception("internal error while running %s", config.command)
        return EXIT_INTERNAL
