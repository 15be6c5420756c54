"""The line-oriented quiver spec file format.

    # comment
    vertices = 1 2 3 4
    tau      = 1:4 2:3
    edges    = 1>2 3>2 3>4
    dims_v   = 1:2 2:2 3:2 4:2
    dims_w   = 1:1 4:1        # omitted vertices default to 0
    plus     = 1 2            # optional Q0+ override
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError
from .quiver import DimensionData, Edge, QuiverWithInvolution, Violation, validate

KEYS = ("vertices", "tau", "edges", "dims_v", "dims_w", "plus")
REQUIRED = ("vertices", "tau", "dims_v")

_INT = re.compile(r"\d+")
_PAIR = {
    "tau": re.compile(r"(\d+):(\d+)"),
    "edges": re.compile(r"(\d+)>(\d+)"),
    "dims_v": re.compile(r"(\d+):(-?\d+)"),
    "dims_w": re.compile(r"(\d+):(-?\d+)"),
}
_FORMS = {"tau": "a:b", "edges": "a>b", "dims_v": "vertex:dim", "dims_w": "vertex:dim"}


@dataclass(frozen=True)
class QuiverSpecFile:
    vertices: tuple[int, ...]
    tau: tuple[tuple[int, int], ...]
    edges: tuple[Edge, ...] = ()
    dims_v: tuple[tuple[int, int], ...] = ()
    dims_w: tuple[tuple[int, int], ...] = ()
    plus: tuple[int, ...] | None = None

    @classmethod
    def from_models(cls, quiver: QuiverWithInvolution, dims: DimensionData) -> QuiverSpecFile:
        orbits = sorted({(min(i, j), max(i, j)) for i, j in quiver.tau})
        return cls(quiver.vertices, tuple(orbits), quiver.edges, dims.v, dims.w, quiver.plus)

    def quiver(self) -> QuiverWithInvolution:
        return QuiverWithInvolution.build(self.vertices, self.edges, self.tau, self.plus)

    def dims(self) -> DimensionData:
        return DimensionData.build(dict(self.dims_v), dict(self.dims_w))

    def canonical_text(self) -> str:
        """Sorted, zero dimensions dropped; equivalent files render identically."""
        orbits = sorted({(min(i, j), max(i, j)) for i, j in self.tau})
        lines = [
            "vertices = " + " ".join(map(str, sorted(self.vertices))),
            "tau = " + " ".join(f"{a}:{b}" for a, b in orbits),
            "edges = " + " ".join(f"{s}>{t}" for s, t in sorted(self.edges)),
            "dims_v = " + " ".join(f"{i}:{n}" for i, n in sorted(self.dims_v) if n),
            "dims_w = " + " ".join(f"{i}:{n}" for i, n in sorted(self.dims_w) if n),
        ]
        if self.plus is not None:
            lines.append("plus = " + " ".join(map(str, sorted(self.plus))))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


def _tokens(value: str, offset: int):
    for match in re.finditer(r"\S+", value):
        yield match.group(), offset + match.start() + 1


def _parse_ints(key: str, value: str, line: int, offset: int) -> tuple[int, ...]:
    items = []
    for token, column in _tokens(value, offset):
        if not _INT.fullmatch(token):
            raise ParseError(line, column, f"{key}: expected a vertex id, got {token!r}")
        items.append(int(token))
    return tuple(items)


def _parse_pairs(key: str, value: str, line: int, offset: int) -> tuple[tuple[int, int], ...]:
    pattern = _PAIR[key]
    items = []
    seen: dict[int, int] = {}
    for token, column in _tokens(value, offset):
        match = pattern.fullmatch(token)
        if match is None:
            raise ParseError(line, column, f"{key}: expected {_FORMS[key]}, got {token!r}")
        a, b = int(match.group(1)), int(match.group(2))
        if key.startswith("dims"):
            if a in seen:
                raise ParseError(line, column, f"{key}: vertex {a} listed twice")
            seen[a] = b
        items.append((a, b))
    return tuple(items)


def parse_file(text: str) -> QuiverSpecFile:
    """Syntax only: raises ParseError with a 1-based line and column."""
    values: dict[str, object] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        if "=" not in content:
            column = len(content) - len(content.lstrip()) + 1
            raise ParseError(number, column, "expected 'key = value'")
        key_part, value = content.split("=", 1)
        key = key_part.strip()
        column = len(key_part) - len(key_part.lstrip()) + 1
        if key not in KEYS:
            raise ParseError(number, column, f"unknown key {key!r}, expected one of {', '.join(KEYS)}")
        if key in values:
            raise ParseError(number, column, f"key {key!r} given twice")
        offset = len(key_part) + 1
        if key in ("vertices", "plus"):
            values[key] = _parse_ints(key, value, number, offset)
        else:
            values[key] = _parse_pairs(key, value, number, offset)
    for key in REQUIRED:
        if key not in values:
            raise ParseError(1, 1, f"missing required key {key!r}")
    return QuiverSpecFile(
        vertices=values["vertices"],
        tau=values["tau"],
        edges=values.get("edges", ()),
        dims_v=values["dims_v"],
        dims_w=values.get("dims_w", ()),
        plus=values.get("plus"),
    )


def check_spec(spec: QuiverSpecFile) -> list[Violation]:
    violations = []
    counts = Counter(i for pair in spec.tau for i in set(pair))
    for vertex, count in sorted(counts.items()):
        if count > 1:
            violations.append(Violation("involution", f"vertex {vertex}", "appears in more than one tau pair"))
    return violations + validate(spec.quiver(), spec.dims())


def read_spec(text: str) -> QuiverSpecFile:
    """Parse and validate."""
    spec = parse_file(text)
    violations = check_spec(spec)
    if violations:
        raise ValidationError(violations)
    return spec


def parse_spec(text: str) -> tuple[QuiverWithInvolution, DimensionData]:
    spec = read_spec(text)
    return spec.quiver(), spec.dims()


def load_spec(path: str | Path) -> QuiverSpecFile:
    return read_spec(Path(path).read_text(encoding="utf-8"))
