from enum import Enum
from typing import Annotated

from mcp import McpError, stdio_server, types
from mcp.server import Server
from pydantic import BaseModel, Field

from .config import Config
from .errors import GkloError
from .gklo import FamilySpec
from .relations import Suite, verify
from .report import build_document, render_text
from .runner import operator_text
from .spec_file import read_spec


class VerifierTools(str, Enum):
    VALIDATE_QUIVER = "validate_quiver"
    BUILD_OPERATORS = "build_operators"
    CHECK_RELATIONS = "check_relations"


SPEC_DESCRIPTION = """The quiver spec file contents, one 'key = value' line per key.
Keys: vertices, tau (a:b), edges (a>b), dims_v (i:n), dims_w (i:n), plus.
"""


class ValidateQuiverRequest(BaseModel):
    """Request to validate a quiver with involution"""

    spec: Annotated[str, Field(description=SPEC_DESCRIPTION)]


class BuildOperatorsRequest(BaseModel):
    """Request to build the GKLO operators"""

    spec: Annotated[str, Field(description=SPEC_DESCRIPTION)]
    vertex: Annotated[
        int | None,
        Field(default=None, description="""Only print the operators of this vertex."""),
    ]


class CheckRelationsRequest(BaseModel):
    """Request to verify relations"""

    spec: Annotated[str, Field(description=SPEC_DESCRIPTION)]
    suites: Annotated[
        list[Suite],
        Field(default_factory=lambda: [Suite.ALL], description="""The suites to run."""),
    ]
    max_mode: Annotated[
        int,
        Field(default=3, ge=0, description="""Highest mode index of the mode spot checks."""),
    ]


def _invalid(message: str) -> McpError:
    return McpError(types.ErrorData(code=types.INVALID_PARAMS, message=message))


class VerifierToolAdapter:
    def __init__(self, config: Config):
        self.config = config

    # validate
    async def validate_quiver(self, args: dict) -> list[types.TextContent]:
        try:
            params = ValidateQuiverRequest.model_validate(args)
        except Exception as e:
            raise _invalid(str(e))

        try:
            spec_file = read_spec(params.spec)
        except GkloError as e:
            return [types.TextContent(type="text", text=f"Invalid:\n{e}")]
        quiver = spec_file.quiver()
        content = f"Valid: {len(quiver.vertices)} vertices, Q0+ = {' '.join(map(str, quiver.plus_vertices))}"
        return [types.TextContent(type="text", text=content)]

    # build
    async def build_operators(self, args: dict) -> list[types.TextContent]:
        try:
            params = BuildOperatorsRequest.model_validate(args)
            spec_file = read_spec(params.spec)
            family = FamilySpec(spec_file.quiver(), spec_file.dims()).build()
            content = operator_text(family, params.vertex)
        except (GkloError, ValueError) as e:
            raise _invalid(str(e))
        return [types.TextContent(type="text", text=content)]

    # check
    async def check_relations(self, args: dict) -> list[types.TextContent]:
        try:
            params = CheckRelationsRequest.model_validate(args)
            spec_file = read_spec(params.spec)
        except (GkloError, ValueError) as e:
            raise _invalid(str(e))

        spec = FamilySpec(spec_file.quiver(), spec_file.dims(), max_mode=params.max_mode)
        report = verify(spec, params.suites, parallel=self.config.parallel)
        document = build_document(report, spec_file)
        content = render_text(document, residual_terms=self.config.residual_terms)
        return [types.TextContent(type="text", text=content)]


def new_server(config: Config) -> Server:
    tool_adapter = VerifierToolAdapter(config)
    server = Server("gklo-verifier")

    @server.list_tools()
    async def list_tools() -> list[types.Tool]:
        return [
            types.Tool(
                name=VerifierTools.VALIDATE_QUIVER,
                description="Parse and validate a quiver with involution spec",
                inputSchema=ValidateQuiverRequest.model_json_schema(),
            ),
            types.Tool(
                name=VerifierTools.BUILD_OPERATORS,
                description="Print the GKLO operators y, B and H of a quiver spec",
                inputSchema=BuildOperatorsRequest.model_json_schema(),
            ),
            types.Tool(
                name=VerifierTools.CHECK_RELATIONS,
                description="Verify the shifted twisted Yangian relations and return a text report",
                inputSchema=CheckRelationsRequest.model_json_schema(),
            ),
        ]

    @server.call_tool()
    async def call_tool(name: str, args: dict) -> list[types.TextContent]:
        if name == VerifierTools.VALIDATE_QUIVER:
            return await tool_adapter.validate_quiver(args)
        elif name == VerifierTools.BUILD_OPERATORS:
            return await tool_adapter.build_operators(args)
        elif name == VerifierTools.CHECK_RELATIONS:
            return await tool_adapter.check_relations(args)
        else:
            raise _invalid(f"Unknown tool: {name}")

    return server


async def serve_stdio(config: Config):
    server = new_server(config)
    options = server.create_initialization_options()
    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, options, raise_exceptions=True)
