from .config import Config
from .gklo import MUTATIONS
from .relations import Suite


def main():
    import argparse
    import asyncio
    import logging
    import sys
    from pathlib import Path

    parser = argparse.ArgumentParser(
        prog="gklo-verifier",
        description="Verify GKLO operators of shifted twisted Yangians for quivers with involution",
    )
    parser.add_argument("--verbose", action="store_true", help="Log progress at INFO level on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_spec(sub):
        sub.add_argument("spec_path", type=Path, metavar="FILE", help="The quiver spec file")

    def add_run_flags(sub):
        sub.add_argument("--parallel", type=int, default=1, help="Worker processes for relation checks")
        sub.add_argument("--max-mode", type=int, default=3, help="Highest mode index of mode spot checks")
        sub.add_argument("--seed", type=int, default=None, help="Seed of the randomized pre-check")
        sub.add_argument("--fail-fast", action="store_true", help="Stop after the first failing check")
        sub.add_argument("--residual-terms", type=int, default=4, help="Residual terms shown in text reports")
        sub.add_argument("--timings", action="store_true", help="Include per-check timings")
        sub.add_argument("--mutate", choices=MUTATIONS, default=None, help="Run a negative-control mutation")
        sub.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    suites = [suite.value for suite in Suite]

    add_spec(commands.add_parser("validate", help="Parse and validate a quiver spec"))

    build = commands.add_parser("build", help="Print the GKLO operators")
    add_spec(build)
    build.add_argument("--vertex", type=int, default=None, help="Only print this vertex")
    build.add_argument("--max-mode", type=int, default=3, help=argparse.SUPPRESS)
    build.add_argument("--mutate", choices=MUTATIONS, default=None, help="Build with a mutated convention")

    check = commands.add_parser("check", help="Run relation suites and print a text summary")
    add_spec(check)
    check.add_argument("--suite", dest="suites", action="append", choices=suites, help="Suite to run (repeatable)")
    add_run_flags(check)

    report = commands.add_parser("report", help="Run relation suites and print a report")
    add_spec(report)
    report.add_argument("--suite", dest="suites", action="append", choices=suites, help="Suite to run (repeatable)")
    report.add_argument("--format", dest="report_format", choices=["json", "text"], default="json")
    add_run_flags(report)

    serve = commands.add_parser("serve", help="Run the MCP stdio tool server")
    serve.add_argument("--parallel", type=int, default=1, help="Worker processes for relation checks")
    serve.add_argument("--residual-terms", type=int, default=4, help="Residual terms shown in text reports")

    args = parser.parse_args()

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    config = Config(
        command=args.command,
        spec_path=getattr(args, "spec_path", None),
        suites=tuple(getattr(args, "suites", None) or ("all",)),
        vertex=getattr(args, "vertex", None),
        parallel=getattr(args, "parallel", 1),
        max_mode=getattr(args, "max_mode", 3),
        seed=getattr(args, "seed", None),
        fail_fast=getattr(args, "fail_fast", False),
        report_format=getattr(args, "report_format", "text"),
        residual_terms=getattr(args, "residual_terms", 4),
        include_timings=getattr(args, "timings", False),
        mutation=getattr(args, "mutate", None),
        verbose=args.verbose,
    )

    if config.command == "serve":
        from .server import serve_stdio

        asyncio.run(serve_stdio(config=config))
        return

    from .runner import run

    sys.exit(run(config))


if __name__ == "__main__":
    main()
