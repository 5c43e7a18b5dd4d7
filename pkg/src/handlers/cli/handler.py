"""
Command-line entry point.
"""
import argparse
import sys
from typing import Optional, Sequence

from aws_lambda_powertools import Logger

from src.handlers.cli.commands.bench import bench_command
from src.handlers.cli.commands.build import build_command
from src.handlers.cli.commands.eval import eval_command
from src.handlers.cli.commands.generate import generate_command
from src.handlers.cli.commands.route import route_command
from src.handlers.cli.options import add_build_arguments, add_solver_arguments
from src.utils.errors import OblivRouteError
from src.utils.log import SERVICE_NAME, configure_logger

logger = Logger(service=SERVICE_NAME, child=True)


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with every subcommand registered."""
    parser = argparse.ArgumentParser(
        prog="oblivroute",
        description="Oblivious routing from convex combinations of electrical flows.",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--threads", type=int, help="worker threads for Laplacian solves")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="construct a routing scheme")
    build.add_argument("graph", help="edge-list file")
    build.add_argument("-o", "--out", help="scheme file (default <graph>.scheme)")
    add_build_arguments(build)
    add_solver_arguments(build)
    build.set_defaults(func=build_command)

    evaluate = commands.add_parser("eval", help="exact competitive ratio of a scheme")
    evaluate.add_argument("graph", help="edge-list file")
    evaluate.add_argument("scheme", help="scheme file")
    evaluate.add_argument("--jsonl", action="store_true", help="JSON lines per edge")
    add_solver_arguments(evaluate)
    evaluate.set_defaults(func=eval_command)

    route = commands.add_parser("route", help="route demand pairs through a scheme")
    route.add_argument("graph", help="edge-list file")
    route.add_argument("scheme", help="scheme file")
    route.add_argument("pairs", nargs="?", help="pairs file with lines 's t d'")
    route.add_argument(
        "--table", action="store_true", help="answer from the cached representation table"
    )
    route.add_argument(
        "--target", type=int, default=None, help="table target vertex id (default: first vertex)"
    )
    add_solver_arguments(route)
    route.set_defaults(func=route_command)

    bench = commands.add_parser("bench", help="build across a size ladder and fit the trend")
    bench.add_argument("graph_dir", help="directory of edge-list files")
    bench.add_argument("--strict", action="store_true", help="exit 1 when the trend check fails")
    add_build_arguments(bench)
    add_solver_arguments(bench)
    bench.set_defaults(func=bench_command)

    generate = commands.add_parser("generate", help="write random connected graphs")
    generate.add_argument("out", help="edge-list file, or directory with --ladder")
    generate.add_argument("--n", type=int, default=32, help="vertex count")
    generate.add_argument("--extra", type=int, default=16, help="edges beyond a spanning tree")
    generate.add_argument("--degree", type=int, help="write a random regular graph instead")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--ladder", action="store_true", help="4-regular ladder, m = 2^8..2^14")
    generate.set_defaults(func=generate_command)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Returns:
        Process exit code: 0 on success, the error's exit code otherwise
    """
    args = create_parser().parse_args(argv)
    configure_logger(args.log_level)
    try:
        return args.func(args)
    except OblivRouteError as e:
        logger.warning(
            "Command failed",
            extra={"command": args.command, "error_type": type(e).__name__, "error": str(e)},
        )
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.warning("Command failed", extra={"command": args.command, "error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception:
        logger.exception("Unexpected failure", extra={"command": args.command})
        return 1


if __name__ == "__main__":
    sys.exit(main())
