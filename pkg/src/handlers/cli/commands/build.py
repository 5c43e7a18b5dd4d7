"""
Handler for the build command.
"""
import argparse
import time
from pathlib import Path

from aws_lambda_powertools import Logger

from src.handlers.cli.options import config_record, mwu_config, timestamp
from src.services.mwu_service import RoutingBuilder
from src.utils.edge_list import load_edge_list
from src.utils.log import SERVICE_NAME
from src.utils.scheme_io import file_checksum, save_scheme, write_manifest

logger = Logger(service=SERVICE_NAME, child=True)


def build_command(args: argparse.Namespace) -> int:
    """
    Build a routing scheme for a graph and write it with its manifest.

    Prints T, alpha_used, the restart count and the wall time.
    """
    started = timestamp()
    config = mwu_config(args)
    graph = load_edge_list(args.graph)
    out = Path(args.out) if args.out else Path(f"{args.graph}.scheme")

    builder = RoutingBuilder(graph, config)
    clock = time.perf_counter()
    scheme = builder.build()
    wall_time = time.perf_counter() - clock

    save_scheme(scheme, out)
    write_manifest(
        out,
        {
            "command": "build",
            "graph": str(args.graph),
            "graph_hash": graph.hash,
            "config": config_record(config),
            "started": started,
            "finished": timestamp(),
            "restarts": builder.restarts,
            "alphas": builder.alphas,
            "alpha_used": scheme.alpha_used,
            "T": scheme.size,
            "iterations_run": builder.iterations_run,
            "wall_time": wall_time,
            "scheme": str(out),
            "scheme_sha256": file_checksum(out),
        },
    )
    print(
        f"T={scheme.size} alpha_used={scheme.alpha_used:.6g} "
        f"restarts={builder.restarts} wall_time={wall_time:.3f}s"
    )
    return 0
