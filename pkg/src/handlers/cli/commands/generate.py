"""
Handler for the generate command.
"""
import argparse
from pathlib import Path

from aws_lambda_powertools import Logger

from src.handlers.cli.options import timestamp
from src.utils.edge_list import save_edge_list
from src.utils.generators import random_connected_graph, random_regular_graph, regular_ladder
from src.utils.log import SERVICE_NAME
from src.utils.scheme_io import write_manifest

logger = Logger(service=SERVICE_NAME, child=True)


def generate_command(args: argparse.Namespace) -> int:
    """
    Write random connected graphs as edge lists.

    --ladder fills the output directory with the 4-regular benchmark ladder;
    otherwise a single graph is written to the output path.
    """
    out = Path(args.out)
    if args.ladder:
        out.mkdir(parents=True, exist_ok=True)
        for graph in regular_ladder(seed=args.seed):
            path = out / f"regular_m{graph.m}.el"
            save_edge_list(graph, path)
            print(f"{path}\tn={graph.n}\tm={graph.m}")
        logger.info("Ladder written", extra={"path": str(out)})
        return 0

    if args.degree:
        graph = random_regular_graph(args.n, args.degree, seed=args.seed)
    else:
        graph = random_connected_graph(args.n, args.extra, seed=args.seed)
    save_edge_list(graph, out)
    write_manifest(
        out,
        {
            "command": "generate",
            "n": graph.n,
            "m": graph.m,
            "degree": args.degree,
            "extra": args.extra,
            "seed": args.seed,
            "graph_hash": graph.hash,
            "created": timestamp(),
        },
    )
    print(f"{out}\tn={graph.n}\tm={graph.m}")
    return 0
