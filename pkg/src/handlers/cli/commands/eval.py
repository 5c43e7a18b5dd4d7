"""
Handler for the eval command.
"""
import argparse
import json

from aws_lambda_powertools import Logger

from src.handlers.cli.options import solver_config, timestamp
from src.services.routing_service import RoutingService
from src.utils.edge_list import load_edge_list
from src.utils.log import SERVICE_NAME
from src.utils.scheme_io import format_real, load_scheme, write_manifest

logger = Logger(service=SERVICE_NAME, child=True)

BOUND_FACTOR = 8.0
BOUND_SLACK = 1e-9


def eval_command(args: argparse.Namespace) -> int:
    """
    Print the exact per-edge load (or stretch) of a stored scheme against 8 * alpha_used.

    Returns:
        0 when the ratio is within the bound, 1 otherwise
    """
    started = timestamp()
    graph = load_edge_list(args.graph)
    scheme = load_scheme(args.scheme, graph)
    service = RoutingService(solver_config(args))

    loads = service.evaluate_exact(scheme)
    bound = BOUND_FACTOR * scheme.alpha_used
    limit = bound * (1.0 + BOUND_SLACK)
    ratio = loads.max()
    passed = ratio <= limit

    for e, value in enumerate(loads.values):
        if args.jsonl:
            print(
                json.dumps(
                    {"edge": e, "load": float(value), "bound": bound, "pass": bool(value <= limit)}
                )
            )
        else:
            u, v = graph.edges[e]
            print(f"{e} {graph.labels[u]} {graph.labels[v]} {format_real(value)}")
    if not args.jsonl:
        print(f"ratio {format_real(ratio)} bound {format_real(bound)} {'PASS' if passed else 'FAIL'}")

    write_manifest(
        f"{args.scheme}.eval",
        {
            "command": "eval",
            "graph": str(args.graph),
            "graph_hash": graph.hash,
            "scheme": str(args.scheme),
            "norm_mode": scheme.norm_mode.value,
            "alpha_used": scheme.alpha_used,
            "T": scheme.size,
            "ratio": ratio,
            "bound": bound,
            "pass": passed,
            "started": started,
            "finished": timestamp(),
        },
    )
    if not passed:
        logger.warning("Competitive ratio above bound", extra={"ratio": ratio, "bound": bound})
        return 1
    return 0
