"""
Handler for the route command.
"""
import argparse
from pathlib import Path
from typing import Optional

import numpy as np
from aws_lambda_powertools import Logger

from src.handlers.cli.options import solver_config, timestamp
from src.models.graph import DemandVector, Graph
from src.models.scheme import DemandPairList, RepresentationTable, RoutingScheme
from src.services.routing_service import RoutingService, query_flow
from src.utils.edge_list import load_edge_list
from src.utils.errors import GraphMismatchError, ParameterError, SchemeFormatError
from src.utils.log import SERVICE_NAME
from src.utils.scheme_io import format_real, load_pairs, load_scheme, load_table, save_table, write_manifest

logger = Logger(service=SERVICE_NAME, child=True)


def _cached_table(
    service: RoutingService, scheme: RoutingScheme, graph: Graph, path: Path, target: int
) -> RepresentationTable:
    """Reuse the table at path when it matches graph and target, else rebuild it."""
    if path.exists():
        try:
            table = load_table(path, graph)
            if table.target == target:
                logger.info("Representation table reused", extra={"path": str(path)})
                return table
        except (SchemeFormatError, GraphMismatchError) as e:
            logger.warning("Stale representation table ignored", extra={"path": str(path), "error": str(e)})
    table = service.build_representation(scheme, target)
    save_table(table, graph, path)
    return table


def route_command(args: argparse.Namespace) -> int:
    """
    Print one flow value per edge for a list of demand pairs.

    Pair endpoints and --target are vertex ids as written in the edge-list
    file. With --table the answer is read off the cached representation
    table, otherwise the demand is routed through every component directly.
    """
    started = timestamp()
    graph = load_edge_list(args.graph)
    scheme = load_scheme(args.scheme, graph)
    service = RoutingService(solver_config(args))
    table_path: Optional[Path] = None
    pairs = DemandPairList(())

    if args.table:
        target = 0 if args.target is None else graph.vertex_index(args.target)
        table_path = Path(f"{args.scheme}.table")
        table = _cached_table(service, scheme, graph, table_path, target)
    elif args.pairs is None:
        raise ParameterError("route needs a pairs file or --table")

    if args.pairs is None:
        print(table_path)
    else:
        pairs = load_pairs(args.pairs).to_dense(graph)
        pairs.validate(graph.n)
        if table_path is not None:
            flow = query_flow(table, pairs)
        elif pairs.entries:
            flow = service.route_demand(scheme, DemandVector(pairs.demand(graph.n)))
        else:
            flow = None
        values = flow.values if flow is not None else np.zeros(graph.m)
        for value in values:
            print(format_real(value))

    write_manifest(
        f"{args.scheme}.route",
        {
            "command": "route",
            "graph": str(args.graph),
            "graph_hash": graph.hash,
            "scheme": str(args.scheme),
            "pairs": str(args.pairs) if args.pairs is not None else None,
            "pair_count": len(pairs.entries),
            "table": str(table_path) if table_path else None,
            "target": graph.labels[table.target] if table_path else None,
            "started": started,
            "finished": timestamp(),
        },
    )
    return 0
