"""
Edge-list file reading and writing.

Format: UTF-8 text, one "u v" pair of decimal vertex ids per line, blank
lines and lines starting with '#' ignored.
"""
from pathlib import Path
from typing import Dict, List, Tuple, Union

from aws_lambda_powertools import Logger

from src.models.graph import Edge, Graph
from src.utils.errors import GraphFormatError, GraphStructureError
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

PathLike = Union[str, Path]


def _parse_line(text: str, number: int) -> Tuple[int, int]:
    fields = text.split()
    if len(fields) != 2:
        raise GraphFormatError(f"expected 'u v', got {text.strip()!r}", line=number)
    try:
        return int(fields[0]), int(fields[1])
    except ValueError:
        raise GraphFormatError(f"vertex ids must be integers, got {text.strip()!r}", line=number) from None


def _dense_ids(raw_edges: List[Tuple[int, int, int]]) -> Tuple[Dict[int, int], Tuple[int, ...]]:
    """
    Map original ids onto 0..n-1.

    Ids that already are exactly 0..n-1 keep their values; anything else is
    renumbered in order of first appearance.
    """
    order: List[int] = []
    seen = set()
    for _, u, v in raw_edges:
        for vertex in (u, v):
            if vertex not in seen:
                seen.add(vertex)
                order.append(vertex)
    if seen == set(range(len(order))):
        labels = tuple(range(len(order)))
    else:
        labels = tuple(order)
    return {label: index for index, label in enumerate(labels)}, labels


def parse_edge_list(text: str) -> Graph:
    """
    Parse edge-list text into a canonical Graph.

    Args:
        text: File contents

    Returns:
        Graph over dense ids, edges sorted with u < v

    Raises:
        GraphFormatError: If a line is malformed
        GraphStructureError: On self-loops, duplicates or disconnected input
    """
    raw_edges: List[Tuple[int, int, int]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        u, v = _parse_line(stripped, number)
        if u == v:
            raise GraphStructureError(f"self-loop at vertex {u}", line=number)
        raw_edges.append((number, u, v))
    if not raw_edges:
        raise GraphFormatError("edge list contains no edges")

    index, labels = _dense_ids(raw_edges)
    first_seen: Dict[Edge, int] = {}
    for number, u, v in raw_edges:
        a, b = index[u], index[v]
        key = (min(a, b), max(a, b))
        if key in first_seen:
            raise GraphStructureError(
                f"duplicate edge {u} {v} (first given on line {first_seen[key]})", line=number
            )
        first_seen[key] = number

    return Graph(n=len(labels), edges=tuple(sorted(first_seen)), labels=labels)


def load_edge_list(path: PathLike) -> Graph:
    """
    Read a graph from an edge-list file.

    Args:
        path: File to read

    Returns:
        Canonical Graph
    """
    graph = parse_edge_list(Path(path).read_text(encoding="utf-8"))
    logger.info(
        "Graph loaded",
        extra={"path": str(path), "n": graph.n, "m": graph.m, "graph_hash": graph.hash[:12]},
    )
    return graph


def save_edge_list(graph: Graph, path: PathLike) -> None:
    """Write the canonical edge list of graph over its dense ids."""
    Path(path).write_text(graph.canonical_text, encoding="utf-8")

