"""
Random connected test graphs.
"""
from typing import List, Optional

import networkx as nx
import numpy as np
from aws_lambda_powertools import Logger

from src.models.graph import Graph
from src.utils.errors import ParameterError
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

LADDER_EXPONENTS = range(8, 15)
LADDER_DEGREE = 4
MAX_REGULAR_ATTEMPTS = 50


def _to_graph(nx_graph: nx.Graph) -> Graph:
    return Graph.from_edges(nx_graph.edges(), n=nx_graph.number_of_nodes())


def random_connected_graph(n: int, extra_edges: int, seed: int = 0) -> Graph:
    """
    Random spanning tree plus extra random edges.

    Vertex v > 0 attaches to a uniformly chosen earlier vertex of a random
    permutation; extra edges are drawn uniformly from the remaining pairs.

    Args:
        n: Vertex count (at least 2)
        extra_edges: Edges added on top of the tree; capped by the complete graph
        seed: Generator seed

    Returns:
        Connected simple Graph
    """
    if n < 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    if extra_edges < 0:
        raise ParameterError("extra_edges must be nonnegative")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for position in range(1, n):
        parent = order[rng.integers(0, position)]
        g.add_edge(int(order[position]), int(parent))

    target = min(g.number_of_edges() + extra_edges, n * (n - 1) // 2)
    while g.number_of_edges() < target:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            g.add_edge(u, v)
    return _to_graph(g)


def random_regular_graph(n: int, degree: int = LADDER_DEGREE, seed: int = 0) -> Graph:
    """
    Connected random degree-regular graph.

    Raises:
        ParameterError: If no connected sample is found within the attempt budget
    """
    if degree >= n or (n * degree) % 2:
        raise ParameterError(f"no {degree}-regular graph on {n} vertices")
    for attempt in range(MAX_REGULAR_ATTEMPTS):
        g = nx.random_regular_graph(degree, n, seed=seed + attempt)
        if nx.is_connected(g):
            return _to_graph(g)
        logger.debug("Disconnected regular sample discarded", extra={"n": n, "attempt": attempt})
    raise ParameterError(f"no connected {degree}-regular sample on {n} vertices")


def regular_ladder(seed: int = 0, exponents: Optional[range] = None) -> List[Graph]:
    """4-regular graphs with m = 2^k edges for k in exponents (default 8..14)."""
    ladder = []
    for k in exponents or LADDER_EXPONENTS:
        m = 2 ** k
        ladder.append(random_regular_graph(2 * m // LADDER_DEGREE, LADDER_DEGREE, seed + k))
    return ladder
