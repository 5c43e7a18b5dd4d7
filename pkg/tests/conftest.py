"""
Shared fixtures: small named graphs and seeded random connected graphs.
"""
from typing import List

import numpy as np
import pytest

from src.models.config import SolverConfig, SolverMode
from src.models.graph import Graph
from src.utils.generators import random_connected_graph


def cycle(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)])


def random_graphs(count: int, low: int = 4, high: int = 32, seed: int = 0) -> List[Graph]:
    """Random spanning tree plus up to n extra edges, n drawn from [low, high]."""
    rng = np.random.default_rng(seed)
    graphs = []
    for index in range(count):
        n = int(rng.integers(low, high + 1))
        extra = int(rng.integers(0, n + 1))
        graphs.append(random_connected_graph(n, extra, seed=seed * 1000 + index))
    return graphs


def random_demand(rng: np.random.Generator, n: int) -> np.ndarray:
    chi = rng.normal(size=n)
    return chi - chi.mean()


@pytest.fixture
def k2() -> Graph:
    return Graph.from_edges([(0, 1)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def cycle8() -> Graph:
    return cycle(8)


@pytest.fixture
def small_graphs() -> List[Graph]:
    return random_graphs(6, high=16, seed=1)


@pytest.fixture
def exact_solver() -> SolverConfig:
    return SolverConfig(mode=SolverMode.EXACT)


@pytest.fixture
def cg_solver() -> SolverConfig:
    return SolverConfig(mode=SolverMode.CG)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
