"""
Routing scheme, MWU state and representation table models.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from src.models.config import NormMode
from src.models.graph import EdgeWeights, Graph
from src.utils.errors import DimensionMismatchError, InvalidDemandError, ParameterError

SIMPLEX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class IterationRecord:
    """Diagnostics of one MWU iteration."""
    t: int
    potential: float
    max_load: float
    average_load: float
    min_y: float
    max_y: float
    progress: float  # sum_e p_e * y_e


@dataclass(frozen=True, eq=False)
class MWUState:
    """
    Multiplicative weights after iteration t.

    Attributes:
        t: Iteration index (0 before the first update)
        x: Positive per-edge weights
        potential: X = sum(x)
        p: x / X
        last_y: Normalized slack (beta - apxload) / rho of the last update
    """
    t: int
    x: np.ndarray
    potential: float
    p: np.ndarray
    last_y: np.ndarray

    @classmethod
    def initial(cls, m: int) -> "MWUState":
        x = np.ones(m)
        return cls(t=0, x=x, potential=float(m), p=x / m, last_y=np.zeros(m))


@dataclass(frozen=True, eq=False)
class RoutingScheme:
    """
    Convex combination of electrical routings sum_i lambda_i W_i B L_i^+.

    ``trace`` is empty for schemes read back from disk.
    """
    graph: Graph
    lambdas: Tuple[float, ...]
    weights: Tuple[EdgeWeights, ...]
    norm_mode: NormMode
    alpha_used: float
    trace: Tuple[IterationRecord, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "norm_mode", NormMode(self.norm_mode))
        if not self.lambdas or len(self.lambdas) != len(self.weights):
            raise ParameterError("scheme needs one coefficient per weight vector")
        lambdas = np.asarray(self.lambdas, dtype=float)
        if np.any(lambdas < 0) or abs(lambdas.sum() - 1.0) > SIMPLEX_TOLERANCE * len(lambdas):
            raise ParameterError("scheme coefficients must be a convex combination")
        for w in self.weights:
            w.check(self.graph.m)

    @property
    def size(self) -> int:
        """Number of components T."""
        return len(self.lambdas)

    def components(self) -> List[Tuple[float, EdgeWeights]]:
        return list(zip(self.lambdas, self.weights))


@dataclass(frozen=True, eq=False)
class RepresentationTable:
    """
    Unit flows from every vertex u to a fixed target x.

    ``flows[e, u]`` is the flow the scheme puts on edge e for one unit sent
    from u to x; column x is zero.
    """
    graph_hash: str
    target: int
    flows: np.ndarray

    @property
    def m(self) -> int:
        return self.flows.shape[0]

    @property
    def n(self) -> int:
        return self.flows.shape[1]


@dataclass(frozen=True)
class DemandPairList:
    """Demand pairs (s, t, d): route d units from s to t."""
    entries: Tuple[Tuple[int, int, float], ...]

    @classmethod
    def of(cls, entries: Sequence[Tuple[int, int, float]]) -> "DemandPairList":
        return cls(tuple((int(s), int(t), float(d)) for s, t, d in entries))

    def validate(self, n: int) -> None:
        for index, (s, t, _) in enumerate(self.entries):
            if not (0 <= s < n and 0 <= t < n):
                raise InvalidDemandError(
                    f"pair #{index} ({s}, {t}) references a vertex outside 0..{n - 1}"
                )
            if s == t:
                raise InvalidDemandError(f"pair #{index} has identical endpoints {s}")

    def to_dense(self, graph: Graph) -> "DemandPairList":
        """
        Translate original vertex ids into the graph's dense indices.

        Raises:
            InvalidDemandError: If an endpoint is not a vertex id of the graph
        """
        dense = []
        for index, (s, t, d) in enumerate(self.entries):
            try:
                dense.append((graph.vertex_index(s), graph.vertex_index(t), d))
            except ParameterError:
                raise InvalidDemandError(
                    f"pair #{index} ({s}, {t}) references a vertex id not in the graph"
                ) from None
        return DemandPairList(tuple(dense))

    def as_vectors(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Sources, sinks and amounts as arrays."""
        if not self.entries:
            return np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0)
        s, t, d = zip(*self.entries)
        return np.asarray(s, dtype=int), np.asarray(t, dtype=int), np.asarray(d, dtype=float)

    def demand(self, n: int) -> np.ndarray:
        """The combined net-inflow demand sum d (e_t - e_s)."""
        s, t, d = self.as_vectors()
        chi = np.zeros(n)
        np.add.at(chi, s, -d)
        np.add.at(chi, t, d)
        return chi


def check_table(table: RepresentationTable, graph: Graph) -> None:
    """Raise unless the table has one row per edge and one column per vertex."""
    if table.flows.shape != (graph.m, graph.n):
        raise DimensionMismatchError("representation table", (graph.m, graph.n), table.flows.shape)
