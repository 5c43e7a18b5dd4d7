"""
Service for evaluating and querying routing schemes.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np
from aws_lambda_powertools import Logger

from src.models.config import NormMode, SolverConfig
from src.models.graph import DemandVector, EdgeWeights, FlowVector
from src.models.loads import LoadKind, LoadVector
from src.models.scheme import DemandPairList, RepresentationTable, RoutingScheme
from src.services.laplacian_solver import solve_many
from src.services.load_service import transfer_matrix
from src.utils.errors import ParameterError
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

ComponentWork = Callable[[float, EdgeWeights], np.ndarray]


class RoutingService:
    """Routes demands through, and evaluates, convex combinations of electrical routings."""

    def __init__(self, config: Optional[SolverConfig] = None):
        """
        Initialize RoutingService.

        Args:
            config: Solver settings for every Laplacian solve
        """
        self.config = config or SolverConfig()

    def _sum_components(self, scheme: RoutingScheme, work: ComponentWork) -> np.ndarray:
        """
        Sum work(lambda, weights) over the components, in scheme order.

        With several threads the components run in batches of one per
        worker, so at most that many partial results are held at a time.
        """
        components = scheme.components()
        workers = min(self.config.threads or 1, len(components))
        total: Optional[np.ndarray] = None
        if workers == 1:
            for lam, weights in components:
                part = work(lam, weights)
                total = part if total is None else np.add(total, part, out=total)
            return total
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for start in range(0, len(components), workers):
                batch = components[start:start + workers]
                for part in pool.map(lambda item: work(*item), batch):
                    total = part if total is None else np.add(total, part, out=total)
        return total

    def route_demands(self, scheme: RoutingScheme, demands: np.ndarray) -> np.ndarray:
        """
        Route an n x k block of demands.

        Args:
            scheme: Routing scheme
            demands: Net-inflow demands as columns

        Returns:
            m x k flows, column j answering demand j
        """
        graph = scheme.graph
        demands = np.asarray(demands, dtype=float)
        for column in demands.T:
            DemandVector(column).validate(graph.n)

        count = demands.shape[1]
        block_size = self.config.block_size if self.config.iterative else max(count, 1)

        def component_flow(lam: float, weights: EdgeWeights) -> np.ndarray:
            flows = np.empty((graph.m, count))
            for start in range(0, count, block_size):
                stop = min(start + block_size, count)
                potentials = solve_many(graph, weights, demands[:, start:stop], self.config)
                flows[:, start:stop] = graph.incidence @ potentials
            flows *= lam * weights.values[:, None]
            return flows

        return self._sum_components(scheme, component_flow)

    def route_demand(self, scheme: RoutingScheme, chi: DemandVector) -> FlowVector:
        """
        Route one demand: f = sum_i lambda_i W_i B L_i^+ chi.

        Args:
            scheme: Routing scheme
            chi: Valid demand (sums to zero)

        Returns:
            FlowVector with B^T f = chi up to solver tolerance

        Raises:
            InvalidDemandError: If chi does not sum to zero
        """
        chi.validate(scheme.graph.n)
        return FlowVector(self.route_demands(scheme, chi.values[:, None])[:, 0])

    def evaluate_exact(self, scheme: RoutingScheme) -> LoadVector:
        """
        Worst-case per-edge load (linf) or stretch (l1) of the whole combination.

        Assembles M = sum_i lambda_i W_i B L_i^+ B^T densely; loads are the row
        1-norms of M and stretches the column 1-norms.

        Args:
            scheme: Routing scheme over a graph within the oracle cap

        Returns:
            Exact LoadVector
        """
        graph = scheme.graph

        def component_matrix(lam: float, weights: EdgeWeights) -> np.ndarray:
            transfer = transfer_matrix(graph, weights, self.config.oracle_cap)
            return lam * weights.values[:, None] * transfer

        combined = self._sum_components(scheme, component_matrix)
        if scheme.norm_mode is NormMode.L1:
            return LoadVector(np.abs(combined).sum(axis=0), LoadKind.STRETCH)
        return LoadVector(np.abs(combined).sum(axis=1), LoadKind.LOAD)

    def competitive_ratio(self, scheme: RoutingScheme) -> float:
        """Maximum exact load (linf) or stretch (l1) of the scheme."""
        ratio = self.evaluate_exact(scheme).max()
        logger.info(
            "Scheme evaluated",
            extra={
                "ratio": ratio,
                "bound": 8.0 * scheme.alpha_used,
                "norm_mode": scheme.norm_mode.value,
            },
        )
        return ratio

    def build_representation(self, scheme: RoutingScheme, target: int) -> RepresentationTable:
        """
        Unit flows from every vertex to a fixed target.

        Args:
            scheme: Routing scheme
            target: Vertex x all unit flows end at

        Returns:
            RepresentationTable whose column u routes one unit from u to x
        """
        graph = scheme.graph
        if not 0 <= target < graph.n:
            raise ParameterError(f"target {target} outside 0..{graph.n - 1}")
        demands = -np.eye(graph.n)
        demands[target, :] += 1.0
        demands[:, target] = 0.0
        flows = self.route_demands(scheme, demands)
        flows[:, target] = 0.0
        logger.info(
            "Representation table built",
            extra={"target": target, "components": scheme.size, "n": graph.n},
        )
        return RepresentationTable(graph_hash=graph.hash, target=target, flows=flows)


def query_flow(table: RepresentationTable, pairs: DemandPairList) -> FlowVector:
    """
    Flow for a list of demand pairs read off the representation table.

    f_e = sum over (s, t, d) of d * (flows[e, s] - flows[e, t]); no Laplacian
    solves happen here.

    Raises:
        InvalidDemandError: If a pair references a vertex outside the table
    """
    pairs.validate(table.n)
    s, t, d = pairs.as_vectors()
    coefficients = np.zeros(table.n)
    np.add.at(coefficients, s, d)
    np.add.at(coefficients, t, -d)
    return FlowVector(table.flows @ coefficients)


def route_demand(
    scheme: RoutingScheme, chi: DemandVector, config: Optional[SolverConfig] = None
) -> FlowVector:
    return RoutingService(config).route_demand(scheme, chi)


def evaluate_exact(scheme: RoutingScheme, config: Optional[SolverConfig] = None) -> LoadVector:
    return RoutingService(config).evaluate_exact(scheme)


def competitive_ratio(scheme: RoutingScheme, config: Optional[SolverConfig] = None) -> float:
    return RoutingService(config).competitive_ratio(scheme)


def build_representation(
    scheme: RoutingScheme, target: int, config: Optional[SolverConfig] = None
) -> RepresentationTable:
    return RoutingService(config).build_representation(scheme, target)
