"""
Multiplicative-weights construction of a competitive oblivious routing.

Each iteration turns the current edge distribution p into electrical
weights, measures (approximate) loads or stretches of that routing and
reweights the edges; the result is the uniform combination of all
iterations' routings.
"""
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from aws_lambda_powertools import Logger

from src.models.config import MWUConfig, NormMode
from src.models.graph import EdgeWeights, Graph
from src.models.loads import LoadVector
from src.models.scheme import SIMPLEX_TOLERANCE, IterationRecord, MWUState, RoutingScheme
from src.services.load_service import (
    approx_load,
    approx_stretch,
    exact_load,
    exact_stretch,
    sketch_for_loads,
)
from src.utils.errors import (
    DimensionMismatchError,
    ParameterError,
    RestartBudgetExhaustedError,
    WidthViolationError,
)
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)


@dataclass(frozen=True)
class RunParameters:
    """Quantities derived from alpha for one MWU run."""
    alpha: float
    eps: float
    eta: float
    beta: float
    rho: float
    iterations: int


def iteration_count(m: int, alpha: float, eta: float, rho: float) -> int:
    """T = ceil(rho * ln m / (eta (1 - eta) alpha)), at least 1."""
    if m <= 1:
        return 1
    return max(1, math.ceil(rho * math.log(m) / (eta * (1.0 - eta) * alpha)))


def run_parameters(m: int, alpha: float, eps: float, eta: float) -> RunParameters:
    """
    Derive beta, rho and T for a run at localization bound alpha.

    rho is the width 2 sqrt(2m), widened to beta when alpha is so large that
    beta exceeds it; this keeps every normalized slack y_e inside [-1, 1].

    Args:
        m: Edge count
        alpha: Localization bound
        eps: Load approximation factor
        eta: Step size

    Returns:
        RunParameters
    """
    beta = (1.0 + eps) * 2.0 * alpha
    rho = max(2.0 * math.sqrt(2.0 * m), beta)
    return RunParameters(
        alpha=alpha,
        eps=eps,
        eta=eta,
        beta=beta,
        rho=rho,
        iterations=iteration_count(m, alpha, eta, rho),
    )


def weights_from_p(p: np.ndarray, norm_mode: NormMode) -> EdgeWeights:
    """
    Electrical weights for an edge distribution p.

    linf: w_e = 1 / (p_e + 1/m); l1: w_e = p_e + 1/m.

    Raises:
        ParameterError: If p is not a probability vector
    """
    p = np.asarray(p, dtype=float)
    m = p.size
    if m == 0 or np.any(p < -SIMPLEX_TOLERANCE) or abs(p.sum() - 1.0) > SIMPLEX_TOLERANCE:
        raise ParameterError("p must be a probability vector")
    shifted = np.clip(p, 0.0, None) + 1.0 / m
    if NormMode(norm_mode) is NormMode.LINF:
        return EdgeWeights(1.0 / shifted)
    return EdgeWeights(shifted)


def mwu_step(
    state: MWUState,
    apx: LoadVector,
    beta: float,
    rho: float,
    eta: float,
) -> MWUState:
    """
    x_e <- x_e * (1 - eta * y_e) with y_e = (beta - apx_e) / rho.

    Raises:
        WidthViolationError: If some x_e would become nonpositive
    """
    if apx.values.shape != state.x.shape:
        raise DimensionMismatchError("loads", state.x.shape, apx.values.shape)
    y = (beta - apx.values) / rho
    x = state.x * (1.0 - eta * y)
    if np.any(x <= 0):
        worst = int(np.argmax(y))
        raise WidthViolationError(
            f"update drives x_{worst} to {x[worst]:.3e} (y = {y[worst]:.3f} > 1/eta)"
        )
    potential = float(x.sum())
    return MWUState(t=state.t + 1, x=x, potential=potential, p=x / potential, last_y=y)


class RoutingBuilder:
    """Runs the MWU construction, restarting with doubled alpha when needed."""

    def __init__(self, graph: Graph, config: Optional[MWUConfig] = None):
        """
        Initialize RoutingBuilder.

        Args:
            graph: Connected graph with at least one edge
            config: Construction settings
        """
        self.graph = graph
        self.config = config or MWUConfig()
        self.restarts = 0
        self.alphas: List[float] = []
        self.parameters: Optional[RunParameters] = None
        self.iterations_run = 0

    def build(self) -> RoutingScheme:
        """
        Construct the routing scheme.

        Returns:
            RoutingScheme with T uniform components

        Raises:
            RestartBudgetExhaustedError: If alpha grows beyond m
            WidthViolationError: On a width violation with adaptivity off
        """
        config = self.config
        alpha = config.initial_alpha(self.graph.n)
        logger.info(
            "Routing construction started",
            extra={
                "n": self.graph.n,
                "m": self.graph.m,
                "norm_mode": config.norm_mode.value,
                "alpha_init": alpha,
                "use_sketch": config.use_sketch,
            },
        )
        while True:
            self.alphas.append(alpha)
            scheme = self._run(alpha)
            if scheme is not None:
                logger.info(
                    "Routing construction finished",
                    extra={
                        "components": scheme.size,
                        "alpha_used": alpha,
                        "restarts": self.restarts,
                    },
                )
                return scheme
            alpha *= 2.0
            self.restarts += 1
            if alpha > self.graph.m:
                raise RestartBudgetExhaustedError(alpha, self.graph.m, self.restarts)

    def _loads(self, weights: EdgeWeights, t: int) -> LoadVector:
        config = self.config
        stretch = config.norm_mode is NormMode.L1
        if not config.use_sketch:
            oracle = exact_stretch if stretch else exact_load
            return oracle(self.graph, weights, config.solver.oracle_cap)
        sketch = sketch_for_loads(
            self.graph,
            config.eps,
            config.solver,
            seed=(config.seed, self.restarts, t),
            delta=config.sketch_delta(self.graph.n),
            c_sketch=config.c_sketch,
        )
        approx = approx_stretch if stretch else approx_load
        return approx(self.graph, weights, config.eps, sketch, config.solver)

    def _violation(self, average: float, y: np.ndarray, params: RunParameters) -> Optional[str]:
        if average > params.beta:
            return "average load above beta"
        if np.any(np.abs(y) > 1.0):
            return "normalized slack outside [-1, 1]"
        return None

    def _run(self, alpha: float) -> Optional[RoutingScheme]:
        """One MWU run at fixed alpha; None asks for a restart."""
        config = self.config
        params = run_parameters(self.graph.m, alpha, config.eps, config.eta)
        self.parameters = params
        state = MWUState.initial(self.graph.m)
        weights: List[EdgeWeights] = []
        trace: List[IterationRecord] = []

        for t in range(1, params.iterations + 1):
            w = weights_from_p(state.p, config.norm_mode)
            self.iterations_run += 1
            apx = self._loads(w, t)
            average = apx.weighted_average(state.p)
            y = (params.beta - apx.values) / params.rho

            reason = self._violation(average, y, params)
            if reason is not None:
                if config.adaptive:
                    logger.info(
                        "Restarting with doubled alpha",
                        extra={"t": t, "alpha": alpha, "reason": reason},
                    )
                    return None
                logger.warning(
                    "MWU precondition violated",
                    extra={"t": t, "alpha": alpha, "reason": reason},
                )

            try:
                next_state = mwu_step(state, apx, params.beta, params.rho, params.eta)
            except WidthViolationError:
                if config.adaptive:
                    logger.info(
                        "Restarting with doubled alpha",
                        extra={"t": t, "alpha": alpha, "reason": "nonpositive weight"},
                    )
                    return None
                raise

            trace.append(
                IterationRecord(
                    t=t,
                    potential=next_state.potential,
                    max_load=apx.max(),
                    average_load=average,
                    min_y=float(y.min()),
                    max_y=float(y.max()),
                    progress=float(np.dot(state.p, y)),
                )
            )
            logger.debug(
                "MWU iteration",
                extra={"t": t, "potential": next_state.potential, "max_load": apx.max()},
            )
            weights.append(w)
            state = next_state

        share = 1.0 / params.iterations
        return RoutingScheme(
            graph=self.graph,
            lambdas=tuple([share] * params.iterations),
            weights=tuple(weights),
            norm_mode=config.norm_mode,
            alpha_used=alpha,
            trace=tuple(trace),
        )


def compute_routing(graph: Graph, config: Optional[MWUConfig] = None) -> RoutingScheme:
    """
    Build an oblivious routing scheme as a convex combination of electrical routings.

    Args:
        graph: Connected graph with at least one edge
        config: Construction settings

    Returns:
        RoutingScheme
    """
    return RoutingBuilder(graph, config).build()
