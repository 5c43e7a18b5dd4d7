"""
Per-edge load and stretch of electrical routings.

The exact path assembles the dense transfer matrix B L+ B^T; the sketched
path solves one Laplacian system per sketch row and recovers every edge's
l1 norm by median.
"""
from typing import Optional, Sequence

import numpy as np
from aws_lambda_powertools import Logger

from src.models.config import DEFAULT_C_SKETCH, DEFAULT_ORACLE_CAP, SolverConfig
from src.models.graph import EdgeWeights, Graph
from src.models.loads import LoadKind, LoadVector, PiMatrix
from src.services.laplacian_solver import pseudoinverse_dense, solve_many
from src.services.sketch_service import Seed, SketchOperator, recover_norms, sketch_matrix
from src.utils.errors import DimensionMismatchError, OracleCapExceededError, ParameterError
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

DEGENERATE_WEIGHT_RATIO = 1e-12
SKETCH_IMAGE_DTYPE = np.float32
MEDIAN_ROW_BLOCK = 1024


def condition_weights(weights: EdgeWeights) -> EdgeWeights:
    """
    Clamp entries below 1e-12 * max(w) up to that floor.

    Args:
        weights: Edge conductances

    Returns:
        The same weights, or a clamped copy
    """
    floor = DEGENERATE_WEIGHT_RATIO * weights.values.max()
    low = weights.values < floor
    if not low.any():
        return weights
    logger.warning(
        "Degenerate edge weights clamped",
        extra={"edges": int(low.sum()), "floor": floor},
    )
    return EdgeWeights(np.maximum(weights.values, floor))


def transfer_matrix(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> np.ndarray:
    """
    Dense m x m matrix with entries b_e L+ b_f^T.

    Raises:
        OracleCapExceededError: If n exceeds oracle_cap
    """
    pinv = pseudoinverse_dense(graph, weights, oracle_cap)
    B = graph.incidence
    return np.asarray(B @ (B @ pinv).T)


def exact_load(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> LoadVector:
    """
    load_w(e) = w_e * sum_f |b_e L+ b_f^T| from the dense oracle.

    Args:
        graph: Connected graph
        weights: Edge conductances
        oracle_cap: Size cap of the dense oracle

    Returns:
        Exact LoadVector of kind load
    """
    weights = condition_weights(weights)
    weights.check(graph.m)
    transfer = np.abs(transfer_matrix(graph, weights, oracle_cap))
    return LoadVector(weights.values * transfer.sum(axis=1), LoadKind.LOAD)


def exact_stretch(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> LoadVector:
    """stretch_w(e) = sum_f w_f |b_e L+ b_f^T| from the dense oracle."""
    weights = condition_weights(weights)
    weights.check(graph.m)
    transfer = np.abs(transfer_matrix(graph, weights, oracle_cap))
    return LoadVector(transfer @ weights.values, LoadKind.STRETCH)


def sketch_for_loads(
    graph: Graph,
    eps: float,
    config: SolverConfig,
    seed: Seed,
    delta: Optional[float] = None,
    c_sketch: float = DEFAULT_C_SKETCH,
) -> SketchOperator:
    """
    Sketch sized for approx_load / approx_stretch at factor eps.

    The iterative solver perturbs the sketched columns, so it gets a sketch
    at eps/2. delta defaults to n^-10.
    """
    sketch_eps = eps / 2 if config.iterative else eps
    return sketch_matrix(
        graph.m,
        delta if delta is not None else float(graph.n) ** -10,
        sketch_eps,
        seed,
        c_sketch,
    )


def _check_sketch(graph: Graph, eps: float, sketch: SketchOperator, config: SolverConfig) -> None:
    if sketch.m != graph.m:
        raise DimensionMismatchError("sketch", ("ell", graph.m), sketch.matrix.shape)
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    needed = eps / 2 if config.iterative else eps
    if sketch.eps > needed:
        logger.warning(
            "Sketch coarser than the requested guarantee",
            extra={"sketch_eps": sketch.eps, "needed": needed},
        )


def _sketched_norms(
    graph: Graph,
    weights: EdgeWeights,
    sketch: SketchOperator,
    config: SolverConfig,
    scale: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    median_j |(B L+ B^T S C^T)_{e j}| for every edge e, with S = diag(scale).

    CG solves take config.block_size sketch rows at a time, so solver work
    arrays stay n x block_size; the dense oracle takes all rows at once.
    The m x ell images are kept in single precision for the medians.
    """
    B = graph.incidence
    block_size = config.block_size if config.iterative else sketch.ell
    images = np.empty((graph.m, sketch.ell), dtype=SKETCH_IMAGE_DTYPE)
    for start in range(0, sketch.ell, block_size):
        stop = min(start + block_size, sketch.ell)
        columns = sketch.matrix[start:stop].T  # m x block
        if scale is not None:
            columns = scale[:, None] * columns
        potentials = solve_many(graph, weights, np.asarray(B.T @ columns), config)
        images[:, start:stop] = np.abs(B @ potentials)
    logger.debug(
        "Sketched norms recovered",
        extra={"m": graph.m, "ell": sketch.ell, "block_size": block_size},
    )
    return np.concatenate(
        [
            recover_norms(images[start:start + MEDIAN_ROW_BLOCK])
            for start in range(0, graph.m, MEDIAN_ROW_BLOCK)
        ]
    )


def approx_load(
    graph: Graph,
    weights: EdgeWeights,
    eps: float,
    sketch: SketchOperator,
    config: Optional[SolverConfig] = None,
) -> LoadVector:
    """
    Sketched loads: w_e * RecoverNorm(C B L+ b_e).

    Computes X = B^T C^T, solves L U = X in column blocks and recovers each
    edge's norm from the row U^T b_e.

    Args:
        graph: Connected graph
        weights: Edge conductances
        eps: Approximation factor the result is reported at
        sketch: Sketch operator over the edges
        config: Solver settings

    Returns:
        LoadVector within (1 +- eps) of the exact loads with high probability
    """
    config = config or SolverConfig()
    weights = condition_weights(weights)
    weights.check(graph.m)
    _check_sketch(graph, eps, sketch, config)
    norms = _sketched_norms(graph, weights, sketch, config)
    return LoadVector(weights.values * norms, LoadKind.LOAD, eps=eps)


def approx_stretch(
    graph: Graph,
    weights: EdgeWeights,
    eps: float,
    sketch: SketchOperator,
    config: Optional[SolverConfig] = None,
) -> LoadVector:
    """
    Sketched stretch: RecoverNorm(C W B L+ b_e), using X = B^T W C^T.

    Args and return as approx_load, with kind stretch.
    """
    config = config or SolverConfig()
    weights = condition_weights(weights)
    weights.check(graph.m)
    _check_sketch(graph, eps, sketch, config)
    norms = _sketched_norms(graph, weights, sketch, config, scale=weights.values)
    return LoadVector(norms, LoadKind.STRETCH, eps=eps)


def pi_matrix(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> PiMatrix:
    """The weighted impedance matrix W^1/2 B L+ B^T W^1/2."""
    if graph.m > oracle_cap:
        raise OracleCapExceededError(graph.m, oracle_cap)
    weights = condition_weights(weights)
    root = np.sqrt(weights.values)
    transfer = transfer_matrix(graph, weights, oracle_cap)
    return PiMatrix(root[:, None] * transfer * root[None, :])


def localization_value(
    graph: Graph,
    weights: EdgeWeights,
    lengths: Sequence[float],
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> float:
    """
    sum_{e,f} l_e l_f sqrt(w_e w_f) |b_e L+ b_f^T| / ||l||^2.

    The localization bound asserts this stays O(log^2 n) for every length
    vector l.
    """
    lengths = np.asarray(lengths, dtype=float)
    if lengths.shape != (graph.m,):
        raise DimensionMismatchError("lengths", (graph.m,), lengths.shape)
    scaled = lengths * np.sqrt(condition_weights(weights).values)
    transfer = np.abs(transfer_matrix(graph, weights, oracle_cap))
    return float(scaled @ transfer @ scaled / np.dot(lengths, lengths))


def load_lower_bound(graph: Graph, weights: EdgeWeights) -> np.ndarray:
    """Per-edge lower bound 2 w_e / (n * w_max) on the exact load."""
    w = weights.values
    return 2.0 * w / (graph.n * w.max())
