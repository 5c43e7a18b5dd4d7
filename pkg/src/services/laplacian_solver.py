"""
Laplacian system solves: a dense pseudoinverse oracle and blocked Jacobi-PCG.

Iterative solves honour the L-norm contract
``||x - L+ y||_L <= eps_l * ||L+ y||_L`` through the residual surrogate
computed by ``laplacian_residual_tolerance``.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from aws_lambda_powertools import Logger

from src.models.config import DEFAULT_ORACLE_CAP, SolverConfig, SolverMode
from src.models.graph import DEMAND_TOLERANCE, EdgeWeights, Graph
from src.utils.errors import (
    DimensionMismatchError,
    OracleCapExceededError,
    SolverConvergenceError,
)
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

RESIDUAL_FLOOR = 1e-10
MAX_RESTARTS = 3


def pseudoinverse_dense(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> np.ndarray:
    """
    Dense Moore-Penrose pseudoinverse of the weighted Laplacian.

    Args:
        graph: Connected graph
        weights: Edge conductances
        oracle_cap: Largest vertex count accepted

    Returns:
        Symmetric n x n matrix L+ with L+ 1 = 0

    Raises:
        OracleCapExceededError: If n exceeds oracle_cap
    """
    if graph.n > oracle_cap:
        raise OracleCapExceededError(graph.n, oracle_cap)
    dense = graph.laplacian(weights).toarray()
    pinv = np.linalg.pinv(dense, hermitian=True)
    # re-center so the all-ones kernel is annihilated to rounding
    pinv = 0.5 * (pinv + pinv.T)
    pinv -= pinv.mean(axis=0, keepdims=True)
    pinv -= pinv.mean(axis=1, keepdims=True)
    return pinv


def effective_resistance(
    graph: Graph,
    weights: EdgeWeights,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> np.ndarray:
    """b_e L+ b_e^T for every edge, from the dense oracle."""
    pinv = pseudoinverse_dense(graph, weights, oracle_cap)
    u, v = graph.tails, graph.heads
    return pinv[u, u] + pinv[v, v] - 2.0 * pinv[u, v]


def laplacian_residual_tolerance(graph: Graph, weights: EdgeWeights, eps_l: float) -> float:
    """
    Relative residual target that implies the L-norm error bound eps_l.

    For e = x - L+ y and r = L x - y, ||e||_L <= ||r||_2 / sqrt(lambda_2) and
    ||L+ y||_L >= ||y||_2 / sqrt(lambda_max), so the L-norm ratio is at most
    sqrt(kappa) * ||r||_2 / ||y||_2. We bound lambda_max by twice the largest
    weighted degree and lambda_2 from below by 4 * w_min / n^2.

    Args:
        graph: Connected graph
        weights: Edge conductances
        eps_l: Target relative L-norm error

    Returns:
        Relative 2-norm residual tolerance, floored at RESIDUAL_FLOOR
    """
    w = weights.values
    weighted_degree = np.bincount(graph.tails, weights=w, minlength=graph.n) + np.bincount(
        graph.heads, weights=w, minlength=graph.n
    )
    kappa = (2.0 * weighted_degree.max()) * graph.n ** 2 / (4.0 * w.min())
    tolerance = eps_l / math.sqrt(kappa)
    if tolerance < RESIDUAL_FLOOR:
        logger.debug(
            "Residual tolerance floored",
            extra={"requested": tolerance, "floor": RESIDUAL_FLOOR, "kappa_bound": kappa},
        )
        return RESIDUAL_FLOOR
    return tolerance


def _center(rhs: np.ndarray) -> np.ndarray:
    """Project the mean out of every column, warning when it was not negligible."""
    means = rhs.mean(axis=0)
    scale = np.maximum(1.0, np.abs(rhs).sum(axis=0))
    offending = np.abs(means * rhs.shape[0]) > DEMAND_TOLERANCE * scale
    if np.any(offending):
        logger.warning(
            "Right-hand side not orthogonal to ones; projected",
            extra={
                "columns": int(offending.sum()),
                "max_mean": float(np.abs(means).max()),
            },
        )
    return rhs - means


def _block_pcg(
    laplacian: sp.csr_matrix,
    rhs: np.ndarray,
    inv_diagonal: np.ndarray,
    tolerance: float,
    max_iterations: int,
) -> np.ndarray:
    """
    Jacobi-preconditioned CG run on all columns of rhs at once.

    Every column keeps its own step sizes; converged columns are frozen. The
    mean is projected out of the iterate at each restart.
    """
    norms = np.linalg.norm(rhs, axis=0)
    live = norms > 0
    safe_norms = np.where(live, norms, 1.0)
    X = np.zeros_like(rhs)
    iterations = 0

    for _ in range(MAX_RESTARTS):
        R = rhs - laplacian @ X
        active = live & (np.linalg.norm(R, axis=0) / safe_norms > tolerance)
        if not active.any():
            break
        Z = inv_diagonal[:, None] * R
        P = Z.copy()
        rz = np.einsum("ij,ij->j", R, Z)
        for _ in range(max_iterations):
            AP = laplacian @ P
            curvature = np.einsum("ij,ij->j", P, AP)
            step = np.zeros_like(rz)
            np.divide(rz, curvature, out=step, where=active & (curvature > 0))
            X += step * P
            R -= step * AP
            iterations += 1
            active &= np.linalg.norm(R, axis=0) / safe_norms > tolerance
            if not active.any():
                break
            Z = inv_diagonal[:, None] * R
            rz_next = np.einsum("ij,ij->j", R, Z)
            momentum = np.zeros_like(rz)
            np.divide(rz_next, rz, out=momentum, where=active & (rz > 0))
            P = Z + momentum * P
            rz = rz_next
        X -= X.mean(axis=0)

    residual = np.linalg.norm(rhs - laplacian @ X, axis=0) / safe_norms
    worst = float(residual[live].max()) if live.any() else 0.0
    if worst > tolerance:
        raise SolverConvergenceError(worst, tolerance, iterations)
    logger.debug(
        "Block CG converged",
        extra={"columns": rhs.shape[1], "iterations": iterations, "residual": worst},
    )
    return X


def solve_many(
    graph: Graph,
    weights: EdgeWeights,
    rhs: np.ndarray,
    config: Optional[SolverConfig] = None,
) -> np.ndarray:
    """
    Solve L X = Y for an n x k block of right-hand sides.

    Args:
        graph: Connected graph
        weights: Edge conductances
        rhs: n x k matrix; columns not orthogonal to ones are projected
        config: Solver settings

    Returns:
        n x k solution with every column orthogonal to ones

    Raises:
        DimensionMismatchError: If rhs does not have n rows
        SolverConvergenceError: If CG misses its tolerance
    """
    config = config or SolverConfig()
    weights.check(graph.m)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.ndim != 2 or rhs.shape[0] != graph.n:
        raise DimensionMismatchError("right-hand side", (graph.n, "k"), rhs.shape)
    rhs = _center(rhs)
    if rhs.shape[1] == 0:
        return rhs.copy()

    if config.mode is SolverMode.EXACT:
        return pseudoinverse_dense(graph, weights, config.oracle_cap) @ rhs

    laplacian = graph.laplacian(weights)
    inv_diagonal = 1.0 / laplacian.diagonal()
    tolerance = laplacian_residual_tolerance(graph, weights, config.eps_l)
    max_iterations = config.max_iterations or 10 * graph.n

    workers = min(config.threads or 1, rhs.shape[1])
    if workers == 1:
        return _block_pcg(laplacian, rhs, inv_diagonal, tolerance, max_iterations)

    chunks: Sequence[np.ndarray] = np.array_split(np.arange(rhs.shape[1]), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda cols: _block_pcg(
                    laplacian, rhs[:, cols], inv_diagonal, tolerance, max_iterations
                ),
                chunks,
            )
        )
    return np.hstack(parts)


def solve(
    graph: Graph,
    weights: EdgeWeights,
    rhs: Sequence[float],
    config: Optional[SolverConfig] = None,
) -> np.ndarray:
    """
    Solve L x = y for a single right-hand side.

    Args:
        graph: Connected graph
        weights: Edge conductances
        rhs: Vector of length n
        config: Solver settings

    Returns:
        Potentials x orthogonal to ones
    """
    y = np.asarray(rhs, dtype=float)
    if y.shape != (graph.n,):
        raise DimensionMismatchError("right-hand side", (graph.n,), y.shape)
    return solve_many(graph, weights, y[:, None], config)[:, 0]
