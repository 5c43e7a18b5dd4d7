"""
l1 sketching with 1-stable (Cauchy) projections and median recovery.
"""
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from aws_lambda_powertools import Logger

from src.models.config import DEFAULT_C_SKETCH
from src.utils.errors import DimensionMismatchError, ParameterError
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

Seed = Union[int, Sequence[int]]

_UNIFORM_FLOOR = 2.0 ** -53


@dataclass(frozen=True, eq=False)
class SketchOperator:
    """
    An ell x m matrix of truncated standard Cauchy samples.

    Attributes:
        matrix: The sketch C
        ell: Row count (odd)
        delta: Failure probability the row count was sized for
        eps: Approximation factor the row count was sized for
        seed: Seed the samples were drawn from
        c_sketch: Constant used in the row count
    """
    matrix: np.ndarray
    ell: int
    delta: float
    eps: float
    seed: Tuple[int, ...]
    c_sketch: float = DEFAULT_C_SKETCH

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def truncation(self) -> float:
        return float(self.m) ** 3

    def apply(self, v: Sequence[float]) -> np.ndarray:
        """C v."""
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.m:
            raise DimensionMismatchError("sketched vector", (self.m,), v.shape)
        return self.matrix @ v


def sketch_rows(delta: float, eps: float, c_sketch: float = DEFAULT_C_SKETCH) -> int:
    """
    Row count: the smallest odd integer >= c_sketch / eps^2 * ln(1 / delta).

    Args:
        delta: Failure probability in (0, 1)
        eps: Approximation factor in (0, 1)
        c_sketch: Positive constant

    Returns:
        Odd row count ell
    """
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if not c_sketch > 0:
        raise ParameterError(f"c_sketch must be positive, got {c_sketch}")
    ell = max(1, math.ceil(c_sketch / eps ** 2 * math.log(1.0 / delta)))
    return ell if ell % 2 == 1 else ell + 1


def _seed_tuple(seed: Seed) -> Tuple[int, ...]:
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def sketch_matrix(
    m: int,
    delta: float,
    eps: float,
    seed: Seed,
    c_sketch: float = DEFAULT_C_SKETCH,
) -> SketchOperator:
    """
    Draw a Cauchy sketch for vectors of length m.

    Samples are tan(pi * (u - 1/2)) for u uniform on (0, 1) clamped away from
    the endpoints, then truncated to |C_ij| <= m^3.

    Args:
        m: Length of the sketched vectors
        delta: Failure probability
        eps: Approximation factor
        seed: Integer or integer sequence; equal seeds give identical matrices
        c_sketch: Constant in the row count

    Returns:
        SketchOperator
    """
    if m < 1:
        raise ParameterError(f"m must be positive, got {m}")
    ell = sketch_rows(delta, eps, c_sketch)
    seed_key = _seed_tuple(seed)
    rng = np.random.default_rng(list(seed_key))
    uniform = np.clip(rng.random((ell, m)), _UNIFORM_FLOOR, 1.0 - _UNIFORM_FLOOR)
    bound = float(m) ** 3
    samples = np.clip(np.tan(np.pi * (uniform - 0.5)), -bound, bound)
    samples.setflags(write=False)
    logger.debug("Sketch drawn", extra={"ell": ell, "m": m, "seed": list(seed_key)})
    return SketchOperator(
        matrix=samples, ell=ell, delta=delta, eps=eps, seed=seed_key, c_sketch=c_sketch
    )


def recover_norms(sketches: np.ndarray) -> np.ndarray:
    """
    Median of absolute values along the last axis.

    Args:
        sketches: k x ell matrix (ell odd), one sketch per row

    Returns:
        Vector of k norm estimates
    """
    sketches = np.asarray(sketches, dtype=float)
    ell = sketches.shape[-1]
    if ell % 2 == 0:
        raise DimensionMismatchError("sketch", "odd length", sketches.shape)
    middle = ell // 2
    return np.partition(np.abs(sketches), middle, axis=-1)[..., middle]


def recover_norm(sketch: Sequence[float], ell: int = 0) -> float:
    """
    Estimate ||v||_1 from s = C v as median(|s_1|, ..., |s_ell|).

    Args:
        sketch: Sketch vector of odd length
        ell: Expected length; 0 skips the check

    Returns:
        Nonnegative estimate
    """
    s = np.asarray(sketch, dtype=float).reshape(-1)
    if ell and s.size != ell:
        raise DimensionMismatchError("sketch", (ell,), s.shape)
    return float(recover_norms(s[None, :])[0])
