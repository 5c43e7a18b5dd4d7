"""
Per-edge load/stretch vectors and the weighted impedance matrix.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.utils.errors import ParameterError


class LoadKind(str, Enum):
    LOAD = "load"
    STRETCH = "stretch"


@dataclass(frozen=True, eq=False)
class LoadVector:
    """
    Nonnegative per-edge load or stretch values.

    ``eps`` is None for values computed by the dense oracle and holds the
    multiplicative approximation factor for sketched values.
    """
    values: np.ndarray
    kind: LoadKind
    eps: Optional[float] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if np.any(values < 0):
            raise ParameterError("load values must be nonnegative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", LoadKind(self.kind))

    @property
    def exact(self) -> bool:
        return self.eps is None

    def max(self) -> float:
        return float(self.values.max())

    def weighted_average(self, p: np.ndarray) -> float:
        """Sum of p_e * values_e."""
        return float(np.dot(p, self.values))


@dataclass(frozen=True, eq=False)
class PiMatrix:
    """Dense W^1/2 B L+ B^T W^1/2; an orthogonal projection."""
    values: np.ndarray

    def projection_defect(self) -> float:
        """max |Pi^2 - Pi|."""
        return float(np.abs(self.values @ self.values - self.values).max())

    def diagonal(self) -> np.ndarray:
        return np.diag(self.values).copy()
