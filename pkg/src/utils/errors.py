"""
Exception types raised across the package.

Every error carries the process exit code the command-line front end maps it to.
"""
from typing import Optional


class OblivRouteError(Exception):
    """Base class for all expected failures."""

    exit_code = 1


class GraphFormatError(OblivRouteError):
    """Raised when an edge-list file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GraphStructureError(OblivRouteError):
    """Raised for self-loops, duplicate edges and disconnected graphs."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DimensionMismatchError(OblivRouteError, ValueError):
    """Raised when a vector or matrix has the wrong shape."""

    def __init__(self, name: str, expected: object, actual: object):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{name}: expected shape {expected}, got {actual}")


class ParameterError(OblivRouteError, ValueError):
    """Raised when a configuration value lies outside its domain."""


class InvalidDemandError(OblivRouteError, ValueError):
    """Raised when a demand does not sum to zero or a pair is malformed."""


class OracleCapExceededError(OblivRouteError):
    """Raised when the dense oracle is asked for a graph above its size cap."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"dense oracle limited to {cap} vertices/edges, got {size}")


class SchemeFormatError(OblivRouteError):
    """Raised when a scheme or table file is malformed, truncated or corrupted."""


class GraphMismatchError(OblivRouteError):
    """Raised when a stored artifact belongs to a different graph."""

    def __init__(self, expected: str, actual: str):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"graph hash mismatch: file is for {expected[:12]}, graph is {actual[:12]}"
        )


class SolverConvergenceError(OblivRouteError):
    """Raised when the iterative Laplacian solver misses its tolerance."""

    exit_code = 2

    def __init__(self, residual: float, tolerance: float, iterations: int):
        self.residual = residual
        self.tolerance = tolerance
        self.iterations = iterations
        super().__init__(
            f"CG stopped after {iterations} iterations at relative residual "
            f"{residual:.3e} (target {tolerance:.3e})"
        )


class WidthViolationError(OblivRouteError):
    """Raised when a multiplicative update would drive a weight to zero or below."""

    exit_code = 2


class RestartBudgetExhaustedError(OblivRouteError):
    """Raised when adaptive restarts push alpha beyond the edge count."""

    exit_code = 3

    def __init__(self, alpha: float, m: int, restarts: int):
        self.alpha = alpha
        self.m = m
        self.restarts = restarts
        super().__init__(
            f"alpha reached {alpha:.4g} > m={m} after {restarts} restarts"
        )
