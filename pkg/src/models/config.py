"""
Run configuration models.

Defaults follow the constants of the routing algorithm; every value can be
overridden from the environment and then from command-line flags.
"""
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from src.utils.errors import ParameterError

DEFAULT_EPS_L = 1e-10
DEFAULT_ORACLE_CAP = 512
DEFAULT_C_SKETCH = 8.0
DEFAULT_BLOCK_SIZE = 256


class SolverMode(str, Enum):
    """How Laplacian systems are solved."""
    EXACT = "exact"
    CG = "cg"


class NormMode(str, Enum):
    """Which cost the routing minimizes: congestion (load) or l1 (stretch)."""
    LINF = "linf"
    L1 = "l1"


def _env_float(name: str, default: Optional[float]) -> Optional[float]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ParameterError(f"{name}={raw!r} is not a number") from None


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"{name}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class SolverConfig:
    """
    Laplacian solver settings.

    Attributes:
        mode: Dense pseudoinverse oracle or Jacobi-preconditioned CG
        eps_l: Relative L-norm error bound for CG
        max_iterations: CG iteration cap; None means 10 * n
        threads: Worker threads for multi right-hand-side solves
        oracle_cap: Largest n (or m) the dense oracle accepts
        block_size: Right-hand sides per CG block when sketching loads or routing demands
    """
    mode: SolverMode = SolverMode.CG
    eps_l: float = DEFAULT_EPS_L
    max_iterations: Optional[int] = None
    threads: Optional[int] = None
    oracle_cap: int = DEFAULT_ORACLE_CAP
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self):
        object.__setattr__(self, "mode", SolverMode(self.mode))
        if self.mode is SolverMode.CG and not 0 < self.eps_l < 1:
            raise ParameterError(f"eps_l must lie in (0, 1), got {self.eps_l}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ParameterError("max_iterations must be positive")
        if self.threads is not None and self.threads < 1:
            raise ParameterError("threads must be positive")
        if self.oracle_cap < 2:
            raise ParameterError("oracle_cap must be at least 2")
        if self.block_size < 1:
            raise ParameterError("block_size must be positive")

    @property
    def iterative(self) -> bool:
        return self.mode is SolverMode.CG

    @classmethod
    def from_env(cls) -> "SolverConfig":
        """Build a config from OBLIVROUTE_* environment variables."""
        return cls(
            mode=SolverMode(os.environ.get("OBLIVROUTE_SOLVER", SolverMode.CG.value)),
            eps_l=_env_float("OBLIVROUTE_EPS_L", DEFAULT_EPS_L),
            max_iterations=_env_int("OBLIVROUTE_MAX_ITERATIONS", None),
            threads=_env_int("OBLIVROUTE_THREADS", None),
            oracle_cap=_env_int("OBLIVROUTE_ORACLE_CAP", DEFAULT_ORACLE_CAP),
            block_size=_env_int("OBLIVROUTE_BLOCK_SIZE", DEFAULT_BLOCK_SIZE),
        )


@dataclass(frozen=True)
class MWUConfig:
    """
    Settings of the multiplicative-weights routing construction.

    Attributes:
        eps: Load approximation factor
        eta: MWU step size
        alpha_init: Initial localization bound; None means ln(n)^2
        adaptive: Double alpha and restart when a precondition fails
        norm_mode: linf (load) or l1 (stretch)
        seed: Master seed for the per-iteration sketches
        solver: Laplacian solver settings
        use_sketch: Sketched loads; False uses the dense oracle
        delta: Sketch failure probability; None means n^-10
        c_sketch: Constant in the sketch row count
    """
    eps: float = 0.5
    eta: float = 0.125
    alpha_init: Optional[float] = None
    adaptive: bool = True
    norm_mode: NormMode = NormMode.LINF
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    use_sketch: bool = True
    delta: Optional[float] = None
    c_sketch: float = DEFAULT_C_SKETCH

    def __post_init__(self):
        object.__setattr__(self, "norm_mode", NormMode(self.norm_mode))
        if not 0 < self.eps < 1:
            raise ParameterError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < self.eta < 0.5:
            raise ParameterError(f"eta must lie in (0, 1/2), got {self.eta}")
        if self.alpha_init is not None and not self.alpha_init > 0:
            raise ParameterError(f"alpha_init must be positive, got {self.alpha_init}")
        if self.delta is not None and not 0 < self.delta < 1:
            raise ParameterError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.c_sketch > 0:
            raise ParameterError("c_sketch must be positive")

    def initial_alpha(self, n: int) -> float:
        """alpha_init, or ln(n)^2 when unset."""
        if self.alpha_init is not None:
            return self.alpha_init
        return math.log(n) ** 2

    def sketch_delta(self, n: int) -> float:
        """delta, or n^-10 when unset."""
        if self.delta is not None:
            return self.delta
        return float(n) ** -10

    @classmethod
    def from_env(cls, solver: Optional[SolverConfig] = None) -> "MWUConfig":
        """Build a config from OBLIVROUTE_* environment variables."""
        return cls(
            eps=_env_float("OBLIVROUTE_EPS", 0.5),
            eta=_env_float("OBLIVROUTE_ETA", 0.125),
            alpha_init=_env_float("OBLIVROUTE_ALPHA", None),
            norm_mode=NormMode(os.environ.get("OBLIVROUTE_NORM", NormMode.LINF.value)),
            seed=_env_int("OBLIVROUTE_SEED", 0),
            solver=solver or SolverConfig.from_env(),
            delta=_env_float("OBLIVROUTE_DELTA", None),
        )
