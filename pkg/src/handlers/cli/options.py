"""
Shared command-line options and their translation into run configuration.

Values left unset on the command line fall back to the OBLIVROUTE_*
environment, then to the built-in defaults.
"""
import argparse
from dataclasses import asdict, replace
from datetime import datetime, timezone
from typing import Any, Dict

from src.models.config import MWUConfig, NormMode, SolverConfig, SolverMode


def add_solver_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags controlling Laplacian solves."""
    parser.add_argument("--solver", choices=[m.value for m in SolverMode], help="Laplacian solver")
    parser.add_argument("--eps-l", type=float, help="relative L-norm error of the CG solver")
    parser.add_argument("--max-iterations", type=int, help="CG iteration cap per solve")
    parser.add_argument("--oracle-cap", type=int, help="largest n for the dense oracle")
    parser.add_argument("--block-size", type=int, help="sketch columns solved per CG block")


def add_build_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags of the routing construction."""
    parser.add_argument("--norm", choices=[m.value for m in NormMode], help="cost to optimize")
    parser.add_argument("--seed", type=int, help="master seed of the sketches")
    parser.add_argument("--eps", type=float, help="load approximation factor")
    parser.add_argument("--eta", type=float, help="MWU step size")
    parser.add_argument("--alpha", type=float, help="initial localization bound")
    parser.add_argument("--delta", type=float, help="sketch failure probability")
    parser.add_argument("--c-sketch", type=float, help="constant in the sketch row count")
    parser.add_argument(
        "--no-adaptive", action="store_true", help="fail instead of doubling alpha and restarting"
    )
    parser.add_argument(
        "--exact-loads", action="store_true", help="use the dense load oracle instead of sketches"
    )


def _given(args: argparse.Namespace, mapping: Dict[str, str]) -> Dict[str, Any]:
    overrides = {}
    for flag, field_name in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    return overrides


def solver_config(args: argparse.Namespace) -> SolverConfig:
    """SolverConfig from the environment overridden by flags."""
    overrides = _given(
        args,
        {
            "solver": "mode",
            "eps_l": "eps_l",
            "max_iterations": "max_iterations",
            "oracle_cap": "oracle_cap",
            "block_size": "block_size",
            "threads": "threads",
        },
    )
    return replace(SolverConfig.from_env(), **overrides)


def mwu_config(args: argparse.Namespace) -> MWUConfig:
    """MWUConfig from the environment overridden by flags."""
    overrides = _given(
        args,
        {
            "norm": "norm_mode",
            "seed": "seed",
            "eps": "eps",
            "eta": "eta",
            "alpha": "alpha_init",
            "delta": "delta",
            "c_sketch": "c_sketch",
        },
    )
    if getattr(args, "no_adaptive", False):
        overrides["adaptive"] = False
    if getattr(args, "exact_loads", False):
        overrides["use_sketch"] = False
    return replace(MWUConfig.from_env(solver=solver_config(args)), **overrides)


def config_record(config: Any) -> Dict[str, Any]:
    """A config dataclass as plain JSON values."""

    def plain(value: Any) -> Any:
        if isinstance(value, dict):
            return {k: plain(v) for k, v in value.items()}
        if hasattr(value, "value"):
            return value.value
        return value

    return plain(asdict(config))


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()
