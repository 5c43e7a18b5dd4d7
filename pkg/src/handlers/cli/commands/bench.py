"""
Handler for the bench command.
"""
import argparse
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from aws_lambda_powertools import Logger

from src.handlers.cli.options import config_record, mwu_config, timestamp
from src.models.config import MWUConfig
from src.services.mwu_service import RoutingBuilder
from src.utils.edge_list import load_edge_list
from src.utils.errors import OblivRouteError
from src.utils.log import SERVICE_NAME
from src.utils.scheme_io import write_manifest

logger = Logger(service=SERVICE_NAME, child=True)

GRAPH_SUFFIXES = (".el", ".edges")
PER_ITERATION_EXPONENT_LIMIT = 1.3
TOTAL_EXPONENT_LIMIT = 1.8


@dataclass(frozen=True)
class BenchRow:
    """Measurements of one build."""
    graph: str
    m: int
    T: int
    iterations: int
    wall_time: float

    @property
    def per_iteration(self) -> float:
        return self.wall_time / max(1, self.iterations)


def fit_exponent(sizes: Sequence[float], values: Sequence[float]) -> Optional[float]:
    """
    Slope of log(values) against log(sizes).

    Returns:
        The fitted exponent, or None with fewer than two distinct sizes
    """
    if len(set(sizes)) < 2:
        return None
    slope, _ = np.polyfit(np.log(sizes), np.log(values), 1)
    return float(slope)


def bench_graphs(paths: Sequence[Path], config: MWUConfig) -> List[BenchRow]:
    """Build a scheme for every graph; unreadable graphs and failed builds are skipped."""
    rows = []
    for path in paths:
        try:
            graph = load_edge_list(path)
        except (OblivRouteError, OSError) as e:
            logger.warning("Bench graph skipped", extra={"path": str(path), "error": str(e)})
            continue
        builder = RoutingBuilder(graph, config)
        clock = time.perf_counter()
        try:
            scheme = builder.build()
        except OblivRouteError as e:
            logger.warning("Bench build failed", extra={"path": str(path), "error": str(e)})
            continue
        wall_time = time.perf_counter() - clock
        rows.append(
            BenchRow(
                graph=str(path),
                m=graph.m,
                T=scheme.size,
                iterations=builder.iterations_run,
                wall_time=wall_time,
            )
        )
        logger.info("Bench graph built", extra={"path": str(path), "m": graph.m, "T": scheme.size})
    return sorted(rows, key=lambda row: row.m)


def _write_bench_manifest(
    directory: Path,
    config: MWUConfig,
    rows: List[BenchRow],
    exponents: Dict[str, Optional[float]],
    started: str,
) -> None:
    write_manifest(
        directory / "bench",
        {
            "command": "bench",
            "graph_dir": str(directory),
            "config": config_record(config),
            "rows": [
                {"graph": r.graph, "m": r.m, "T": r.T, "iterations": r.iterations, "wall_time": r.wall_time}
                for r in rows
            ],
            "exponents": exponents,
            "started": started,
            "finished": timestamp(),
        },
    )


def bench_command(args: argparse.Namespace) -> int:
    """
    Build schemes across a size ladder and check the running-time trend.

    Prints (m, T, wall time, per-iteration time) rows and the fitted
    exponents; --strict turns a failed trend check into exit 1. A missing
    directory has nowhere to hold a manifest and only logs a warning.
    """
    started = timestamp()
    directory = Path(args.graph_dir)
    if not directory.is_dir():
        logger.warning("Bench directory missing", extra={"path": str(directory)})
        return 0
    config = mwu_config(args)
    paths = sorted(p for p in directory.iterdir() if p.suffix in GRAPH_SUFFIXES)
    if not paths:
        logger.warning("Bench directory holds no graphs", extra={"path": str(directory)})
        _write_bench_manifest(
            directory, config, [], {"per_iteration": None, "total": None, "support": None}, started
        )
        return 0

    rows = bench_graphs(paths, config)
    print("m\tT\twall_s\tper_iteration_s")
    for row in rows:
        print(f"{row.m}\t{row.T}\t{row.wall_time:.6f}\t{row.per_iteration:.6f}")

    sizes = [row.m for row in rows]
    per_iteration = fit_exponent(sizes, [row.per_iteration for row in rows])
    total = fit_exponent(sizes, [row.wall_time for row in rows])
    support = fit_exponent(sizes, [row.T for row in rows])
    trend_ok = True
    if per_iteration is not None and total is not None:
        print(
            f"exponent per_iteration={per_iteration:.3f} total={total:.3f} "
            f"support={support:.3f}"
        )
        trend_ok = per_iteration <= PER_ITERATION_EXPONENT_LIMIT and total <= TOTAL_EXPONENT_LIMIT
        if not trend_ok:
            logger.warning(
                "Scaling trend above limits",
                extra={"per_iteration": per_iteration, "total": total},
            )

    _write_bench_manifest(
        directory,
        config,
        rows,
        {"per_iteration": per_iteration, "total": total, "support": support},
        started,
    )
    if args.strict and not trend_ok:
        return 1
    return 0
