"""
Text serialization of routing schemes, representation tables, demand pairs
and run manifests.

Scheme and table files are versioned, carry the graph hash and end with a
``checksum <sha256>`` line over every preceding byte. Reals are written with
17 significant digits so that float64 values round-trip exactly.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
from aws_lambda_powertools import Logger

from src.models.config import NormMode
from src.models.graph import EdgeWeights, Graph
from src.models.scheme import DemandPairList, RepresentationTable, RoutingScheme, check_table
from src.utils.errors import (
    GraphMismatchError,
    InvalidDemandError,
    OblivRouteError,
    SchemeFormatError,
)
from src.utils.log import SERVICE_NAME

logger = Logger(service=SERVICE_NAME, child=True)

PathLike = Union[str, Path]

SCHEME_HEADER = "oblivroute-scheme v1"
TABLE_HEADER = "oblivroute-table v1"


def format_real(value: float) -> str:
    """17 significant digits; enough for an exact float64 round-trip."""
    return format(float(value), ".17g")


def _with_checksum(lines: Sequence[str]) -> str:
    body = "".join(line + "\n" for line in lines)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return f"{body}checksum {digest}\n"


def _verified_lines(path: PathLike, header: str) -> List[str]:
    """Read a checksummed file and return its lines without the checksum."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise SchemeFormatError(f"{path}: not UTF-8 text") from e
    body, sep, tail = text.rstrip("\n").rpartition("\n")
    if not sep or not tail.startswith("checksum "):
        raise SchemeFormatError(f"{path}: missing checksum line (truncated file?)")
    body += "\n"
    expected = tail[len("checksum "):].strip()
    if hashlib.sha256(body.encode("utf-8")).hexdigest() != expected:
        raise SchemeFormatError(f"{path}: checksum mismatch")
    lines = body.splitlines()
    if not lines or lines[0] != header:
        found = lines[0] if lines else ""
        raise SchemeFormatError(f"{path}: expected header {header!r}, found {found!r}")
    return lines


def _field(lines: List[str], index: int, name: str) -> str:
    try:
        key, value = lines[index].split(" ", 1)
    except (IndexError, ValueError):
        raise SchemeFormatError(f"missing field {name!r}") from None
    if key != name:
        raise SchemeFormatError(f"expected field {name!r}, found {key!r}")
    return value.strip()


def _int_field(lines: List[str], index: int, name: str) -> int:
    value = _field(lines, index, name)
    try:
        return int(value)
    except ValueError:
        raise SchemeFormatError(f"field {name!r} is not an integer: {value!r}") from None


def _reals(line: str, count: int, where: str) -> np.ndarray:
    fields = line.split()
    if len(fields) != count:
        raise SchemeFormatError(f"{where}: expected {count} values, found {len(fields)}")
    try:
        return np.array([float(x) for x in fields])
    except ValueError:
        raise SchemeFormatError(f"{where}: non-numeric value") from None


def _check_graph(stored_hash: str, n: int, m: int, graph: Graph) -> None:
    if stored_hash != graph.hash:
        raise GraphMismatchError(stored_hash, graph.hash)
    if (n, m) != (graph.n, graph.m):
        raise SchemeFormatError(f"stored size n={n}, m={m} disagrees with the graph")


def save_scheme(scheme: RoutingScheme, path: PathLike) -> None:
    """
    Write a scheme file.

    Args:
        scheme: Scheme to store; the trace is not persisted
        path: Destination
    """
    graph = scheme.graph
    lines = [
        SCHEME_HEADER,
        f"graph {graph.hash}",
        f"n {graph.n}",
        f"m {graph.m}",
        f"norm_mode {scheme.norm_mode.value}",
        f"alpha_used {format_real(scheme.alpha_used)}",
        f"components {scheme.size}",
    ]
    for lam, weights in scheme.components():
        lines.append(" ".join([format_real(lam)] + [format_real(w) for w in weights.values]))
    Path(path).write_text(_with_checksum(lines), encoding="utf-8")
    logger.info("Scheme written", extra={"path": str(path), "components": scheme.size})


def load_scheme(path: PathLike, graph: Graph) -> RoutingScheme:
    """
    Read a scheme file written for graph.

    Args:
        path: Scheme file
        graph: Graph the scheme must belong to

    Returns:
        RoutingScheme with an empty trace

    Raises:
        SchemeFormatError: On a bad header, truncation or checksum failure
        GraphMismatchError: If the file was written for another graph
    """
    lines = _verified_lines(path, SCHEME_HEADER)
    stored_hash = _field(lines, 1, "graph")
    n = _int_field(lines, 2, "n")
    m = _int_field(lines, 3, "m")
    _check_graph(stored_hash, n, m, graph)
    try:
        norm_mode = NormMode(_field(lines, 4, "norm_mode"))
    except ValueError:
        raise SchemeFormatError(f"{path}: unknown norm_mode") from None
    try:
        alpha_used = float(_field(lines, 5, "alpha_used"))
    except ValueError:
        raise SchemeFormatError(f"{path}: alpha_used is not a number") from None
    count = _int_field(lines, 6, "components")
    rows = lines[7:]
    if len(rows) != count:
        raise SchemeFormatError(f"{path}: expected {count} components, found {len(rows)}")

    lambdas: List[float] = []
    weights: List[EdgeWeights] = []
    for offset, row in enumerate(rows):
        values = _reals(row, m + 1, f"component {offset}")
        lambdas.append(float(values[0]))
        weights.append(EdgeWeights(values[1:]))
    try:
        return RoutingScheme(
            graph=graph,
            lambdas=tuple(lambdas),
            weights=tuple(weights),
            norm_mode=norm_mode,
            alpha_used=alpha_used,
        )
    except OblivRouteError as e:
        raise SchemeFormatError(f"{path}: {e}") from e


def save_table(table: RepresentationTable, graph: Graph, path: PathLike) -> None:
    """Write a representation table file."""
    check_table(table, graph)
    lines = [
        TABLE_HEADER,
        f"graph {table.graph_hash}",
        f"n {table.n}",
        f"m {table.m}",
        f"target {table.target}",
    ]
    lines.extend(" ".join(format_real(x) for x in row) for row in table.flows)
    Path(path).write_text(_with_checksum(lines), encoding="utf-8")
    logger.info("Representation table written", extra={"path": str(path), "target": table.target})


def load_table(path: PathLike, graph: Graph) -> RepresentationTable:
    """
    Read a representation table written for graph.

    Raises:
        SchemeFormatError: On malformed or corrupted files
        GraphMismatchError: If the table belongs to another graph
    """
    lines = _verified_lines(path, TABLE_HEADER)
    stored_hash = _field(lines, 1, "graph")
    n = _int_field(lines, 2, "n")
    m = _int_field(lines, 3, "m")
    _check_graph(stored_hash, n, m, graph)
    target = _int_field(lines, 4, "target")
    if not 0 <= target < n:
        raise SchemeFormatError(f"{path}: target {target} outside 0..{n - 1}")
    rows = lines[5:]
    if len(rows) != m:
        raise SchemeFormatError(f"{path}: expected {m} rows, found {len(rows)}")
    flows = np.vstack([_reals(row, n, f"row {e}") for e, row in enumerate(rows)])
    return RepresentationTable(graph_hash=stored_hash, target=target, flows=flows)


def parse_pairs(text: str) -> DemandPairList:
    """
    Parse demand pairs, one "s t d" per line; '#' comments and blank lines skipped.

    Raises:
        InvalidDemandError: On malformed lines
    """
    entries: List[Tuple[int, int, float]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 3:
            raise InvalidDemandError(f"line {number}: expected 's t d', got {stripped!r}")
        try:
            entries.append((int(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError:
            raise InvalidDemandError(f"line {number}: malformed pair {stripped!r}") from None
    return DemandPairList(tuple(entries))


def load_pairs(path: PathLike) -> DemandPairList:
    """Read a demand-pairs file."""
    return parse_pairs(Path(path).read_text(encoding="utf-8"))


def manifest_path(out: PathLike) -> Path:
    """Sidecar location <out>.manifest.json."""
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def write_manifest(out: PathLike, manifest: Dict[str, Any]) -> Path:
    """
    Write a run manifest next to an output file.

    Args:
        out: The artifact the manifest describes
        manifest: JSON-serializable run description

    Returns:
        Path of the manifest
    """
    path = manifest_path(out)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def file_checksum(path: PathLike) -> str:
    """SHA-256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
