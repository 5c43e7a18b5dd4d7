import json

import numpy as np
import pytest

from src.models.config import NormMode, SolverConfig, SolverMode
from src.models.graph import EdgeWeights
from src.models.scheme import RoutingScheme
from src.services.routing_service import build_representation
from src.utils.errors import GraphMismatchError, InvalidDemandError, SchemeFormatError
from src.utils.scheme_io import (
    SCHEME_HEADER,
    format_real,
    load_pairs,
    load_scheme,
    load_table,
    manifest_path,
    parse_pairs,
    save_scheme,
    save_table,
    write_manifest,
)

EXACT = SolverConfig(mode=SolverMode.EXACT)


@pytest.fixture
def scheme(triangle, rng):
    lambdas = rng.dirichlet(np.ones(3))
    weights = tuple(EdgeWeights(rng.uniform(0.1, 10.0, 3)) for _ in range(3))
    return RoutingScheme(triangle, tuple(lambdas), weights, NormMode.L1, alpha_used=np.log(3) ** 2)


def test_format_real_round_trips(rng):
    for value in rng.normal(size=100) * 10.0 ** rng.integers(-20, 20, 100):
        assert float(format_real(value)) == value


def test_scheme_round_trip_is_bit_identical(tmp_path, scheme, triangle):
    path = tmp_path / "g.scheme"
    save_scheme(scheme, path)
    loaded = load_scheme(path, triangle)
    assert loaded.lambdas == scheme.lambdas
    assert loaded.norm_mode is NormMode.L1
    assert loaded.alpha_used == scheme.alpha_used
    for a, b in zip(loaded.weights, scheme.weights):
        np.testing.assert_array_equal(a.values, b.values)
    assert path.read_text().splitlines()[0] == SCHEME_HEADER


def test_scheme_file_is_deterministic(tmp_path, scheme):
    save_scheme(scheme, tmp_path / "a")
    save_scheme(scheme, tmp_path / "b")
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_truncated_scheme_rejected(tmp_path, scheme, triangle):
    path = tmp_path / "g.scheme"
    save_scheme(scheme, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(SchemeFormatError):
        load_scheme(path, triangle)


def test_edited_scheme_fails_checksum(tmp_path, scheme, triangle):
    path = tmp_path / "g.scheme"
    save_scheme(scheme, path)
    path.write_text(path.read_text().replace("norm_mode l1", "norm_mode linf"))
    with pytest.raises(SchemeFormatError, match="checksum"):
        load_scheme(path, triangle)


def test_wrong_header_rejected(tmp_path, triangle):
    path = tmp_path / "bad.scheme"
    path.write_text("something else\n")
    with pytest.raises(SchemeFormatError):
        load_scheme(path, triangle)


def test_scheme_for_other_graph_refused(tmp_path, scheme, k2):
    path = tmp_path / "g.scheme"
    save_scheme(scheme, path)
    with pytest.raises(GraphMismatchError):
        load_scheme(path, k2)


def test_table_round_trip(tmp_path, triangle):
    single = RoutingScheme(triangle, (1.0,), (EdgeWeights.uniform(3),), NormMode.LINF, 1.0)
    table = build_representation(single, 2, EXACT)
    path = tmp_path / "g.table"
    save_table(table, triangle, path)
    loaded = load_table(path, triangle)
    assert loaded.target == 2
    assert loaded.graph_hash == triangle.hash
    np.testing.assert_array_equal(loaded.flows, table.flows)


def test_table_for_other_graph_refused(tmp_path, triangle, k2):
    single = RoutingScheme(triangle, (1.0,), (EdgeWeights.uniform(3),), NormMode.LINF, 1.0)
    path = tmp_path / "g.table"
    save_table(build_representation(single, 0, EXACT), triangle, path)
    with pytest.raises(GraphMismatchError):
        load_table(path, k2)


def test_parse_pairs():
    pairs = parse_pairs("# demands\n0 1 1.0\n\n2 0 -0.5\n")
    assert pairs.entries == ((0, 1, 1.0), (2, 0, -0.5))
    assert parse_pairs("").entries == ()


@pytest.mark.parametrize("text", ["0 1\n", "0 x 1.0\n", "0 1 one\n"])
def test_parse_pairs_rejects_malformed_lines(text):
    with pytest.raises(InvalidDemandError):
        parse_pairs(text)


def test_load_pairs_from_file(tmp_path):
    path = tmp_path / "pairs"
    path.write_text("0 1 2.5\n")
    assert load_pairs(path).entries == ((0, 1, 2.5),)


def test_manifest_sidecar(tmp_path):
    out = tmp_path / "g.scheme"
    written = write_manifest(out, {"command": "build", "T": 3})
    assert written == manifest_path(out) == tmp_path / "g.scheme.manifest.json"
    assert json.loads(written.read_text()) == {"command": "build", "T": 3}
