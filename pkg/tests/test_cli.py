import json

import pytest

from src.handlers.cli import handler
from src.handlers.cli.commands import bench
from src.handlers.cli.commands.bench import fit_exponent
from src.handlers.cli.handler import main
from src.utils.errors import RestartBudgetExhaustedError, SolverConvergenceError


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.el"
    path.write_text("0 1\n")
    return path


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.el"
    path.write_text("0 1\n1 2\n0 2\n")
    return path


def build(graph_file, *flags):
    out = graph_file.with_suffix(".scheme")
    assert main(["build", str(graph_file), "-o", str(out), *flags]) == 0
    return out


def test_build_writes_scheme_and_manifest(k2_file, capsys):
    out = build(k2_file, "--seed", "7")
    assert out.exists()
    manifest = json.loads((out.parent / "k2.scheme.manifest.json").read_text())
    assert manifest["command"] == "build"
    assert manifest["T"] == 1
    assert manifest["config"]["seed"] == 7
    assert manifest["config"]["solver"]["mode"] == "cg"
    assert "T=1" in capsys.readouterr().out


def test_build_is_deterministic(triangle_file, tmp_path):
    first = build(triangle_file, "--seed", "7", "--norm", "linf")
    content = first.read_bytes()
    second = tmp_path / "again.scheme"
    assert main(["build", str(triangle_file), "-o", str(second), "--seed", "7"]) == 0
    assert second.read_bytes() == content


def test_build_exact_loads_flag(triangle_file):
    out = build(triangle_file, "--exact-loads", "--solver", "exact")
    manifest = json.loads(out.with_name(out.name + ".manifest.json").read_text())
    assert manifest["config"]["use_sketch"] is False
    assert manifest["T"] == 41


def test_build_disconnected_graph_exit_1(tmp_path, capsys):
    path = tmp_path / "split.el"
    path.write_text("0 1\n2 3\n")
    assert main(["build", str(path)]) == 1
    assert "disconnected" in capsys.readouterr().err


def test_build_maps_solver_failure_to_exit_2(k2_file, mocker):
    mocker.patch(
        "src.handlers.cli.commands.build.RoutingBuilder.build",
        side_effect=SolverConvergenceError(1e-3, 1e-10, 20),
    )
    assert main(["build", str(k2_file)]) == 2


def test_build_maps_restart_budget_to_exit_3(k2_file, mocker):
    mocker.patch(
        "src.handlers.cli.commands.build.RoutingBuilder.build",
        side_effect=RestartBudgetExhaustedError(2.0, 1, 2),
    )
    assert main(["build", str(k2_file)]) == 3


def test_unexpected_error_exit_1(k2_file, mocker):
    mocker.patch("src.handlers.cli.commands.build.load_edge_list", side_effect=RuntimeError("boom"))
    exception = mocker.patch.object(handler.logger, "exception")
    assert main(["build", str(k2_file)]) == 1
    exception.assert_called_once()


def test_eval_k2(k2_file, capsys):
    scheme = build(k2_file)
    capsys.readouterr()
    assert main(["eval", str(k2_file), str(scheme)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[:3] == ["0", "0", "1"]
    assert float(lines[0].split()[3]) == pytest.approx(1.0)
    summary = lines[-1].split()
    assert summary[0] == "ratio"
    assert float(summary[1]) == pytest.approx(1.0)
    assert summary[-1] == "PASS"


def test_eval_jsonl(triangle_file, capsys):
    scheme = build(triangle_file)
    capsys.readouterr()
    assert main(["eval", "--jsonl", str(triangle_file), str(scheme)]) == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(records) == 3
    for edge, record in enumerate(records):
        assert set(record) == {"edge", "load", "bound", "pass"}
        assert record["edge"] == edge
        assert record["pass"] is True
        assert record["load"] <= record["bound"]


def test_eval_wrong_graph_exit_1(k2_file, triangle_file, capsys):
    scheme = build(triangle_file)
    assert main(["eval", str(k2_file), str(scheme)]) == 1
    assert "hash mismatch" in capsys.readouterr().err


def test_route_k2_pair(k2_file, tmp_path, capsys):
    scheme = build(k2_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("0 1 1.0\n")
    capsys.readouterr()
    assert main(["route", str(k2_file), str(scheme), str(pairs)]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(1.0)


def test_route_empty_pairs_gives_zero_flow(triangle_file, tmp_path, capsys):
    scheme = build(triangle_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("# nothing\n")
    capsys.readouterr()
    assert main(["route", str(triangle_file), str(scheme), str(pairs)]) == 0
    assert [float(x) for x in capsys.readouterr().out.split()] == [0.0, 0.0, 0.0]


def test_route_out_of_range_pair_exit_1(k2_file, tmp_path):
    scheme = build(k2_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("0 2 1.0\n")
    assert main(["route", str(k2_file), str(scheme), str(pairs)]) == 1


def test_route_table_cached_and_reused(triangle_file, tmp_path, capsys, mocker):
    scheme = build(triangle_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("0 1 1.0\n2 1 0.5\n")
    capsys.readouterr()
    assert main(["route", str(triangle_file), str(scheme), str(pairs)]) == 0
    direct = [float(x) for x in capsys.readouterr().out.split()]

    assert main(["route", "--table", str(triangle_file), str(scheme), str(pairs)]) == 0
    tabled = [float(x) for x in capsys.readouterr().out.split()]
    assert tabled == pytest.approx(direct, abs=1e-6)
    assert (tmp_path / "triangle.scheme.table").exists()

    rebuild = mocker.patch("src.handlers.cli.commands.route.RoutingService.build_representation")
    assert main(["route", "--table", str(triangle_file), str(scheme), str(pairs)]) == 0
    rebuild.assert_not_called()


def test_bench_empty_directory(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == 0
    assert capsys.readouterr().out == ""
    manifest = json.loads((tmp_path / "bench.manifest.json").read_text())
    assert manifest["rows"] == []
    assert manifest["exponents"]["total"] is None


def test_bench_single_graph_has_no_fit(tmp_path, capsys):
    (tmp_path / "k2.el").write_text("0 1\n")
    assert main(["bench", str(tmp_path), "--exact-loads"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 2
    assert out[1].split("\t")[:2] == ["1", "1"]
    assert not any(line.startswith("exponent") for line in out)


def test_bench_skips_unreadable_graphs(tmp_path, capsys, mocker):
    (tmp_path / "k2.el").write_text("0 1\n")
    (tmp_path / "broken.el").write_text("0 x\n")
    warning = mocker.patch.object(bench.logger, "warning")
    assert main(["bench", str(tmp_path), "--exact-loads"]) == 0
    assert warning.called
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_bench_strict_fails_on_steep_trend(tmp_path, mocker, capsys):
    (tmp_path / "a.el").write_text("0 1\n")
    (tmp_path / "b.el").write_text("0 1\n1 2\n0 2\n")
    mocker.patch.object(bench, "fit_exponent", return_value=2.5)
    assert main(["bench", str(tmp_path), "--exact-loads"]) == 0
    assert main(["bench", str(tmp_path), "--exact-loads", "--strict"]) == 1


def test_fit_exponent():
    assert fit_exponent([1, 2, 4, 8], [3, 6, 12, 24]) == pytest.approx(1.0)
    assert fit_exponent([4, 4], [1, 2]) is None


def test_generate_then_build(tmp_path, capsys):
    graph = tmp_path / "random.el"
    assert main(["generate", str(graph), "--n", "12", "--extra", "6", "--seed", "3"]) == 0
    assert main(["build", str(graph), "--exact-loads", "--solver", "exact"]) == 0
    assert (tmp_path / "random.el.scheme").exists()


def test_generate_regular_graph(tmp_path):
    graph = tmp_path / "regular.el"
    assert main(["generate", str(graph), "--n", "10", "--degree", "4"]) == 0
    assert len(graph.read_text().splitlines()) == 20


@pytest.fixture
def labelled_path_file(tmp_path):
    path = tmp_path / "labelled.el"
    path.write_text("5 7\n7 9\n")
    return path


def test_route_translates_original_vertex_ids(labelled_path_file, tmp_path, capsys):
    scheme = build(labelled_path_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("5 9 1.0\n")
    capsys.readouterr()
    assert main(["route", str(labelled_path_file), str(scheme), str(pairs)]) == 0
    assert [float(x) for x in capsys.readouterr().out.split()] == pytest.approx([1.0, 1.0])


def test_route_rejects_dense_indices_for_labelled_graph(labelled_path_file, tmp_path, capsys):
    scheme = build(labelled_path_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("0 1 1.0\n")
    assert main(["route", str(labelled_path_file), str(scheme), str(pairs)]) == 1
    assert "not in the graph" in capsys.readouterr().err


def test_route_table_target_is_original_id(labelled_path_file, tmp_path, capsys):
    scheme = build(labelled_path_file)
    pairs = tmp_path / "pairs"
    pairs.write_text("9 5 2.0\n")
    capsys.readouterr()
    assert main(["route", "--table", "--target", "9", str(labelled_path_file), str(scheme), str(pairs)]) == 0
    assert [float(x) for x in capsys.readouterr().out.split()] == pytest.approx([-2.0, -2.0], abs=1e-6)
    manifest = json.loads((tmp_path / "labelled.scheme.route.manifest.json").read_text())
    assert manifest["target"] == 9
    assert main(["route", "--table", "--target", "0", str(labelled_path_file), str(scheme)]) == 1


def test_eval_prints_original_vertex_ids(labelled_path_file, capsys):
    scheme = build(labelled_path_file)
    capsys.readouterr()
    assert main(["eval", str(labelled_path_file), str(scheme)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[:3] for line in lines[:2]] == [["0", "5", "7"], ["1", "7", "9"]]


def test_route_table_only_writes_manifest(triangle_file, tmp_path, capsys):
    scheme = build(triangle_file)
    capsys.readouterr()
    assert main(["route", "--table", str(triangle_file), str(scheme)]) == 0
    assert capsys.readouterr().out.strip() == str(tmp_path / "triangle.scheme.table")
    manifest = json.loads((tmp_path / "triangle.scheme.route.manifest.json").read_text())
    assert manifest["pairs"] is None
    assert manifest["pair_count"] == 0
    assert manifest["target"] == 0
