import numpy as np
import pytest

from src.models.config import SolverConfig, SolverMode
from src.models.graph import EdgeWeights
from src.services.laplacian_solver import (
    RESIDUAL_FLOOR,
    effective_resistance,
    laplacian_residual_tolerance,
    pseudoinverse_dense,
    solve,
    solve_many,
)
from src.utils.errors import DimensionMismatchError, OracleCapExceededError, SolverConvergenceError
from tests.conftest import cycle, random_demand, random_graphs


def test_pseudoinverse_k2(k2):
    pinv = pseudoinverse_dense(k2, EdgeWeights.uniform(1))
    np.testing.assert_allclose(pinv, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-12)


def test_pseudoinverse_triangle_diagonal(triangle):
    pinv = pseudoinverse_dense(triangle, EdgeWeights.uniform(3))
    np.testing.assert_allclose(np.diag(pinv), [2 / 9] * 3, atol=1e-12)


def test_pseudoinverse_kernel_and_inverse(rng):
    for graph in random_graphs(4, seed=2):
        w = EdgeWeights(rng.uniform(0.5, 2.0, graph.m))
        pinv = pseudoinverse_dense(graph, w)
        np.testing.assert_allclose(pinv @ np.ones(graph.n), 0.0, atol=1e-10)
        y = random_demand(rng, graph.n)
        L = graph.laplacian(w)
        np.testing.assert_allclose(L @ (pinv @ y), y, atol=1e-8 * np.abs(y).max())


def test_oracle_cap(triangle):
    with pytest.raises(OracleCapExceededError):
        pseudoinverse_dense(triangle, EdgeWeights.uniform(3), oracle_cap=2)


@pytest.mark.parametrize("mode", [SolverMode.EXACT, SolverMode.CG])
def test_solve_k2(k2, mode):
    x = solve(k2, EdgeWeights.uniform(1), [-1.0, 1.0], SolverConfig(mode=mode))
    np.testing.assert_allclose(x, [-0.5, 0.5], atol=1e-9)


@pytest.mark.parametrize("mode", [SolverMode.EXACT, SolverMode.CG])
def test_solve_triangle_potential_drop(triangle, mode):
    w = EdgeWeights.uniform(3)
    for e in range(3):
        b = triangle.incidence.getrow(e).toarray().ravel()
        x = solve(triangle, w, b, SolverConfig(mode=mode))
        assert triangle.incidence_apply(x)[e] == pytest.approx(2 / 3, abs=1e-9)


def test_solve_zero_rhs(triangle, cg_solver):
    np.testing.assert_array_equal(solve(triangle, EdgeWeights.uniform(3), np.zeros(3), cg_solver), 0.0)


def test_cg_matches_oracle(rng, cg_solver, exact_solver):
    for graph in random_graphs(6, high=64, seed=5) + [cycle(64)]:
        w = EdgeWeights(rng.uniform(0.5, 2.0, graph.m))
        Y = np.column_stack([random_demand(rng, graph.n) for _ in range(4)])
        approx = solve_many(graph, w, Y, cg_solver)
        exact = solve_many(graph, w, Y, exact_solver)
        scale = np.abs(exact).max(axis=0)
        assert np.all(np.abs(approx - exact).max(axis=0) <= 1e-6 * scale)
        np.testing.assert_allclose(approx.sum(axis=0), 0.0, atol=1e-9 * scale.max())


def test_cg_infinity_norm_chain(rng, cg_solver):
    eps_l = cg_solver.eps_l
    for graph in random_graphs(4, high=24, seed=6):
        w = EdgeWeights(rng.uniform(0.5, 2.0, graph.m))
        y = random_demand(rng, graph.n)
        x = solve(graph, w, y, cg_solver)
        truth = pseudoinverse_dense(graph, w) @ y
        error = x - truth
        L = graph.laplacian(w)
        assert np.abs(error).max() <= eps_l * 2 * graph.n ** 3 * np.abs(truth).max()
        l_norm_error = np.sqrt(error @ (L @ error))
        l_norm_truth = np.sqrt(truth @ (L @ truth))
        assert l_norm_error <= 1e-6 * l_norm_truth


def test_solve_is_linear(rng, cg_solver):
    graph = random_graphs(1, seed=8)[0]
    w = EdgeWeights.uniform(graph.m)
    y1, y2 = random_demand(rng, graph.n), random_demand(rng, graph.n)
    combined = solve(graph, w, y1 + y2, cg_solver)
    separate = solve(graph, w, y1, cg_solver) + solve(graph, w, y2, cg_solver)
    np.testing.assert_allclose(combined, separate, atol=1e-8)


def test_threads_give_same_answer(rng):
    graph = cycle(20)
    w = EdgeWeights(rng.uniform(0.5, 2.0, graph.m))
    Y = np.column_stack([random_demand(rng, graph.n) for _ in range(9)])
    single = solve_many(graph, w, Y, SolverConfig(threads=1))
    threaded = solve_many(graph, w, Y, SolverConfig(threads=3))
    np.testing.assert_allclose(threaded, single, atol=1e-12)


def test_mean_projected_with_warning(triangle, mocker):
    from src.services import laplacian_solver

    warning = mocker.patch.object(laplacian_solver.logger, "warning")
    x = solve(triangle, EdgeWeights.uniform(3), [1.0, 1.0, 1.0], SolverConfig())
    np.testing.assert_allclose(x, 0.0, atol=1e-12)
    warning.assert_called_once()


def test_non_convergence_reports_residual(rng):
    graph = cycle(64)
    y = random_demand(rng, graph.n)
    with pytest.raises(SolverConvergenceError) as info:
        solve(graph, EdgeWeights.uniform(graph.m), y, SolverConfig(max_iterations=1))
    assert info.value.residual > info.value.tolerance


def test_rhs_shape_checked(triangle):
    with pytest.raises(DimensionMismatchError):
        solve_many(triangle, EdgeWeights.uniform(3), np.zeros((2, 1)))


def test_residual_tolerance_floor(triangle):
    w = EdgeWeights.uniform(3)
    assert laplacian_residual_tolerance(triangle, w, 1e-10) == RESIDUAL_FLOOR
    coarse = laplacian_residual_tolerance(triangle, w, 1e-2)
    assert coarse == pytest.approx(1e-2 / np.sqrt(2 * 2 * 9 / 4))


def test_effective_resistance(triangle, k2):
    np.testing.assert_allclose(effective_resistance(triangle, EdgeWeights.uniform(3)), [2 / 3] * 3)
    np.testing.assert_allclose(effective_resistance(k2, EdgeWeights([4.0])), [0.25])
