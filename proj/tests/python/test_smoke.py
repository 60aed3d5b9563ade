"""Smoke tests for the python bindings (the module is built by CMake; ctest
points PYTHONPATH at the build directory)."""

import math

import numpy as np
import pytest

srlr = pytest.importorskip("_srlr")


def test_thresholding_values():
    assert srlr.theta("soft", 3.0, 1.0) == pytest.approx(2.0)
    assert srlr.theta("hard", 0.5, 1.0) == 0.0
    assert srlr.theta("scad:a=3.7", 3.0, 1.0) == pytest.approx((2.7 * 3 - 3.7) / 1.7)
    assert srlr.psi("hard", 5.0, 1.0) == 0.0
    assert srlr.robust_loss("soft", 2.0, 1.0) == pytest.approx(1.5)
    report = srlr.check_condition2("garrote", 2000)
    assert report["pass"]


def test_weighted_lasso_orthogonal():
    X = math.sqrt(2.0) * np.eye(2)
    y = np.array([2.0 * math.sqrt(2.0), 0.0])
    sol = srlr.solve_weighted_lasso(X, y, 1.0, np.ones(2))
    assert sol.converged
    assert sol.coef[0] == pytest.approx(1.0)
    assert sol.coef[1] == 0.0
    assert srlr.kkt_residual(X, y, sol.coef, 1.0, np.ones(2)) <= 1e-10


def test_pipeline_flags_an_obvious_outlier():
    sc = srlr.Scenario()
    sc.n, sc.p, sc.s_star, sc.g_star = 60, 8, 2, 1
    sc.outlier_magnitude = 12.0
    sc.seed = 7
    data, truth = srlr.generate(sc)
    result = srlr.full_pipeline(data, "hard", grid_size=8)
    assert truth.G_star[0] in list(result.fit.support_gamma)
    metrics = srlr.evaluate(result.fit.beta, truth)
    assert metrics.tp == 2
    assert metrics.sq_l2_error < 0.5
    trace = list(result.fit.objective_trace)
    assert all(b <= a * (1 + 1e-12) + 1e-15 for a, b in zip(trace, trace[1:]))


def test_dataset_normalization_and_csv(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(20, 3))
    y = rng.normal(size=20)
    data = srlr.Dataset.from_raw(X, y)
    norms = np.linalg.norm(np.asarray(data.X), axis=0)
    assert np.allclose(norms, math.sqrt(20.0))

    path = tmp_path / "d.csv"
    rows = ["y,a,b,c"]
    rows += [f"{y[i]},{X[i,0]},{X[i,1]},{X[i,2]}" for i in range(20)]
    path.write_text("\n".join(rows) + "\n")
    loaded = srlr.load_csv(str(path), "y")
    assert loaded.n == 20 and loaded.p == 3


def test_monte_carlo_is_deterministic():
    sc = srlr.Scenario()
    sc.n, sc.p, sc.s_star, sc.g_star = 40, 8, 2, 2
    sc.seed = 11
    a = srlr.run_monte_carlo(sc, 2, ["hard"], ["pre"], jobs=1, grid_size=5)
    b = srlr.run_monte_carlo(sc, 2, ["hard"], ["pre"], jobs=2, grid_size=5)
    assert srlr.summary_to_csv(a) == srlr.summary_to_csv(b)
    assert a.failures == 0


def test_diagnostics_guards():
    X = math.sqrt(4.0) * np.eye(4, 3)
    assert srlr.restricted_min_eigenvalue(X, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        srlr.restricted_min_eigenvalue(np.ones((4, 20)), 2)
