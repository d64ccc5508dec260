import math

import numpy as np
import pytest

import fcov


def test_grid_and_inner_products():
    nodes = fcov.grid_nodes(4)
    assert np.allclose(nodes, [0.125, 0.375, 0.625, 0.875])
    assert fcov.inner_h(np.array([2.0, 4.0]), np.array([1.0, 3.0])) == pytest.approx(7.0)
    assert fcov.norm_h(np.array([3.0, 4.0])) == pytest.approx(math.sqrt(12.5))
    x, y = np.array([1.0, 2.0]), np.array([3.0, 5.0])
    k = fcov.tensor(x, y)
    assert np.array_equal(k, np.outer(x, y))
    assert fcov.hs_norm(k) == pytest.approx(fcov.norm_h(x) * fcov.norm_h(y))


def test_covariances_match_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(50, 6))
    y = rng.normal(size=(50, 4))
    cov = np.cov(x, rowvar=False, bias=True)
    assert np.allclose(fcov.empirical_covariance(x), cov)
    xc, yc = x - x.mean(0), y - y.mean(0)
    cross = xc.T @ yc / 50
    assert np.allclose(fcov.empirical_cross_covariance(x, y), cross)
    assert fcov.s_statistic(x, y) == pytest.approx((cross**2).sum() / 24)
    lag1 = xc[:-1].T @ xc[1:] / 49
    assert np.allclose(fcov.empirical_autocovariance(x, 1), lag1)


def test_cusum_fixture():
    x = np.array([[0.0], [0.0], [2.0], [2.0]])
    norms = fcov.cusum_bridge_norms(x)
    assert np.allclose(norms, [0.0, 0.5, 1.0, 1.0 / 6.0])
    assert fcov.cs_statistic(x) == pytest.approx(1.0)
    assert fcov.estimate_changepoint(x) == 2


def test_resampling_and_block_length():
    idx = fcov.resample_indices(10, 3, seed=4, replicate=2)
    assert len(idx) == 9
    for start in range(0, 9, 3):
        assert idx[start] % 3 == 0
        assert idx[start + 1] == idx[start] + 1 and idx[start + 2] == idx[start] + 2
    assert fcov.resample_indices(10, 3, seed=4, replicate=2) == idx
    x = fcov.generate_series(100, m=20, seed=3)
    p = fcov.adaptive_block_length(x)
    assert 1 <= p <= 50
    assert fcov.adaptive_block_length(2 * x) == p


def test_reports():
    x, y = fcov.correlated_pair(0.5, 100, m=30, seed=9)
    rep = fcov.cross_covariance_test(x, y, B=199, block_length=3, seed=1)
    assert rep["rejected"]["0.05"]
    assert 0 < rep["p_value"] <= 1
    cp = fcov.changepoint_series(0.8, 0.0, n=100, m=30, seed=2)
    rep = fcov.changepoint_test(cp, "cs", B=99, block_length=3, seed=5)
    assert rep["statistic_kind"] == "cs"
    assert len(rep["bridge_norms"]) == 100
    zero = np.zeros((30, 30))
    const = np.ones((20, 30))
    rep = fcov.one_sample_test(const, zero, B=19, block_length=2, seed=1)
    assert rep["statistic"] == 0.0 and rep["p_value"] == 1.0


def test_errors():
    with pytest.raises(ValueError):
        fcov.empirical_cross_covariance(np.zeros((5, 2)), np.zeros((6, 2)))
    with pytest.raises(ValueError):
        fcov.correlated_pair(1.5, 10)
    with pytest.raises(ValueError):
        fcov.changepoint_test(np.ones((10, 2)), "xx")


def test_experiment():
    cfg = {"experiment": "cross", "n": 20, "m": 5, "mc_runs": 4, "B": 9, "alphas": [0.0], "block_lengths": [2],
           "master_seed": 1}
    tables = fcov.run_experiment(cfg)
    assert len(tables) == 1
    assert len(tables[0]["rows"]) == 3
    assert tables == fcov.run_experiment(cfg)
