"""Bootstrap inference for covariance operators of functional time series.

Series are numpy arrays of shape (n, m): one observation per row, sampled on
the midpoint grid s_j = (j + 1/2) / m. Operators are (m1, m2) kernel arrays.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DimensionError,
    DomainError,
    adaptive_block_length,
    changepoint_series,
    ci_statistic,
    correlated_pair,
    cs_statistic,
    cusum_bridge_norms,
    empirical_autocovariance,
    empirical_covariance,
    empirical_cross_covariance,
    estimate_changepoint,
    generate_series,
    grid_nodes,
    hs_inner,
    hs_norm,
    inner_h,
    norm_h,
    resample_indices,
    s_statistic,
    tensor,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "DomainError",
    "adaptive_block_length",
    "changepoint_series",
    "changepoint_test",
    "ci_statistic",
    "correlated_pair",
    "cross_covariance_test",
    "cs_statistic",
    "cusum_bridge_norms",
    "empirical_autocovariance",
    "empirical_covariance",
    "empirical_cross_covariance",
    "estimate_changepoint",
    "generate_series",
    "grid_nodes",
    "hs_inner",
    "hs_norm",
    "inner_h",
    "norm_h",
    "one_sample_test",
    "resample_indices",
    "run_experiment",
    "s_statistic",
    "tensor",
]


def cross_covariance_test(x, y, **kwargs):
    """Test of zero cross-covariance; returns the report as a dict."""
    return _json.loads(_core.cross_covariance_test(x, y, **kwargs))


def one_sample_test(x, v0, **kwargs):
    """Test of V_X = v0; returns the report as a dict."""
    return _json.loads(_core.one_sample_test(x, v0, **kwargs))


def changepoint_test(x, statistic="cs", **kwargs):
    """CUSUM test for a covariance change; returns the report as a dict."""
    return _json.loads(_core.changepoint_test(x, statistic, **kwargs))


def run_experiment(config):
    """Runs a Monte Carlo experiment from a config dict; returns a list of tables."""
    return _core.run_experiment(_json.dumps(config))
