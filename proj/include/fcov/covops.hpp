#pragma once

#include "fcov/fspace.hpp"

#include <cstddef>
#include <vector>

namespace fcov {

/// Empirical covariance operator together with the mean it was centered at.
struct CovarianceEstimate {
  HSOperator op;
  std::size_t n;
  FunctionalObservation mean;
};

/**
 * @brief CUSUM bridge path of covariance operators.
 *
 * terms[j] is the bridge value at t = j/n for j = 0..n-1. The j = n value is
 * identically zero and is not stored, which makes the left-endpoint Riemann
 * sum over terms the exact integral of the step path.
 */
struct OperatorPath {
  std::size_t n = 0;
  std::vector<HSOperator> terms;

  /// hs_norm of each term, in order.
  std::vector<double> norms() const;
};

CovarianceEstimate empirical_covariance(const FunctionalSeries& series);

/// Lag-k autocovariance, normalized by n-k and centered at the full-sample mean.
HSOperator empirical_autocovariance(const FunctionalSeries& series, std::size_t lag);

/// Cross-covariance of two series of equal length; the grids may differ.
HSOperator empirical_cross_covariance(const FunctionalSeries& x, const FunctionalSeries& y);

/// Squared HS norm of the empirical cross-covariance.
double s_statistic(const FunctionalSeries& x, const FunctionalSeries& y);

/**
 * Bridge path D_j = (j / sqrt(n)) (V_j - V_n), V_j the covariance of the first
 * j observations about their own mean. Built from running first and second
 * moment sums in O(n m^2).
 */
OperatorPath cusum_path(const FunctionalSeries& series);

/// hs_norm of each cusum_path term, computed without materializing the path.
std::vector<double> cusum_bridge_norms(const FunctionalSeries& series);

/// Supremum of the bridge HS norms.
double cs_statistic(const OperatorPath& path);
/// Integral of the squared bridge HS norm over [0,1].
double ci_statistic(const OperatorPath& path);
/// Smallest index attaining the maximal bridge norm.
std::size_t estimate_changepoint(const OperatorPath& path);

double cs_statistic(const std::vector<double>& bridge_norms);
double ci_statistic(const std::vector<double>& bridge_norms);
std::size_t estimate_changepoint(const std::vector<double>& bridge_norms);

}  // namespace fcov
