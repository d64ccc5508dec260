#pragma once

#include "fcov/bootstrap.hpp"
#include "fcov/covops.hpp"
#include "fcov/fspace.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fcov {

/// Fixed block length, or std::nullopt for the data-adaptive rule.
using BlockLength = std::optional<std::size_t>;

struct TestConfig {
  std::size_t B = 1000;
  BlockLength block_length;
  std::vector<double> levels{0.01, 0.05, 0.10};
  std::uint64_t seed = 0;
  BlockMethod method = BlockMethod::nonoverlapping;
  Centering centering = Centering::sample;
  BandwidthConfig bandwidth;
  unsigned threads = 1;

  void validate() const;
};

struct TestReport {
  double statistic = 0.0;
  ReplicateSet replicates;
  double p_value = 1.0;
  std::map<double, double> critical_values;
  std::map<double, bool> rejected;
  std::size_t block_length_used = 0;
  std::uint64_t seed = 0;
};

enum class CusumKind { cs, ci };

std::string to_string(CusumKind kind);
CusumKind parse_cusum_kind(const std::string& name);

struct ChangepointReport : TestReport {
  CusumKind kind = CusumKind::cs;
  std::size_t changepoint_estimate = 0;
  std::vector<double> bridge_norms;
};

/// (1 + #{replicates >= statistic}) / (B + 1).
double bootstrap_p_value(double statistic, const std::vector<double>& replicates);

/**
 * Critical value at nominal level alpha: the ceil((1 - alpha)(B + 1))-th
 * smallest replicate. When that rank exceeds B no finite critical value
 * exists at this B and the result is +infinity (never rejects), matching the
 * p-value's smallest attainable value 1/(B+1).
 */
double bootstrap_critical_value(double alpha, std::vector<double> replicates);

/// Fills p-value, critical values and decisions from statistic and replicates.
void finalize_report(TestReport& report, const std::vector<double>& levels);

/**
 * Test of V_XY = 0. Observed T = n S_n; replicates resample the pairs
 * (X_i, Y_i) jointly and evaluate pk ||V*_XY - V_XY||_HS^2.
 */
TestReport cross_covariance_test(const FunctionalSeries& x, const FunctionalSeries& y, const TestConfig& cfg);

/// Test of V_X = v0 with T = n ||V_n - v0||_HS^2.
TestReport one_sample_test(const FunctionalSeries& x, const HSOperator& v0, const TestConfig& cfg);

/// CUSUM test for a change in the covariance operator.
ChangepointReport changepoint_test(const FunctionalSeries& x, CusumKind kind, const TestConfig& cfg);

/// CS and CI reports evaluated on the same bootstrap draws.
std::pair<ChangepointReport, ChangepointReport> changepoint_tests(const FunctionalSeries& x, const TestConfig& cfg);

/// Block length a config resolves to for a given centered Gram matrix.
std::size_t resolve_block_length(const TestConfig& cfg, const Matrix& gram);

}  // namespace fcov
