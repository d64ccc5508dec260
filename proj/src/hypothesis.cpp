#include "fcov/hypothesis.hpp"

#include "fcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fcov {

std::string to_string(CusumKind kind) { return kind == CusumKind::cs ? "cs" : "ci"; }

CusumKind parse_cusum_kind(const std::string& name) {
  if (name == "cs" || name == "CS") return CusumKind::cs;
  if (name == "ci" || name == "CI") return CusumKind::ci;
  throw ConfigError("unknown CUSUM statistic '" + name + "' (expected cs or ci)");
}

void TestConfig::validate() const {
  if (B < 1) throw ConfigError("B must be at least 1");
  if (block_length && *block_length < 1) throw ConfigError("block length must be at least 1");
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("levels must lie in (0, 1)");
  }
  bandwidth.validate();
}

double bootstrap_p_value(double statistic, const std::vector<double>& replicates) {
  if (replicates.empty()) throw DomainError("p-value needs at least one replicate");
  const auto exceed = std::count_if(replicates.begin(), replicates.end(), [&](double t) { return t >= statistic; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(replicates.size()) + 1.0);
}

double bootstrap_critical_value(double alpha, std::vector<double> replicates) {
  if (replicates.empty()) throw DomainError("critical value needs at least one replicate");
  const std::size_t b = replicates.size();
  // A tiny slack keeps exact products like 0.95 * 201 from rounding up a rank.
  const auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(b + 1) - 1e-9));
  if (rank > b) return std::numeric_limits<double>::infinity();
  const std::size_t pos = std::max<std::size_t>(rank, 1) - 1;
  std::nth_element(replicates.begin(), replicates.begin() + static_cast<std::ptrdiff_t>(pos), replicates.end());
  return replicates[pos];
}

void finalize_report(TestReport& report, const std::vector<double>& levels) {
  report.p_value = bootstrap_p_value(report.statistic, report.replicates.values);
  report.critical_values.clear();
  report.rejected.clear();
  for (double level : levels) {
    const double crit = bootstrap_critical_value(level, report.replicates.values);
    report.critical_values[level] = crit;
    report.rejected[level] = report.statistic > crit;
  }
}

std::size_t resolve_block_length(const TestConfig& cfg, const Matrix& gram) {
  const auto n = static_cast<std::size_t>(gram.rows());
  const std::size_t p = cfg.block_length ? *cfg.block_length : adaptive_block_length_from_gram(gram, cfg.bandwidth);
  if (p > n) throw ConfigError("block length " + std::to_string(p) + " exceeds n = " + std::to_string(n));
  return p;
}

namespace {

void require_min_length(std::size_t n) {
  if (n < 4) throw DomainError("tests need at least 4 observations");
}

}  // namespace

TestReport cross_covariance_test(const FunctionalSeries& x, const FunctionalSeries& y, const TestConfig& cfg) {
  cfg.validate();
  if (x.size() != y.size()) {
    throw DomainError("cross test needs series of equal length (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  require_min_length(x.size());
  const Matrix gx = centered_gram(x);
  const Matrix gy = centered_gram(y);
  // Direct-sum inner product: <(x,y),(x',y')> = <x,x'> + <y,y'>.
  const std::size_t p = resolve_block_length(cfg, gx + gy);
  const auto plan = BlockPlan::make(x.size(), p, cfg.method, cfg.seed);

  TestReport report;
  report.statistic = static_cast<double>(x.size()) * s_statistic(x, y);
  report.replicates = cross_replicates_from_gram(gx, gy, plan, cfg.B, cfg.centering, cfg.threads);
  report.block_length_used = p;
  report.seed = cfg.seed;
  finalize_report(report, cfg.levels);
  return report;
}

TestReport one_sample_test(const FunctionalSeries& x, const HSOperator& v0, const TestConfig& cfg) {
  cfg.validate();
  require_same_grid(x.grid(), v0.row_grid(), "one_sample_test");
  require_same_grid(x.grid(), v0.col_grid(), "one_sample_test");
  require_min_length(x.size());
  const Matrix g = centered_gram(x);
  const std::size_t p = resolve_block_length(cfg, g);
  const auto plan = BlockPlan::make(x.size(), p, cfg.method, cfg.seed);

  TestReport report;
  report.statistic = static_cast<double>(x.size()) * hs_norm_squared(empirical_covariance(x).op - v0);
  report.replicates = cross_replicates_from_gram(g, g, plan, cfg.B, Centering::sample, cfg.threads);
  report.block_length_used = p;
  report.seed = cfg.seed;
  finalize_report(report, cfg.levels);
  return report;
}

std::pair<ChangepointReport, ChangepointReport> changepoint_tests(const FunctionalSeries& x, const TestConfig& cfg) {
  cfg.validate();
  require_min_length(x.size());
  const Matrix g = centered_gram(x);
  const std::size_t p = resolve_block_length(cfg, g);
  const auto plan = BlockPlan::make(x.size(), p, cfg.method, cfg.seed);

  ChangepointReport base;
  base.bridge_norms = cusum_bridge_norms(x);
  base.changepoint_estimate = estimate_changepoint(base.bridge_norms);
  base.block_length_used = p;
  base.seed = cfg.seed;
  auto reps = cusum_replicates_from_gram(g, plan, cfg.B, cfg.threads);

  std::pair<ChangepointReport, ChangepointReport> out{base, std::move(base)};
  auto& [cs, ci] = out;
  cs.kind = CusumKind::cs;
  cs.statistic = cs_statistic(cs.bridge_norms);
  cs.replicates = std::move(reps.cs);
  finalize_report(cs, cfg.levels);
  ci.kind = CusumKind::ci;
  ci.statistic = ci_statistic(ci.bridge_norms);
  ci.replicates = std::move(reps.ci);
  finalize_report(ci, cfg.levels);
  return out;
}

ChangepointReport changepoint_test(const FunctionalSeries& x, CusumKind kind, const TestConfig& cfg) {
  auto both = changepoint_tests(x, cfg);
  return kind == CusumKind::cs ? std::move(both.first) : std::move(both.second);
}

}  // namespace fcov
