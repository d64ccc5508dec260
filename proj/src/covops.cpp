#include "fcov/covops.hpp"

#include "fcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcov {

namespace {

Matrix centered(const FunctionalSeries& s) { return s.data().rowwise() - s.data().colwise().mean(); }

// Gram-type products are not bitwise symmetric under blocked GEMM.
void symmetrize_from_lower(Matrix& k) { k.triangularView<Eigen::StrictlyUpper>() = k.transpose(); }

}  // namespace

std::vector<double> OperatorPath::norms() const {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& d : terms) out.push_back(hs_norm(d));
  return out;
}

CovarianceEstimate empirical_covariance(const FunctionalSeries& series) {
  const auto n = static_cast<double>(series.size());
  const Matrix xc = centered(series);
  Matrix k = (xc.transpose() * xc) / n;
  symmetrize_from_lower(k);
  return {HSOperator(series.grid(), series.grid(), std::move(k)), series.size(),
          FunctionalObservation(series.grid(), series.mean())};
}

HSOperator empirical_autocovariance(const FunctionalSeries& series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag >= n) throw DomainError("autocovariance lag " + std::to_string(lag) + " must be below n = " + std::to_string(n));
  const Matrix xc = centered(series);
  const auto pairs = static_cast<Eigen::Index>(n - lag);
  Matrix k = xc.topRows(pairs).transpose() * xc.bottomRows(pairs) / static_cast<double>(pairs);
  return {series.grid(), series.grid(), std::move(k)};
}

HSOperator empirical_cross_covariance(const FunctionalSeries& x, const FunctionalSeries& y) {
  if (x.size() != y.size()) {
    throw DomainError("cross-covariance needs equal lengths (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  Matrix k = centered(x).transpose() * centered(y) / static_cast<double>(x.size());
  return {x.grid(), y.grid(), std::move(k)};
}

double s_statistic(const FunctionalSeries& x, const FunctionalSeries& y) {
  return hs_norm_squared(empirical_cross_covariance(x, y));
}

namespace {

// Calls visit(j, D_j) for j = 1..n-1 with D_j in a reused buffer.
template <class Visit>
void walk_bridge(const FunctionalSeries& series, Visit&& visit) {
  const std::size_t n = series.size();
  if (n < 2) throw DomainError("cusum_path needs at least two observations");
  const auto m = static_cast<Eigen::Index>(series.grid().size());
  // Every V_j is translation invariant, so centering at the full mean first is free and keeps the running sums small.
  const Matrix xc = centered(series);
  Matrix v_n = xc.transpose() * xc / static_cast<double>(n);
  symmetrize_from_lower(v_n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  Vector sum1 = Vector::Zero(m);
  Matrix sum2 = Matrix::Zero(m, m);
  Matrix d(m, m);
  for (std::size_t j = 1; j < n; ++j) {
    const auto row = xc.row(static_cast<Eigen::Index>(j - 1)).transpose();
    sum1 += row;
    sum2.selfadjointView<Eigen::Lower>().rankUpdate(row);
    const double jd = static_cast<double>(j);
    // j V_j = sum2 - sum1 sum1^T / j
    d = sum2.selfadjointView<Eigen::Lower>();
    d.noalias() -= sum1 * (sum1.transpose() / jd);
    d -= jd * v_n;
    d *= inv_sqrt_n;
    symmetrize_from_lower(d);
    visit(j, d);
  }
}

}  // namespace

OperatorPath cusum_path(const FunctionalSeries& series) {
  OperatorPath path;
  path.n = series.size();
  path.terms.reserve(series.size());
  path.terms.push_back(HSOperator::zero(series.grid(), series.grid()));
  walk_bridge(series, [&](std::size_t, const Matrix& d) { path.terms.emplace_back(series.grid(), series.grid(), d); });
  return path;
}

std::vector<double> cusum_bridge_norms(const FunctionalSeries& series) {
  std::vector<double> norms(series.size(), 0.0);
  const double area = static_cast<double>(series.grid().size()) * static_cast<double>(series.grid().size());
  walk_bridge(series, [&](std::size_t j, const Matrix& d) { norms[j] = std::sqrt(d.squaredNorm() / area); });
  return norms;
}

double cs_statistic(const std::vector<double>& bridge_norms) {
  if (bridge_norms.empty()) throw DomainError("empty bridge path");
  return *std::max_element(bridge_norms.begin(), bridge_norms.end());
}

double ci_statistic(const std::vector<double>& bridge_norms) {
  if (bridge_norms.empty()) throw DomainError("empty bridge path");
  double acc = 0.0;
  for (double v : bridge_norms) acc += v * v;
  return acc / static_cast<double>(bridge_norms.size());
}

std::size_t estimate_changepoint(const std::vector<double>& bridge_norms) {
  if (bridge_norms.empty()) throw DomainError("empty bridge path");
  return static_cast<std::size_t>(std::max_element(bridge_norms.begin(), bridge_norms.end()) - bridge_norms.begin());
}

double cs_statistic(const OperatorPath& path) { return cs_statistic(path.norms()); }

double ci_statistic(const OperatorPath& path) {
  if (path.terms.empty()) throw DomainError("empty bridge path");
  double acc = 0.0;
  for (const auto& d : path.terms) acc += hs_norm_squared(d);
  return acc / static_cast<double>(path.terms.size());
}

std::size_t estimate_changepoint(const OperatorPath& path) { return estimate_changepoint(path.norms()); }

}  // namespace fcov
