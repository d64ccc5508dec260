#include "fcov/bootstrap.hpp"

#include "fcov/errors.hpp"
#include "fcov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fcov {

std::string to_string(BlockMethod method) {
  return method == BlockMethod::nonoverlapping ? "nonoverlapping" : "moving";
}

BlockMethod parse_block_method(const std::string& name) {
  if (name == "nonoverlapping") return BlockMethod::nonoverlapping;
  if (name == "moving") return BlockMethod::moving;
  throw ConfigError("unknown block method '" + name + "' (expected nonoverlapping or moving)");
}

std::string to_string(Centering centering) { return centering == Centering::sample ? "sample" : "zero"; }

Centering parse_centering(const std::string& name) {
  if (name == "sample") return Centering::sample;
  if (name == "zero") return Centering::zero;
  throw ConfigError("unknown centering '" + name + "' (expected sample or zero)");
}

BlockPlan BlockPlan::make(std::size_t n, std::size_t p, BlockMethod method, std::uint64_t seed) {
  if (p < 1 || p > n) {
    throw DomainError("block length p = " + std::to_string(p) + " must lie in [1, n = " + std::to_string(n) + "]");
  }
  return BlockPlan{n, p, n / p, method, seed};
}

std::size_t BlockPlan::resample_length() const noexcept {
  return method == BlockMethod::nonoverlapping ? k * p : n;
}

void BandwidthConfig::validate() const {
  if (!(pilot_exponent > 0.0 && pilot_exponent < 0.5)) throw ConfigError("pilot exponent must lie in (0, 1/2)");
  if (!(q >= 1.0)) throw ConfigError("kernel exponent q must be >= 1");
  if (!(constant > 0.0) || !std::isfinite(constant)) throw ConfigError("bandwidth constant must be positive");
}

std::vector<FunctionalSeries> make_blocks(const FunctionalSeries& series, std::size_t p) {
  const auto plan = BlockPlan::make(series.size(), p);
  std::vector<FunctionalSeries> blocks;
  blocks.reserve(plan.k);
  for (std::size_t j = 0; j < plan.k; ++j) {
    blocks.emplace_back(series.grid(), series.data().middleRows(static_cast<Eigen::Index>(j * p),
                                                                static_cast<Eigen::Index>(p)));
  }
  return blocks;
}

FunctionalSeries resample(std::span<const FunctionalSeries> blocks, Rng& rng) {
  if (blocks.empty()) throw DomainError("resample needs at least one block");
  const auto p = blocks.front().data().rows();
  Matrix out(p * static_cast<Eigen::Index>(blocks.size()), blocks.front().data().cols());
  std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[pick(rng)];
    if (b.data().rows() != p) throw DimensionError("blocks must share a common length");
    out.middleRows(static_cast<Eigen::Index>(i) * p, p) = b.data();
  }
  return {blocks.front().grid(), std::move(out)};
}

std::vector<std::size_t> draw_blocks(const BlockPlan& plan, Rng& rng) {
  if (plan.method == BlockMethod::nonoverlapping) {
    std::uniform_int_distribution<std::size_t> pick(0, plan.k - 1);
    std::vector<std::size_t> out(plan.k);
    for (auto& b : out) b = pick(rng);
    return out;
  }
  const std::size_t count = (plan.n + plan.p - 1) / plan.p;
  std::uniform_int_distribution<std::size_t> pick(0, plan.n - plan.p);
  std::vector<std::size_t> out(count);
  for (auto& b : out) b = pick(rng);
  return out;
}

std::vector<std::size_t> rows_from_blocks(const BlockPlan& plan, std::span<const std::size_t> blocks) {
  std::vector<std::size_t> rows;
  rows.reserve(blocks.size() * plan.p);
  for (std::size_t b : blocks) {
    const std::size_t start = plan.method == BlockMethod::nonoverlapping ? b * plan.p : b;
    for (std::size_t i = 0; i < plan.p; ++i) rows.push_back(start + i);
  }
  rows.resize(std::min(rows.size(), plan.resample_length()));
  return rows;
}

std::vector<std::size_t> resample_indices(const BlockPlan& plan, Rng& rng) {
  const auto blocks = draw_blocks(plan, rng);
  return rows_from_blocks(plan, blocks);
}

Rng replicate_rng(const BlockPlan& plan, std::size_t b) { return make_rng(plan.seed, {b}); }

FunctionalSeries moving_block_resample(const FunctionalSeries& series, std::size_t p, Rng& rng) {
  const auto plan = BlockPlan::make(series.size(), p, BlockMethod::moving);
  const auto rows = resample_indices(plan, rng);
  return series.select(rows);
}

Matrix centered_gram(const FunctionalSeries& series) {
  const Matrix xc = series.data().rowwise() - series.data().colwise().mean();
  Matrix g = Matrix::Zero(xc.rows(), xc.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(xc, series.grid().weight());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

namespace {

Vector counts(std::span<const std::size_t> indices, Eigen::Index n) {
  Vector w = Vector::Zero(n);
  for (std::size_t i : indices) w(static_cast<Eigen::Index>(i)) += 1.0;
  return w;
}

void check_plan(const BlockPlan& plan, std::size_t n, std::size_t B) {
  if (plan.n != n) throw DomainError("block plan was built for n = " + std::to_string(plan.n) +
                                     " but the series has " + std::to_string(n) + " observations");
  if (plan.p < 1 || plan.p > plan.n || plan.k != plan.n / plan.p) throw DomainError("invalid block plan");
  if (B < 1) throw ConfigError("need at least one bootstrap replicate");
}

}  // namespace

double cross_replicate_from_gram(const Matrix& gx, const Matrix& gy, const Matrix& hadamard,
                                 std::span<const std::size_t> indices, Centering centering) {
  // With x_a, y_a centered, V*_{XY} - target = sum_a c_a x_a (x) y_a - xbar* (x) ybar*,
  // where c_a = w_a/N - [sample centering]/n and xbar* = sum_a w_a x_a / N.
  const Eigen::Index n = gx.rows();
  const double big_n = static_cast<double>(indices.size());
  const Vector w = counts(indices, n) / big_n;
  const Vector u = gx * w;  // <x_a, xbar*>
  const Vector v = gy * w;  // <y_a, ybar*>
  const double qx = w.dot(u);
  const double qy = w.dot(v);
  Vector c = w;
  if (centering == Centering::sample) c.array() -= 1.0 / static_cast<double>(n);
  const double quad = c.dot(hadamard * c);
  const double cross = (c.array() * u.array() * v.array()).sum();
  const double norm2 = quad - 2.0 * cross + qx * qy;
  return big_n * std::max(norm2, 0.0);
}

std::vector<double> boot_bridge_norms_from_gram(const Matrix& gram, std::span<const std::size_t> indices) {
  const auto big_n = static_cast<Eigen::Index>(indices.size());
  const double nd = static_cast<double>(big_n);
  const Vector w = counts(indices, gram.rows()) / nd;
  const Vector u = gram * w;  // <x_a, xbar*>
  const double q = w.dot(u);

  // K(i,l) = <Z_i, Z_l>^2 = <Z_i (x) Z_i, Z_l (x) Z_l>_HS with Z_i = X*_i - Xbar*.
  Matrix k(big_n, big_n);
  for (Eigen::Index l = 0; l < big_n; ++l) {
    const auto bl = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(l)]);
    for (Eigen::Index i = 0; i < big_n; ++i) {
      const auto bi = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(i)]);
      const double h = gram(bi, bl) - u(bi) - u(bl) + q;
      k(i, l) = h * h;
    }
  }
  // Center the tensor series at its mean; the bridge is the centered partial sum over sqrt(N).
  const Vector r = k.rowwise().sum() / nd;
  const double total = r.sum() / nd;
  k.colwise() -= r;
  k.rowwise() -= r.transpose();
  k.array() += total;

  std::vector<double> norms(static_cast<std::size_t>(big_n));
  double s = 0.0;
  norms[0] = 0.0;
  for (Eigen::Index j = 1; j < big_n; ++j) {
    const Eigen::Index e = j - 1;
    s += 2.0 * k.col(e).head(e).sum() + k(e, e);
    norms[static_cast<std::size_t>(j)] = std::sqrt(std::max(s, 0.0) / nd);
  }
  return norms;
}

ReplicateSet cross_replicates_from_gram(const Matrix& gx, const Matrix& gy, const BlockPlan& plan, std::size_t B,
                                        Centering centering, unsigned threads) {
  check_plan(plan, static_cast<std::size_t>(gx.rows()), B);
  if (gy.rows() != gx.rows()) throw DimensionError("paired series need equal lengths");
  const Matrix hadamard = gx.cwiseProduct(gy);
  ReplicateSet out{std::vector<double>(B), plan};
  parallel_for(B, threads, [&](std::size_t b) {
    auto rng = replicate_rng(plan, b);
    const auto rows = resample_indices(plan, rng);
    out.values[b] = cross_replicate_from_gram(gx, gy, hadamard, rows, centering);
  });
  return out;
}

CusumReplicates cusum_replicates_from_gram(const Matrix& gram, const BlockPlan& plan, std::size_t B,
                                           unsigned threads) {
  check_plan(plan, static_cast<std::size_t>(gram.rows()), B);
  if (plan.resample_length() < 2) throw DomainError("bootstrap CUSUM needs a resample of at least two rows");
  CusumReplicates out{{std::vector<double>(B), plan}, {std::vector<double>(B), plan}};
  parallel_for(B, threads, [&](std::size_t b) {
    auto rng = replicate_rng(plan, b);
    const auto rows = resample_indices(plan, rng);
    const auto norms = boot_bridge_norms_from_gram(gram, rows);
    out.cs.values[b] = cs_statistic(norms);
    out.ci.values[b] = ci_statistic(norms);
  });
  return out;
}

ReplicateSet boot_cov_replicates(const FunctionalSeries& series, const BlockPlan& plan, std::size_t B,
                                 unsigned threads) {
  const Matrix g = centered_gram(series);
  return cross_replicates_from_gram(g, g, plan, B, Centering::sample, threads);
}

ReplicateSet boot_cross_replicates(const FunctionalSeries& x, const FunctionalSeries& y, const BlockPlan& plan,
                                   std::size_t B, Centering centering, unsigned threads) {
  if (x.size() != y.size()) throw DomainError("paired series need equal lengths");
  return cross_replicates_from_gram(centered_gram(x), centered_gram(y), plan, B, centering, threads);
}

std::vector<HSOperator> boot_partial_sum_path(const FunctionalSeries& series, std::span<const std::size_t> indices) {
  if (indices.empty()) throw DomainError("empty resample");
  const HSOperator v_hat = empirical_covariance(series).op;
  const FunctionalSeries star = series.select(indices);
  const Matrix z = star.data().rowwise() - star.data().colwise().mean();
  const double scale = 1.0 / std::sqrt(static_cast<double>(indices.size()));

  std::vector<HSOperator> path;
  path.reserve(indices.size() + 1);
  path.push_back(HSOperator::zero(series.grid(), series.grid()));
  Matrix acc = Matrix::Zero(z.cols(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    acc += z.row(i).transpose() * z.row(i) - v_hat.kernel();
    path.emplace_back(series.grid(), series.grid(), acc * scale);
  }
  return path;
}

OperatorPath boot_cusum_path(const FunctionalSeries& series, std::span<const std::size_t> indices) {
  const auto partial = boot_partial_sum_path(series, indices);
  const std::size_t big_n = indices.size();
  if (big_n < 2) throw DomainError("bootstrap CUSUM needs a resample of at least two rows");
  OperatorPath path;
  path.n = big_n;
  path.terms.reserve(big_n);
  for (std::size_t j = 0; j < big_n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(big_n);
    path.terms.push_back(partial[j] - t * partial[big_n]);
  }
  return path;
}

OperatorPath boot_cusum_path(const FunctionalSeries& series, const BlockPlan& plan, Rng& rng) {
  check_plan(plan, series.size(), 1);
  const auto rows = resample_indices(plan, rng);
  return boot_cusum_path(series, rows);
}

std::size_t adaptive_block_length(const FunctionalSeries& series, const BandwidthConfig& cfg) {
  return adaptive_block_length_from_gram(centered_gram(series), cfg);
}

std::size_t adaptive_block_length_from_gram(const Matrix& gram, const BandwidthConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = gram.rows();
  if (n < 4) throw DomainError("adaptive block length needs n >= 4");
  const double nd = static_cast<double>(n);
  const std::size_t upper = static_cast<std::size_t>(n / 2);

  // HS Gram of the tensor series Y_i = x_i (x) x_i, then centered at the tensor mean.
  Matrix k = gram.cwiseProduct(gram);
  const Vector r = k.rowwise().mean();
  const double total = r.mean();
  k.colwise() -= r;
  k.rowwise() -= r.transpose();
  k.array() += total;
  if (!(k.diagonal().sum() > 0.0)) return 1;

  const auto h0 = static_cast<Eigen::Index>(std::ceil(std::pow(nd, cfg.pilot_exponent)));
  auto bartlett = [&](Eigen::Index lag) { return std::max(0.0, 1.0 - static_cast<double>(lag) / static_cast<double>(h0)); };

  // The pilot estimators sum_r a(r) gamma_r equal sum_{i,l} A(i,l) Y_i (x) Y_l with a banded symmetric A,
  // so ||C||_HS^2 = tr(A K A K) and tr(C) = sum A(i,l) K(i,l).
  auto hs_norm2_and_trace = [&](auto&& lag_weight) {
    Matrix ak = Matrix::Zero(n, n);
    double trace = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index a = std::max<Eigen::Index>(0, i - h0); a <= std::min(n - 1, i + h0); ++a) {
        const double wgt = lag_weight(std::abs(i - a)) / nd;
        if (wgt == 0.0) continue;
        ak.row(i) += wgt * k.row(a);
        trace += wgt * k(i, a);
      }
    }
    const double norm2 = ak.cwiseProduct(ak.transpose()).sum();
    return std::pair{norm2, trace};
  };

  const auto [c0_norm2, c0_trace] = hs_norm2_and_trace([&](Eigen::Index lag) { return bartlett(lag); });
  const auto [c1_norm2, c1_trace] = hs_norm2_and_trace([&](Eigen::Index lag) {
    return std::pow(static_cast<double>(lag), cfg.q) * bartlett(lag);
  });
  (void)c1_trace;

  constexpr double kBartlettSquaredIntegral = 2.0 / 3.0;
  const double variance_term = kBartlettSquaredIntegral * (c0_norm2 + c0_trace * c0_trace);
  if (!(variance_term > 0.0) || !std::isfinite(variance_term) || !std::isfinite(c1_norm2)) return 1;

  const double ratio = cfg.constant * c1_norm2 / variance_term;
  const double raw = std::pow(nd * ratio, 1.0 / (1.0 + 2.0 * cfg.q));
  if (!std::isfinite(raw)) return upper;
  const auto p = static_cast<std::size_t>(std::ceil(raw));
  return std::clamp<std::size_t>(p, 1, std::max<std::size_t>(1, upper));
}

}  // namespace fcov
