#include "fcov/datagen.hpp"

#include "fcov/errors.hpp"

#include <cmath>
#include <numbers>

namespace fcov {

std::string to_string(ModelKind kind) { return kind == ModelKind::iid ? "iid" : "far1"; }

ModelKind parse_model_kind(const std::string& name) {
  if (name == "iid" || name == "IID") return ModelKind::iid;
  if (name == "far1" || name == "FAR1") return ModelKind::far1;
  throw ConfigError("unknown model '" + name + "' (expected iid or far1)");
}

void ModelSpec::validate() const {
  if (m < 2) throw ConfigError("grid size m must be at least 2");
}

void CrossPairSpec::validate() const {
  model.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (n < 1) throw ConfigError("n must be at least 1");
}

void ChangeSpec::validate() const {
  model.validate();
  if (!std::isfinite(d1) || !std::isfinite(d2)) throw ConfigError("d1 and d2 must be finite");
  if (k_star < 2 || k_star > n) throw ConfigError("k* must lie in [2, n]");
}

FunctionalObservation brownian_path(Rng& rng, const Grid& grid) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t m = grid.size();
  Vector w(static_cast<Eigen::Index>(m));
  double level = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double s = grid.node(j);
    level += std::sqrt(s - prev) * normal(rng);
    prev = s;
    w(static_cast<Eigen::Index>(j)) = level;
  }
  return {grid, std::move(w)};
}

namespace {

Matrix brownian_rows(std::size_t n, const Grid& grid, Rng& rng) {
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < n; ++i) out.row(static_cast<Eigen::Index>(i)) = brownian_path(rng, grid).values().transpose();
  return out;
}

}  // namespace

FunctionalSeries far1_series(std::size_t n, const ModelSpec& spec, Rng& rng) {
  spec.validate();
  if (n < 1) throw DomainError("far1_series needs n >= 1");
  const Grid grid(spec.m);
  const auto m = static_cast<Eigen::Index>(spec.m);
  // phi(l, j) = w * min(s_l, t_j): (phi^T e)(t_j) is the quadrature of \int min(s, t_j) e(s) ds.
  Matrix phi(m, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    for (Eigen::Index j = 0; j < m; ++j) {
      phi(l, j) = std::min(grid.node(static_cast<std::size_t>(l)), grid.node(static_cast<std::size_t>(j))) * grid.weight();
    }
  }
  Matrix out(static_cast<Eigen::Index>(n), m);
  Vector state = Vector::Zero(m);
  for (std::size_t step = 0; step < spec.burnin + n; ++step) {
    Vector next = phi.transpose() * state;
    next += brownian_path(rng, grid).values();
    state = std::move(next);
    if (step >= spec.burnin) out.row(static_cast<Eigen::Index>(step - spec.burnin)) = state.transpose();
  }
  return {grid, std::move(out)};
}

FunctionalSeries innovation_series(std::size_t n, const ModelSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.kind == ModelKind::far1) return far1_series(n, spec, rng);
  const Grid grid(spec.m);
  return {grid, brownian_rows(n, grid, rng)};
}

PairComponents pair_components(const CrossPairSpec& spec, Rng& rng) {
  spec.validate();
  auto common = innovation_series(spec.n, spec.model, rng);
  auto x_own = innovation_series(spec.n, spec.model, rng);
  auto y_own = innovation_series(spec.n, spec.model, rng);
  return {std::move(common), std::move(x_own), std::move(y_own)};
}

SeriesPair mix_pair(const PairComponents& parts, double alpha) {
  const Grid grid = parts.common.grid();
  Matrix x = alpha * parts.common.data() + (1.0 - alpha) * parts.x_own.data();
  Matrix y = alpha * parts.common.data() + (1.0 - alpha) * parts.y_own.data();
  return {FunctionalSeries(grid, std::move(x)), FunctionalSeries(grid, std::move(y))};
}

SeriesPair correlated_pair(const CrossPairSpec& spec, Rng& rng) { return mix_pair(pair_components(spec, rng), spec.alpha); }

double change_factor(double d1, double d2, double t) {
  return 1.0 + d1 + d2 * (1.0 + std::sin(2.0 * std::numbers::pi * t));
}

FunctionalSeries apply_change(const FunctionalSeries& innovations, const ChangeSpec& spec) {
  spec.validate();
  if (innovations.size() != spec.n) throw DimensionError("innovation series length does not match the change spec");
  if (spec.d1 == 0.0 && spec.d2 == 0.0) return innovations;
  const Grid& grid = innovations.grid();
  Vector factor(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) factor(static_cast<Eigen::Index>(j)) = change_factor(spec.d1, spec.d2, grid.node(j));
  Matrix data = innovations.data();
  const auto first = static_cast<Eigen::Index>(spec.k_star - 1);
  data.bottomRows(data.rows() - first).array().rowwise() *= factor.transpose().array();
  return {grid, std::move(data)};
}

FunctionalSeries changepoint_series(const ChangeSpec& spec, Rng& rng) {
  spec.validate();
  return apply_change(innovation_series(spec.n, spec.model, rng), spec);
}

}  // namespace fcov
