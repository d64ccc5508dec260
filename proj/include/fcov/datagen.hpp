#pragma once

#include "fcov/fspace.hpp"
#include "fcov/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace fcov {

enum class ModelKind { iid, far1 };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::iid;
  std::size_t m = 100;
  std::size_t burnin = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CrossPairSpec {
  double alpha = 0.0;
  std::size_t n = 100;
  ModelSpec model;

  void validate() const;
};

struct ChangeSpec {
  double d1 = 0.0;
  double d2 = 0.0;
  /// 1-based index of the first changed observation.
  std::size_t k_star = 51;
  std::size_t n = 100;
  ModelSpec model;

  void validate() const;
};

/// Standard Brownian motion at the grid nodes, built from independent Gaussian increments.
FunctionalObservation brownian_path(Rng& rng, const Grid& grid);

/// n observations of the innovation model: IID Brownian paths or FAR(1) with kernel min(s,t).
FunctionalSeries innovation_series(std::size_t n, const ModelSpec& spec, Rng& rng);

/**
 * FAR(1) recursion e_i(t) = \int min(s,t) e_{i-1}(s) ds + W_i(t) from e_0 = 0,
 * integral by grid quadrature; the first spec.burnin iterates are discarded.
 */
FunctionalSeries far1_series(std::size_t n, const ModelSpec& spec, Rng& rng);

/// The three independent innovation series behind a correlated pair.
struct PairComponents {
  FunctionalSeries common;
  FunctionalSeries x_own;
  FunctionalSeries y_own;
};

PairComponents pair_components(const CrossPairSpec& spec, Rng& rng);

struct SeriesPair {
  FunctionalSeries x;
  FunctionalSeries y;
};

/// X = alpha e_c + (1 - alpha) e_X, Y = alpha e_c + (1 - alpha) e_Y.
SeriesPair mix_pair(const PairComponents& parts, double alpha);
SeriesPair correlated_pair(const CrossPairSpec& spec, Rng& rng);

/// Pointwise variance factor 1 + d1 + d2 (1 + sin(2 pi t)) applied from k_star on.
double change_factor(double d1, double d2, double t);
FunctionalSeries apply_change(const FunctionalSeries& innovations, const ChangeSpec& spec);
FunctionalSeries changepoint_series(const ChangeSpec& spec, Rng& rng);

}  // namespace fcov
