#pragma once

#include "fcov/bootstrap.hpp"
#include "fcov/datagen.hpp"
#include "fcov/hypothesis.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fcov {

enum class ExperimentKind { cross, changepoint };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind experiment = ExperimentKind::cross;
  std::size_t n = 100;
  std::size_t mc_runs = 500;
  std::size_t B = 200;
  std::size_t m = 100;
  ModelKind model = ModelKind::iid;
  std::size_t burnin = 50;
  /// Sweep for the cross experiment.
  std::vector<double> alphas;
  /// Sweep for the changepoint experiment: (d1, d2) pairs.
  std::vector<std::pair<double, double>> changes;
  std::size_t k_star = 51;
  /// CUSUM statistics to tabulate in the changepoint experiment.
  std::vector<CusumKind> statistics{CusumKind::cs, CusumKind::ci};
  std::vector<std::size_t> block_lengths{3, 5, 7};
  bool adaptive = false;
  std::vector<double> levels{0.01, 0.05, 0.10};
  std::uint64_t master_seed = 0;
  BlockMethod method = BlockMethod::nonoverlapping;
  Centering centering = Centering::sample;
  BandwidthConfig bandwidth;
  /// Worker threads over Monte Carlo runs; 0 = hardware concurrency.
  unsigned threads = 1;

  void validate() const;
  std::size_t sweep_size() const;
  /// Label of sweep point i, e.g. "0.3" or "d1=0.8;d2=0".
  std::string sweep_label(std::size_t i) const;
};

struct ResultRow {
  std::string sweep;
  std::string block;
  double level = 0.0;
  std::size_t rejections = 0;
  std::size_t mc_runs = 0;

  double reject_freq() const { return static_cast<double>(rejections) / static_cast<double>(mc_runs); }
  /// sqrt(f (1 - f) / mc_runs)
  double standard_error() const;
};

struct ResultTable {
  std::string name;
  std::vector<ResultRow> rows;

  /// Throws std::out_of_range when no row matches.
  const ResultRow& at(const std::string& sweep, const std::string& block, double level) const;
};

/// Optional progress sink; receives one line per completed sweep point.
using ProgressFn = std::function<void(const std::string&)>;

std::string block_label(const BlockLength& block);

/**
 * Rejection frequencies of the cross-covariance test over alpha x block x level.
 * Monte Carlo run r draws its innovation series from a stream derived from
 * (master_seed, r) and reuses it for every alpha, so sweep points share
 * common random numbers.
 */
ResultTable run_cross_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// One table per entry of cfg.statistics, over (d1,d2) x block x level.
std::vector<ResultTable> run_changepoint_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Cross experiment projected onto the 5% level, for the alpha power curve.
ResultTable power_curve(const ExperimentConfig& cfg, const ProgressFn& progress = {});

}  // namespace fcov
