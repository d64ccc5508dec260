#include "fcov/harness.hpp"

#include "fcov/errors.hpp"
#include "fcov/parallel.hpp"
#include "fcov/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fcov {

namespace {

constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kBootStream = 1;

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<BlockLength> block_variants(const ExperimentConfig& cfg) {
  std::vector<BlockLength> out(cfg.block_lengths.begin(), cfg.block_lengths.end());
  if (cfg.adaptive) out.emplace_back(std::nullopt);
  return out;
}

TestConfig test_config(const ExperimentConfig& cfg, const BlockLength& block, std::uint64_t seed) {
  TestConfig tc;
  tc.B = cfg.B;
  tc.block_length = block;
  tc.levels = cfg.levels;
  tc.seed = seed;
  tc.method = cfg.method;
  tc.centering = cfg.centering;
  tc.bandwidth = cfg.bandwidth;
  tc.threads = 1;
  return tc;
}

// decisions[run][(sweep * blocks + block) * levels + level]
ResultTable tabulate(const ExperimentConfig& cfg, const std::string& name,
                     const std::vector<std::vector<char>>& decisions) {
  const auto blocks = block_variants(cfg);
  ResultTable table{name, {}};
  for (std::size_t s = 0; s < cfg.sweep_size(); ++s) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
        const std::size_t slot = (s * blocks.size() + b) * cfg.levels.size() + l;
        ResultRow row{cfg.sweep_label(s), block_label(blocks[b]), cfg.levels[l], 0, cfg.mc_runs};
        for (const auto& run : decisions) row.rejections += run[slot] ? 1 : 0;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

void record(std::vector<char>& out, std::size_t slot_base, const TestReport& report, const std::vector<double>& levels) {
  for (std::size_t l = 0; l < levels.size(); ++l) out[slot_base + l] = report.rejected.at(levels[l]) ? 1 : 0;
}

ModelSpec model_spec(const ExperimentConfig& cfg, std::uint64_t seed) {
  return ModelSpec{cfg.model, cfg.m, cfg.burnin, seed};
}

}  // namespace

std::string to_string(ExperimentKind kind) { return kind == ExperimentKind::cross ? "cross" : "changepoint"; }

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "cross") return ExperimentKind::cross;
  if (name == "changepoint") return ExperimentKind::changepoint;
  throw ConfigError("unknown experiment '" + name + "' (expected cross or changepoint)");
}

void ExperimentConfig::validate() const {
  if (mc_runs < 1) throw ConfigError("mc_runs must be at least 1");
  if (B < 1) throw ConfigError("B must be at least 1");
  if (m < 2) throw ConfigError("grid size m must be at least 2");
  if (n < 4) throw ConfigError("n must be at least 4");
  if (sweep_size() == 0) throw ConfigError("sweep is empty");
  if (block_lengths.empty() && !adaptive) throw ConfigError("no block lengths selected");
  for (std::size_t p : block_lengths) {
    if (p < 1 || p > n) throw ConfigError("block length " + std::to_string(p) + " outside [1, n]");
  }
  if (levels.empty()) throw ConfigError("no nominal levels");
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("levels must lie in (0, 1)");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  }
  if (experiment == ExperimentKind::changepoint) {
    if (k_star < 2 || k_star > n) throw ConfigError("k* must lie in [2, n]");
    if (statistics.empty()) throw ConfigError("no CUSUM statistics selected");
  }
  bandwidth.validate();
}

std::size_t ExperimentConfig::sweep_size() const {
  return experiment == ExperimentKind::cross ? alphas.size() : changes.size();
}

std::string ExperimentConfig::sweep_label(std::size_t i) const {
  if (experiment == ExperimentKind::cross) return format_number(alphas.at(i));
  return "d1=" + format_number(changes.at(i).first) + ";d2=" + format_number(changes.at(i).second);
}

double ResultRow::standard_error() const {
  const double f = reject_freq();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(mc_runs));
}

const ResultRow& ResultTable::at(const std::string& sweep, const std::string& block, double level) const {
  for (const auto& row : rows) {
    if (row.sweep == sweep && row.block == block && std::abs(row.level - level) < 1e-12) return row;
  }
  throw std::out_of_range("no result row for sweep=" + sweep + " block=" + block + " level=" + format_number(level));
}

std::string block_label(const BlockLength& block) { return block ? std::to_string(*block) : "adaptive"; }

ResultTable run_cross_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  if (cfg.experiment != ExperimentKind::cross) throw ConfigError("run_cross_experiment needs experiment = cross");
  cfg.validate();
  const auto blocks = block_variants(cfg);
  const std::size_t slots = cfg.alphas.size() * blocks.size() * cfg.levels.size();
  std::vector<std::vector<char>> decisions(cfg.mc_runs, std::vector<char>(slots, 0));

  parallel_for(cfg.mc_runs, cfg.threads, [&](std::size_t run) {
    auto rng = make_rng(cfg.master_seed, {kDataStream, run});
    const CrossPairSpec spec{0.0, cfg.n, model_spec(cfg, cfg.master_seed)};
    const auto parts = pair_components(spec, rng);
    for (std::size_t s = 0; s < cfg.alphas.size(); ++s) {
      const auto pair = mix_pair(parts, cfg.alphas[s]);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto seed = derive_seed(cfg.master_seed, {kBootStream, run, s, b});
        const auto report = cross_covariance_test(pair.x, pair.y, test_config(cfg, blocks[b], seed));
        record(decisions[run], (s * blocks.size() + b) * cfg.levels.size(), report, cfg.levels);
      }
    }
  });
  if (progress) progress(cfg.name + ": " + std::to_string(cfg.mc_runs) + " runs done");
  return tabulate(cfg, cfg.name, decisions);
}

std::vector<ResultTable> run_changepoint_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  if (cfg.experiment != ExperimentKind::changepoint) {
    throw ConfigError("run_changepoint_experiment needs experiment = changepoint");
  }
  cfg.validate();
  const auto blocks = block_variants(cfg);
  const std::size_t slots = cfg.changes.size() * blocks.size() * cfg.levels.size();
  std::vector<std::vector<std::vector<char>>> decisions(
      cfg.statistics.size(), std::vector<std::vector<char>>(cfg.mc_runs, std::vector<char>(slots, 0)));

  parallel_for(cfg.mc_runs, cfg.threads, [&](std::size_t run) {
    auto rng = make_rng(cfg.master_seed, {kDataStream, run});
    const auto innovations = innovation_series(cfg.n, model_spec(cfg, cfg.master_seed), rng);
    for (std::size_t s = 0; s < cfg.changes.size(); ++s) {
      const ChangeSpec spec{cfg.changes[s].first, cfg.changes[s].second, cfg.k_star, cfg.n,
                            model_spec(cfg, cfg.master_seed)};
      const auto series = apply_change(innovations, spec);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto seed = derive_seed(cfg.master_seed, {kBootStream, run, s, b});
        const auto [cs, ci] = changepoint_tests(series, test_config(cfg, blocks[b], seed));
        const std::size_t base = (s * blocks.size() + b) * cfg.levels.size();
        for (std::size_t k = 0; k < cfg.statistics.size(); ++k) {
          record(decisions[k][run], base, cfg.statistics[k] == CusumKind::cs ? cs : ci, cfg.levels);
        }
      }
    }
  });
  if (progress) progress(cfg.name + ": " + std::to_string(cfg.mc_runs) + " runs done");

  std::vector<ResultTable> tables;
  for (std::size_t k = 0; k < cfg.statistics.size(); ++k) {
    tables.push_back(tabulate(cfg, cfg.name + "_" + to_string(cfg.statistics[k]), decisions[k]));
  }
  return tables;
}

ResultTable power_curve(const ExperimentConfig& cfg, const ProgressFn& progress) {
  ExperimentConfig c = cfg;
  c.levels = {0.05};
  auto table = run_cross_experiment(c, progress);
  table.name = cfg.name + "_power";
  return table;
}

}  // namespace fcov
