// fcov: bootstrap inference for covariance operators of functional time series.
//
// Exit codes: 0 success, 2 usage or validation error, 3 runtime or IO error.
// Machine-readable output goes to stdout, diagnostics to stderr.

#include "fcov/bootstrap.hpp"
#include "fcov/datagen.hpp"
#include "fcov/errors.hpp"
#include "fcov/harness.hpp"
#include "fcov/hypothesis.hpp"
#include "fcov/io.hpp"
#include "fcov/rng.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct TestFlags {
  std::optional<std::size_t> block;
  bool adaptive = false;
  std::size_t B = 1000;
  std::optional<std::uint64_t> seed;
  std::vector<double> levels{0.01, 0.05, 0.10};
  std::string method = "nonoverlapping";
  unsigned threads = 0;
};

void add_test_flags(CLI::App* cmd, TestFlags& f) {
  auto* block = cmd->add_option("--block", f.block, "Fixed block length p");
  auto* adaptive = cmd->add_flag("--adaptive", f.adaptive, "Data-adaptive block length (default when --block is absent)");
  block->excludes(adaptive);
  cmd->add_option("--B", f.B, "Bootstrap replicates")->capture_default_str();
  cmd->add_option("--seed", f.seed, "RNG seed (random and printed when omitted)");
  cmd->add_option("--level", f.levels, "Nominal level(s)")->capture_default_str();
  cmd->add_option("--method", f.method, "Block scheme")->check(CLI::IsMember({"nonoverlapping", "moving"}))->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  const std::uint64_t s = seed ? *seed : fcov::random_seed();
  std::cerr << "seed: " << s << '\n';
  return s;
}

fcov::TestConfig to_config(const TestFlags& f) {
  fcov::TestConfig cfg;
  cfg.B = f.B;
  cfg.block_length = f.block;
  cfg.levels = f.levels;
  cfg.seed = resolve_seed(f.seed);
  cfg.method = fcov::parse_block_method(f.method);
  cfg.threads = f.threads;
  return cfg;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap inference for covariance operators of functional time series"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Simulate a series, a correlated pair, or a changepoint series");
  std::string gen_model = "iid";
  std::size_t gen_n = 100, gen_m = 100, gen_burnin = 50, gen_kstar = 51;
  std::optional<double> gen_alpha, gen_d1, gen_d2;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("--model", gen_model, "iid or far1")->capture_default_str();
  gen->add_option("--n", gen_n, "Number of observations")->capture_default_str();
  gen->add_option("--m", gen_m, "Grid size")->capture_default_str();
  gen->add_option("--burnin", gen_burnin, "FAR(1) burn-in")->capture_default_str();
  gen->add_option("--alpha", gen_alpha, "Generate a correlated pair with this alpha in [0,1]");
  gen->add_option("--d1", gen_d1, "Uniform variance change");
  gen->add_option("--d2", gen_d2, "Nonuniform variance change");
  gen->add_option("--kstar", gen_kstar, "First changed observation (1-based)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed (random and printed when omitted)");
  gen->add_option("--out", gen_out,
                  "Output CSV (pair: prefix for <out>_x.csv and <out>_y.csv); series goes to stdout when omitted");

  // test-cross
  auto* cross = app.add_subcommand("test-cross", "Bootstrap test of zero cross-covariance");
  std::string cross_x, cross_y, cross_centering = "sample";
  TestFlags cross_flags;
  cross->add_option("--x", cross_x, "CSV of the first series")->required()->check(CLI::ExistingFile);
  cross->add_option("--y", cross_y, "CSV of the second series")->required()->check(CLI::ExistingFile);
  cross->add_option("--centering", cross_centering, "Replicate centering")
      ->check(CLI::IsMember({"sample", "zero"}))
      ->capture_default_str();
  add_test_flags(cross, cross_flags);

  // test-cp
  auto* cp = app.add_subcommand("test-cp", "CUSUM test for a change in the covariance operator");
  std::string cp_file, cp_stat = "cs";
  TestFlags cp_flags;
  cp->add_option("--file", cp_file, "CSV series")->required()->check(CLI::ExistingFile);
  cp->add_option("--statistic", cp_stat, "cs (supremum) or ci (integral)")->capture_default_str();
  add_test_flags(cp, cp_flags);

  // test-one-sample
  auto* one = app.add_subcommand("test-one-sample", "Bootstrap test of V_X = v0");
  std::string one_file, one_v0;
  TestFlags one_flags;
  one->add_option("--file", one_file, "CSV series")->required()->check(CLI::ExistingFile);
  one->add_option("--v0", one_v0, "Operator kernel CSV (# rows=m cols=m)")->required()->check(CLI::ExistingFile);
  add_test_flags(one, one_flags);

  // block-length
  auto* bl = app.add_subcommand("block-length", "Print the data-adaptive block length");
  std::string bl_file;
  bl->add_option("--file", bl_file, "CSV series")->required()->check(CLI::ExistingFile);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run Monte Carlo experiments from a JSON config");
  std::string exp_config, exp_out = ".";
  std::optional<unsigned> exp_threads;
  exp->add_option("--config", exp_config, "Experiment JSON (one config or {\"experiments\": [...]})")
      ->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--out-dir", exp_out, "Directory for result CSVs and manifest.json")->capture_default_str();
  exp->add_option("--threads", exp_threads, "Worker threads (0 = all cores); overrides the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const fcov::ModelSpec model{fcov::parse_model_kind(gen_model), gen_m, gen_burnin, resolve_seed(gen_seed)};
      model.validate();
      auto rng = fcov::make_rng(model.seed);
      if (gen_alpha) {
        const fcov::CrossPairSpec spec{*gen_alpha, gen_n, model};
        spec.validate();
        if (gen_out.empty()) throw fcov::ConfigError("--out is required when generating a pair");
        const auto pair = fcov::correlated_pair(spec, rng);
        fcov::write_series_csv(fs::path(gen_out + "_x.csv"), pair.x);
        fcov::write_series_csv(fs::path(gen_out + "_y.csv"), pair.y);
        print_json(fcov::to_json(spec));
        return 0;
      }
      std::optional<fcov::FunctionalSeries> series;
      json spec_json;
      if (gen_d1 || gen_d2) {
        const fcov::ChangeSpec spec{gen_d1.value_or(0.0), gen_d2.value_or(0.0), gen_kstar, gen_n, model};
        spec.validate();
        series = fcov::changepoint_series(spec, rng);
        spec_json = fcov::to_json(spec);
      } else {
        if (gen_n < 1) throw fcov::ConfigError("--n must be at least 1");
        series = fcov::innovation_series(gen_n, model, rng);
        spec_json = {{"n", gen_n}, {"model", fcov::to_json(model)}};
      }
      if (gen_out.empty()) {
        fcov::write_series_csv(std::cout, *series);
        std::cerr << spec_json.dump() << '\n';
      } else {
        fcov::write_series_csv(fs::path(gen_out), *series);
        print_json(spec_json);
      }
      return 0;
    }

    if (*cross) {
      auto cfg = to_config(cross_flags);
      cfg.centering = fcov::parse_centering(cross_centering);
      const auto x = fcov::read_series_csv(fs::path(cross_x));
      const auto y = fcov::read_series_csv(fs::path(cross_y));
      print_json(fcov::to_json(fcov::cross_covariance_test(x, y, cfg)));
      return 0;
    }

    if (*cp) {
      const auto kind = fcov::parse_cusum_kind(cp_stat);
      const auto cfg = to_config(cp_flags);
      const auto x = fcov::read_series_csv(fs::path(cp_file));
      print_json(fcov::to_json(fcov::changepoint_test(x, kind, cfg)));
      return 0;
    }

    if (*one) {
      const auto cfg = to_config(one_flags);
      const auto x = fcov::read_series_csv(fs::path(one_file));
      const auto v0 = fcov::read_operator_csv(fs::path(one_v0));
      print_json(fcov::to_json(fcov::one_sample_test(x, v0, cfg)));
      return 0;
    }

    if (*bl) {
      const auto x = fcov::read_series_csv(fs::path(bl_file));
      std::cout << fcov::adaptive_block_length(x) << '\n';
      return 0;
    }

    if (*exp) {
      std::ifstream in(exp_config);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw fcov::ConfigError(std::string("cannot parse config: ") + e.what());
      }
      std::vector<fcov::ExperimentConfig> configs;
      std::vector<json> docs;
      if (doc.contains("experiments")) {
        for (const auto& j : doc.at("experiments")) docs.push_back(j);
      } else {
        docs.push_back(doc);
      }
      for (const auto& j : docs) {
        configs.push_back(fcov::experiment_from_json(j));
        // Without an explicit setting the CLI uses every core; results do not depend on it.
        if (!j.contains("threads")) configs.back().threads = 0;
        if (exp_threads) configs.back().threads = *exp_threads;
      }
      if (configs.empty()) throw fcov::ConfigError("config lists no experiments");
      fs::create_directories(exp_out);

      json manifest = {{"config_file", exp_config}, {"runs", json::array()}};
      auto log = [](const std::string& line) { std::cerr << line << '\n'; };
      for (auto& cfg : configs) {
        std::cerr << cfg.name << ": master seed " << cfg.master_seed << '\n';
        const auto start = std::chrono::steady_clock::now();
        std::vector<fcov::ResultTable> tables;
        if (cfg.experiment == fcov::ExperimentKind::cross) {
          tables.push_back(fcov::run_cross_experiment(cfg, log));
        } else {
          tables = fcov::run_changepoint_experiment(cfg, log);
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json files = json::array();
        for (const auto& table : tables) {
          const fs::path path = fs::path(exp_out) / (table.name + ".csv");
          std::ofstream out(path);
          if (!out) throw std::runtime_error("cannot write " + path.string());
          fcov::write_result_csv(out, table);
          files.push_back(path.filename().string());
          std::cout << path.string() << '\n';
        }
        manifest["runs"].push_back(
            {{"config", fcov::to_json(cfg)}, {"files", files}, {"runtime_seconds", seconds}});
      }
      std::ofstream mf(fs::path(exp_out) / "manifest.json");
      if (!mf) throw std::runtime_error("cannot write manifest.json");
      mf << manifest.dump(2) << '\n';
      return 0;
    }
  } catch (const fcov::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fcov::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fcov::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fcov::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
