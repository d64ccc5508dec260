#include "fcov/bootstrap.hpp"
#include "fcov/covops.hpp"
#include "fcov/datagen.hpp"
#include "fcov/errors.hpp"
#include "fcov/harness.hpp"
#include "fcov/hypothesis.hpp"
#include "fcov/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace fcov;

namespace {

// Series arrive as n x m arrays, one observation per row, on the midpoint grid.
FunctionalSeries series(const Matrix& data) { return {Grid(static_cast<std::size_t>(data.cols())), data}; }

FunctionalObservation observation(const Vector& values) { return {Grid(static_cast<std::size_t>(values.size())), values}; }

HSOperator op(const Matrix& kernel) {
  return {Grid(static_cast<std::size_t>(kernel.rows())), Grid(static_cast<std::size_t>(kernel.cols())), kernel};
}

TestConfig test_config(std::size_t B, std::optional<std::size_t> block_length, std::uint64_t seed,
                       const std::vector<double>& levels, const std::string& method, const std::string& centering,
                       unsigned threads) {
  TestConfig cfg;
  cfg.B = B;
  cfg.block_length = block_length;
  cfg.seed = seed;
  cfg.levels = levels;
  cfg.method = parse_block_method(method);
  cfg.centering = parse_centering(centering);
  cfg.threads = threads;
  return cfg;
}

ModelSpec model_spec(const std::string& model, std::size_t m, std::size_t burnin, std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = parse_model_kind(model);
  spec.m = m;
  spec.burnin = burnin;
  spec.seed = seed;
  return spec;
}

py::dict table_dict(const ResultTable& t) {
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict row;
    row["sweep"] = r.sweep;
    row["block"] = r.block;
    row["level"] = r.level;
    row["reject_freq"] = r.reject_freq();
    row["mc_runs"] = r.mc_runs;
    row["se"] = r.standard_error();
    rows.append(row);
  }
  py::dict out;
  out["name"] = t.name;
  out["rows"] = rows;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Bootstrap inference for covariance operators of functional time series";

  py::register_exception<DimensionError>(mod, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);

  mod.def("grid_nodes", [](std::size_t m) { return Grid(m).nodes(); }, py::arg("m"));
  mod.def("inner_h", [](const Vector& x, const Vector& y) { return inner_h(observation(x), observation(y)); });
  mod.def("norm_h", [](const Vector& x) { return norm_h(observation(x)); });
  mod.def("tensor", [](const Vector& x, const Vector& y) { return tensor(observation(x), observation(y)).kernel(); });
  mod.def("hs_inner", [](const Matrix& a, const Matrix& b) { return hs_inner(op(a), op(b)); });
  mod.def("hs_norm", [](const Matrix& a) { return hs_norm(op(a)); });

  mod.def("empirical_covariance", [](const Matrix& x) { return empirical_covariance(series(x)).op.kernel(); });
  mod.def("empirical_autocovariance",
          [](const Matrix& x, std::size_t lag) { return empirical_autocovariance(series(x), lag).kernel(); },
          py::arg("x"), py::arg("lag"));
  mod.def("empirical_cross_covariance",
          [](const Matrix& x, const Matrix& y) { return empirical_cross_covariance(series(x), series(y)).kernel(); });
  mod.def("s_statistic", [](const Matrix& x, const Matrix& y) { return s_statistic(series(x), series(y)); });
  mod.def("cusum_bridge_norms", [](const Matrix& x) { return cusum_bridge_norms(series(x)); });
  mod.def("cs_statistic", [](const Matrix& x) { return cs_statistic(cusum_bridge_norms(series(x))); });
  mod.def("ci_statistic", [](const Matrix& x) { return ci_statistic(cusum_bridge_norms(series(x))); });
  mod.def("estimate_changepoint", [](const Matrix& x) { return estimate_changepoint(cusum_bridge_norms(series(x))); });

  mod.def(
      "resample_indices",
      [](std::size_t n, std::size_t p, const std::string& method, std::uint64_t seed, std::size_t replicate) {
        const auto plan = BlockPlan::make(n, p, parse_block_method(method), seed);
        auto rng = replicate_rng(plan, replicate);
        return resample_indices(plan, rng);
      },
      py::arg("n"), py::arg("p"), py::arg("method") = "nonoverlapping", py::arg("seed") = 0,
      py::arg("replicate") = 0);
  mod.def("adaptive_block_length", [](const Matrix& x) { return adaptive_block_length(series(x)); });

  // Tests return the JSON report as a string; the Python package decodes it.
  mod.def(
      "cross_covariance_test",
      [](const Matrix& x, const Matrix& y, std::size_t B, std::optional<std::size_t> block_length, std::uint64_t seed,
         const std::vector<double>& levels, const std::string& method, const std::string& centering,
         unsigned threads) {
        const auto cfg = test_config(B, block_length, seed, levels, method, centering, threads);
        py::gil_scoped_release release;
        return to_json(cross_covariance_test(series(x), series(y), cfg)).dump();
      },
      py::arg("x"), py::arg("y"), py::arg("B") = 1000, py::arg("block_length") = py::none(), py::arg("seed") = 0,
      py::arg("levels") = std::vector<double>{0.01, 0.05, 0.10}, py::arg("method") = "nonoverlapping",
      py::arg("centering") = "sample", py::arg("threads") = 1);
  mod.def(
      "one_sample_test",
      [](const Matrix& x, const Matrix& v0, std::size_t B, std::optional<std::size_t> block_length, std::uint64_t seed,
         const std::vector<double>& levels, const std::string& method, unsigned threads) {
        const auto cfg = test_config(B, block_length, seed, levels, method, "sample", threads);
        py::gil_scoped_release release;
        return to_json(one_sample_test(series(x), op(v0), cfg)).dump();
      },
      py::arg("x"), py::arg("v0"), py::arg("B") = 1000, py::arg("block_length") = py::none(), py::arg("seed") = 0,
      py::arg("levels") = std::vector<double>{0.01, 0.05, 0.10}, py::arg("method") = "nonoverlapping",
      py::arg("threads") = 1);
  mod.def(
      "changepoint_test",
      [](const Matrix& x, const std::string& statistic, std::size_t B, std::optional<std::size_t> block_length,
         std::uint64_t seed, const std::vector<double>& levels, const std::string& method, unsigned threads) {
        const auto cfg = test_config(B, block_length, seed, levels, method, "sample", threads);
        const auto kind = parse_cusum_kind(statistic);
        py::gil_scoped_release release;
        return to_json(changepoint_test(series(x), kind, cfg)).dump();
      },
      py::arg("x"), py::arg("statistic") = "cs", py::arg("B") = 1000, py::arg("block_length") = py::none(),
      py::arg("seed") = 0, py::arg("levels") = std::vector<double>{0.01, 0.05, 0.10},
      py::arg("method") = "nonoverlapping", py::arg("threads") = 1);

  mod.def(
      "generate_series",
      [](std::size_t n, std::size_t m, const std::string& model, std::size_t burnin, std::uint64_t seed) {
        const auto spec = model_spec(model, m, burnin, seed);
        auto rng = make_rng(seed);
        return innovation_series(n, spec, rng).data();
      },
      py::arg("n"), py::arg("m") = 100, py::arg("model") = "iid", py::arg("burnin") = 50, py::arg("seed") = 0);
  mod.def(
      "correlated_pair",
      [](double alpha, std::size_t n, std::size_t m, const std::string& model, std::size_t burnin,
         std::uint64_t seed) {
        CrossPairSpec spec;
        spec.alpha = alpha;
        spec.n = n;
        spec.model = model_spec(model, m, burnin, seed);
        auto rng = make_rng(seed);
        auto pair = correlated_pair(spec, rng);
        return py::make_tuple(pair.x.data(), pair.y.data());
      },
      py::arg("alpha"), py::arg("n"), py::arg("m") = 100, py::arg("model") = "iid", py::arg("burnin") = 50,
      py::arg("seed") = 0);
  mod.def(
      "changepoint_series",
      [](double d1, double d2, std::size_t k_star, std::size_t n, std::size_t m, const std::string& model,
         std::size_t burnin, std::uint64_t seed) {
        ChangeSpec spec;
        spec.d1 = d1;
        spec.d2 = d2;
        spec.k_star = k_star;
        spec.n = n;
        spec.model = model_spec(model, m, burnin, seed);
        auto rng = make_rng(seed);
        return changepoint_series(spec, rng).data();
      },
      py::arg("d1"), py::arg("d2"), py::arg("k_star") = 51, py::arg("n") = 100, py::arg("m") = 100,
      py::arg("model") = "iid", py::arg("burnin") = 50, py::arg("seed") = 0);

  mod.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto cfg = experiment_from_json(nlohmann::json::parse(config_json));
        std::vector<ResultTable> tables;
        {
          py::gil_scoped_release release;
          if (cfg.experiment == ExperimentKind::cross) {
            tables.push_back(run_cross_experiment(cfg));
          } else {
            tables = run_changepoint_experiment(cfg);
          }
        }
        py::list out;
        for (const auto& t : tables) out.append(table_dict(t));
        return out;
      },
      py::arg("config_json"));
}
