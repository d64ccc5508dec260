#pragma once

#include "fcov/bootstrap.hpp"
#include "fcov/covops.hpp"
#include "fcov/datagen.hpp"
#include "fcov/fspace.hpp"
#include "fcov/harness.hpp"
#include "fcov/hypothesis.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace fcov {

/// Malformed input file or JSON document.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Series: one row per observation, m comma-separated decimals, optional
// leading "# grid=midpoint m=<m>" header. Values carry 17 significant digits.
void write_series_csv(std::ostream& os, const FunctionalSeries& series);
FunctionalSeries read_series_csv(std::istream& is);
void write_series_csv(const std::filesystem::path& path, const FunctionalSeries& series);
FunctionalSeries read_series_csv(const std::filesystem::path& path);

// Operator kernel with a "# rows=<m1> cols=<m2>" header.
void write_operator_csv(std::ostream& os, const HSOperator& op);
HSOperator read_operator_csv(std::istream& is);
HSOperator read_operator_csv(const std::filesystem::path& path);

/// "j,hs_norm" rows for plotting a bridge path.
void write_path_csv(std::ostream& os, const std::vector<double>& bridge_norms);

/// One replicate value per line.
void write_replicates_csv(std::ostream& os, const ReplicateSet& reps);
/// Sidecar {n, p, k, method, seed, B}.
nlohmann::json replicate_sidecar(const ReplicateSet& reps);

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const ChangepointReport& report);

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const CrossPairSpec& spec);
nlohmann::json to_json(const ChangeSpec& spec);

/// Header "sweep,block,level,reject_freq,mc_runs,se".
void write_result_csv(std::ostream& os, const ResultTable& table);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace fcov
