#include "fcov/io.hpp"

#include "fcov/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace fcov {

using nlohmann::json;

namespace {

constexpr int kDigits = 17;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + t + "' as a number");
    }
    if (used != t.size()) throw ParseError("line " + std::to_string(line_no) + ": trailing characters in '" + t + "'");
    out.push_back(v);
  }
  return out;
}

// Reads "key=value" tokens from a "# ..." header line.
std::size_t header_value(const std::string& header, const std::string& key) {
  std::stringstream ss(header.substr(1));
  std::string tok;
  while (ss >> tok) {
    if (tok.rfind(key + "=", 0) == 0) {
      try {
        return static_cast<std::size_t>(std::stoul(tok.substr(key.size() + 1)));
      } catch (const std::exception&) {
        throw ParseError("bad header value in '" + header + "'");
      }
    }
  }
  return 0;
}

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
};

CsvTable read_table(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      t.headers.push_back(s);
      continue;
    }
    auto row = parse_row(s, line_no);
    if (!t.rows.empty() && row.size() != t.rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.rows.front().size()) +
                       " columns, found " + std::to_string(row.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Matrix to_matrix(const CsvTable& t) {
  Matrix out(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.rows.front().size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
    }
  }
  return out;
}

void write_matrix(std::ostream& os, const Matrix& a) {
  os << std::setprecision(kDigits);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << a(i, j);
    }
    os << '\n';
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string level_key(double level) {
  std::ostringstream os;
  os << level;
  return os.str();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

void write_series_csv(std::ostream& os, const FunctionalSeries& series) {
  os << "# grid=midpoint m=" << series.grid().size() << '\n';
  write_matrix(os, series.data());
}

FunctionalSeries read_series_csv(std::istream& is) {
  const CsvTable t = read_table(is);
  if (t.rows.empty()) throw ParseError("series file has no observations");
  const std::size_t m = t.rows.front().size();
  for (const auto& h : t.headers) {
    const std::size_t declared = header_value(h, "m");
    if (declared != 0 && declared != m) {
      throw ParseError("header declares m=" + std::to_string(declared) + " but rows have " + std::to_string(m) +
                       " columns");
    }
  }
  return {Grid(m), to_matrix(t)};
}

void write_series_csv(const std::filesystem::path& path, const FunctionalSeries& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_series_csv(out, series);
}

FunctionalSeries read_series_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_series_csv(in);
}

void write_operator_csv(std::ostream& os, const HSOperator& op) {
  os << "# rows=" << op.row_grid().size() << " cols=" << op.col_grid().size() << '\n';
  write_matrix(os, op.kernel());
}

HSOperator read_operator_csv(std::istream& is) {
  const CsvTable t = read_table(is);
  if (t.rows.empty()) throw ParseError("operator file has no rows");
  const std::size_t rows = t.rows.size();
  const std::size_t cols = t.rows.front().size();
  for (const auto& h : t.headers) {
    const std::size_t r = header_value(h, "rows");
    const std::size_t c = header_value(h, "cols");
    if ((r != 0 && r != rows) || (c != 0 && c != cols)) throw ParseError("operator header disagrees with data shape");
  }
  return {Grid(rows), Grid(cols), to_matrix(t)};
}

HSOperator read_operator_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_operator_csv(in);
}

void write_path_csv(std::ostream& os, const std::vector<double>& bridge_norms) {
  os << "j,hs_norm\n" << std::setprecision(kDigits);
  for (std::size_t j = 0; j < bridge_norms.size(); ++j) os << j << ',' << bridge_norms[j] << '\n';
}

void write_replicates_csv(std::ostream& os, const ReplicateSet& reps) {
  os << std::setprecision(kDigits);
  for (double v : reps.values) os << v << '\n';
}

json replicate_sidecar(const ReplicateSet& reps) {
  return {{"n", reps.plan.n},       {"p", reps.plan.p},       {"k", reps.plan.k},
          {"method", to_string(reps.plan.method)}, {"seed", reps.plan.seed}, {"B", reps.B()}};
}

json to_json(const TestReport& report) {
  json crit = json::object();
  json rejected = json::object();
  for (const auto& [level, value] : report.critical_values) crit[level_key(level)] = number_or_null(value);
  for (const auto& [level, value] : report.rejected) rejected[level_key(level)] = value;
  return {{"statistic", report.statistic},
          {"p_value", report.p_value},
          {"critical_values", crit},
          {"rejected", rejected},
          {"block_length", report.block_length_used},
          {"method", to_string(report.replicates.plan.method)},
          {"seed", report.seed},
          {"B", report.replicates.B()}};
}

json to_json(const ChangepointReport& report) {
  json j = to_json(static_cast<const TestReport&>(report));
  j["statistic_kind"] = to_string(report.kind);
  j["k_hat"] = report.changepoint_estimate;
  j["bridge_norms"] = report.bridge_norms;
  return j;
}

json to_json(const ModelSpec& spec) {
  return {{"kind", to_string(spec.kind)}, {"m", spec.m}, {"burnin", spec.burnin}, {"seed", spec.seed}};
}

json to_json(const CrossPairSpec& spec) { return {{"alpha", spec.alpha}, {"n", spec.n}, {"model", to_json(spec.model)}}; }

json to_json(const ChangeSpec& spec) {
  return {{"d1", spec.d1}, {"d2", spec.d2}, {"k_star", spec.k_star}, {"n", spec.n}, {"model", to_json(spec.model)}};
}

void write_result_csv(std::ostream& os, const ResultTable& table) {
  os << "sweep,block,level,reject_freq,mc_runs,se\n" << std::setprecision(10);
  for (const auto& row : table.rows) {
    os << row.sweep << ',' << row.block << ',' << row.level << ',' << row.reject_freq() << ',' << row.mc_runs << ','
       << row.standard_error() << '\n';
  }
}

ExperimentConfig experiment_from_json(const json& j) {
  static const std::set<std::string> known{"name",    "experiment", "n",           "mc_runs",  "B",
                                           "m",       "model",      "burnin",      "alphas",   "changes",
                                           "k_star",  "statistics", "block_lengths", "adaptive", "levels",
                                           "master_seed", "method", "centering",   "bandwidth", "threads"};
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown experiment config key '" + item.key() + "'");
  }
  try {
    ExperimentConfig cfg;
    cfg.name = get_or<std::string>(j, "name", cfg.name);
    cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
    cfg.n = get_or<std::size_t>(j, "n", cfg.n);
    cfg.mc_runs = get_or<std::size_t>(j, "mc_runs", cfg.mc_runs);
    cfg.B = get_or<std::size_t>(j, "B", cfg.B);
    cfg.m = get_or<std::size_t>(j, "m", cfg.m);
    cfg.model = parse_model_kind(get_or<std::string>(j, "model", to_string(cfg.model)));
    cfg.burnin = get_or<std::size_t>(j, "burnin", cfg.burnin);
    cfg.alphas = get_or<std::vector<double>>(j, "alphas", {});
    if (j.contains("changes")) {
      for (const auto& c : j.at("changes")) {
        if (!c.is_array() || c.size() != 2) throw ConfigError("each change must be a [d1, d2] pair");
        cfg.changes.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
    }
    cfg.k_star = get_or<std::size_t>(j, "k_star", cfg.k_star);
    if (j.contains("statistics")) {
      cfg.statistics.clear();
      for (const auto& s : j.at("statistics")) cfg.statistics.push_back(parse_cusum_kind(s.get<std::string>()));
    }
    cfg.block_lengths = get_or<std::vector<std::size_t>>(j, "block_lengths", cfg.block_lengths);
    cfg.adaptive = get_or<bool>(j, "adaptive", cfg.adaptive);
    cfg.levels = get_or<std::vector<double>>(j, "levels", cfg.levels);
    cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
    cfg.method = parse_block_method(get_or<std::string>(j, "method", to_string(cfg.method)));
    cfg.centering = parse_centering(get_or<std::string>(j, "centering", to_string(cfg.centering)));
    if (j.contains("bandwidth")) {
      const auto& b = j.at("bandwidth");
      cfg.bandwidth.pilot_exponent = get_or<double>(b, "pilot_exponent", cfg.bandwidth.pilot_exponent);
      cfg.bandwidth.q = get_or<double>(b, "q", cfg.bandwidth.q);
      cfg.bandwidth.constant = get_or<double>(b, "constant", cfg.bandwidth.constant);
    }
    cfg.threads = get_or<unsigned>(j, "threads", cfg.threads);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
}

json to_json(const ExperimentConfig& cfg) {
  json changes = json::array();
  for (const auto& [d1, d2] : cfg.changes) changes.push_back({d1, d2});
  json stats = json::array();
  for (auto k : cfg.statistics) stats.push_back(to_string(k));
  return {{"name", cfg.name},
          {"experiment", to_string(cfg.experiment)},
          {"n", cfg.n},
          {"mc_runs", cfg.mc_runs},
          {"B", cfg.B},
          {"m", cfg.m},
          {"model", to_string(cfg.model)},
          {"burnin", cfg.burnin},
          {"alphas", cfg.alphas},
          {"changes", changes},
          {"k_star", cfg.k_star},
          {"statistics", stats},
          {"block_lengths", cfg.block_lengths},
          {"adaptive", cfg.adaptive},
          {"levels", cfg.levels},
          {"master_seed", cfg.master_seed},
          {"method", to_string(cfg.method)},
          {"centering", to_string(cfg.centering)},
          {"bandwidth",
           {{"pilot_exponent", cfg.bandwidth.pilot_exponent},
            {"q", cfg.bandwidth.q},
            {"constant", cfg.bandwidth.constant}}}};
}

}  // namespace fcov
