#include "fone/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fone {

namespace {

std::string format_double_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("serialize_spec: bad double");
  return std::string(buf, ptr);
}

double parse_double_value(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("spec: key '" + key + "' needs a real number, got '" + value +
                                "'");
  return v;
}

std::int64_t parse_int_value(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("spec: key '" + key + "' needs an integer, got '" + value + "'");
  return v;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("spec: key '" + key + "' needs an unsigned integer, got '" +
                                value + "'");
  return v;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("spec: key '" + key + "' needs true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const char* model_name(LossKind kind) {
  switch (kind) {
    case LossKind::Logistic: return "logistic";
    case LossKind::Quantile: return "quantile";
    case LossKind::Quadratic: return "quadratic";
  }
  return "?";
}

LossKind parse_model(const std::string& v) {
  if (v == "logistic") return LossKind::Logistic;
  if (v == "quantile") return LossKind::Quantile;
  if (v == "quadratic") return LossKind::Quadratic;
  throw std::invalid_argument("spec: unknown model '" + v + "'");
}

const char* design_name(CovKind kind) {
  switch (kind) {
    case CovKind::Identity: return "identity";
    case CovKind::Toeplitz: return "toeplitz";
    case CovKind::EquiCorr: return "equicorr";
  }
  return "?";
}

CovKind parse_design(const std::string& v) {
  if (v == "identity") return CovKind::Identity;
  if (v == "toeplitz") return CovKind::Toeplitz;
  if (v == "equicorr") return CovKind::EquiCorr;
  throw std::invalid_argument("spec: unknown design '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Init: return "INIT";
    case EstimatorKind::Sgd: return "SGD";
    case EstimatorKind::Dcsgd: return "DCSGD";
    case EstimatorKind::DisFone: return "DISFONE";
    case EstimatorKind::Erm: return "ERM";
    case EstimatorKind::SigmaInvW: return "SINVW";
    case EstimatorKind::Variance: return "VARIANCE";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& name) {
  for (const EstimatorKind k :
       {EstimatorKind::Init, EstimatorKind::Sgd, EstimatorKind::Dcsgd, EstimatorKind::DisFone,
        EstimatorKind::Erm, EstimatorKind::SigmaInvW, EstimatorKind::Variance}) {
    if (name == estimator_name(k)) return k;
  }
  throw std::invalid_argument("spec: unknown estimator '" + name + "'");
}

Index resolved_rounds(const ExperimentSpec& spec) {
  if (spec.rounds >= 0) return spec.rounds;
  return spec.model == LossKind::Quantile ? 80 : 20;
}

Index resolved_n0(const ExperimentSpec& spec) { return spec.n0 > 0 ? spec.n0 : 10 * spec.p; }

bool wants(const ExperimentSpec& spec, EstimatorKind kind) {
  return std::find(spec.estimators.begin(), spec.estimators.end(), kind) !=
         spec.estimators.end();
}

void validate(const ExperimentSpec& spec) {
  std::vector<std::string> problems;
  if (spec.model == LossKind::Quantile && !(spec.tau > 0.0 && spec.tau < 1.0))
    problems.push_back("tau must lie in (0,1)");
  if (spec.p < 2) problems.push_back("p must be >= 2");
  if (!(spec.corr >= 0.0 && spec.corr < 1.0)) problems.push_back("corr must lie in [0,1)");
  if (spec.n < 1) problems.push_back("n must be >= 1");
  if (spec.machines < 1) problems.push_back("machines must be >= 1");
  if (spec.machines > spec.n) problems.push_back("machines must not exceed n");
  if (spec.n1 < 0) problems.push_back("n1 must be >= 0 (0 = even split)");
  if (spec.n1 > 0 && spec.n1 > spec.n - (spec.machines - 1))
    problems.push_back("n1 leaves no samples for the other machines");
  if (spec.batch < 0) problems.push_back("batch must be >= 0 (0 = auto)");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) problems.push_back("alpha must lie in (0,1]");
  if (spec.rounds < -1) problems.push_back("rounds must be >= 0 (-1 = auto)");
  if (spec.inner_iters < 1) problems.push_back("inner_iters must be >= 1");
  if (spec.n0 < 0) problems.push_back("n0 must be >= 0 (0 = auto)");
  if (spec.n0 > 0 && spec.n0 < spec.p) problems.push_back("n0 must be >= p");
  if (spec.reps < 1) problems.push_back("reps must be >= 1");
  if (spec.estimators.empty()) problems.push_back("estimators must be non-empty");
  if (spec.mc_draws < 10'000) problems.push_back("mc_draws must be >= 1e4");
  if (spec.tau_n < 0.0) problems.push_back("tau_n must be >= 0 (0 = auto)");
  if (spec.eta_inference < 0.0) problems.push_back("eta_inference must be >= 0 (0 = auto)");
  if (spec.t_inference < 0) problems.push_back("t_inference must be >= 0 (0 = auto)");
  if (!(spec.erm_tol > 0.0)) problems.push_back("erm_tol must be positive");
  if (spec.erm_max_iter < 1) problems.push_back("erm_max_iter must be >= 1");
  if (!(spec.quantile_step_c > 0.0)) problems.push_back("quantile_step_c must be positive");
  try {
    fone::validate(spec.grid);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg = "invalid experiment spec:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
}

std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "model = " << model_name(spec.model) << "\n";
  out << "tau = " << format_double_value(spec.tau) << "\n";
  out << "design = " << design_name(spec.design) << "\n";
  out << "corr = " << format_double_value(spec.corr) << "\n";
  out << "n = " << spec.n << "\n";
  out << "p = " << spec.p << "\n";
  out << "machines = " << spec.machines << "\n";
  out << "n1 = " << spec.n1 << "\n";
  out << "batch = " << spec.batch << "\n";
  out << "alpha = " << format_double_value(spec.alpha) << "\n";
  out << "rounds = " << spec.rounds << "\n";
  out << "inner_iters = " << spec.inner_iters << "\n";
  out << "n0 = " << spec.n0 << "\n";
  out << "reps = " << spec.reps << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "estimators = ";
  for (std::size_t i = 0; i < spec.estimators.size(); ++i)
    out << (i ? "," : "") << estimator_name(spec.estimators[i]);
  out << "\n";
  out << "grid = ";
  for (std::size_t i = 0; i < spec.grid.values.size(); ++i)
    out << (i ? "," : "") << format_double_value(spec.grid.values[i]);
  out << "\n";
  out << "fix_theta_raw = " << (spec.fix_theta_raw ? "true" : "false") << "\n";
  out << "retune_per_rep = " << (spec.retune_per_rep ? "true" : "false") << "\n";
  out << "record_timing = " << (spec.record_timing ? "true" : "false") << "\n";
  out << "mc_draws = " << spec.mc_draws << "\n";
  out << "tau_n = " << format_double_value(spec.tau_n) << "\n";
  out << "eta_inference = " << format_double_value(spec.eta_inference) << "\n";
  out << "t_inference = " << spec.t_inference << "\n";
  out << "erm_tol = " << format_double_value(spec.erm_tol) << "\n";
  out << "erm_max_iter = " << spec.erm_max_iter << "\n";
  out << "quantile_step_c = " << format_double_value(spec.quantile_step_c) << "\n";
  return out.str();
}

void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "model") spec.model = parse_model(value);
  else if (key == "tau") spec.tau = parse_double_value(key, value);
  else if (key == "design") spec.design = parse_design(value);
  else if (key == "corr") spec.corr = parse_double_value(key, value);
  else if (key == "n") spec.n = parse_int_value(key, value);
  else if (key == "p") spec.p = parse_int_value(key, value);
  else if (key == "machines") spec.machines = parse_int_value(key, value);
  else if (key == "n1") spec.n1 = parse_int_value(key, value);
  else if (key == "batch") spec.batch = parse_int_value(key, value);
  else if (key == "alpha") spec.alpha = parse_double_value(key, value);
  else if (key == "rounds") spec.rounds = parse_int_value(key, value);
  else if (key == "inner_iters") spec.inner_iters = parse_int_value(key, value);
  else if (key == "n0") spec.n0 = parse_int_value(key, value);
  else if (key == "reps") spec.reps = parse_int_value(key, value);
  else if (key == "seed") spec.seed = parse_u64_value(key, value);
  else if (key == "estimators") {
    spec.estimators.clear();
    for (const auto& name : split_list(value)) spec.estimators.push_back(parse_estimator(name));
  } else if (key == "grid") {
    spec.grid.values.clear();
    for (const auto& item : split_list(value))
      spec.grid.values.push_back(parse_double_value(key, item));
  } else if (key == "fix_theta_raw") spec.fix_theta_raw = parse_bool_value(key, value);
  else if (key == "retune_per_rep") spec.retune_per_rep = parse_bool_value(key, value);
  else if (key == "record_timing") spec.record_timing = parse_bool_value(key, value);
  else if (key == "mc_draws") spec.mc_draws = parse_int_value(key, value);
  else if (key == "tau_n") spec.tau_n = parse_double_value(key, value);
  else if (key == "eta_inference") spec.eta_inference = parse_double_value(key, value);
  else if (key == "t_inference") spec.t_inference = parse_int_value(key, value);
  else if (key == "erm_tol") spec.erm_tol = parse_double_value(key, value);
  else if (key == "erm_max_iter") spec.erm_max_iter = parse_int_value(key, value);
  else if (key == "quantile_step_c") spec.quantile_step_c = parse_double_value(key, value);
  else throw std::invalid_argument("spec: unknown key '" + key + "'");
}

ExperimentSpec parse_spec_text(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec: line " + std::to_string(line_no) +
                                  " is not 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_override(spec, key, value);
  }
  validate(spec);
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("spec: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_text(buffer.str());
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[16];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  return std::string(buf, 16);
}

std::string spec_hash(const ExperimentSpec& spec) { return fnv1a_hex(serialize_spec(spec)); }

}  // namespace fone
