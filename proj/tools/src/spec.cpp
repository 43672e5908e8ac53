#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ign/error.hpp"
#include "ign_bench/bench.hpp"

namespace ign::bench {

using nlohmann::json;

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      fail(ErrorCode::ParseError, std::string("unknown key '") + key + "' in " + where);
    }
  }
}

MethodSpec method_from_json(const json& j) {
  if (j.is_string()) return parse_method_spec(j.get<std::string>());
  if (!j.is_object()) fail(ErrorCode::ParseError, "method entries must be strings or objects");
  reject_unknown(j, {"method", "k", "step_scale", "forgetting"}, "method entry");
  std::string name;
  read_key(j, "method", name);
  MethodSpec m = parse_method_spec(name);
  read_key(j, "k", m.k);
  read_key(j, "step_scale", m.ekf.step_scale);
  read_key(j, "forgetting", m.ekf.forgetting);
  return m;
}

}  // namespace

nlohmann::json ProblemSpec::to_json() const {
  json j = {{"name", name}, {"d", d}, {"samples", samples}};
  if (name == "chandrasekhar") j["c"] = c;
  if (name == "logistic") {
    j["theta"] = theta;
    j["nu_reg"] = nu_reg;
    if (data_path.empty()) {
      j["label_noise"] = label_noise;
    } else {
      j["data"] = data_path;
    }
  }
  if (name == "softmax") {
    j["mu_smooth"] = mu_smooth;
    j["lambda_reg"] = lambda_reg;
  }
  return j;
}

std::string MethodSpec::label() const {
  std::string out(to_string(method));
  if (method == Method::MbIgn) out += ":" + std::to_string(k);
  if (method == Method::Ekf || method == Method::EkfS) {
    const EkfSchedule defaults{};
    std::ostringstream extra;
    if (method == Method::EkfS && ekf.step_scale != defaults.step_scale) {
      extra << ":a=" << ekf.step_scale;
    }
    if (ekf.forgetting != defaults.forgetting) extra << ":lambda=" << ekf.forgetting;
    out += extra.str();
  }
  return out;
}

MethodSpec parse_method_spec(std::string_view text) {
  MethodSpec m;
  const auto colon = text.find(':');
  m.method = parse_method(text.substr(0, colon));
  if (colon == std::string_view::npos) {
    if (m.method == Method::MbIgn) fail(ErrorCode::ParamOutOfRange, "mb-ign needs a batch size, e.g. mb-ign:10");
    return m;
  }
  if (m.method != Method::MbIgn) {
    fail(ErrorCode::ParamOutOfRange, "only mb-ign takes a batch size: '" + std::string(text) + "'");
  }
  const std::string k(text.substr(colon + 1));
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(k, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != k.size() || k.empty() || k[0] == '-' || value == 0) {
    fail(ErrorCode::ParamOutOfRange, "bad batch size in '" + std::string(text) + "'");
  }
  m.k = static_cast<std::size_t>(value);
  return m;
}

void RunSpec::validate() const {
  if (methods.empty()) fail(ErrorCode::ParamOutOfRange, "at least one method is required");
  std::set<std::string> labels;
  for (const auto& m : methods) {
    solver_config(m).validate();
    if (!labels.insert(m.label()).second) {
      fail(ErrorCode::ParamOutOfRange, "method '" + m.label() + "' listed twice");
    }
  }
  if (name.empty() || name.find('/') != std::string::npos) {
    fail(ErrorCode::ParamOutOfRange, "run name must be a plain file stem");
  }
}

SolverConfig RunSpec::solver_config(const MethodSpec& m) const {
  SolverConfig cfg;
  cfg.batch_size = m.method == Method::MbIgn ? m.k : 1;
  cfg.tol = tol;
  cfg.max_epochs = max_epochs;
  cfg.refresh_period = refresh_period;
  cfg.drift_tol = drift_tol;
  cfg.seed = seed;
  cfg.ekf = m.ekf;
  return cfg;
}

void apply_json(RunSpec& spec, const json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "config root must be an object");
  reject_unknown(j, {"problem", "methods", "x0", "tol", "max_epochs", "seed", "refresh_period",
                     "drift_tol", "output_dir", "name"},
                 "config");
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    if (!p.is_object()) fail(ErrorCode::ParseError, "'problem' must be an object");
    reject_unknown(p, {"name", "d", "samples", "c", "theta", "nu_reg", "mu_smooth", "lambda_reg",
                       "label_noise", "data"},
                   "problem");
    read_key(p, "name", spec.problem.name);
    read_key(p, "d", spec.problem.d);
    read_key(p, "samples", spec.problem.samples);
    read_key(p, "c", spec.problem.c);
    read_key(p, "theta", spec.problem.theta);
    read_key(p, "nu_reg", spec.problem.nu_reg);
    read_key(p, "mu_smooth", spec.problem.mu_smooth);
    read_key(p, "lambda_reg", spec.problem.lambda_reg);
    read_key(p, "label_noise", spec.problem.label_noise);
    read_key(p, "data", spec.problem.data_path);
  }
  if (j.contains("methods")) {
    const json& ms = j.at("methods");
    if (!ms.is_array()) fail(ErrorCode::ParseError, "'methods' must be an array");
    spec.methods.clear();
    for (const auto& m : ms) spec.methods.push_back(method_from_json(m));
  }
  read_key(j, "x0", spec.x0);
  read_key(j, "tol", spec.tol);
  read_key(j, "max_epochs", spec.max_epochs);
  read_key(j, "seed", spec.seed);
  read_key(j, "refresh_period", spec.refresh_period);
  read_key(j, "drift_tol", spec.drift_tol);
  std::string dir;
  read_key(j, "output_dir", dir);
  if (!dir.empty()) spec.output_dir = dir;
  read_key(j, "name", spec.name);
}

RunSpec load_run_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  RunSpec spec;
  apply_json(spec, j);
  return spec;
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& configured) {
  if (const char* env = std::getenv("IGN_BENCH_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return configured;
}

}  // namespace ign::bench
