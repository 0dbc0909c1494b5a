#pragma once

// Run configuration: flat `key = value` lines with dotted keys. Values are
// JSON literals (numbers, strings, arrays); a bare word is read as a string.
// Lines starting with '#' are comments. Unknown keys are rejected.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cnls/coupled_solver.hpp"
#include "cnls/error.hpp"
#include "cnls/nonlinearity.hpp"
#include "cnls/scalar_solver.hpp"

namespace cnls {

struct RunConfig {
  double grid_R = 20.0;
  int grid_N = 4000;
  std::optional<Nonlinearity> f;
  std::optional<Nonlinearity> g;
  std::optional<double> beta;
  std::optional<std::vector<double>> beta_list;
  SolveConfig solver;
  ShootingConfig shooting;
  std::string output_dir = ".";
  std::optional<double> bisect_tol;
};

namespace detail {

using json = nlohmann::json;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline json parse_value(const std::string& raw) {
  json v = json::parse(raw, nullptr, false);
  if (v.is_discarded()) return json(raw);
  return v;
}

inline double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, key + ": expected a number");
  return v.get<double>();
}

inline int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw Error(ErrorCode::ConfigError, key + ": expected an integer");
  return v.get<int>();
}

inline std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw Error(ErrorCode::ConfigError, key + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> as_number_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw Error(ErrorCode::ConfigError, key + ": expected a list");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_number(x, key));
  return out;
}

inline InitStrategy parse_init(const std::string& s) {
  if (s == "scalar_pair") return InitStrategy::scalar_pair;
  if (s == "perturbed_scalar") return InitStrategy::perturbed_scalar;
  if (s == "random_gaussians") return InitStrategy::random_gaussians;
  throw Error(ErrorCode::ConfigError, "solver.init: unknown strategy '" + s + "'");
}

// Builds a nonlinearity from the keys under one prefix ("f" or "g").
inline std::optional<Nonlinearity> build_nonlinearity(const std::string& prefix, const std::map<std::string, json>& kv) {
  const auto family = kv.find(prefix + ".family");
  const auto terms = kv.find(prefix + ".terms");
  const auto amplitude = kv.find(prefix + ".amplitude");
  if (family == kv.end()) {
    if (terms != kv.end() || amplitude != kv.end()) {
      throw Error(ErrorCode::ConfigError, "missing " + prefix + ".family");
    }
    return std::nullopt;
  }
  const auto name = as_string(family->second, prefix + ".family");
  if (name == "power_sum") {
    if (amplitude != kv.end()) throw Error(ErrorCode::ConfigError, prefix + ".amplitude is not a power_sum key");
    if (terms == kv.end()) throw Error(ErrorCode::ConfigError, "missing " + prefix + ".terms");
    if (!terms->second.is_array()) throw Error(ErrorCode::ConfigError, prefix + ".terms: expected [[a,p],...]");
    std::vector<PowerTerm> list;
    for (const auto& t : terms->second) {
      if (!t.is_array() || t.size() != 2) throw Error(ErrorCode::ConfigError, prefix + ".terms: expected [[a,p],...]");
      list.push_back({as_number(t[0], prefix + ".terms"), as_number(t[1], prefix + ".terms")});
    }
    return Nonlinearity::power_sum(std::move(list));
  }
  if (name == "log_enhanced") {
    if (terms != kv.end()) throw Error(ErrorCode::ConfigError, prefix + ".terms is not a log_enhanced key");
    if (amplitude == kv.end()) throw Error(ErrorCode::ConfigError, "missing " + prefix + ".amplitude");
    return Nonlinearity::log_enhanced(as_number(amplitude->second, prefix + ".amplitude"));
  }
  throw Error(ErrorCode::ConfigError, prefix + ".family: unknown family '" + name + "'");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  std::map<std::string, json> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key or value");
    }
    if (kv.contains(key)) throw Error(ErrorCode::ConfigError, "duplicate key " + key);
    kv[key] = detail::parse_value(value);
  }

  static const std::set<std::string> known = {
      "grid.R", "grid.N", "f.family", "f.terms", "f.amplitude", "g.family", "g.terms", "g.amplitude", "beta",
      "beta_list", "solver.max_iters", "solver.grad_tol", "solver.step", "solver.backtrack", "solver.armijo",
      "solver.stall_tol", "solver.init", "solver.classify_tol", "solver.random_starts", "shooting.a_min", "shooting.a_max",
      "shooting.ode_step", "shooting.max_bisect", "shooting.classify_radius", "output.dir", "seed",
      "sweep.bisect_tol"};
  for (const auto& [key, value] : kv) {
    if (!known.contains(key)) throw Error(ErrorCode::ConfigError, "unknown key " + key);
  }

  RunConfig cfg;
  auto get = [&](const std::string& key) -> const json* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("grid.R")) cfg.grid_R = detail::as_number(*v, "grid.R");
  if (auto v = get("grid.N")) cfg.grid_N = detail::as_int(*v, "grid.N");
  cfg.f = detail::build_nonlinearity("f", kv);
  cfg.g = detail::build_nonlinearity("g", kv);
  if (auto v = get("beta")) cfg.beta = detail::as_number(*v, "beta");
  if (auto v = get("beta_list")) cfg.beta_list = detail::as_number_list(*v, "beta_list");
  if (auto v = get("solver.max_iters")) cfg.solver.max_iters = detail::as_int(*v, "solver.max_iters");
  if (auto v = get("solver.grad_tol")) cfg.solver.grad_tol = detail::as_number(*v, "solver.grad_tol");
  if (auto v = get("solver.step")) cfg.solver.step = detail::as_number(*v, "solver.step");
  if (auto v = get("solver.backtrack")) cfg.solver.backtrack = detail::as_number(*v, "solver.backtrack");
  if (auto v = get("solver.armijo")) cfg.solver.armijo = detail::as_number(*v, "solver.armijo");
  if (auto v = get("solver.stall_tol")) cfg.solver.stall_tol = detail::as_number(*v, "solver.stall_tol");
  if (auto v = get("solver.classify_tol")) cfg.solver.classify_tol = detail::as_number(*v, "solver.classify_tol");
  if (auto v = get("solver.random_starts")) cfg.solver.random_starts = detail::as_int(*v, "solver.random_starts");
  if (auto v = get("solver.init")) {
    cfg.solver.init.clear();
    if (v->is_array()) {
      for (const auto& s : *v) cfg.solver.init.insert(detail::parse_init(detail::as_string(s, "solver.init")));
    } else {
      cfg.solver.init.insert(detail::parse_init(detail::as_string(*v, "solver.init")));
    }
  }
  if (auto v = get("shooting.a_min")) cfg.shooting.a_min = detail::as_number(*v, "shooting.a_min");
  if (auto v = get("shooting.a_max")) cfg.shooting.a_max = detail::as_number(*v, "shooting.a_max");
  if (auto v = get("shooting.ode_step")) cfg.shooting.ode_step = detail::as_number(*v, "shooting.ode_step");
  if (auto v = get("shooting.max_bisect")) cfg.shooting.max_bisect = detail::as_int(*v, "shooting.max_bisect");
  if (auto v = get("shooting.classify_radius")) {
    cfg.shooting.classify_radius = detail::as_number(*v, "shooting.classify_radius");
  }
  if (auto v = get("output.dir")) cfg.output_dir = detail::as_string(*v, "output.dir");
  if (auto v = get("seed")) {
    if (!v->is_number_unsigned()) throw Error(ErrorCode::ConfigError, "seed: expected a nonnegative integer");
    cfg.solver.seed = v->get<unsigned long long>();
  }
  if (auto v = get("sweep.bisect_tol")) cfg.bisect_tol = detail::as_number(*v, "sweep.bisect_tol");

  if (cfg.grid_N < 64 || !(cfg.grid_R > 0.0)) throw Error(ErrorCode::ConfigError, "grid needs R > 0 and N >= 64");
  return cfg;
}

}  // namespace cnls
