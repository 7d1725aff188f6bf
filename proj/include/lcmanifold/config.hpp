#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcmanifold/analysis.hpp"
#include "lcmanifold/errors.hpp"
#include "lcmanifold/integrate.hpp"
#include "lcmanifold/model.hpp"

namespace lcm {

struct AnalysisConfig {
  double transient_cut = 0.5;
  double radius_rel_tol = 0.02;
  double angular_velocity_rel_tol = 0.02;
  double full3d_vs_reduced_rel_tol = 0.05;
};

struct OutputConfig {
  std::string directory = ".";
  bool csv = true;
  bool json = true;
};

/// Parameter grid used by the verification command.
struct VerifyGrid {
  std::vector<double> gammas{1.0, 4.0, 9.0};
  std::vector<double> lambdas{0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<double> ks{0.0, 0.5, 1.0, 2.0};
};

enum class Target { Full3D, Reduced2D, Polar };

inline Target parse_target(const std::string& name) {
  if (name == "full3d") return Target::Full3D;
  if (name == "reduced2d") return Target::Reduced2D;
  if (name == "polar") return Target::Polar;
  throw ConfigError("unknown target '" + name + "' (expected full3d|reduced2d|polar)");
}

inline const char* to_string(Target t) {
  switch (t) {
    case Target::Full3D: return "full3d";
    case Target::Reduced2D: return "reduced2d";
    default: return "polar";
  }
}

struct RunConfig {
  SystemSpec system = SystemSpec::default_coupled(4.0, 1.0);
  IntegratorConfig integrator;
  std::vector<double> initial_state;  // empty: per-target default
  AnalysisConfig analysis;
  OutputConfig output;
  VerifyGrid verify;

  void validate() const {
    system.validate();
    integrator.validate();
    if (!(analysis.transient_cut >= 0.0 && analysis.transient_cut < 1.0))
      throw ConfigError("analysis.transient_cut must lie in [0, 1)");
    if (!(analysis.radius_rel_tol > 0.0) || !(analysis.angular_velocity_rel_tol > 0.0) ||
        !(analysis.full3d_vs_reduced_rel_tol > 0.0))
      throw ConfigError("analysis tolerances must be positive");
    if (!initial_state.empty() && initial_state.size() != 2 && initial_state.size() != 3)
      throw ConfigError("initial_state must have 2 or 3 components");
    for (double v : initial_state)
      if (!std::isfinite(v)) throw ConfigError("initial_state must be finite");
    if (output.directory.empty()) throw ConfigError("output.directory must not be empty");
  }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

inline double get_number(const json& obj, const char* key, double fallback,
                         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

inline QuadCoeffs get_coeffs(const json& obj, const char* key, const QuadCoeffs& fallback,
                             const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 6)
    throw ConfigError(where + "." + key + " must be an array of 6 numbers");
  QuadCoeffs out{};
  for (int i = 0; i < 6; ++i) {
    if (!v[i].is_number()) throw ConfigError(where + "." + key + " must contain numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

inline std::vector<double> get_number_array(const json& obj, const char* key,
                                            const std::vector<double>& fallback,
                                            const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(where + "." + key + " must contain numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& root) {
  using detail::json;
  RunConfig cfg;
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  detail::reject_unknown_keys(root, {"system", "integrator", "analysis", "output", "verify"},
                              "config");

  if (root.contains("system")) {
    const json& sys = root.at("system");
    detail::reject_unknown_keys(sys, {"kind", "gamma", "k", "lambda", "c", "d", "e"},
                                "system");
    if (sys.contains("kind")) {
      const std::string kind = sys.at("kind").get<std::string>();
      if (kind == "lambda_omega")
        cfg.system.kind = SystemKind::LambdaOmega3D;
      else if (kind == "lienard")
        cfg.system.kind = SystemKind::Lienard3D;
      else
        throw ConfigError("system.kind must be 'lambda_omega' or 'lienard', got '" + kind +
                          "'");
    }
    cfg.system.gamma = detail::get_number(sys, "gamma", cfg.system.gamma, "system");
    cfg.system.k = detail::get_number(sys, "k", cfg.system.k, "system");
    cfg.system.lambda_stable =
        detail::get_number(sys, "lambda", cfg.system.lambda_stable, "system");
    cfg.system.c = detail::get_coeffs(sys, "c", cfg.system.c, "system");
    cfg.system.d = detail::get_coeffs(sys, "d", cfg.system.d, "system");
    cfg.system.e = detail::get_coeffs(sys, "e", cfg.system.e, "system");
  }

  if (root.contains("integrator")) {
    const json& integ = root.at("integrator");
    detail::reject_unknown_keys(
        integ, {"method", "tol", "step", "t_end", "sample_interval", "initial_state"},
        "integrator");
    if (integ.contains("method")) {
      const std::string method = integ.at("method").get<std::string>();
      if (method == "rk4")
        cfg.integrator.method = StepMethod::RK4;
      else if (method == "rk45")
        cfg.integrator.method = StepMethod::RK45;
      else
        throw ConfigError("integrator.method must be 'rk4' or 'rk45', got '" + method + "'");
    }
    cfg.integrator.tol = detail::get_number(integ, "tol", cfg.integrator.tol, "integrator");
    cfg.integrator.step = detail::get_number(integ, "step", cfg.integrator.step, "integrator");
    cfg.integrator.t_end =
        detail::get_number(integ, "t_end", cfg.integrator.t_end, "integrator");
    cfg.integrator.sample_interval = detail::get_number(
        integ, "sample_interval", cfg.integrator.sample_interval, "integrator");
    cfg.initial_state =
        detail::get_number_array(integ, "initial_state", cfg.initial_state, "integrator");
  }

  if (root.contains("analysis")) {
    const json& ana = root.at("analysis");
    detail::reject_unknown_keys(ana, {"transient_cut", "tolerances"}, "analysis");
    cfg.analysis.transient_cut =
        detail::get_number(ana, "transient_cut", cfg.analysis.transient_cut, "analysis");
    if (ana.contains("tolerances")) {
      const json& tol = ana.at("tolerances");
      detail::reject_unknown_keys(
          tol, {"radius_rel", "angular_velocity_rel", "full3d_vs_reduced_rel"},
          "analysis.tolerances");
      cfg.analysis.radius_rel_tol = detail::get_number(tol, "radius_rel",
                                                       cfg.analysis.radius_rel_tol,
                                                       "analysis.tolerances");
      cfg.analysis.angular_velocity_rel_tol =
          detail::get_number(tol, "angular_velocity_rel",
                             cfg.analysis.angular_velocity_rel_tol, "analysis.tolerances");
      cfg.analysis.full3d_vs_reduced_rel_tol =
          detail::get_number(tol, "full3d_vs_reduced_rel",
                             cfg.analysis.full3d_vs_reduced_rel_tol, "analysis.tolerances");
    }
  }

  if (root.contains("output")) {
    const json& out = root.at("output");
    detail::reject_unknown_keys(out, {"directory", "formats"}, "output");
    if (out.contains("directory")) cfg.output.directory = out.at("directory").get<std::string>();
    if (out.contains("formats")) {
      const json& formats = out.at("formats");
      if (!formats.is_array()) throw ConfigError("output.formats must be an array");
      cfg.output.csv = false;
      cfg.output.json = false;
      for (const auto& f : formats) {
        const std::string name = f.get<std::string>();
        if (name == "csv")
          cfg.output.csv = true;
        else if (name == "json")
          cfg.output.json = true;
        else
          throw ConfigError("output.formats entries must be 'csv' or 'json', got '" + name +
                            "'");
      }
    }
  }

  if (root.contains("verify")) {
    const json& ver = root.at("verify");
    detail::reject_unknown_keys(ver, {"gammas", "lambdas", "ks"}, "verify");
    cfg.verify.gammas = detail::get_number_array(ver, "gammas", cfg.verify.gammas, "verify");
    cfg.verify.lambdas =
        detail::get_number_array(ver, "lambdas", cfg.verify.lambdas, "verify");
    cfg.verify.ks = detail::get_number_array(ver, "ks", cfg.verify.ks, "verify");
  }

  cfg.validate();
  return cfg;
}

/// Load a config document; "-" reads standard input.
inline RunConfig load_config(const std::string& path) {
  nlohmann::json root;
  try {
    if (path == "-") {
      root = nlohmann::json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open config file " + path);
      root = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError("config is not valid JSON: " + std::string(err.what()));
  }
  return parse_config(root);
}

}  // namespace lcm
