#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "lcmanifold/analysis.hpp"
#include "lcmanifold/config.hpp"
#include "lcmanifold/dynamics.hpp"
#include "lcmanifold/io.hpp"

namespace lcm {

namespace detail {

/// Upper bound on theta' over the invariant region, used to require that
/// sampling resolves less than half a rotation per interval (the angle
/// unwrap continues on the nearest branch).
inline double theta_rate_bound(const SystemSpec& spec, double initial_radius) {
  const double g = std::max(spec.gamma, 0.0);
  const double r = std::max({3.0 * std::sqrt(g), 2.0 * initial_radius, 1.0});
  const double s = spec.lambda_stable + 2.0 * spec.gamma;
  const double denom = lambda_omega_denominator(spec.gamma, spec.lambda_stable);
  return 1.0 + r * r * (1.0 + 0.5 * s) / denom;
}

inline void require_polar_sampling(const RunConfig& cfg, double initial_radius) {
  const double bound = theta_rate_bound(cfg.system, initial_radius);
  if (!(cfg.integrator.sample_interval * bound < std::numbers::pi))
    throw ConfigError("sample_interval " + std::to_string(cfg.integrator.sample_interval) +
                      " too coarse to unwrap angles (rate bound " + std::to_string(bound) +
                      ")");
}

inline State3 initial_state3(const RunConfig& cfg) {
  if (cfg.initial_state.empty()) return {0.5, 0.0, 0.0};
  if (cfg.initial_state.size() != 3)
    throw ConfigError("full3d target needs a 3-component initial_state");
  return {cfg.initial_state[0], cfg.initial_state[1], cfg.initial_state[2]};
}

inline Vec2 initial_state2(const RunConfig& cfg, Target target) {
  if (cfg.initial_state.empty()) return {0.5, 0.0};
  if (cfg.initial_state.size() != 2)
    throw ConfigError(std::string(to_string(target)) +
                      " target needs a 2-component initial_state");
  return {cfg.initial_state[0], cfg.initial_state[1]};
}

inline void require_lambda_omega(const RunConfig& cfg, const char* what) {
  if (cfg.system.kind != SystemKind::LambdaOmega3D)
    throw ConfigError(std::string(what) + " requires system.kind = lambda_omega");
}

}  // namespace detail

/// Simulate one target family into an in-memory polar series (reduced2d and
/// polar targets) used by analyze and sweep.
inline PolarSeries simulate_polar_series(const RunConfig& cfg, Target target) {
  cfg.validate();
  switch (target) {
    case Target::Reduced2D: {
      detail::require_lambda_omega(cfg, "reduced2d simulation");
      const Vec2 start = detail::initial_state2(cfg, target);
      detail::require_polar_sampling(cfg, std::hypot(start.x, start.y));
      const ManifoldQuadratic m = solve_manifold(cfg.system);
      const double g = cfg.system.gamma;
      auto rhs = [g, m](const Vec2& p) { return reduced_rhs(g, m, p); };
      return to_polar(integrate(rhs, start, cfg.integrator));
    }
    case Target::Polar: {
      detail::require_lambda_omega(cfg, "polar simulation");
      const Vec2 start = detail::initial_state2(cfg, target);
      if (!(start.x >= 0.0)) throw ConfigError("polar initial radius must be nonnegative");
      const double g = cfg.system.gamma;
      const double l = cfg.system.lambda_stable;
      auto rhs = [g, l](const Vec2& p) {
        const PolarDerivative d = polar_rhs(g, l, p.x, p.y);
        return Vec2{d.R_dot, d.theta_dot};
      };
      return polar_series_from_polar_trajectory(integrate(rhs, start, cfg.integrator));
    }
    default: {
      const State3 start = detail::initial_state3(cfg);
      const SystemSpec spec = cfg.system;
      auto rhs = [&spec](const State3& s) { return full_rhs(spec, s); };
      const Trajectory<State3> traj = integrate(rhs, start, cfg.integrator);
      Trajectory<Vec2> planar;
      planar.times = traj.times;
      planar.states.reserve(traj.size());
      for (const State3& s : traj.states) planar.states.push_back({s.x, s.y});
      return to_polar(planar);
    }
  }
}

struct ManifoldResult {
  ManifoldQuadratic generic;
  ManifoldQuadratic closed;
  bool closed_form_available = false;
  double max_discrepancy = 0.0;
};

inline ManifoldResult compute_manifold(const SystemSpec& spec) {
  ManifoldResult res;
  res.generic = solve_manifold(spec);
  // The closed forms cover e0 = e1 = 0 (scaled linearly by e3).
  if (spec.e[0] == 0.0 && spec.e[1] == 0.0) {
    res.closed_form_available = true;
    res.closed = spec.kind == SystemKind::LambdaOmega3D
                     ? lambda_omega_manifold_closed_form(spec.gamma, spec.lambda_stable,
                                                         spec.e[3])
                     : lienard_manifold_closed_form(spec.k, spec.lambda_stable, spec.e[3]);
    res.max_discrepancy = std::max({std::abs(res.generic.a0 - res.closed.a0),
                                    std::abs(res.generic.a1 - res.closed.a1),
                                    std::abs(res.generic.a2 - res.closed.a2)});
  }
  return res;
}

inline std::string manifold_json(const SystemSpec& spec, const ManifoldResult& res) {
  std::string s = "{\n";
  s += "  \"kind\": \"";
  s += spec.kind == SystemKind::LambdaOmega3D ? "lambda_omega" : "lienard";
  s += "\",\n";
  if (spec.kind == SystemKind::LambdaOmega3D)
    s += "  \"gamma\": " + format_double(spec.gamma) + ",\n";
  else
    s += "  \"k\": " + format_double(spec.k) + ",\n";
  s += "  \"lambda\": " + format_double(spec.lambda_stable) + ",\n";
  s += "  \"a0\": " + format_double(res.generic.a0) + ",\n";
  s += "  \"a1\": " + format_double(res.generic.a1) + ",\n";
  s += "  \"a2\": " + format_double(res.generic.a2) + ",\n";
  if (res.closed_form_available) {
    s += "  \"closed_form\": {\"a0\": " + format_double(res.closed.a0) +
         ", \"a1\": " + format_double(res.closed.a1) +
         ", \"a2\": " + format_double(res.closed.a2) + "},\n";
    s += "  \"max_disc\": " + format_double(res.max_discrepancy) + "\n";
  } else {
    s += "  \"closed_form\": null,\n";
    s += "  \"max_disc\": null\n";
  }
  s += "}\n";
  return s;
}

/// Print both solve paths and their discrepancy; write manifold.json.
inline int cmd_manifold(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const ManifoldResult res = compute_manifold(cfg.system);
  out << "generic solve:  a0=" << format_double(res.generic.a0)
      << "  a1=" << format_double(res.generic.a1)
      << "  a2=" << format_double(res.generic.a2) << "\n";
  if (res.closed_form_available) {
    out << "closed form:    a0=" << format_double(res.closed.a0)
        << "  a1=" << format_double(res.closed.a1)
        << "  a2=" << format_double(res.closed.a2) << "\n";
    out << "max discrepancy: " << format_double(res.max_discrepancy) << "\n";
  } else {
    out << "closed form:    n/a (requires e0 = e1 = 0)\n";
  }
  const std::string doc = manifold_json(cfg.system, res);
  if (cfg.output.json) {
    std::filesystem::create_directories(cfg.output.directory);
    const auto path = std::filesystem::path(cfg.output.directory) / "manifold.json";
    write_file_atomic(path, [&](std::ostream& f) { f << doc; });
    out << "wrote " << path.string() << "\n";
  }
  out << doc;
  return exit_ok;
}

/// Integrate the chosen target and emit its trajectory CSV
/// (t,x,y,z for full3d; t,R,theta otherwise).
inline int cmd_simulate(const RunConfig& cfg, Target target, std::ostream& out) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output.directory);
  const auto path = std::filesystem::path(cfg.output.directory) /
                    (std::string("trajectory_") + to_string(target) + ".csv");
  if (target == Target::Full3D) {
    const State3 start = detail::initial_state3(cfg);
    const SystemSpec spec = cfg.system;
    auto rhs = [&spec](const State3& s) { return full_rhs(spec, s); };
    const Trajectory<State3> traj = integrate(rhs, start, cfg.integrator);
    write_csv_full3d(path, traj);
    out << "wrote " << path.string() << " (" << traj.size() << " samples)\n";
  } else {
    const PolarSeries series = simulate_polar_series(cfg, target);
    write_csv_polar(path, series);
    out << "wrote " << path.string() << " (" << series.size() << " samples)\n";
  }
  return exit_ok;
}

inline std::string report_json(const AnalysisReport& rep) {
  std::string s = "{\n";
  s += "  \"gamma\": " + format_double(rep.gamma) + ",\n";
  s += "  \"lambda\": " + format_double(rep.lambda) + ",\n";
  s += "  \"transient_cut\": " + format_double(rep.transient_cut) + ",\n";
  s += "  \"base_radius\": " + format_double(rep.base_radius) + ",\n";
  s += "  \"predicted_radius\": " + format_double(rep.predicted_radius) + ",\n";
  s += "  \"predicted_angular_velocity\": " + format_double(rep.predicted_angular_velocity) +
       ",\n";
  s += "  \"predicted_period\": " + format_double(rep.predicted_period) + ",\n";
  s += "  \"measured_mean_radius\": " + format_double(rep.measured_mean_radius) + ",\n";
  s += "  \"measured_angular_velocity\": " + format_double(rep.measured_angular_velocity) +
       ",\n";
  s += "  \"oscillations_per_cycle\": " + std::to_string(rep.oscillations_per_cycle) + ",\n";
  s += "  \"relative_errors\": {\"mean_radius\": " + format_double(rep.relative_error_radius) +
       ", \"angular_velocity\": " + format_double(rep.relative_error_angular_velocity) +
       "}\n";
  s += "}\n";
  return s;
}

/// Analyze a trajectory CSV, or run the configured simulation end-to-end
/// when no input file is given; emits report.json.
inline int cmd_analyze(const RunConfig& cfg, const std::optional<std::string>& input_csv,
                       Target target, std::ostream& out) {
  cfg.validate();
  detail::require_lambda_omega(cfg, "analyze");
  const PolarSeries series =
      input_csv ? load_polar_csv(*input_csv) : simulate_polar_series(cfg, target);
  const AnalysisReport rep = analyze(series, cfg.system.gamma, cfg.system.lambda_stable,
                                     cfg.analysis.transient_cut);
  const std::string doc = report_json(rep);
  if (cfg.output.json) {
    std::filesystem::create_directories(cfg.output.directory);
    const auto path = std::filesystem::path(cfg.output.directory) / "report.json";
    write_file_atomic(path, [&](std::ostream& f) { f << doc; });
    out << "wrote " << path.string() << "\n";
  }
  out << doc;
  return exit_ok;
}

/// One row of the sweep table.
struct SweepRow {
  double lambda = 0.0;
  double predicted = 0.0;
  double simulated = 0.0;
};

struct SweepRange {
  double lambda_min = 1.0;
  double lambda_max = 10.0;
  int steps = 10;
};

inline int sweep_thread_budget(int rows) {
  unsigned hw = std::thread::hardware_concurrency();
  int budget = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("LCMANIFOLD_THREADS")) {
    try {
      budget = std::max(1, std::stoi(env));
    } catch (...) {
      throw ConfigError("LCMANIFOLD_THREADS must be a positive integer");
    }
  }
  return std::max(1, std::min(budget, rows));
}

/// Predicted vs simulated modified radius across a lambda range at fixed
/// gamma. Rows are computed independently (optionally in parallel) and
/// always written in parameter order.
inline int cmd_sweep(const RunConfig& cfg, const SweepRange& range, std::ostream& out) {
  cfg.validate();
  detail::require_lambda_omega(cfg, "sweep");
  if (range.steps < 0) throw ConfigError("lambda-steps must be nonnegative");
  if (range.steps > 0 && (!(range.lambda_min > 0.0) || !(range.lambda_max >= range.lambda_min)))
    throw ConfigError("lambda range must satisfy 0 < lambda-min <= lambda-max");

  std::vector<double> lambdas;
  for (int i = 0; i < range.steps; ++i)
    lambdas.push_back(range.steps == 1 ? range.lambda_min
                                       : range.lambda_min + (range.lambda_max - range.lambda_min) *
                                                                i / (range.steps - 1));

  std::vector<SweepRow> rows(lambdas.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        RunConfig local = cfg;
        local.system.lambda_stable = lambdas[i];
        rows[i].lambda = lambdas[i];
        rows[i].predicted = predicted_radius(local.system.gamma, lambdas[i]);
        const PolarSeries series = simulate_polar_series(local, Target::Reduced2D);
        rows[i].simulated = estimate_mean_radius(series, local.analysis.transient_cut);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int threads = sweep_thread_budget(static_cast<int>(lambdas.size()));
  if (threads <= 1 || lambdas.size() <= 1) {
    work(0, lambdas.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (lambdas.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(lambdas.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::filesystem::create_directories(cfg.output.directory);
  const auto path = std::filesystem::path(cfg.output.directory) / "sweep.csv";
  write_file_atomic(path, [&](std::ostream& f) {
    f << "lambda,predicted_radius,simulated_radius\n";
    for (const SweepRow& row : rows)
      f << format_double(row.lambda) << ',' << format_double(row.predicted) << ','
        << format_double(row.simulated) << '\n';
  });
  out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
  return exit_ok;
}

}  // namespace lcm
