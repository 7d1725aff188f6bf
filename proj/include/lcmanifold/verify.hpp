#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lcmanifold/analysis.hpp"
#include "lcmanifold/commands.hpp"
#include "lcmanifold/config.hpp"
#include "lcmanifold/dynamics.hpp"
#include "lcmanifold/manifold.hpp"

namespace lcm {

/// One verification check. `margin` is the worst slack against the check's
/// threshold: positive means pass with room to spare.
struct CheckResult {
  std::string id;       // e.g. "5b"
  int criterion = 0;    // 1..11
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct VerifyOptions {
  VerifyGrid grid;
  /// Fault-injection hook: scales the closed-form denominator D used by the
  /// radius predictions inside the checks. Anything but 1 must break the
  /// radius checks against the quadrature oracle and the simulations.
  double denominator_scale = 1.0;
};

namespace detail {

inline RunConfig reduced_run_config(double gamma, double lambda) {
  RunConfig cfg;
  cfg.system = SystemSpec::default_coupled(gamma, lambda);
  cfg.integrator.method = StepMethod::RK45;
  cfg.integrator.tol = 1e-9;
  cfg.integrator.t_end = 200.0;
  cfg.integrator.sample_interval = 0.01;
  cfg.initial_state = {0.5, 0.0};
  cfg.analysis.transient_cut = 0.5;
  return cfg;
}

inline double max_coeff_gap(const ManifoldQuadratic& a, const ManifoldQuadratic& b) {
  return std::max({std::abs(a.a0 - b.a0), std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2)});
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Plain post-transient time average, with no rotation bookkeeping; used
/// only for diagnostics when the trimmed estimator cannot run.
inline double untrimmed_mean_radius(const PolarSeries& series, double cut) {
  const std::size_t i0 = detail::post_transient_index(series, cut);
  double integral = 0.0;
  for (std::size_t i = i0; i + 1 < series.size(); ++i)
    integral += 0.5 * (series.R[i] + series.R[i + 1]) *
                (series.times[i + 1] - series.times[i]);
  return integral / (series.times.back() - series.times[i0]);
}

inline std::filesystem::path make_scratch_dir() {
  std::random_device rd;
  std::uniform_int_distribution<unsigned long long> dist;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("lcmanifold-verify-" + std::to_string(dist(rd)));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

/// Run the full verification battery. Grid-driven checks take their
/// parameter sets from `opts.grid`; the remaining checks pin the exact
/// values and tolerances they were specified with.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  if (opts.grid.gammas.empty() || opts.grid.lambdas.empty() || opts.grid.ks.empty())
    throw ConfigError("verification grid must not be empty");
  for (double g : opts.grid.gammas)
    if (!(g > 0.0)) throw ConfigError("verification gammas must be positive");
  for (double l : opts.grid.lambdas)
    if (!(l > 0.0)) throw ConfigError("verification lambdas must be positive");

  std::vector<CheckResult> results;
  auto add = [&](std::string id, int criterion, std::string name, bool pass, double margin,
                 std::string detail) {
    results.push_back({std::move(id), criterion, std::move(name), pass, margin,
                       std::move(detail)});
  };
  const double scale = opts.denominator_scale;

  // 1. Closed forms against the generic linear solve.
  {
    const std::vector<double> gammas{0.5, 1.0, 2.0, 4.0, 9.0};
    const std::vector<double> lambdas{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    double worst = 0.0;
    for (double g : gammas)
      for (double l : lambdas)
        worst = std::max(worst,
                         detail::max_coeff_gap(solve_lambda_omega_manifold(g, l, 0, 0, 1),
                                               lambda_omega_manifold_closed_form(g, l)));
    add("1a", 1, "lambda-omega closed form vs generic solve", worst <= 1e-12,
        1e-12 - worst, "worst coefficient gap " + detail::fmt(worst) + " (tol 1e-12)");

    const std::vector<double> ks{0.0, 0.5, 1.0, 2.0};
    worst = 0.0;
    for (double k : ks)
      for (double l : lambdas)
        worst = std::max(worst, detail::max_coeff_gap(solve_lienard_manifold(k, l, 0, 0, 1),
                                                      lienard_manifold_closed_form(k, l)));
    add("1b", 1, "Lienard closed form vs generic solve", worst <= 1e-12, 1e-12 - worst,
        "worst coefficient gap " + detail::fmt(worst) + " (tol 1e-12)");

    const ManifoldQuadratic spot = solve_lambda_omega_manifold(4.0, 1.0, 0, 0, 1);
    const ManifoldQuadratic expect{-1.0 / 85.0, 9.0 / 85.0, 1.0 / 85.0};
    const double gap = detail::max_coeff_gap(spot, expect);
    add("1c", 1, "spot value (gamma=4, lambda=1) = (-1/85, 9/85, 1/85)", gap <= 1e-12,
        1e-12 - gap, "gap " + detail::fmt(gap));
  }

  // 2. k -> 0 limit of the Lienard coefficients reaches the centre manifold.
  {
    const ManifoldQuadratic near = solve_lienard_manifold(1e-8, 1.0, 0, 0, 1);
    const ManifoldQuadratic centre{0.2, 0.2, -0.2};
    const double gap = detail::max_coeff_gap(near, centre);
    add("2", 2, "centre-manifold limit at k=1e-8", gap <= 1e-6, 1e-6 - gap,
        "gap " + detail::fmt(gap) + " (tol 1e-6)");
  }

  // 3. Invariance residual scales like a cubic for correct coefficients and
  //    like a quadratic once a1 is perturbed.
  {
    const SystemSpec spec = SystemSpec::default_coupled(4.0, 1.0);
    const ManifoldQuadratic m = solve_manifold(spec);
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    std::vector<double> res_ok, res_bad;
    ManifoldQuadratic bad = m;
    bad.a1 += 0.1;
    for (double ep : eps) {
      res_ok.push_back(manifold_residual(spec, m, {ep, ep}));
      res_bad.push_back(manifold_residual(spec, bad, {ep, ep}));
    }
    const double slope_ok = loglog_slope(eps, res_ok);
    const double slope_bad = loglog_slope(eps, res_bad);
    add("3a", 3, "residual log-log slope, correct coefficients", slope_ok >= 2.9,
        slope_ok - 2.9, "slope " + detail::fmt(slope_ok) + " (need >= 2.9)");
    add("3b", 3, "residual log-log slope, perturbed a1", std::abs(slope_bad - 2.0) <= 0.1,
        0.1 - std::abs(slope_bad - 2.0), "slope " + detail::fmt(slope_bad) + " (need ~2)");
  }

  // 4. Uncoupled simulations settle on the base radius sqrt(gamma).
  {
    double worst = 0.0;
    std::string detail_s;
    for (double g : {1.0, 4.0, 9.0}) {
      RunConfig cfg = detail::reduced_run_config(g, 1.0);
      cfg.system = SystemSpec::lambda_omega(g, 1.0);
      cfg.initial_state = {0.5, 0.0, 0.1};
      const PolarSeries series = simulate_polar_series(cfg, Target::Full3D);
      const double measured = estimate_mean_radius(series, 0.5);
      const double rel = std::abs(measured - base_radius(g)) / base_radius(g);
      worst = std::max(worst, rel);
      detail_s += "gamma=" + detail::fmt(g) + ": R=" + detail::fmt(measured) + "  ";
    }
    add("4", 4, "uncoupled simulation reaches sqrt(gamma)", worst <= 0.005, 0.005 - worst,
        detail_s + "worst rel " + detail::fmt(worst) + " (tol 0.5%)");
  }

  // 5. Modified radius: closed form, quadrature oracle, reduced and full
  //    simulations.
  double reduced_measured_41 = 0.0;
  {
    const double predicted = detail::predicted_radius_scaled(4.0, 1.0, scale);
    const double gap_spot = std::abs(predicted - 2.027013);
    add("5a", 5, "predicted radius (gamma=4, lambda=1)", gap_spot <= 1e-4, 1e-4 - gap_spot,
        "predicted " + detail::fmt(predicted) + " vs 2.027013 (tol 1e-4)");

    double worst = std::abs(averaged_radial_root(4.0, 1.0) - predicted);
    for (double g : opts.grid.gammas)
      for (double l : opts.grid.lambdas)
        worst = std::max(worst, std::abs(averaged_radial_root(g, l) -
                                         detail::predicted_radius_scaled(g, l, scale)));
    add("5b", 5, "quadrature+bisection oracle agrees with closed form", worst <= 1e-8,
        1e-8 - worst, "worst |oracle - closed| " + detail::fmt(worst) + " (tol 1e-8)");

    const RunConfig cfg = detail::reduced_run_config(4.0, 1.0);
    const PolarSeries series = simulate_polar_series(cfg, Target::Reduced2D);
    reduced_measured_41 = estimate_mean_radius(series, 0.5);
    const double rel = std::abs(reduced_measured_41 - predicted) / predicted;
    add("5c", 5, "reduced-2d simulated mean radius", rel <= 0.02, 0.02 - rel,
        "measured " + detail::fmt(reduced_measured_41) + " vs predicted " +
            detail::fmt(predicted) + ", rel " + detail::fmt(rel) + " (tol 2%)");

    RunConfig full = detail::reduced_run_config(4.0, 1.0);
    const ManifoldQuadratic m = solve_manifold(full.system);
    const double r0 = predicted_radius(4.0, 1.0);
    full.initial_state = {r0, 0.0, manifold_eval(m, {r0, 0.0})};
    const PolarSeries series3 = simulate_polar_series(full, Target::Full3D);
    try {
      const double measured3 = estimate_mean_radius(series3, 0.5);
      const double rel3 = std::abs(measured3 - reduced_measured_41) / reduced_measured_41;
      add("5d", 5, "full-3d simulated mean radius vs reduced-2d", rel3 <= 0.05, 0.05 - rel3,
          "full-3d " + detail::fmt(measured3) + " vs reduced " +
              detail::fmt(reduced_measured_41) + ", rel " + detail::fmt(rel3) + " (tol 5%)");
    } catch (const InsufficientDataError& err) {
      const double fallback = detail::untrimmed_mean_radius(series3, 0.5);
      add("5d", 5, "full-3d simulated mean radius vs reduced-2d", false, -1.0,
          std::string("mean radius not measurable: ") + err.what() +
              "; the full 3-d trajectory leaves the cycle and settles on a stable "
              "equilibrium (post-transient average R " +
              detail::fmt(fallback) + " vs reduced " + detail::fmt(reduced_measured_41) +
              ")");
    }
  }

  // 6. The coupled radius exceeds the planar one and recovers it as the
  //    stable direction stiffens.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (double g : opts.grid.gammas)
      for (double l : opts.grid.lambdas)
        worst = std::min(worst, predicted_radius(g, l) - base_radius(g));
    add("6a", 6, "predicted radius exceeds sqrt(gamma) on the grid", worst > 0.0, worst,
        "smallest increment " + detail::fmt(worst));

    const double rel = std::abs(detail::predicted_radius_scaled(4.0, 1000.0, scale) - 2.0) / 2.0;
    add("6b", 6, "large-lambda limit recovers the base radius", rel <= 1e-3, 1e-3 - rel,
        "rel gap " + detail::fmt(rel) + " at lambda=1000 (tol 1e-3)");
  }

  // 7. Angular velocity and period.
  {
    const double omega = predicted_angular_velocity(4.0, 1.0);
    const double exact = 1.0 - 8.0 / 331.0;
    const double gap_exact = std::abs(omega - exact);
    const double gap_decimal = std::abs(omega - 0.975831);
    const bool pass_a = gap_exact <= 1e-12 && gap_decimal <= 1e-6;
    add("7a", 7, "predicted angular velocity (gamma=4, lambda=1)", pass_a,
        1e-6 - gap_decimal,
        "omega " + detail::fmt(omega) + " vs 1 - 8/331 (gap " + detail::fmt(gap_exact) + ")");

    const double period = predicted_period(4.0, 1.0);
    const double gap_identity = std::abs(period - two_pi / omega);
    const double gap_dec = std::abs(period - 6.43885);
    add("7b", 7, "predicted period (gamma=4, lambda=1)",
        gap_identity <= 1e-12 && gap_dec <= 1e-4, 1e-4 - gap_dec,
        "period " + detail::fmt(period) + " vs 6.43885 (gap " + detail::fmt(gap_dec) + ")");

    const RunConfig cfg = detail::reduced_run_config(4.0, 1.0);
    const PolarSeries series = simulate_polar_series(cfg, Target::Reduced2D);
    const double measured = measure_angular_velocity(series, 0.5);
    const double rel = std::abs(measured - omega) / omega;
    add("7c", 7, "reduced-2d measured angular velocity", rel <= 0.02, 0.02 - rel,
        "measured " + detail::fmt(measured) + ", rel " + detail::fmt(rel) + " (tol 2%)");
  }

  // 8. Four radial oscillations per rotation on the reduced attractor.
  {
    bool pass = true;
    std::string detail_s;
    for (double l : {1.0, 2.0, 5.0}) {
      const RunConfig cfg = detail::reduced_run_config(4.0, l);
      const PolarSeries series = simulate_polar_series(cfg, Target::Reduced2D);
      const int n = count_radial_oscillations(series, 0.5);
      pass = pass && n == 4;
      detail_s += "lambda=" + detail::fmt(l) + ": " + std::to_string(n) + "  ";
    }
    add("8", 8, "radial oscillations per rotation = 4", pass, pass ? 1.0 : -1.0, detail_s);
  }

  // 9. Van der Pol.
  {
    double worst = 0.0;
    for (double mu : {0.1, 1.0, 5.0})
      worst = std::max(worst, std::abs(vdp_averaged_radius({mu}) - 2.0));
    add("9a", 9, "averaged Van der Pol radius is 2", worst <= 1e-6, 1e-6 - worst,
        "worst |r - 2| " + detail::fmt(worst) + " (tol 1e-6)");

    bool identical = true;
    for (double l : opts.grid.lambdas)
      identical = identical && vdp_modified_radius(l) == predicted_radius(4.0, l);
    add("9b", 9, "vdp_modified_radius(lambda) == predicted_radius(4, lambda)", identical,
        identical ? 1.0 : -1.0, identical ? "bitwise equal" : "values differ");
  }

  // 10. Integrator quality.
  {
    std::vector<double> hs{0.1, 0.05, 0.025};
    std::vector<double> errs;
    for (double h : hs) {
      IntegratorConfig cfg;
      cfg.method = StepMethod::RK4;
      cfg.step = h;
      cfg.t_end = 1.0;
      cfg.sample_interval = 1.0;
      struct Scalar {
        double v;
        static constexpr int dim = 1;
        double operator[](int) const { return v; }
        double& operator[](int) { return v; }
        friend Scalar operator+(Scalar a, Scalar b) { return {a.v + b.v}; }
        friend Scalar operator*(Scalar a, double c) { return {a.v * c}; }
      };
      auto rhs = [](const Scalar& s) { return Scalar{-s.v}; };
      const auto traj = integrate(rhs, Scalar{1.0}, cfg);
      errs.push_back(std::abs(traj.states.back().v - std::exp(-1.0)));
    }
    const double order = loglog_slope(hs, errs);
    add("10a", 10, "RK4 empirical convergence order", order >= 3.9, order - 3.9,
        "order " + detail::fmt(order) + " (need >= 3.9)");

    IntegratorConfig cfg;
    cfg.method = StepMethod::RK45;
    cfg.tol = 1e-10;
    cfg.t_end = two_pi;
    cfg.sample_interval = two_pi;
    auto rhs = [](const Vec2& s) { return Vec2{s.y, -s.x}; };
    const auto traj = integrate(rhs, Vec2{1.0, 0.0}, cfg);
    const Vec2 end = traj.states.back();
    const double err = std::max(std::abs(end.x - 1.0), std::abs(end.y));
    add("10b", 10, "harmonic oscillator period return", err <= 1e-6, 1e-6 - err,
        "return error " + detail::fmt(err) + " (tol 1e-6)");
  }

  // 11. Determinism and simulate/analyze round trip.
  {
    const auto scratch = detail::make_scratch_dir();
    bool identical = true;
    std::string detail_s;
    for (StepMethod method : {StepMethod::RK4, StepMethod::RK45}) {
      RunConfig cfg = detail::reduced_run_config(4.0, 1.0);
      cfg.integrator.method = method;
      cfg.integrator.step = 0.005;
      cfg.integrator.t_end = 50.0;
      std::ostringstream sink;
      cfg.output.directory = (scratch / "a").string();
      cmd_simulate(cfg, Target::Reduced2D, sink);
      cfg.output.directory = (scratch / "b").string();
      cmd_simulate(cfg, Target::Reduced2D, sink);
      const std::string fa = detail::read_file(scratch / "a" / "trajectory_reduced2d.csv");
      const std::string fb = detail::read_file(scratch / "b" / "trajectory_reduced2d.csv");
      if (fa != fb || fa.empty()) identical = false;
      detail_s += std::string(method == StepMethod::RK4 ? "rk4" : "rk45") +
                  (fa == fb ? " identical  " : " differs  ");
    }
    add("11a", 11, "identical configs yield identical outputs", identical,
        identical ? 1.0 : -1.0, detail_s);

    RunConfig cfg = detail::reduced_run_config(4.0, 1.0);
    cfg.output.directory = (scratch / "rt").string();
    std::ostringstream sink;
    cmd_simulate(cfg, Target::Reduced2D, sink);
    const PolarSeries from_csv =
        load_polar_csv(std::filesystem::path(cfg.output.directory) /
                       "trajectory_reduced2d.csv");
    const AnalysisReport via_csv = analyze(from_csv, 4.0, 1.0, 0.5);
    const AnalysisReport direct =
        analyze(simulate_polar_series(cfg, Target::Reduced2D), 4.0, 1.0, 0.5);
    const double worst = std::max(
        {std::abs(via_csv.measured_mean_radius - direct.measured_mean_radius),
         std::abs(via_csv.measured_angular_velocity - direct.measured_angular_velocity),
         std::abs(static_cast<double>(via_csv.oscillations_per_cycle -
                                      direct.oscillations_per_cycle))});
    add("11b", 11, "simulate->analyze equals end-to-end analyze", worst <= 1e-12,
        1e-12 - worst, "worst field gap " + detail::fmt(worst) + " (tol 1e-12)");

    std::error_code ec;
    std::filesystem::remove_all(scratch, ec);
  }

  return results;
}

/// Print the per-check table; returns the exit code (0 iff all pass).
inline int report_verification(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all_pass = true;
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
        << "  (margin " << detail::fmt(r.margin) << ")\n";
    if (!r.pass) out << "       " << r.detail << "\n";
  }
  out << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
  return all_pass ? exit_ok : exit_verification_failed;
}

inline int cmd_verify(const RunConfig& cfg, const VerifyOptions& opts_in, std::ostream& out) {
  cfg.validate();
  VerifyOptions opts = opts_in;
  opts.grid = cfg.verify;
  return report_verification(run_verification(opts), out);
}

}  // namespace lcm
