#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lcmanifold/errors.hpp"
#include "lcmanifold/types.hpp"

namespace lcm {

enum class StepMethod { RK4, RK45 };

/// Integration controls. `step` drives the fixed-step method, `tol` the
/// adaptive one (used as both absolute and relative weight). Samples are
/// emitted at exact multiples of `sample_interval`.
struct IntegratorConfig {
  StepMethod method = StepMethod::RK45;
  double step = 1e-3;
  double tol = 1e-9;
  double t_end = 200.0;
  double sample_interval = 0.01;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step))
      throw ConfigError("integrator step must be positive");
    if (!(tol > 0.0) || !std::isfinite(tol))
      throw ConfigError("integrator tolerance must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
      throw ConfigError("integrator t_end must be nonnegative");
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval))
      throw ConfigError("integrator sample_interval must be positive");
  }
};

/// Time-stamped state sequence; times are strictly increasing.
template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const { return times.size(); }
};

namespace detail {

// Dormand-Prince 5(4) tableau (FSAL).
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double dp_b5[7] = {35.0 / 384,    0.0,        500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,   0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <class State, class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs& rhs, double tol) : rhs_(rhs), tol_(tol) {}

  /// Advance y from t to t_target, adapting the step size.
  void advance(State& y, double t, double t_target, double& h_live) {
    bool have_k1 = false;
    State k[7];
    while (t < t_target) {
      const double remaining = t_target - t;
      const bool clamped = h_live > remaining;
      double h = clamped ? remaining : h_live;
      if (h < 1e-13 * std::max(1.0, std::abs(t)))
        throw IntegrationError("step size underflow at t=" + std::to_string(t), t);

      if (!have_k1) {
        k[0] = rhs_(y);
        have_k1 = true;
      }
      for (int stage = 1; stage < 7; ++stage) {
        State arg = y;
        for (int j = 0; j < stage; ++j)
          if (dp_a[stage][j] != 0.0) arg = arg + k[j] * (h * dp_a[stage][j]);
        k[stage] = rhs_(arg);
      }
      State y5 = y;
      State err{};
      for (int j = 0; j < 7; ++j) {
        if (dp_b5[j] != 0.0) y5 = y5 + k[j] * (h * dp_b5[j]);
        const double db = dp_b5[j] - dp_b4[j];
        if (db != 0.0) err = err + k[j] * (h * db);
      }

      double ratio = 0.0;
      for (int i = 0; i < State::dim; ++i) {
        const double scale = tol_ + tol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
        ratio = std::max(ratio, std::abs(err[i]) / scale);
      }
      if (!all_finite(y5) || !std::isfinite(ratio)) {
        h_live = 0.5 * h;  // retry smaller; underflow guard terminates
        continue;
      }

      if (ratio <= 1.0) {
        t += h;
        y = y5;
        k[0] = k[6];  // first-same-as-last
        const double grow =
            ratio < 1e-30 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        h_live = clamped ? std::max(h_live, h * grow) : h * grow;
      } else {
        h_live = h * std::max(0.2, 0.9 * std::pow(ratio, -0.2));
      }
    }
  }

 private:
  Rhs& rhs_;
  double tol_;
};

}  // namespace detail

/// Integrate an autonomous system. `rhs` maps a state to its derivative.
/// Samples land at k * sample_interval for k = 0 .. floor(t_end / interval);
/// t_end = 0 yields just the initial state.
template <class State, class Rhs>
Trajectory<State> integrate(Rhs&& rhs, State y0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!all_finite(y0)) throw DomainError("integrate: non-finite initial state");

  const long n_samples = static_cast<long>(std::floor(cfg.t_end / cfg.sample_interval + 1e-9));
  Trajectory<State> out;
  out.times.reserve(n_samples + 1);
  out.states.reserve(n_samples + 1);
  out.times.push_back(0.0);
  out.states.push_back(y0);

  State y = y0;
  if (cfg.method == StepMethod::RK4) {
    const long n_sub = std::max<long>(1, std::lround(cfg.sample_interval / cfg.step));
    const double h = cfg.sample_interval / n_sub;
    for (long s = 1; s <= n_samples; ++s) {
      for (long i = 0; i < n_sub; ++i) {
        const State k1 = rhs(y);
        const State k2 = rhs(y + k1 * (0.5 * h));
        const State k3 = rhs(y + k2 * (0.5 * h));
        const State k4 = rhs(y + k3 * h);
        y = y + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
      }
      const double t = s * cfg.sample_interval;
      if (!all_finite(y))
        throw IntegrationError("non-finite state at t=" + std::to_string(t),
                               (s - 1) * cfg.sample_interval);
      out.times.push_back(t);
      out.states.push_back(y);
    }
  } else {
    detail::Dopri5<State, std::remove_reference_t<Rhs>> stepper(rhs, cfg.tol);
    double h_live = cfg.sample_interval;
    for (long s = 1; s <= n_samples; ++s) {
      const double t0 = (s - 1) * cfg.sample_interval;
      const double t1 = s * cfg.sample_interval;
      stepper.advance(y, t0, t1, h_live);
      if (!all_finite(y))
        throw IntegrationError("non-finite state at t=" + std::to_string(t1), t0);
      out.times.push_back(t1);
      out.states.push_back(y);
    }
  }
  return out;
}

}  // namespace lcm
