#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lcmanifold/dynamics.hpp"
#include "lcmanifold/errors.hpp"
#include "lcmanifold/manifold.hpp"
#include "lcmanifold/model.hpp"
#include "lcmanifold/numeric.hpp"

namespace lcm {

/// Radius of the uncoupled planar limit cycle, sqrt(gamma).
inline double base_radius(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("base_radius: gamma must be nonnegative, got " + std::to_string(gamma));
  return std::sqrt(gamma);
}

namespace detail {

inline void require_positive_pair(double gamma, double lambda, const char* who) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError(std::string(who) + ": gamma must be positive, got " +
                      std::to_string(gamma));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError(std::string(who) + ": lambda must be positive, got " +
                      std::to_string(lambda));
}

/// Closed-form mean radius with an adjustable denominator scale. The scale
/// exists solely as a fault-injection hook for the verification driver;
/// every public caller uses 1.
inline double predicted_radius_scaled(double gamma, double lambda, double denom_scale) {
  require_positive_pair(gamma, lambda, "predicted_radius");
  const double denom = denom_scale * lambda_omega_denominator(gamma, lambda);
  const double shift = (lambda + 2.0 * gamma) / (4.0 * denom);
  if (!(shift < 1.0))
    throw DomainError("predicted_radius: perturbation shift >= 1 (gamma=" +
                      std::to_string(gamma) + ", lambda=" + std::to_string(lambda) + ")");
  return std::sqrt(gamma / (1.0 - shift));
}

}  // namespace detail

/// Mean limit-cycle radius after coupling the stable third direction,
///   R0' = sqrt( gamma / (1 - (lambda+2 gamma) / (4 D)) ).
inline double predicted_radius(double gamma, double lambda) {
  return detail::predicted_radius_scaled(gamma, lambda, 1.0);
}

/// Mean rotation rate on the modified cycle,
///   1 - 2 gamma / (4 D - (lambda + 2 gamma)).
inline double predicted_angular_velocity(double gamma, double lambda) {
  detail::require_positive_pair(gamma, lambda, "predicted_angular_velocity");
  const double s = lambda + 2.0 * gamma;
  return 1.0 - 2.0 * gamma / (4.0 * lambda_omega_denominator(gamma, lambda) - s);
}

/// Time for one full rotation, 2 pi over the mean angular velocity.
inline double predicted_period(double gamma, double lambda) {
  return two_pi / predicted_angular_velocity(gamma, lambda);
}

namespace detail {

inline void check_series(const PolarSeries& series) {
  const std::size_t n = series.size();
  if (series.R.size() != n || series.theta.size() != n)
    throw DomainError("polar series arrays must have equal length");
  if (n < 2) throw InsufficientDataError("polar series has fewer than 2 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(series.times[i] > series.times[i - 1]))
      throw DomainError("polar series times must be strictly increasing");
}

inline std::size_t post_transient_index(const PolarSeries& series, double transient_cut) {
  if (!(transient_cut >= 0.0) || !(transient_cut < 1.0))
    throw DomainError("transient_cut must lie in [0, 1)");
  const double t_cut =
      series.times.front() + transient_cut * (series.times.back() - series.times.front());
  auto it = std::lower_bound(series.times.begin(), series.times.end(), t_cut);
  std::size_t i0 = static_cast<std::size_t>(it - series.times.begin());
  return std::min(i0, series.size() - 2);
}

inline void require_rotations(const PolarSeries& series, std::size_t i0, double rotations,
                              const char* who) {
  const double span = series.theta.back() - series.theta[i0];
  if (!(span >= rotations * two_pi))
    throw InsufficientDataError(std::string(who) + ": post-transient window spans " +
                                std::to_string(span / two_pi) + " rotations, need >= " +
                                std::to_string(rotations));
}

}  // namespace detail

/// Time-average of R over the post-transient window, trimmed at the end to
/// an integer number of radial-oscillation periods (a quarter rotation each,
/// four oscillations per revolution on the modified cycle). Requires at
/// least three full rotations after the cut.
inline double estimate_mean_radius(const PolarSeries& series, double transient_cut) {
  detail::check_series(series);
  const std::size_t i0 = detail::post_transient_index(series, transient_cut);
  detail::require_rotations(series, i0, 3.0, "estimate_mean_radius");

  const double quarter = 0.25 * two_pi;
  const double span = series.theta.back() - series.theta[i0];
  const double whole_periods = std::floor(span / quarter);
  const double theta_target = series.theta[i0] + whole_periods * quarter;

  // First crossing of the trimmed end angle; interpolate inside the interval.
  std::size_t j = i0 + 1;
  while (j < series.size() && series.theta[j] < theta_target) ++j;
  if (j >= series.size()) {
    j = series.size() - 1;
  }
  const double dtheta = series.theta[j] - series.theta[j - 1];
  const double frac = dtheta > 0.0 ? (theta_target - series.theta[j - 1]) / dtheta : 1.0;
  const double t_star =
      series.times[j - 1] + frac * (series.times[j] - series.times[j - 1]);
  const double r_star = series.R[j - 1] + frac * (series.R[j] - series.R[j - 1]);

  double integral = 0.0;
  for (std::size_t i = i0; i + 1 < j; ++i)
    integral += 0.5 * (series.R[i] + series.R[i + 1]) * (series.times[i + 1] - series.times[i]);
  integral += 0.5 * (series.R[j - 1] + r_star) * (t_star - series.times[j - 1]);
  const double duration = t_star - series.times[i0];
  if (!(duration > 0.0))
    throw InsufficientDataError("estimate_mean_radius: empty averaging window");
  return integral / duration;
}

/// Secant angular velocity over the post-transient window.
inline double measure_angular_velocity(const PolarSeries& series, double transient_cut) {
  detail::check_series(series);
  const std::size_t i0 = detail::post_transient_index(series, transient_cut);
  detail::require_rotations(series, i0, 3.0, "measure_angular_velocity");
  return (series.theta.back() - series.theta[i0]) /
         (series.times.back() - series.times[i0]);
}

/// Number of prominent local maxima of R over one full rotation of theta.
/// The window opens at the first strict local minimum after the transient
/// cut so the maxima lie in its interior; maxima rising less than
/// 1e-4 * mean(R) above the neighbouring valleys are integrator ripple and
/// are ignored. A series with no strict minimum (flat or monotone R) counts
/// zero oscillations.
inline int count_radial_oscillations(const PolarSeries& series, double transient_cut) {
  detail::check_series(series);
  const std::size_t n = series.size();
  const std::size_t i0 = detail::post_transient_index(series, transient_cut);

  std::size_t start = 0;
  bool found = false;
  for (std::size_t i = std::max<std::size_t>(i0, 1); i + 1 < n; ++i) {
    if (series.R[i] < series.R[i - 1] && series.R[i] < series.R[i + 1]) {
      start = i;
      found = true;
      break;
    }
  }
  if (!found) return 0;

  const double theta_end = series.theta[start] + two_pi;
  if (!(series.theta.back() >= theta_end - 1e-12))
    throw InsufficientDataError(
        "count_radial_oscillations: window shorter than one full rotation");
  std::size_t end = start;
  while (end + 1 < n && series.theta[end + 1] <= theta_end + 1e-12) ++end;

  double mean = 0.0;
  for (std::size_t i = start; i <= end; ++i) mean += series.R[i];
  mean /= static_cast<double>(end - start + 1);
  const double floor_prom = 1e-4 * mean;

  int count = 0;
  for (std::size_t i = start + 1; i < end; ++i) {
    if (!(series.R[i] > series.R[i - 1] && series.R[i] > series.R[i + 1])) continue;
    double left = series.R[i];
    for (std::size_t j = i; j-- > start;) {
      left = std::min(left, series.R[j]);
      if (series.R[j] > series.R[i]) break;
    }
    double right = series.R[i];
    for (std::size_t j = i + 1; j <= end; ++j) {
      right = std::min(right, series.R[j]);
      if (series.R[j] > series.R[i]) break;
    }
    if (series.R[i] - std::max(left, right) >= floor_prom) ++count;
  }
  return count;
}

/// Root of the theta-averaged radial velocity of a general reduced system
/// with surface coefficients m: the average of
///   R' = (gamma - R^2) R + R sin(2 theta) h(R cos, R sin)
/// over one rotation, located by bisection on [sqrt(g)/2, 2 sqrt(g)].
inline double averaged_radial_root(double gamma, const ManifoldQuadratic& m) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError("averaged_radial_root: gamma must be positive");
  auto mean_rdot = [&](double radius) {
    return periodic_mean([&](double th) {
      const Vec2 p{radius * std::cos(th), radius * std::sin(th)};
      return (gamma - radius * radius) * radius +
             radius * std::sin(2.0 * th) * manifold_eval(m, p);
    });
  };
  const double r0 = std::sqrt(gamma);
  return bisect_root(mean_rdot, 0.5 * r0, 2.0 * r0, 1e-12, "averaged radial velocity");
}

/// Independent check of predicted_radius: quadrature-average the polar-form
/// R' over theta at fixed R, then root-find the vanishing average.
inline double averaged_radial_root(double gamma, double lambda) {
  detail::require_positive_pair(gamma, lambda, "averaged_radial_root");
  auto mean_rdot = [&](double radius) {
    return periodic_mean(
        [&](double th) { return polar_rhs(gamma, lambda, radius, th).R_dot; });
  };
  const double r0 = std::sqrt(gamma);
  return bisect_root(mean_rdot, 0.5 * r0, 2.0 * r0, 1e-12, "averaged radial velocity");
}

/// Root of the theta-averaged Van der Pol radial velocity
///   r' = -mu r^3 cos^2 sin^2 + mu r sin^2.
/// The averaged equation factors as (mu r / 2)(1 - r^2 / 4); its positive
/// root is 2 for every mu.
inline double vdp_averaged_radius(const VdpSpec& spec) {
  spec.validate();
  auto mean_rdot = [&](double radius) {
    return periodic_mean([&](double th) {
      const double c = std::cos(th);
      const double s = std::sin(th);
      return -spec.mu * radius * radius * radius * c * c * s * s +
             spec.mu * radius * s * s;
    });
  };
  return bisect_root(mean_rdot, 1.0, 4.0, 1e-12, "averaged Van der Pol radial velocity");
}

/// Modified Van der Pol cycle radius after adding the stable direction;
/// identical to predicted_radius at gamma = 4 (the averaged base radius
/// is 2, hence gamma = R0^2 = 4).
inline double vdp_modified_radius(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("vdp_modified_radius: lambda must be positive, got " +
                      std::to_string(lambda));
  return predicted_radius(4.0, lambda);
}

/// Measured statistics of a polar series next to the closed-form
/// predictions for the same (gamma, lambda).
struct AnalysisReport {
  double gamma = 0.0;
  double lambda = 0.0;
  double transient_cut = 0.0;
  double base_radius = 0.0;
  double predicted_radius = 0.0;
  double predicted_angular_velocity = 0.0;
  double predicted_period = 0.0;
  double measured_mean_radius = 0.0;
  double measured_angular_velocity = 0.0;
  int oscillations_per_cycle = 0;
  double relative_error_radius = 0.0;
  double relative_error_angular_velocity = 0.0;
};

inline AnalysisReport analyze(const PolarSeries& series, double gamma, double lambda,
                              double transient_cut) {
  AnalysisReport rep;
  rep.gamma = gamma;
  rep.lambda = lambda;
  rep.transient_cut = transient_cut;
  rep.base_radius = base_radius(gamma);
  rep.predicted_radius = predicted_radius(gamma, lambda);
  rep.predicted_angular_velocity = predicted_angular_velocity(gamma, lambda);
  rep.predicted_period = predicted_period(gamma, lambda);
  rep.measured_mean_radius = estimate_mean_radius(series, transient_cut);
  rep.measured_angular_velocity = measure_angular_velocity(series, transient_cut);
  rep.oscillations_per_cycle = count_radial_oscillations(series, transient_cut);
  rep.relative_error_radius =
      std::abs(rep.measured_mean_radius - rep.predicted_radius) / rep.predicted_radius;
  rep.relative_error_angular_velocity =
      std::abs(rep.measured_angular_velocity - rep.predicted_angular_velocity) /
      rep.predicted_angular_velocity;
  return rep;
}

}  // namespace lcm
