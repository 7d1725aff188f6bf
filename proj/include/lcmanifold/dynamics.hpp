#pragma once

#include <cmath>
#include <vector>

#include "lcmanifold/errors.hpp"
#include "lcmanifold/integrate.hpp"
#include "lcmanifold/manifold.hpp"
#include "lcmanifold/numeric.hpp"
#include "lcmanifold/types.hpp"

namespace lcm {

/// Planar dynamics restricted to the invariant surface z = h(x, y):
///   x' = (gamma - r^2) x - y + y h(x, y)
///   y' = x + (gamma - r^2) y + x h(x, y)
inline Vec2 reduced_rhs(double gamma, const ManifoldQuadratic& m, const Vec2& p) {
  if (!all_finite(p)) throw DomainError("reduced_rhs: non-finite point");
  const double h = manifold_eval(m, p);
  const double damp = gamma - (p.x * p.x + p.y * p.y);
  return {damp * p.x - p.y + p.y * h, p.x + damp * p.y + p.x * h};
}

struct PolarDerivative {
  double R_dot = 0.0;
  double theta_dot = 0.0;
};

/// Polar form of the reduced dynamics for the f1 = yz, f2 = zx, f3 = xy
/// coupling profile, with denominator D = lambda(lambda+2g) + 2g(lambda+2g) + 4:
///   R'     = (g - R^2) R + R^3 [ -sin(4t)/2 - ((l+2g)/4) cos(4t) + (l+2g)/4 ] / D
///   theta' = 1 + R^2 cos(2t) [ -cos(2t) + (sin(2t)/2)(l+2g) ] / D
inline PolarDerivative polar_rhs(double gamma, double lambda, double R, double theta) {
  if (!(R >= 0.0) || !std::isfinite(R))
    throw DomainError("polar_rhs: radius must be nonnegative, got " + std::to_string(R));
  if (!std::isfinite(theta)) throw DomainError("polar_rhs: non-finite angle");
  const double s = lambda + 2.0 * gamma;
  const double denom = lambda_omega_denominator(gamma, lambda);
  const double bracket_r =
      -0.5 * std::sin(4.0 * theta) - 0.25 * s * std::cos(4.0 * theta) + 0.25 * s;
  const double cos2 = std::cos(2.0 * theta);
  const double bracket_t = -cos2 + 0.5 * std::sin(2.0 * theta) * s;
  PolarDerivative out;
  out.R_dot = (gamma - R * R) * R + R * R * R * bracket_r / denom;
  out.theta_dot = 1.0 + R * R * cos2 * bracket_t / denom;
  return out;
}

/// (t, R, theta) series; theta is unwrapped (no 2*pi jumps).
struct PolarSeries {
  std::vector<double> times;
  std::vector<double> R;
  std::vector<double> theta;

  std::size_t size() const { return times.size(); }
};

/// Convert a planar trajectory to polar form. The angle continues on the
/// branch nearest the previous sample, which keeps |dtheta| <= pi provided
/// the sampling resolves at most half a rotation per interval. A sample at
/// the origin carries the previous angle forward.
inline PolarSeries to_polar(const Trajectory<Vec2>& traj) {
  PolarSeries out;
  out.times = traj.times;
  out.R.reserve(traj.size());
  out.theta.reserve(traj.size());
  double prev = 0.0;
  bool have_prev = false;
  for (const Vec2& p : traj.states) {
    const double radius = std::hypot(p.x, p.y);
    double angle;
    if (radius == 0.0) {
      angle = have_prev ? prev : 0.0;
    } else {
      const double raw = std::atan2(p.y, p.x);
      angle = have_prev ? raw + two_pi * std::round((prev - raw) / two_pi) : raw;
    }
    out.R.push_back(radius);
    out.theta.push_back(angle);
    prev = angle;
    have_prev = true;
  }
  return out;
}

/// Reinterpret a trajectory of the polar-form state (R, theta); the angle
/// is already continuous from the integration itself.
inline PolarSeries polar_series_from_polar_trajectory(const Trajectory<Vec2>& traj) {
  PolarSeries out;
  out.times = traj.times;
  out.R.reserve(traj.size());
  out.theta.reserve(traj.size());
  for (const Vec2& p : traj.states) {
    out.R.push_back(p.x);
    out.theta.push_back(p.y);
  }
  return out;
}

}  // namespace lcm
