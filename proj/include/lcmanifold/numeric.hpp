#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "lcmanifold/errors.hpp"

namespace lcm {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Samples used by the composite trapezoid rule over one period.
inline constexpr int periodic_quadrature_samples = 4096;

/// Mean of a 2*pi-periodic integrand by the composite trapezoid rule.
/// For periodic integrands the end points fold together, so the rule
/// reduces to an equal-weight sum; accuracy is spectral for smooth f.
template <class F>
double periodic_mean(F&& f, int n = periodic_quadrature_samples) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(two_pi * i / n);
  return sum / n;
}

/// Bisection root of f on [lo, hi] down to interval width `xtol`.
/// Throws DomainError if f does not change sign over the bracket.
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol, const std::string& context) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("no sign change in bracket [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] for " + context);
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::abs(ys[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lcm
