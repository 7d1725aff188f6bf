#pragma once

#include <array>
#include <cmath>
#include <string>

#include "lcmanifold/errors.hpp"
#include "lcmanifold/model.hpp"
#include "lcmanifold/types.hpp"

namespace lcm {

/// Coefficients of the invariant quadratic surface z = h(x, y)
///                 h(x, y) = a0 x^2 + a1 xy + a2 y^2.
struct ManifoldQuadratic {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

inline double manifold_eval(const ManifoldQuadratic& m, const Vec2& p) {
  return m.a0 * p.x * p.x + m.a1 * p.x * p.y + m.a2 * p.y * p.y;
}

/// Common denominator of the lambda-omega manifold coefficients.
inline double lambda_omega_denominator(double gamma, double lambda) {
  const double s = lambda + 2.0 * gamma;
  return lambda * s + 2.0 * gamma * s + 4.0;
}

namespace detail {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

/// Gaussian elimination with partial pivoting; 3x3 is all we ever need.
inline Vec3 solve3x3(Mat3 a, Vec3 b, const std::string& context) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-14)
      throw SingularSystemError("singular coefficient system for " + context);
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int cc = col; cc < 3; ++cc) a[r][cc] -= f * a[col][cc];
      b[r] -= f * b[col];
    }
  }
  Vec3 x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int cc = r + 1; cc < 3; ++cc) s -= a[r][cc] * x[cc];
    x[r] = s / a[r][r];
  }
  return x;
}

inline void require_positive_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError(std::string(who) + ": lambda must be positive, got " +
                      std::to_string(lambda));
}

}  // namespace detail

/// Order-2 coefficients for the lambda-omega variant, from the linear system
///   -(lambda + 2 gamma) a0 - a1              = -e0
///                   a1 - (lambda + 2 gamma) a2 = -e1
///   2 a0 - (lambda + 2 gamma) a1 - 2 a2       = -e3
/// assembled programmatically and solved generically.
inline ManifoldQuadratic solve_lambda_omega_manifold(double gamma, double lambda, double e0,
                                                     double e1, double e3) {
  detail::require_positive_lambda(lambda, "solve_lambda_omega_manifold");
  const double s = lambda + 2.0 * gamma;
  const detail::Mat3 a{{{-s, -1.0, 0.0}, {0.0, 1.0, -s}, {2.0, -s, -2.0}}};
  const detail::Vec3 b{-e0, -e1, -e3};
  const auto x = detail::solve3x3(a, b, "(gamma=" + std::to_string(gamma) +
                                            ", lambda=" + std::to_string(lambda) + ")");
  return {x[0], x[1], x[2]};
}

/// Closed form of the lambda-omega coefficients for e0 = e1 = 0, scaled
/// linearly by e3 (the system is linear in the e coefficients).
inline ManifoldQuadratic lambda_omega_manifold_closed_form(double gamma, double lambda,
                                                           double e3 = 1.0) {
  detail::require_positive_lambda(lambda, "lambda_omega_manifold_closed_form");
  const double denom = lambda_omega_denominator(gamma, lambda);
  return {-e3 / denom, e3 * (lambda + 2.0 * gamma) / denom, e3 / denom};
}

/// Order-2 coefficients for the Lienard variant, from
///   -lambda a0 + a1                 = -e0
///   -a1 - (lambda + 2k) a2          = -e1
///   -2 a0 - (lambda + k) a1 + 2 a2  = -e3
inline ManifoldQuadratic solve_lienard_manifold(double k, double lambda, double e0, double e1,
                                                double e3) {
  detail::require_positive_lambda(lambda, "solve_lienard_manifold");
  if (lambda + 2.0 * k == 0.0)
    throw SingularSystemError("solve_lienard_manifold: pole at lambda + 2k = 0 (k=" +
                              std::to_string(k) + ", lambda=" + std::to_string(lambda) + ")");
  const detail::Mat3 a{{{-lambda, 1.0, 0.0},
                        {0.0, -1.0, -(lambda + 2.0 * k)},
                        {-2.0, -(lambda + k), 2.0}}};
  const detail::Vec3 b{-e0, -e1, -e3};
  const auto x = detail::solve3x3(
      a, b, "(k=" + std::to_string(k) + ", lambda=" + std::to_string(lambda) + ")");
  return {x[0], x[1], x[2]};
}

/// Closed form of the Lienard coefficients for e0 = e1 = 0, scaled by e3.
/// At k = 0 this reduces to the centre-manifold expression.
inline ManifoldQuadratic lienard_manifold_closed_form(double k, double lambda, double e3 = 1.0) {
  detail::require_positive_lambda(lambda, "lienard_manifold_closed_form");
  if (lambda + 2.0 * k == 0.0)
    throw SingularSystemError("lienard_manifold_closed_form: pole at lambda + 2k = 0");
  const double delta =
      lambda * lambda + 2.0 + 2.0 * lambda / (lambda + 2.0 * k) + lambda * k;
  return {e3 / delta, e3 * lambda / delta, -e3 * lambda / ((lambda + 2.0 * k) * delta)};
}

/// Dispatch on the system family; only e0, e1, e3 enter the order-2 system
/// (the remaining e coefficients multiply z and appear at order >= 3).
inline ManifoldQuadratic solve_manifold(const SystemSpec& spec) {
  spec.validate();
  if (spec.kind == SystemKind::LambdaOmega3D)
    return solve_lambda_omega_manifold(spec.gamma, spec.lambda_stable, spec.e[0], spec.e[1],
                                       spec.e[3]);
  return solve_lienard_manifold(spec.k, spec.lambda_stable, spec.e[0], spec.e[1], spec.e[3]);
}

/// Invariance defect z' - h_x x' - h_y y' evaluated on the surface
/// (x, y, h(x, y)). Correct order-2 coefficients leave only cubic and
/// higher terms.
inline double manifold_residual(const SystemSpec& spec, const ManifoldQuadratic& m,
                                const Vec2& p) {
  if (!all_finite(p)) throw DomainError("manifold_residual: non-finite point");
  const State3 s{p.x, p.y, manifold_eval(m, p)};
  const State3 ds = full_rhs(spec, s);
  const double hx = 2.0 * m.a0 * p.x + m.a1 * p.y;
  const double hy = m.a1 * p.x + 2.0 * m.a2 * p.y;
  return ds.z - hx * ds.x - hy * ds.y;
}

}  // namespace lcm
