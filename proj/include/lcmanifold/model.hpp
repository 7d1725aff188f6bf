#pragma once

#include <array>
#include <cmath>
#include <string>

#include "lcmanifold/errors.hpp"
#include "lcmanifold/types.hpp"

namespace lcm {

/// Which linear block-diagonal family the planar block belongs to.
enum class SystemKind {
  LambdaOmega3D,  // planar block [[gamma,-1],[1,gamma]] with cubic radial damping
  Lienard3D,      // planar block [[0,1],[-1,k]]
};

/// Quadratic form over the monomial basis x^2, y^2, z^2, xy, yz, zx.
using QuadCoeffs = std::array<double, 6>;

inline double eval_quadratic(const QuadCoeffs& q, const State3& s) {
  return q[0] * s.x * s.x + q[1] * s.y * s.y + q[2] * s.z * s.z + q[3] * s.x * s.y +
         q[4] * s.y * s.z + q[5] * s.z * s.x;
}

/// Full parameterization of a 3-D coupled oscillator. Exactly one of
/// `gamma` / `k` is interpreted, selected by `kind`. The third direction
/// is stable by construction: its eigenvalue is -lambda_stable.
struct SystemSpec {
  SystemKind kind = SystemKind::LambdaOmega3D;
  double gamma = 4.0;          // growth parameter of the lambda-omega family
  double k = 0.0;              // Lienard damping offset at the origin
  double lambda_stable = 1.0;  // magnitude of the stable eigenvalue, > 0
  QuadCoeffs c{};              // coupling f1 entering the x equation
  QuadCoeffs d{};              // coupling f2 entering the y equation
  QuadCoeffs e{};              // coupling f3 entering the z equation

  void validate() const {
    if (!(lambda_stable > 0.0) || !std::isfinite(lambda_stable))
      throw DomainError("lambda_stable must be positive and finite, got " +
                        std::to_string(lambda_stable));
    if (!std::isfinite(gamma) || !std::isfinite(k))
      throw DomainError("system parameters must be finite");
    for (int i = 0; i < 6; ++i)
      if (!std::isfinite(c[i]) || !std::isfinite(d[i]) || !std::isfinite(e[i]))
        throw DomainError("coupling coefficients must be finite");
  }

  /// Uncoupled lambda-omega system.
  static SystemSpec lambda_omega(double gamma, double lambda) {
    SystemSpec s;
    s.kind = SystemKind::LambdaOmega3D;
    s.gamma = gamma;
    s.lambda_stable = lambda;
    return s;
  }

  /// The coupling profile whose reduction yields the closed-form planar
  /// equations: f1 = yz, f2 = zx, f3 = xy.
  static SystemSpec default_coupled(double gamma, double lambda) {
    SystemSpec s = lambda_omega(gamma, lambda);
    s.c[4] = 1.0;  // yz
    s.d[5] = 1.0;  // zx
    s.e[3] = 1.0;  // xy
    return s;
  }

  static SystemSpec lienard(double k, double lambda) {
    SystemSpec s;
    s.kind = SystemKind::Lienard3D;
    s.k = k;
    s.lambda_stable = lambda;
    return s;
  }
};

/// Vector field of the chosen family.
///
/// LambdaOmega3D:  x' = (gamma - r^2) x - y + f1
///                 y' = x + (gamma - r^2) y + f2
///                 z' = -lambda z + f3           with r^2 = x^2 + y^2
/// Lienard3D:      x' = y + f1
///                 y' = k y - x + f2
///                 z' = -lambda z + f3
inline State3 full_rhs(const SystemSpec& spec, const State3& s) {
  spec.validate();
  if (!all_finite(s)) throw DomainError("full_rhs: non-finite state");
  const double f1 = eval_quadratic(spec.c, s);
  const double f2 = eval_quadratic(spec.d, s);
  const double f3 = eval_quadratic(spec.e, s);
  State3 out;
  if (spec.kind == SystemKind::LambdaOmega3D) {
    const double damp = spec.gamma - (s.x * s.x + s.y * s.y);
    out.x = damp * s.x - s.y + f1;
    out.y = s.x + damp * s.y + f2;
  } else {
    out.x = s.y + f1;
    out.y = spec.k * s.y - s.x + f2;
  }
  out.z = -spec.lambda_stable * s.z + f3;
  return out;
}

/// Character of the planar Lienard fixed point as a function of the
/// damping offset k (the middle-term value at the origin after the
/// constant split).
enum class LienardClass { Centre, LimitCycle, StableFocus };

inline LienardClass classify_lienard(double k) {
  if (!std::isfinite(k)) throw DomainError("classify_lienard: k must be finite");
  if (k == 0.0) return LienardClass::Centre;
  return k > 0.0 ? LienardClass::LimitCycle : LienardClass::StableFocus;
}

inline const char* to_string(LienardClass c) {
  switch (c) {
    case LienardClass::Centre: return "centre";
    case LienardClass::LimitCycle: return "limit_cycle";
    default: return "stable_focus";
  }
}

/// Planar Van der Pol oscillator, x' = y, y' = -mu (x^2 - 1) y - x.
struct VdpSpec {
  double mu = 1.0;

  void validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw DomainError("Van der Pol damping mu must be positive, got " + std::to_string(mu));
  }
};

inline Vec2 vdp_rhs(const VdpSpec& spec, const Vec2& s) {
  spec.validate();
  if (!all_finite(s)) throw DomainError("vdp_rhs: non-finite state");
  return {s.y, -spec.mu * (s.x * s.x - 1.0) * s.y - s.x};
}

}  // namespace lcm
