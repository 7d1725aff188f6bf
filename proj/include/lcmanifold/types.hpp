#pragma once

#include <cmath>

namespace lcm {

/// Planar state. Also reused as (R, theta) for the polar form, where
/// `x` holds the radius and `y` the unwrapped angle.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  static constexpr int dim = 2;
  double operator[](int i) const { return i == 0 ? x : y; }
  double& operator[](int i) { return i == 0 ? x : y; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double c) { return {a.x * c, a.y * c}; }
  friend Vec2 operator*(double c, Vec2 a) { return a * c; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

/// Phase-space point of the 3-D systems.
struct State3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr int dim = 3;
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend State3 operator+(State3 a, State3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend State3 operator-(State3 a, State3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend State3 operator*(State3 a, double c) { return {a.x * c, a.y * c, a.z * c}; }
  friend State3 operator*(double c, State3 a) { return a * c; }
  friend bool operator==(State3 a, State3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

template <class State>
bool all_finite(const State& s) {
  for (int i = 0; i < State::dim; ++i)
    if (!std::isfinite(s[i])) return false;
  return true;
}

template <class State>
double max_abs(const State& s) {
  double m = 0.0;
  for (int i = 0; i < State::dim; ++i) m = std::max(m, std::abs(s[i]));
  return m;
}

}  // namespace lcm
