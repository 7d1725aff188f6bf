#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lcmanifold/dynamics.hpp"
#include "lcmanifold/integrate.hpp"
#include "lcmanifold/manifold.hpp"
#include "oracles.hpp"

using namespace lcm;

namespace {

IntegratorConfig rk45_config(double t_end, double interval = 0.01, double tol = 1e-9) {
  IntegratorConfig cfg;
  cfg.method = StepMethod::RK45;
  cfg.tol = tol;
  cfg.t_end = t_end;
  cfg.sample_interval = interval;
  return cfg;
}

}  // namespace

TEST_CASE("reduced planar field on the invariant surface") {
  const ManifoldQuadratic m = solve_lambda_omega_manifold(4.0, 1.0, 0, 0, 1);

  CHECK(reduced_rhs(4.0, m, {0.0, 0.0}) == Vec2{0.0, 0.0});

  const Vec2 d1 = reduced_rhs(4.0, m, {1.0, 0.0});
  CHECK(d1.x == Catch::Approx(3.0).margin(1e-15));
  CHECK(d1.y == Catch::Approx(84.0 / 85.0).margin(1e-15));

  const Vec2 d2 = reduced_rhs(4.0, m, {0.0, 2.0});
  CHECK(d2.x == Catch::Approx(-162.0 / 85.0).margin(1e-14));
  CHECK(d2.y == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("polar form of the reduced dynamics") {
  SECTION("origin rotates at unit rate") {
    const PolarDerivative d = polar_rhs(4.0, 1.0, 0.0, 0.3);
    CHECK(d.R_dot == 0.0);
    CHECK(d.theta_dot == 1.0);
  }

  SECTION("hand values at R=2") {
    const PolarDerivative at0 = polar_rhs(4.0, 1.0, 2.0, 0.0);
    CHECK(at0.R_dot == Catch::Approx(0.0).margin(1e-14));
    CHECK(at0.theta_dot == Catch::Approx(81.0 / 85.0).margin(1e-14));

    const PolarDerivative at45 = polar_rhs(4.0, 1.0, 2.0, 0.25 * std::numbers::pi);
    CHECK(at45.R_dot == Catch::Approx(36.0 / 85.0).margin(1e-14));
    CHECK(at45.theta_dot == Catch::Approx(1.0).margin(1e-14));
  }

  SECTION("polar and cartesian forms are the same flow") {
    // R' = (x x' + y y') / R and theta' = (x y' - y x') / R^2 for the
    // cartesian reduced field must match polar_rhs pointwise.
    const ManifoldQuadratic m = solve_lambda_omega_manifold(4.0, 1.0, 0, 0, 1);
    for (double radius : {0.5, 1.0, 2.0, 2.5})
      for (int i = 0; i < 16; ++i) {
        const double th = two_pi * i / 16.0;
        const Vec2 p{radius * std::cos(th), radius * std::sin(th)};
        const Vec2 d = reduced_rhs(4.0, m, p);
        const PolarDerivative pd = polar_rhs(4.0, 1.0, radius, th);
        CHECK(pd.R_dot ==
              Catch::Approx((p.x * d.x + p.y * d.y) / radius).margin(1e-12));
        CHECK(pd.theta_dot ==
              Catch::Approx((p.x * d.y - p.y * d.x) / (radius * radius)).margin(1e-12));
      }
  }

  CHECK_THROWS_AS(polar_rhs(4.0, 1.0, -0.1, 0.0), DomainError);
}

TEST_CASE("adaptive integrator accuracy") {
  SECTION("exponential decay to t = ln 2") {
    struct Scalar {
      double v;
      static constexpr int dim = 1;
      double operator[](int) const { return v; }
      double& operator[](int) { return v; }
      friend Scalar operator+(Scalar a, Scalar b) { return {a.v + b.v}; }
      friend Scalar operator*(Scalar a, double c) { return {a.v * c}; }
    };
    IntegratorConfig cfg = rk45_config(std::log(2.0), std::log(2.0), 1e-10);
    const auto traj = integrate([](const Scalar& s) { return Scalar{-s.v}; },
                                Scalar{1.0}, cfg);
    REQUIRE(traj.size() == 2);
    CHECK(traj.states.back().v == Catch::Approx(0.5).margin(1e-8));
  }

  SECTION("harmonic oscillator returns after one period") {
    IntegratorConfig cfg = rk45_config(two_pi, two_pi, 1e-10);
    const auto traj =
        integrate([](const Vec2& s) { return Vec2{s.y, -s.x}; }, Vec2{1.0, 0.0}, cfg);
    const Vec2 end = traj.states.back();
    CHECK(std::abs(end.x - 1.0) <= 1e-6);
    CHECK(std::abs(end.y) <= 1e-6);
  }
}

TEST_CASE("fixed-step RK4 converges at fourth order") {
  struct Scalar {
    double v;
    static constexpr int dim = 1;
    double operator[](int) const { return v; }
    double& operator[](int) { return v; }
    friend Scalar operator+(Scalar a, Scalar b) { return {a.v + b.v}; }
    friend Scalar operator*(Scalar a, double c) { return {a.v * c}; }
  };
  std::vector<double> hs{0.1, 0.05, 0.025};
  std::vector<double> errs;
  for (double h : hs) {
    IntegratorConfig cfg;
    cfg.method = StepMethod::RK4;
    cfg.step = h;
    cfg.t_end = 1.0;
    cfg.sample_interval = 1.0;
    const auto traj =
        integrate([](const Scalar& s) { return Scalar{-s.v}; }, Scalar{1.0}, cfg);
    errs.push_back(std::abs(traj.states.back().v - std::exp(-1.0)));
  }
  CHECK(loglog_slope(hs, errs) >= 3.9);
  CHECK(errs[0] / errs[1] == Catch::Approx(16.0).epsilon(0.05));
}

TEST_CASE("integration edge cases and failures") {
  SECTION("t_end = 0 keeps only the initial sample") {
    IntegratorConfig cfg = rk45_config(0.0);
    const auto traj =
        integrate([](const Vec2& s) { return Vec2{s.y, -s.x}; }, Vec2{1.0, 2.0}, cfg);
    REQUIRE(traj.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.states[0] == Vec2{1.0, 2.0});
  }

  SECTION("finite-time blow-up reports the last good time") {
    struct Scalar {
      double v;
      static constexpr int dim = 1;
      double operator[](int) const { return v; }
      double& operator[](int) { return v; }
      friend Scalar operator+(Scalar a, Scalar b) { return {a.v + b.v}; }
      friend Scalar operator*(Scalar a, double c) { return {a.v * c}; }
    };
    IntegratorConfig cfg = rk45_config(2.0, 0.1);
    try {
      integrate([](const Scalar& s) { return Scalar{s.v * s.v}; }, Scalar{1.0}, cfg);
      FAIL("expected IntegrationError");
    } catch (const IntegrationError& err) {
      CHECK(err.last_good_time() >= 0.5);
      CHECK(err.last_good_time() <= 1.1);
    }
  }

  CHECK_THROWS_AS(integrate([](const Vec2& s) { return s; },
                            Vec2{std::nan(""), 0.0}, rk45_config(1.0)),
                  DomainError);
}

TEST_CASE("polar conversion and angle unwrapping") {
  SECTION("axis points") {
    Trajectory<Vec2> traj;
    traj.times = {0.0, 1.0};
    traj.states = {{1.0, 0.0}, {0.0, 2.0}};
    const PolarSeries s = to_polar(traj);
    CHECK(s.R[0] == 1.0);
    CHECK(s.theta[0] == 0.0);
    CHECK(s.R[1] == 2.0);
    CHECK(s.theta[1] == Catch::Approx(0.5 * std::numbers::pi).margin(1e-15));
  }

  SECTION("circular orbit unwraps monotonically past 2 pi") {
    Trajectory<Vec2> traj;
    for (double t = 0.0; t <= 7.0; t += 0.05) {
      traj.times.push_back(t);
      traj.states.push_back({std::cos(t), std::sin(t)});
    }
    const PolarSeries s = to_polar(traj);
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK(s.theta[i] > s.theta[i - 1]);
      CHECK(std::abs(s.theta[i] - s.theta[i - 1]) < std::numbers::pi);
    }
    CHECK(s.theta.back() - s.theta.front() > two_pi);
    CHECK(s.theta.back() == Catch::Approx(7.0).margin(1e-12));
  }

  SECTION("origin samples carry the previous angle") {
    Trajectory<Vec2> traj;
    traj.times = {0.0, 1.0, 2.0};
    traj.states = {{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}};
    const PolarSeries s = to_polar(traj);
    CHECK(s.theta[1] == s.theta[0]);
    CHECK(s.R[1] == 0.0);
  }
}

TEST_CASE("cartesian and polar integrations agree pointwise in R") {
  const double g = 4.0, l = 1.0;
  const ManifoldQuadratic m = solve_lambda_omega_manifold(g, l, 0, 0, 1);
  IntegratorConfig cfg = rk45_config(50.0);

  auto cart = to_polar(integrate(
      [&](const Vec2& p) { return reduced_rhs(g, m, p); }, Vec2{0.5, 0.0}, cfg));
  auto polar = polar_series_from_polar_trajectory(integrate(
      [&](const Vec2& p) {
        const PolarDerivative d = polar_rhs(g, l, p.x, p.y);
        return Vec2{d.R_dot, d.theta_dot};
      },
      Vec2{0.5, 0.0}, cfg));

  REQUIRE(cart.size() == polar.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < cart.size(); ++i)
    worst = std::max(worst, std::abs(cart.R[i] - polar.R[i]));
  CHECK(worst <= 1e-4);
}

TEST_CASE("uncoupled radial flow approaches sqrt(gamma) monotonically") {
  const double g = 4.0;
  const ManifoldQuadratic none{0.0, 0.0, 0.0};
  for (double r0 : {0.5, 0.9 * 3.0 * 2.0}) {
    auto series = to_polar(integrate(
        [&](const Vec2& p) { return reduced_rhs(g, none, p); }, Vec2{r0, 0.0},
        rk45_config(30.0)));
    const double target = std::sqrt(g);
    for (std::size_t i = 1; i < series.size(); ++i)
      CHECK(std::abs(series.R[i] - target) <=
            std::abs(series.R[i - 1] - target) + 1e-8);
    CHECK(series.R.back() == Catch::Approx(target).epsilon(0.005));
  }
}

TEST_CASE("rotation never reverses on the reduced attractor") {
  const double g = 4.0, l = 1.0;
  auto polar = polar_series_from_polar_trajectory(integrate(
      [&](const Vec2& p) {
        const PolarDerivative d = polar_rhs(g, l, p.x, p.y);
        return Vec2{d.R_dot, d.theta_dot};
      },
      Vec2{0.5, 0.0}, rk45_config(100.0)));
  for (std::size_t i = 1; i < polar.size(); ++i)
    CHECK(polar.theta[i] > polar.theta[i - 1]);
  // theta' stays positive pointwise along the attractor as well.
  for (std::size_t i = polar.size() / 2; i < polar.size(); ++i)
    CHECK(polar_rhs(g, l, polar.R[i], polar.theta[i]).theta_dot > 0.0);
}
