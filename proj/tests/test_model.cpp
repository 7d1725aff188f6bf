#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lcmanifold/model.hpp"
#include "oracles.hpp"

using namespace lcm;

TEST_CASE("lambda-omega vector field matches hand evaluation") {
  SystemSpec spec = SystemSpec::lambda_omega(4.0, 1.0);

  SECTION("origin is a fixed point") {
    const State3 d = full_rhs(spec, {0.0, 0.0, 0.0});
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
    CHECK(d.z == 0.0);
  }

  SECTION("uncoupled field at (1,0,1)") {
    const State3 d = full_rhs(spec, {1.0, 0.0, 1.0});
    CHECK(d.x == Catch::Approx(3.0).margin(1e-15));
    CHECK(d.y == Catch::Approx(1.0).margin(1e-15));
    CHECK(d.z == Catch::Approx(-1.0).margin(1e-15));
  }

  SECTION("coupled field at (0,1,1): f1 = yz = 1, f2 = zx = 0, f3 = xy = 0") {
    spec = SystemSpec::default_coupled(4.0, 1.0);
    const State3 d = full_rhs(spec, {0.0, 1.0, 1.0});
    CHECK(d.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(d.y == Catch::Approx(3.0).margin(1e-15));
    // z' = -lambda z + xy = -1 here; only f3 = xy enters the z equation.
    CHECK(d.z == Catch::Approx(-1.0).margin(1e-15));
  }
}

TEST_CASE("Lienard vector field") {
  const SystemSpec spec = SystemSpec::lienard(0.5, 1.0);
  const State3 d = full_rhs(spec, {1.0, 2.0, 3.0});
  CHECK(d.x == Catch::Approx(2.0).margin(1e-15));   // x' = y
  CHECK(d.y == Catch::Approx(0.0).margin(1e-15));   // y' = k y - x
  CHECK(d.z == Catch::Approx(-3.0).margin(1e-15));  // z' = -lambda z
}

TEST_CASE("Van der Pol field matches hand evaluation") {
  CHECK(vdp_rhs({1.0}, {0.0, 0.0}) == Vec2{0.0, 0.0});
  const Vec2 d1 = vdp_rhs({1.0}, {1.0, 1.0});
  CHECK(d1.x == Catch::Approx(1.0).margin(1e-15));
  CHECK(d1.y == Catch::Approx(-1.0).margin(1e-15));
  const Vec2 d2 = vdp_rhs({2.0}, {2.0, 1.0});
  CHECK(d2.x == Catch::Approx(1.0).margin(1e-15));
  CHECK(d2.y == Catch::Approx(-8.0).margin(1e-15));
  CHECK_THROWS_AS(vdp_rhs({-1.0}, {0.0, 0.0}), DomainError);
}

TEST_CASE("Lienard classification by the damping offset") {
  CHECK(classify_lienard(0.0) == LienardClass::Centre);
  CHECK(classify_lienard(0.5) == LienardClass::LimitCycle);
  CHECK(classify_lienard(-0.5) == LienardClass::StableFocus);

  // Eigenvalue oracle: the focus decay rate of [[0,1],[-1,k]] is k/2, so
  // the sign of k decides between spiral-in, centre, spiral-out.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dk(-1.9, 1.9);
  for (int i = 0; i < 200; ++i) {
    const double k = dk(rng);
    const double rate = oracles::lienard_focus_rate(k);
    const LienardClass cls = classify_lienard(k);
    if (rate < 0.0) CHECK(cls == LienardClass::StableFocus);
    if (rate > 0.0) CHECK(cls == LienardClass::LimitCycle);
  }
  CHECK_THROWS_AS(classify_lienard(std::nan("")), DomainError);
}

TEST_CASE("planar radial identity for the uncoupled family") {
  // x x' + y y' = (gamma - r^2) r^2; exact in floating point for dyadic
  // states, near-exact elsewhere.
  const SystemSpec spec = SystemSpec::lambda_omega(4.0, 1.0);
  const State3 s{0.5, 0.25, 0.0};
  const State3 d = full_rhs(spec, s);
  const double r2 = s.x * s.x + s.y * s.y;
  CHECK(s.x * d.x + s.y * d.y == (spec.gamma - r2) * r2);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const State3 p{dist(rng), dist(rng), dist(rng)};
    const State3 dp = full_rhs(spec, p);
    const double rr = p.x * p.x + p.y * p.y;
    CHECK(p.x * dp.x + p.y * dp.y ==
          Catch::Approx((spec.gamma - rr) * rr).margin(1e-12).epsilon(1e-12));
  }
}

TEST_CASE("z-axis restriction of the z equation") {
  SystemSpec spec = SystemSpec::lambda_omega(4.0, 2.0);
  spec.e[2] = 0.75;  // z^2 coefficient
  for (double z : {0.5, -1.25, 2.0}) {
    const State3 d = full_rhs(spec, {0.0, 0.0, z});
    CHECK(d.z == -spec.lambda_stable * z + spec.e[2] * z * z);
  }
}

TEST_CASE("odd symmetry with all couplings zero") {
  for (const SystemSpec& spec :
       {SystemSpec::lambda_omega(4.0, 1.0), SystemSpec::lienard(0.5, 2.0)}) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
      const State3 s{dist(rng), dist(rng), dist(rng)};
      const State3 plus = full_rhs(spec, s);
      const State3 minus = full_rhs(spec, {-s.x, -s.y, -s.z});
      CHECK(minus.x == Catch::Approx(-plus.x).margin(1e-12));
      CHECK(minus.y == Catch::Approx(-plus.y).margin(1e-12));
      CHECK(minus.z == Catch::Approx(-plus.z).margin(1e-12));
    }
  }
}

TEST_CASE("validation rejects bad specs and states") {
  SystemSpec spec = SystemSpec::lambda_omega(4.0, 1.0);
  CHECK_THROWS_AS(full_rhs(spec, {std::nan(""), 0.0, 0.0}), DomainError);
  spec.lambda_stable = 0.0;
  CHECK_THROWS_AS(full_rhs(spec, {0.0, 0.0, 0.0}), DomainError);
  spec.lambda_stable = -1.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}
