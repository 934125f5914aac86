#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rwave/calibration.hpp"
#include "rwave/ineq.hpp"
#include "rwave/lab.hpp"

using namespace rwave;

TEST_CASE("pointwise estimate constant is explicit") {
  REQUIRE(pointwise_estimate_constant(5.0) ==
          Catch::Approx(std::pow(128.0 / M_PI, 1.0 / 8.0)).epsilon(1e-12));
  REQUIRE(pointwise_estimate_constant(5.0) == Catch::Approx(1.5895).margin(1e-3));
  REQUIRE(pointwise_estimate_constant(3.0) ==
          Catch::Approx(std::pow(32.0 / M_PI, 1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("pointwise estimate holds for the synthetic family") {
  RadialGrid g(0.02, 4096);
  for (const auto& spec : synthetic_family(calib::family_seed, 12)) {
    FieldState s = sample_initial_data(spec, g);
    InequalityVerdict v = pointwise_estimate_check(s, g, 5.0);
    INFO(v.name << " ratio " << v.ratio << " witness r = " << v.witness_r);
    REQUIRE(v.pass);
    REQUIRE(v.ratio <= v.constant_bound);
  }
}

TEST_CASE("pointwise estimate on the zero field passes trivially") {
  RadialGrid g(0.05, 64);
  FieldState z(0.0, g.n);
  InequalityVerdict v = pointwise_estimate_check(z, g, 5.0);
  REQUIRE(v.pass);
  REQUIRE(v.ratio == 0.0);
}

TEST_CASE("weighted hardy contract checks") {
  RadialGrid g(0.05, 256);
  std::vector<double> f(g.n, 0.0);
  REQUIRE_THROWS_AS(weighted_hardy_check(f, g, 1.5, 2.0, 1.0, 3.0), contract_violation);
  REQUIRE_THROWS_AS(weighted_hardy_check(f, g, 0.0, 2.0, 1.0, 3.0), contract_violation);
  REQUIRE_THROWS_AS(weighted_hardy_check(f, g, 0.5, 2.0, 3.0, 3.0), contract_violation);
}

TEST_CASE("weighted hardy holds across the synthetic family at kappa = 1/2") {
  RadialGrid g(0.02, 4096);
  for (const auto& spec : synthetic_family(calib::family_seed, 12)) {
    FieldState s = sample_initial_data(spec, g);
    InequalityVerdict v =
        weighted_hardy_check(s.u, g, 0.5, 2.0, 1.0, calib::hardy_constant_kappa_half);
    INFO("family member ratio " << v.ratio);
    REQUIRE(v.pass);
  }
}

TEST_CASE("finite speed weight check contracts and the t' = 0 identity") {
  RadialGrid g(0.05, 512);
  InitialDataSpec spec;
  Trajectory traj = lab_trajectory(spec, g, 5.0, 0.45, 5.0);
  REQUIRE_THROWS_AS(finite_speed_weight_check(traj, WeightSpec{1.0, 0.0}, 2.0, 3.0),
                    contract_violation);
  REQUIRE_THROWS_AS(finite_speed_weight_check(traj, WeightSpec{1.0, -0.5}, 5.0, 3.0),
                    contract_violation);
  // at t' = 0 both sides integrate the same density over r > R
  InequalityVerdict same = finite_speed_weight_check(traj, WeightSpec{1.0, 0.7}, 1.0, 0.0);
  REQUIRE(same.ratio == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exterior weighted energy never grows beyond its initial cone value") {
  RadialGrid g(0.05, 1024);  // R_max = 51.2
  for (const auto& spec : synthetic_family(calib::family_seed + 1, 6)) {
    Trajectory traj = lab_trajectory(spec, g, 5.0, 0.45, 8.0);
    // keep R - t' inside the data support so the right-hand side is alive
    double R = std::min(8.0 + 0.5 * spec.support_radius(), 20.0);
    for (WeightSpec a : {WeightSpec{1.0, 0.0}, WeightSpec{1.0, 0.7}}) {
      InequalityVerdict v =
          finite_speed_weight_check(traj, a, R, 8.0, calib::finite_speed_tolerance);
      INFO("exponent " << a.exponent << " R " << R << " ratio " << v.ratio);
      REQUIRE(v.pass);
    }
  }
}

TEST_CASE("synthetic family is deterministic and spans the three shapes") {
  auto a = synthetic_family(1234, 9);
  auto b = synthetic_family(1234, 9);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].family == b[i].family);
    REQUIRE(a[i].amplitude == b[i].amplitude);
    REQUIRE(a[i].width == b[i].width);
    REQUIRE(a[i].beta == b[i].beta);
    REQUIRE(a[i].amplitude >= 0.2);
    REQUIRE(a[i].amplitude <= 2.0);
    REQUIRE(a[i].width >= 0.5);
    REQUIRE(a[i].width <= 3.0);
    REQUIRE(a[i].beta >= 1.6);
    REQUIRE(a[i].beta <= 4.0);
  }
  REQUIRE(a[0].family == DataFamily::gaussian);
  REQUIRE(a[1].family == DataFamily::smooth_bump);
  REQUIRE(a[2].family == DataFamily::polynomial_decay);
  auto c = synthetic_family(999, 9);
  bool differs = false;
  for (std::size_t i = 0; i < 9; ++i) differs = differs || (a[i].amplitude != c[i].amplitude);
  REQUIRE(differs);
}
