#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rwave/calibration.hpp"
#include "rwave/diagnostics.hpp"
#include "rwave/solver.hpp"

using namespace rwave;

namespace {

SimConfig gaussian_config(double t_final, std::size_t n, double dr, double amplitude = 1.0) {
  SimConfig c;
  c.p = 5.0;
  c.dr = dr;
  c.n = n;
  c.cfl = 0.45;
  c.t_final = t_final;
  c.output_every = 4;
  c.data.amplitude = amplitude;
  return c;
}

// e(r) for u0 = e^(-r^2), u1 = 0, p = 5: 2 r^2 e^(-2r^2) + (1/6) e^(-6r^2)
double gaussian_density(double r) {
  return 2.0 * r * r * std::exp(-2.0 * r * r) + std::exp(-6.0 * r * r) / 6.0;
}

}  // namespace

TEST_CASE("energy density matches the analytic formula for gaussian data") {
  RadialGrid g(0.01, 800);
  InitialDataSpec spec;
  FieldState s = sample_initial_data(spec, g);
  auto e = energy_density(s, g, 5.0);
  for (std::size_t j = 1; j + 1 < g.n; j += 13)
    REQUIRE(e[j] == Catch::Approx(gaussian_density(g.nodes[j])).margin(1e-3));
}

TEST_CASE("weighted energy at kappa = 0 doubles the plain energy") {
  RadialGrid g(0.02, 512);
  InitialDataSpec spec;
  FieldState s = sample_initial_data(spec, g);
  double E = total_energy(s, g, 5.0);
  REQUIRE(weighted_energy(s, g, 5.0, 0.0) == Catch::Approx(2.0 * E));
  REQUIRE_THROWS_AS(weighted_energy(s, g, 5.0, -0.5), contract_violation);
}

TEST_CASE("weighted energy at kappa = 1 against a fine-grid oracle") {
  RadialGrid g(0.02, 512);
  InitialDataSpec spec;
  FieldState s = sample_initial_data(spec, g);
  double got = weighted_energy(s, g, 5.0, 1.0);
  // oracle: analytic density integrated on a 10x finer 1d mesh
  double dr = 0.002;
  detail::kahan_sum acc;
  for (std::size_t j = 0; j < 5120; ++j) {
    double r = (j + 0.5) * dr;
    acc.add(2.0 * M_PI * r * dr * (r + 1.0) * gaussian_density(r));
  }
  REQUIRE(got == Catch::Approx(acc.value()).epsilon(1e-3));
}

TEST_CASE("parallelogram identity of the directional energies") {
  SimConfig c = gaussian_config(3.0, 512, 0.05);
  Trajectory traj = evolve(c);
  const FieldState& s = traj.snapshots.back();
  const RadialGrid& g = traj.grid;
  double ein = directional_energy(s, g, c.p, EnergyDirection::inward);
  double eout = directional_energy(s, g, c.p, EnergyDirection::outward);
  auto ur = radial_derivative(s.u, g);
  std::vector<double> f(g.n);
  for (std::size_t j = 0; j < g.n; ++j)
    f[j] = ur[j] * ur[j] + s.ut[j] * s.ut[j] + std::pow(std::abs(s.u[j]), c.p + 1.0);
  REQUIRE(ein + eout == Catch::Approx(2.0 * radial_integral(f, g)).epsilon(1e-12));
}

TEST_CASE("interior weighted energy vanishes at t = 0 and stays below E") {
  SimConfig c = gaussian_config(5.0, 512, 0.05);
  Trajectory traj = evolve(c);
  const RadialGrid& g = traj.grid;
  REQUIRE(interior_weighted_energy(traj.snapshots.front(), g, c.p) == 0.0);
  double E = total_energy(traj.snapshots.front(), g, c.p);
  for (const auto& s : traj.snapshots) {
    double iw = interior_weighted_energy(s, g, c.p);
    REQUIRE(iw >= 0.0);
    REQUIRE(iw <= E * (1.0 + 1e-6));
  }
}

TEST_CASE("morawetz report on the zero solution is identically zero") {
  SimConfig c = gaussian_config(3.0, 512, 0.05, 0.0);
  Trajectory fwd = evolve(c);
  SimConfig b = c;
  b.direction = TimeDirection::backward;
  Trajectory bwd = evolve(b);
  MorawetzReport rep = morawetz_report(fwd, bwd, 2.0, 0.5, 0.1, 0.05);
  REQUIRE(rep.identity_sum == 0.0);
  REQUIRE(rep.residual == 0.0);
  REQUIRE(rep.sum_M() == 0.0);
  REQUIRE(rep.slack == 0.0);
}

TEST_CASE("morawetz report rejects bad mu and missing coverage") {
  SimConfig c = gaussian_config(2.0, 512, 0.05);
  Trajectory fwd = evolve(c);
  SimConfig b = c;
  b.direction = TimeDirection::backward;
  Trajectory bwd = evolve(b);
  // mu1 above 2(p-1)/(p+1) = 4/3, mu2 above 1/(p+1)
  REQUIRE_THROWS_AS(morawetz_report(fwd, bwd, 1.0, 0.5, 1.4, 0.05), contract_violation);
  REQUIRE_THROWS_AS(morawetz_report(fwd, bwd, 1.0, 0.5, 0.1, 0.2), contract_violation);
  // R + r = 5 but the runs only reach |t| = 2
  REQUIRE_THROWS_AS(morawetz_report(fwd, bwd, 4.0, 1.0, 0.1, 0.05), contract_violation);
}

TEST_CASE("morawetz identity closes under refinement and the ledger slack is nonnegative") {
  auto report_at = [](std::size_t n, double dr) {
    SimConfig c = gaussian_config(5.5, n, dr);
    Trajectory fwd = evolve(c);
    SimConfig b = c;
    b.direction = TimeDirection::backward;
    Trajectory bwd = evolve(b);
    return morawetz_report(fwd, bwd, 4.0, 1.0, 0.1, 0.05);
  };
  MorawetzReport r1 = report_at(512, 0.08);
  MorawetzReport r2 = report_at(1024, 0.04);
  REQUIRE(std::abs(r2.residual) < std::abs(r1.residual));
  REQUIRE(std::abs(r2.residual) / r2.two_E < 0.05);
  REQUIRE(r2.slack > -1e-3 * r2.two_E);
  // every ledger entry is a nonnegative quantity up to quadrature error
  for (double m : {r2.M1, r2.M3, r2.M4, r2.M5, r2.M6})
    REQUIRE(m > -1e-10);
}

TEST_CASE("Q is zero for zero data and energy-bounded otherwise") {
  SimConfig c = gaussian_config(4.0, 512, 0.05);
  Trajectory fwd = evolve(c);
  SimConfig b = c;
  b.direction = TimeDirection::backward;
  Trajectory bwd = evolve(b);
  double mu2 = 0.5 / (c.p + 1.0);
  REQUIRE_THROWS_AS(q_of_t(fwd, bwd, -1.0, mu2), contract_violation);
  double E = total_energy(fwd.snapshots.front(), fwd.grid, c.p);
  for (double t : {1.0, 2.0, 3.5}) {
    double q = q_of_t(fwd, bwd, t, mu2);
    REQUIRE(q > 0.0);
    REQUIRE(q <= calib::q_energy_constant(c.p, mu2) * E);
  }

  SimConfig z = gaussian_config(4.0, 512, 0.05, 0.0);
  Trajectory zf = evolve(z);
  SimConfig zb = z;
  zb.direction = TimeDirection::backward;
  Trajectory zbw = evolve(zb);
  REQUIRE(q_of_t(zf, zbw, 2.0, mu2) == 0.0);
}

TEST_CASE("nakanishi cumulative integral is nonnegative and monotone in T") {
  SimConfig c = gaussian_config(6.0, 512, 0.05);
  Trajectory traj = evolve(c);
  REQUIRE_THROWS_AS(nakanishi_cumulative(traj, 0.5), contract_violation);
  NakanishiReport a = nakanishi_cumulative(traj, 3.0);
  NakanishiReport b = nakanishi_cumulative(traj, 6.0);
  REQUIRE(a.cumulative >= 0.0);
  REQUIRE(b.cumulative >= a.cumulative);
  double E = total_energy(traj.snapshots.front(), traj.grid, c.p);
  REQUIRE(a.bound_value == Catch::Approx(E + std::pow(E, 2.0 / (c.p + 1.0))));
}

TEST_CASE("characteristic flux is additive over adjacent windows") {
  SimConfig c = gaussian_config(8.0, 1024, 0.05);
  Trajectory traj = evolve(c);
  double eta = 1.0;
  REQUIRE_THROWS_AS(characteristic_flux(traj, eta, 4.0, 3.0), contract_violation);
  double f12 = characteristic_flux(traj, eta, 2.0, 5.0);
  double f23 = characteristic_flux(traj, eta, 5.0, 8.0);
  double f13 = characteristic_flux(traj, eta, 2.0, 8.0);
  REQUIRE(f12 >= 0.0);
  REQUIRE(f23 >= 0.0);
  REQUIRE(f13 == Catch::Approx(f12 + f23).margin(1e-4));

  SimConfig z = gaussian_config(8.0, 1024, 0.05, 0.0);
  Trajectory zt = evolve(z);
  REQUIRE(characteristic_flux(zt, eta, 2.0, 8.0) == 0.0);
}
