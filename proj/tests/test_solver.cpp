#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rwave/diagnostics.hpp"
#include "rwave/solver.hpp"

using namespace rwave;

namespace {

SimConfig small_gaussian(double t_final, std::size_t n = 1024, double dr = 0.05) {
  SimConfig c;
  c.p = 5.0;
  c.dr = dr;
  c.n = n;
  c.cfl = 0.45;
  c.t_final = t_final;
  c.output_every = 16;
  return c;
}

double state_distance(const FieldState& a, const FieldState& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    m = std::max(m, std::abs(a.u[j] - b.u[j]));
    m = std::max(m, std::abs(a.ut[j] - b.ut[j]));
  }
  return m;
}

}  // namespace

TEST_CASE("zero state stays zero") {
  RadialGrid g(0.05, 64);
  FieldState z(0.0, g.n);
  FieldState out = step(z, g, 0.02, 5.0, true);
  for (std::size_t j = 0; j < g.n; ++j) {
    REQUIRE(out.u[j] == 0.0);
    REQUIRE(out.ut[j] == 0.0);
  }
}

TEST_CASE("one linear step from rest matches the Taylor expansion") {
  // u = 0, u_t = phi smooth: after one step u = dt phi + O(dt^3)
  RadialGrid g(0.05, 256);
  FieldState s(0.0, g.n);
  for (std::size_t j = 0; j < g.n; ++j) s.ut[j] = std::exp(-g.nodes[j] * g.nodes[j]);
  double dt = 0.01;
  FieldState out = step(s, g, dt, 5.0, false);
  for (std::size_t j = 0; j < g.n; ++j)
    REQUIRE(out.u[j] == Catch::Approx(dt * s.ut[j]).margin(5.0 * dt * dt * dt));
}

TEST_CASE("finite speed of propagation on linear runs") {
  SimConfig c = small_gaussian(10.0);
  c.nonlinear = false;
  c.data.family = DataFamily::smooth_bump;
  c.data.width = 2.0;  // support radius a = 2
  Trajectory traj = evolve(c);
  // the discrete cone is wider than the physical one (one cell per substep,
  // speed dr/dt = 1/cfl), but the spill dies superexponentially past the
  // front: measured ~2e-3 at front + 2 dr, ~5e-17 at front + 32 dr
  for (const auto& s : traj.snapshots) {
    double front = 2.0 + std::abs(s.t) + 32.0 * c.dr;
    for (std::size_t j = 0; j < traj.grid.n; ++j) {
      if (traj.grid.nodes[j] > front) {
        REQUIRE(std::abs(s.u[j]) < 1e-12);
        REQUIRE(std::abs(s.ut[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("forward then backward recovers the data") {
  SimConfig c = small_gaussian(5.0);
  Trajectory fwd = evolve(c);
  FieldState end = fwd.snapshots.back();
  // march the end state back by negating ut, stepping, and negating again
  for (double& v : end.ut) v = -v;
  std::size_t steps = static_cast<std::size_t>(std::round(c.t_final / fwd.dt));
  FieldState s = end;
  for (std::size_t k = 0; k < steps; ++k) s = step(s, fwd.grid, fwd.dt, c.p, true);
  for (double& v : s.ut) v = -v;
  REQUIRE(state_distance(s, fwd.snapshots.front()) < 1e-10);  // leapfrog is reversible
}

TEST_CASE("energy drift stays small and converges at order 2") {
  auto drift_at = [](std::size_t n, double dr) {
    SimConfig c = small_gaussian(10.0, n, dr);
    Trajectory traj = evolve(c);
    double E0 = total_energy(traj.snapshots.front(), traj.grid, c.p);
    double worst = 0.0;
    for (const auto& s : traj.snapshots)
      worst = std::max(worst, std::abs(total_energy(s, traj.grid, c.p) - E0) / E0);
    return worst;
  };
  double d1 = drift_at(512, 0.08);
  double d2 = drift_at(1024, 0.04);
  REQUIRE(d1 < 2e-3);
  REQUIRE(d1 / d2 > 3.0);  // order ~ 2
}

TEST_CASE("Richardson self-convergence of the scheme") {
  // fixed smooth data, error against a 4x-refined reference halves twice
  // per halving of (dr, dt) jointly
  auto run_u_at = [](std::size_t n, double dr, double t_final) {
    SimConfig c = small_gaussian(t_final, n, dr);
    c.output_every = 1 << 20;  // only first and last
    Trajectory traj = evolve(c);
    return traj;
  };
  double T = 2.0;
  Trajectory ref = run_u_at(2048, 0.01, T);
  auto err_against_ref = [&](const Trajectory& traj) {
    const FieldState& s = traj.snapshots.back();
    double m = 0.0;
    for (std::size_t j = 0; j < traj.grid.n; ++j) {
      double r = traj.grid.nodes[j];
      double refv = interp_at(ref.snapshots.back().u, ref.grid, r);
      m = std::max(m, std::abs(s.u[j] - refv));
    }
    return m;
  };
  double e1 = err_against_ref(run_u_at(512, 0.04, T));
  double e2 = err_against_ref(run_u_at(1024, 0.02, T));
  REQUIRE(e1 / e2 > 3.0);
}

TEST_CASE("backward evolution mirrors the time-reversed solution") {
  SimConfig c = small_gaussian(4.0);
  c.data.amplitude = 0.5;
  Trajectory fwd = evolve(c);
  SimConfig b = c;
  b.direction = TimeDirection::backward;
  Trajectory bwd = evolve(b);
  REQUIRE(bwd.snapshots.front().t == 0.0);
  REQUIRE(bwd.snapshots.back().t == Catch::Approx(-4.0));
  REQUIRE(bwd.snapshots.size() == fwd.snapshots.size());
  // with ut = 0 data the solution is even in time, snapshot by snapshot
  for (std::size_t i = 0; i < fwd.snapshots.size(); ++i) {
    const FieldState& sf = fwd.snapshots[i];
    const FieldState& sb = bwd.snapshots[i];
    REQUIRE(sb.t == Catch::Approx(-sf.t).margin(1e-12));
    for (std::size_t j = 0; j < fwd.grid.n; j += 37) {
      REQUIRE(sb.u[j] == Catch::Approx(sf.u[j]).margin(1e-12));
      REQUIRE(sb.ut[j] == Catch::Approx(-sf.ut[j]).margin(1e-12));
    }
  }
}

TEST_CASE("linear propagate: identity and group property") {
  RadialGrid g(0.05, 1024);
  InitialDataSpec spec;
  FieldState s = sample_initial_data(spec, g);
  FieldState same = linear_propagate(s, 0.0, g);
  REQUIRE(state_distance(same, s) == 0.0);

  FieldState two_hops = linear_propagate(linear_propagate(s, 3.0, g), 4.0, g);
  FieldState one_hop = linear_propagate(s, 7.0, g);
  REQUIRE(state_distance(two_hops, one_hop) < 5e-4);  // scheme accuracy
}

TEST_CASE("free-wave energy is conserved") {
  SimConfig c = small_gaussian(20.0, 2048, 0.02);
  c.nonlinear = false;
  Trajectory traj = evolve(c);
  auto free_energy = [&](const FieldState& s) {
    auto ur = radial_derivative(s.u, traj.grid);
    std::vector<double> f(traj.grid.n);
    for (std::size_t j = 0; j < traj.grid.n; ++j) f[j] = ur[j] * ur[j] + s.ut[j] * s.ut[j];
    return radial_integral(f, traj.grid);
  };
  double E0 = free_energy(traj.snapshots.front());
  for (const auto& s : traj.snapshots)
    REQUIRE(std::abs(free_energy(s) - E0) / E0 < 1e-4);
}

TEST_CASE("small amplitudes: nonlinear and linear flows agree to O(A^p)") {
  auto gap = [](double A) {
    SimConfig c = small_gaussian(3.0, 512, 0.05);
    c.data.amplitude = A;
    Trajectory nl = evolve(c);
    c.nonlinear = false;
    Trajectory lin = evolve(c);
    double m = 0.0;
    const FieldState& a = nl.snapshots.back();
    const FieldState& b = lin.snapshots.back();
    for (std::size_t j = 0; j < c.n; ++j) m = std::max(m, std::abs(a.u[j] - b.u[j]));
    return m;
  };
  double g1 = gap(0.5);
  double g2 = gap(0.25);
  REQUIRE(g2 < g1 / 8.0);  // p = 5 predicts a factor of 32
}

TEST_CASE("blow-up detection reports the step time") {
  RadialGrid g(0.05, 64);
  FieldState s(0.0, g.n);
  s.u[10] = 1e200;  // absurd data so the nonlinearity overflows
  bool threw = false;
  try {
    (void)step(s, g, 0.02, 5.0, true);
  } catch (const blowup_error& e) {
    threw = true;
    REQUIRE(e.time == Catch::Approx(0.02));
  }
  REQUIRE(threw);
}
