#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rwave/config.hpp"
#include "rwave/errors.hpp"
#include "rwave/grid.hpp"
#include "rwave/state.hpp"

namespace rwave {

namespace detail {

/// Radial Laplacian (1/r)(r u_r)_r in conservative form on cell faces.
/// The face at r = 0 carries zero flux (even reflection), the face at R_max
/// uses the odd ghost u_n = -u_{n-1}, i.e. a homogeneous Dirichlet wall.
inline void radial_laplacian(const std::vector<double>& u, const RadialGrid& g,
                             std::vector<double>& out) {
  std::size_t n = g.n;
  out.resize(n);
  double inv_dr2 = 1.0 / (g.dr * g.dr);
  for (std::size_t j = 0; j < n; ++j) {
    double face_lo = static_cast<double>(j);        // r_{j-1/2} / dr
    double face_hi = static_cast<double>(j) + 1.0;  // r_{j+1/2} / dr
    double u_lo = (j == 0) ? u[0] : u[j - 1];
    double u_hi = (j + 1 == n) ? -u[n - 1] : u[j + 1];
    double flux = face_hi * (u_hi - u[j]) - face_lo * (u[j] - u_lo);
    out[j] = flux * inv_dr2 / (static_cast<double>(j) + 0.5);
  }
}

inline void acceleration(const std::vector<double>& u, const RadialGrid& g, double p,
                         bool nonlinear, std::vector<double>& out) {
  radial_laplacian(u, g, out);
  if (!nonlinear) return;
  for (std::size_t j = 0; j < g.n; ++j) {
    double v = u[j];
    out[j] -= std::pow(std::abs(v), p - 1.0) * v;
  }
}

}  // namespace detail

/// One kick-drift-kick leapfrog update of (u, u_t) under
/// u_tt = Laplacian(u) - nonlinear * |u|^(p-1) u. Second order, reversible.
inline FieldState step(const FieldState& state, const RadialGrid& grid, double dt, double p,
                       bool nonlinear) {
  if (state.u.size() != grid.n || state.ut.size() != grid.n)
    throw contract_violation("step: state does not match grid");
  FieldState next(state.t + dt, grid.n);
  std::vector<double> acc;
  detail::acceleration(state.u, grid, p, nonlinear, acc);
  double half = 0.5 * dt;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double vh = state.ut[j] + half * acc[j];
    next.u[j] = state.u[j] + dt * vh;
    next.ut[j] = vh;  // half-kicked; completed below
  }
  detail::acceleration(next.u, grid, p, nonlinear, acc);
  for (std::size_t j = 0; j < grid.n; ++j) next.ut[j] += half * acc[j];
  if (!next.finite())
    throw blowup_error("step: non-finite values (CFL violation or bad data)", next.t);
  return next;
}

/// Evolve the configured data to t_final, recording snapshots at the output
/// cadence. Backward runs use the time-reversal conjugation u_t -> -u_t and
/// report snapshots with decreasing (negative) times.
inline Trajectory evolve(const SimConfig& config) {
  config.validate();
  Trajectory traj;
  traj.config = config;
  traj.grid = make_grid(config);
  bool backward = config.direction == TimeDirection::backward;

  FieldState s = sample_initial_data(config.data, traj.grid);
  if (backward)
    for (double& v : s.ut) v = -v;

  std::size_t steps = 0;
  double dt = 0.0;
  if (config.t_final > 0.0) {
    steps = static_cast<std::size_t>(std::ceil(config.t_final / (config.cfl * config.dr)));
    dt = config.t_final / static_cast<double>(steps);
  }
  traj.dt = dt;

  auto record = [&](const FieldState& st) {
    FieldState out = st;
    if (backward) {
      out.t = -st.t;
      for (double& v : out.ut) v = -v;
    }
    traj.snapshots.push_back(std::move(out));
  };

  record(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    s = step(s, traj.grid, dt, config.p, config.nonlinear);
    if (k % config.output_every == 0 || k == steps) record(s);
  }
  return traj;
}

/// The free propagator S_L(span) applied to (u, u_t). Negative spans run the
/// reversed evolution. The caller is responsible for the causality margin.
inline FieldState linear_propagate(const FieldState& state, double span, const RadialGrid& grid,
                                   double cfl = 0.45) {
  if (span == 0.0) return state;
  double mag = std::abs(span);
  auto steps = static_cast<std::size_t>(std::ceil(mag / (cfl * grid.dr)));
  double dt = mag / static_cast<double>(steps);

  FieldState s = state;
  if (span < 0.0)
    for (double& v : s.ut) v = -v;
  for (std::size_t k = 0; k < steps; ++k) s = step(s, grid, dt, 2.0, false);
  if (span < 0.0)
    for (double& v : s.ut) v = -v;
  s.t = state.t + span;
  return s;
}

}  // namespace rwave
