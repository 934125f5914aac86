#pragma once

#include <cmath>
#include <cstddef>

#include "rwave/config.hpp"
#include "rwave/solver.hpp"
#include "rwave/state.hpp"

namespace rwave {

/// Short evolution of one family member on a caller-chosen grid, without the
/// causality-margin validation of `evolve`. The inequality lab checks the
/// discrete dynamics as-is, Dirichlet wall included, so slowly decaying
/// members may legitimately be truncated by the mesh.
inline Trajectory lab_trajectory(const InitialDataSpec& spec, const RadialGrid& grid, double p,
                                 double cfl, double t_final, std::size_t output_every = 8) {
  Trajectory traj;
  traj.config.p = p;
  traj.config.dr = grid.dr;
  traj.config.n = grid.n;
  traj.config.cfl = cfl;
  traj.config.t_final = t_final;
  traj.config.data = spec;
  traj.config.output_every = output_every;
  traj.grid = grid;

  FieldState s = sample_initial_data(spec, grid);
  // smooth taper to zero at the wall; a bare truncation leaves a kink whose
  // under-resolved energy is not tracked faithfully by the scheme
  double w = std::min(0.05 * grid.r_max(), 2.0);
  double r_cut = grid.r_max() - w;
  for (std::size_t j = 0; j < grid.n; ++j) {
    double r = grid.nodes[j];
    if (r > r_cut) {
      double q = 0.5 * (1.0 + std::cos(M_PI * (r - r_cut) / w));
      s.u[j] *= q;
      s.ut[j] *= q;
    }
  }
  std::size_t steps = 0;
  double dt = 0.0;
  if (t_final > 0.0) {
    steps = static_cast<std::size_t>(std::ceil(t_final / (cfl * grid.dr)));
    dt = t_final / static_cast<double>(steps);
  }
  traj.dt = dt;
  traj.snapshots.push_back(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    s = step(s, grid, dt, p, true);
    if (k % output_every == 0 || k == steps) traj.snapshots.push_back(s);
  }
  return traj;
}

}  // namespace rwave
