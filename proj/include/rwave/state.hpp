#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rwave/config.hpp"
#include "rwave/errors.hpp"
#include "rwave/grid.hpp"

namespace rwave {

/// (t, u, u_t) samples on the grid. Radial symmetry means the angular part of
/// the gradient is identically zero; only u and u_t are stored.
struct FieldState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> ut;

  FieldState() = default;
  FieldState(double t_, std::size_t n) : t(t_), u(n, 0.0), ut(n, 0.0) {}

  bool finite() const {
    for (double v : u)
      if (!std::isfinite(v)) return false;
    for (double v : ut)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Centered radial derivative with even reflection across r = 0 and the
/// odd (Dirichlet) closure at R_max.
inline std::vector<double> radial_derivative(const std::vector<double>& f, const RadialGrid& g) {
  if (f.size() != g.n) throw contract_violation("radial_derivative: length mismatch");
  std::size_t n = g.n;
  std::vector<double> d(n);
  double inv2 = 1.0 / (2.0 * g.dr);
  if (n == 0) return d;
  d[0] = (f[1] - f[0]) * inv2;  // ghost f[-1] = f[0]
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) * inv2;
  d[n - 1] = (-f[n - 1] - f[n - 2]) * inv2;  // ghost f[n] = -f[n-1]
  return d;
}

inline FieldState sample_initial_data(const InitialDataSpec& spec, const RadialGrid& grid) {
  FieldState s(0.0, grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) s.u[j] = spec.u0_at(grid.nodes[j]);
  if (spec.ut_zero) {
    // ut stays zero
  } else {
    if (spec.ut_values.size() != grid.n)
      throw config_error("initial data: ut array length does not match grid");
    s.ut = spec.ut_values;
  }
  return s;
}

/// Ordered snapshots of one evolution. Snapshot times are strictly monotone
/// (increasing forward, decreasing backward); the first snapshot is the data.
struct Trajectory {
  SimConfig config;
  RadialGrid grid;
  double dt = 0.0;
  std::vector<FieldState> snapshots;

  /// State at time t, linearly interpolated between bracketing snapshots.
  /// Works for both time directions; throws if t lies outside the covered span.
  FieldState state_at(double t) const {
    if (snapshots.empty()) throw contract_violation("trajectory: no snapshots");
    bool fwd = snapshots.size() < 2 || snapshots[1].t >= snapshots[0].t;
    double lo = fwd ? snapshots.front().t : snapshots.back().t;
    double hi = fwd ? snapshots.back().t : snapshots.front().t;
    double tol = 1e-9 * (1.0 + std::abs(hi));
    if (t < lo - tol || t > hi + tol)
      throw contract_violation("trajectory: time " + std::to_string(t) + " not covered");
    // locate bracketing pair
    std::size_t a = 0, b = snapshots.size() - 1;
    while (b - a > 1) {
      std::size_t m = (a + b) / 2;
      bool left = fwd ? (snapshots[m].t <= t) : (snapshots[m].t >= t);
      if (left)
        a = m;
      else
        b = m;
    }
    const FieldState& sa = snapshots[a];
    const FieldState& sb = snapshots[b];
    double span = sb.t - sa.t;
    double f = (span == 0.0) ? 0.0 : (t - sa.t) / span;
    f = std::min(std::max(f, 0.0), 1.0);
    FieldState out(t, sa.u.size());
    for (std::size_t j = 0; j < sa.u.size(); ++j) {
      out.u[j] = (1.0 - f) * sa.u[j] + f * sb.u[j];
      out.ut[j] = (1.0 - f) * sa.ut[j] + f * sb.ut[j];
    }
    return out;
  }

  /// Recorded time closest to t. Snapshot-aligned queries avoid the O(dt^2)
  /// interpolation error of state_at, which matters for cauchy-type norms.
  double nearest_snapshot_time(double t) const {
    if (snapshots.empty()) throw contract_violation("trajectory: no snapshots");
    double best = snapshots.front().t;
    for (const auto& s : snapshots)
      if (std::abs(s.t - t) < std::abs(best - t)) best = s.t;
    return best;
  }

  double t_min() const {
    return std::min(snapshots.front().t, snapshots.back().t);
  }
  double t_max() const {
    return std::max(snapshots.front().t, snapshots.back().t);
  }
};

}  // namespace rwave
